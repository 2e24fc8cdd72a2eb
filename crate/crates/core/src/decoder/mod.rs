//! Sparse recovery: MAD, parallel MAD, OMP and an exhaustive ML oracle.
//!
//! Every decoder returns exactly `K` (column, symbol) pairs. Ties in any
//! argmax go to the lowest column index, then the lowest symbol index.

mod mad;
mod metrics;
mod ml;
mod omp;

use std::ops::Range;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use metrics::{match_metrics, MatchMetrics};
pub use ml::{ml_oracle, ML_SEARCH_LIMIT};

use crate::codec::{SchemeSpec, SparseMessage};
use crate::dictionary::{auto_gram, GramRows};
use crate::error::{invalid, Error, Result};
use crate::C64;

/// Default memory budget for the cached Gram matrix.
pub const DEFAULT_GRAM_BUDGET: usize = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Mad,
    #[serde(rename = "pmad")]
    ParallelMad,
    Omp,
    Ml,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Mad => "mad",
            Algorithm::ParallelMad => "pmad",
            Algorithm::Omp => "omp",
            Algorithm::Ml => "ml",
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mad" => Ok(Algorithm::Mad),
            "pmad" => Ok(Algorithm::ParallelMad),
            "omp" => Ok(Algorithm::Omp),
            "ml" => Ok(Algorithm::Ml),
            other => Err(invalid(format!("unknown algorithm {other:?}"))),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeConfig {
    pub algorithm: Algorithm,
    pub k: usize,
    /// Exclude a detected column's whole subblock from later iterations.
    pub subblock_discard: bool,
    /// Number of first-iteration candidates `T` for parallel MAD.
    pub parallel_paths: usize,
    /// Update correlations through Gram rows instead of recomputing them.
    pub gram_recursion: bool,
    pub gram_budget_bytes: usize,
}

impl DecodeConfig {
    /// Defaults for a scheme: subblock discard for SSC, `T = K` for parallel
    /// MAD and Gram recursion on.
    pub fn new(algorithm: Algorithm, spec: &SchemeSpec) -> Self {
        DecodeConfig {
            algorithm,
            k: spec.k(),
            subblock_discard: spec.scheme() == crate::codec::Scheme::Ssc,
            parallel_paths: if algorithm == Algorithm::ParallelMad { spec.k() } else { 1 },
            gram_recursion: true,
            gram_budget_bytes: DEFAULT_GRAM_BUDGET,
        }
    }

    pub fn with_paths(mut self, t: usize) -> Self {
        self.parallel_paths = t;
        self
    }

    pub fn with_gram_recursion(mut self, on: bool) -> Self {
        self.gram_recursion = on;
        self
    }
}

/// One greedy detection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Iteration {
    pub column: usize,
    pub symbol: usize,
    /// Winning metric `p_{i,m}` (OMP: `|c_i|`).
    pub score: f64,
    /// Winning metric minus the best metric of any other column.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeOutput {
    /// Entries in detection order.
    pub message: SparseMessage,
    pub trace: Vec<Iteration>,
    /// `|y - A x|`.
    pub distance: f64,
    /// Parallel MAD: index of the winning path.
    pub path: Option<usize>,
    /// OMP fell back to a pseudo-inverse on an ill-conditioned support.
    pub degenerate: bool,
}

/// A decoder bound to one scheme; cheap to share across threads.
#[derive(Clone)]
pub struct Decoder {
    spec: SchemeSpec,
    cfg: DecodeConfig,
    gram: Option<Arc<dyn GramRows>>,
}

impl std::fmt::Debug for Decoder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Decoder").field("cfg", &self.cfg).field("gram", &self.gram.is_some()).finish()
    }
}

impl Decoder {
    /// Builds the Gram source when `gram_recursion` is set. Panics on an
    /// invalid configuration; see [`Decoder::try_new`].
    pub fn for_scheme(spec: &SchemeSpec, cfg: DecodeConfig) -> Self {
        Self::try_new(spec, cfg, None).expect("invalid decoder configuration")
    }

    /// Validates `cfg` against `spec`. A supplied Gram source is reused
    /// instead of building a new one.
    pub fn try_new(spec: &SchemeSpec, cfg: DecodeConfig, gram: Option<Arc<dyn GramRows>>) -> Result<Self> {
        let d = spec.dictionary();
        if cfg.k != spec.k() {
            return Err(invalid(format!("decoder K = {} but scheme K = {}", cfg.k, spec.k())));
        }
        if cfg.k == 0 || cfg.k > d.n_rows() {
            return Err(invalid(format!("K = {} outside [1, N = {}]", cfg.k, d.n_rows())));
        }
        if cfg.parallel_paths == 0 {
            return Err(invalid("parallel paths T must be at least 1"));
        }
        if cfg.subblock_discard {
            if spec.subblocks().is_empty() {
                return Err(invalid("subblock discard needs a partitioned dictionary"));
            }
            if cfg.k > spec.subblocks().len() {
                return Err(invalid("K exceeds the number of subblocks"));
            }
        }
        let needs_gram = cfg.gram_recursion && matches!(cfg.algorithm, Algorithm::Mad | Algorithm::ParallelMad);
        let gram = match (needs_gram, gram) {
            (false, _) => None,
            (true, Some(g)) if g.n_cols() == d.n_cols() => Some(g),
            (true, Some(_)) => return Err(invalid("Gram source does not match the dictionary")),
            (true, None) => Some(auto_gram(d, cfg.gram_budget_bytes)),
        };
        Ok(Decoder { spec: spec.clone(), cfg, gram })
    }

    pub fn config(&self) -> &DecodeConfig {
        &self.cfg
    }

    pub fn spec(&self) -> &SchemeSpec {
        &self.spec
    }

    pub fn gram(&self) -> Option<&Arc<dyn GramRows>> {
        self.gram.as_ref()
    }

    /// Columns the decoder may pick before any detection.
    fn candidate_ranges(&self) -> Vec<Range<usize>> {
        if self.cfg.subblock_discard {
            self.spec.subblock_ranges()
        } else {
            vec![0..self.spec.dictionary().n_cols()]
        }
    }

    pub fn decode(&self, y: &[C64]) -> Result<DecodeOutput> {
        let n = self.spec.dictionary().n_rows();
        if y.len() != n {
            return Err(invalid(format!("observation has length {}, expected {n}", y.len())));
        }
        match self.cfg.algorithm {
            Algorithm::Mad => self.mad(y, &SparseMessage::default()),
            Algorithm::ParallelMad => self.parallel_mad(y),
            Algorithm::Omp => self.omp(y),
            Algorithm::Ml => ml_oracle(y, &self.spec),
        }
    }

    /// `|y - A x|` for a message of this scheme.
    pub fn distance(&self, y: &[C64], msg: &SparseMessage) -> f64 {
        residual_norm(y, &self.spec.synthesize(msg))
    }
}

pub(crate) fn residual_norm(y: &[C64], s: &[C64]) -> f64 {
    y.iter().zip(s).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
}

/// Per-symbol terms of `p_{i,m} = Re{c b_m*} - |b_m|^2 / 2`.
#[derive(Debug, Clone)]
pub(crate) struct SymbolTable {
    re: Vec<f64>,
    im: Vec<f64>,
    half: Vec<f64>,
}

impl SymbolTable {
    pub(crate) fn new(symbols: &[C64]) -> Self {
        SymbolTable {
            re: symbols.iter().map(|b| b.re).collect(),
            im: symbols.iter().map(|b| b.im).collect(),
            half: symbols.iter().map(|b| b.norm_sqr() / 2.0).collect(),
        }
    }

    #[inline]
    pub(crate) fn metric(&self, c: C64, m: usize) -> f64 {
        c.re * self.re[m] + c.im * self.im[m] - self.half[m]
    }

    /// Best metric over the alphabet and its symbol index.
    #[inline]
    pub(crate) fn best(&self, c: C64) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for m in 0..self.re.len() {
            let p = self.metric(c, m);
            if p > best.0 {
                best = (p, m);
            }
        }
        best
    }
}
