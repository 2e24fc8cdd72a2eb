//! Low-coherence dictionary matrices.
//!
//! A [`Dictionary`] is an `N x L` complex matrix with unit-norm columns,
//! stored column-major as split real and imaginary planes. Gold and MUB
//! dictionaries additionally keep each entry as a quaternary exponent `e`
//! (entry `= i^e / sqrt(N)`), which makes coherence and Gram computations
//! exact integer arithmetic and gives the compact cache encoding.

mod gold;
mod gram;
mod io;
mod lfsr;
mod mub;
mod partition;

use std::f64::consts::PI;
use std::ops::Range;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::C64;

pub use gold::{build_gold, gold_correlation_bound, preferred_pair};
pub use gram::{
    auto_gram, gram, gram_row, DenseGram, GramRows, QuantizedGram, StreamingGram, DEFAULT_DENSE_GRAM_LIMIT,
};
pub use io::{load, read_from, save, write_to};
pub use lfsr::lfsr_msequence;
pub use mub::{build_mub, mub_alphabet_report, AlphabetReport};
pub use partition::{partition_bits, partition_subblocks};

/// Construction family of a dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DictionaryKind {
    Gold,
    Mub,
    MubRandomPhase,
    /// Arbitrary caller-supplied columns.
    Custom,
}

impl DictionaryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DictionaryKind::Gold => "gold",
            DictionaryKind::Mub => "mub",
            DictionaryKind::MubRandomPhase => "mub-random-phase",
            DictionaryKind::Custom => "custom",
        }
    }
}

impl std::fmt::Display for DictionaryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Quaternary exponents of the structured columns, plus bit planes used for
/// popcount correlation.
#[derive(Debug, Clone)]
pub(crate) struct CodeTable {
    n: usize,
    cols: usize,
    exps: Vec<u8>,
    words: usize,
    lo: Vec<u64>,
    hi: Vec<u64>,
    binary: bool,
    groups: usize,
    lut_index: Vec<u8>,
}

/// Columns below this count are correlated densely instead of by table lookup.
const LUT_MIN_COLS: usize = 64;

impl CodeTable {
    pub(crate) fn new(n: usize, cols: usize, exps: Vec<u8>) -> Self {
        assert_eq!(exps.len(), n * cols);
        let words = n.div_ceil(64);
        let mut lo = vec![0u64; words * cols];
        let mut hi = vec![0u64; words * cols];
        for c in 0..cols {
            for r in 0..n {
                let e = exps[c * n + r] & 3;
                let (w, b) = (c * words + r / 64, r % 64);
                lo[w] |= ((e & 1) as u64) << b;
                hi[w] |= ((e >> 1) as u64) << b;
            }
        }
        // Entries are grouped so each column becomes one byte per group:
        // eight sign bits for binary codes, four 2-bit exponents otherwise.
        let binary = exps.iter().all(|e| e & 1 == 0);
        let width = if binary { 8 } else { 4 };
        let groups = n.div_ceil(width);
        let mut lut_index = vec![0u8; groups * cols];
        for c in 0..cols {
            for r in 0..n {
                let e = exps[c * n + r] & 3;
                let (g, b) = (r / width, r % width);
                let v = &mut lut_index[c * groups + g];
                if binary {
                    *v |= (e >> 1) << b;
                } else {
                    *v |= ((e & 1) << b) | ((e >> 1) << (b + 4));
                }
            }
        }
        CodeTable { n, cols, exps, words, lo, hi, binary, groups, lut_index }
    }

    /// Writes `out[c] = sum_n r[n] i^(-e_c[n])` for the structured columns
    /// `c` in `cols`, using per-group tables of partial sums.
    pub(crate) fn correlate_lut(&self, r: &SplitSignal, cols: Range<usize>, out: &mut [C64]) {
        let (n, groups) = (self.n, self.groups);
        let complex = !r.is_real || !self.binary;
        let mut t_re = vec![0.0f64; groups * 256];
        let mut t_im = if complex { vec![0.0f64; groups * 256] } else { Vec::new() };
        if self.binary {
            for g in 0..groups {
                let rows = 8 * g..(8 * g + 8).min(n);
                let tr = &mut t_re[g * 256..(g + 1) * 256];
                tr[0] = r.re[rows.clone()].iter().sum();
                for v in 1..256usize {
                    let b = 8 * g + v.trailing_zeros() as usize;
                    tr[v] = tr[v & (v - 1)] - if b < n { 2.0 * r.re[b] } else { 0.0 };
                }
                if complex {
                    let ti = &mut t_im[g * 256..(g + 1) * 256];
                    ti[0] = r.im[rows].iter().sum();
                    for v in 1..256usize {
                        let b = 8 * g + v.trailing_zeros() as usize;
                        ti[v] = ti[v & (v - 1)] - if b < n { 2.0 * r.im[b] } else { 0.0 };
                    }
                }
            }
        } else {
            for g in 0..groups {
                // rot[i][e] = r[4g + i] * i^(-e)
                let mut rot = [[(0.0, 0.0); 4]; 4];
                for (i, row) in rot.iter_mut().enumerate() {
                    let k = 4 * g + i;
                    if k < n {
                        let (a, b) = (r.re[k], r.im[k]);
                        *row = [(a, b), (b, -a), (-a, -b), (-b, a)];
                    }
                }
                for v in 0..256usize {
                    let (mut sr, mut si) = (0.0, 0.0);
                    for (i, row) in rot.iter().enumerate() {
                        let e = ((v >> i) & 1) | (((v >> (i + 4)) & 1) << 1);
                        sr += row[e].0;
                        si += row[e].1;
                    }
                    t_re[g * 256 + v] = sr;
                    if complex {
                        t_im[g * 256 + v] = si;
                    }
                }
            }
        }
        for c in cols {
            let idx = &self.lut_index[c * groups..(c + 1) * groups];
            let mut sr = 0.0;
            for (g, &v) in idx.iter().enumerate() {
                sr += t_re[g * 256 + v as usize];
            }
            let mut si = 0.0;
            if complex {
                for (g, &v) in idx.iter().enumerate() {
                    si += t_im[g * 256 + v as usize];
                }
            }
            out[c] = C64::new(sr, si);
        }
    }

    pub(crate) fn exps(&self) -> &[u8] {
        &self.exps
    }

    pub(crate) fn cols(&self) -> usize {
        self.cols
    }

    /// `sum_x i^(e_p[x] - e_q[x])` as a Gaussian integer. Equals
    /// `N * <a_p, a_q>` for the unphased columns.
    #[inline]
    pub(crate) fn correlation(&self, p: usize, q: usize) -> (i64, i64) {
        let (pw, qw) = (p * self.words, q * self.words);
        let mut counts = [0i64; 4];
        for w in 0..self.words {
            let (a0, a1) = (self.lo[pw + w], self.hi[pw + w]);
            let (b0, b1) = (self.lo[qw + w], self.hi[qw + w]);
            // Lane-wise 2-bit subtraction a - b (mod 4).
            let d0 = a0 ^ b0;
            let d1 = a1 ^ b1 ^ (!a0 & b0);
            counts[1] += (!d1 & d0).count_ones() as i64;
            counts[2] += (d1 & !d0).count_ones() as i64;
            counts[3] += (d1 & d0).count_ones() as i64;
        }
        counts[0] = self.n as i64 - counts[1] - counts[2] - counts[3];
        (counts[0] - counts[2], counts[1] - counts[3])
    }
}

/// An `N x L` dictionary with unit-norm columns.
///
/// Immutable once built; share it across threads behind an `Arc`.
#[derive(Debug, Clone)]
pub struct Dictionary {
    kind: DictionaryKind,
    n_rows: usize,
    n_cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
    is_real: bool,
    codes: Option<CodeTable>,
    identity_column: bool,
    phase_seed: Option<u64>,
    phases: Option<Vec<C64>>,
    subblock_lengths: Vec<usize>,
    coherence: OnceLock<f64>,
}

impl Dictionary {
    /// Builds a dictionary whose first `code_cols` columns are `i^e / sqrt(N)`
    /// and, when `identity_column` is set, whose last column is `e_1`.
    pub(crate) fn from_codes(kind: DictionaryKind, n: usize, code: CodeTable, identity_column: bool) -> Self {
        let cols = code.cols + identity_column as usize;
        let scale = 1.0 / (n as f64).sqrt();
        let is_real = code.exps.iter().all(|e| e & 1 == 0);
        let mut re = vec![0.0; n * cols];
        let mut im = if is_real { Vec::new() } else { vec![0.0; n * cols] };
        for (k, &e) in code.exps.iter().enumerate() {
            match e & 3 {
                0 => re[k] = scale,
                1 => im[k] = scale,
                2 => re[k] = -scale,
                _ => im[k] = -scale,
            }
        }
        if identity_column {
            re[code.cols * n] = 1.0;
        }
        Dictionary {
            kind,
            n_rows: n,
            n_cols: cols,
            re,
            im,
            is_real,
            codes: Some(code),
            identity_column,
            phase_seed: None,
            phases: None,
            subblock_lengths: Vec::new(),
            coherence: OnceLock::new(),
        }
    }

    /// Builds a [`DictionaryKind::Custom`] dictionary from explicit columns.
    ///
    /// Every column must have the same length and unit Euclidean norm
    /// (within `1e-12`).
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let n = columns.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(invalid("dictionary needs at least one nonempty column"));
        }
        let cols = columns.len();
        let is_real = columns.iter().flatten().all(|z| z.im == 0.0);
        let mut re = Vec::with_capacity(n * cols);
        let mut im = Vec::with_capacity(if is_real { 0 } else { n * cols });
        for (i, col) in columns.iter().enumerate() {
            if col.len() != n {
                return Err(invalid(format!("column {i} has length {}, expected {n}", col.len())));
            }
            let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(invalid(format!("column {i} has norm {norm}, expected 1")));
            }
            re.extend(col.iter().map(|z| z.re));
            if !is_real {
                im.extend(col.iter().map(|z| z.im));
            }
        }
        Ok(Dictionary {
            kind: DictionaryKind::Custom,
            n_rows: n,
            n_cols: cols,
            re,
            im,
            is_real,
            codes: None,
            identity_column: false,
            phase_seed: None,
            phases: None,
            subblock_lengths: Vec::new(),
            coherence: OnceLock::new(),
        })
    }

    /// The `n x n` identity, as a custom dictionary.
    pub fn identity(n: usize) -> Self {
        let cols: Vec<Vec<C64>> =
            (0..n).map(|i| (0..n).map(|r| C64::new((r == i) as u8 as f64, 0.0)).collect()).collect();
        Self::from_columns(&cols).expect("identity columns are unit norm")
    }

    pub fn kind(&self) -> DictionaryKind {
        self.kind
    }

    /// Codeword length `N`.
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    /// Number of columns `L`.
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn phase_seed(&self) -> Option<u64> {
        self.phase_seed
    }

    pub fn has_identity_column(&self) -> bool {
        self.identity_column
    }

    /// Subblock lengths `[L_1, .., L_K]`; empty until partitioned.
    pub fn subblock_lengths(&self) -> &[usize] {
        &self.subblock_lengths
    }

    pub(crate) fn codes(&self) -> Option<&CodeTable> {
        self.codes.as_ref()
    }

    pub(crate) fn phases(&self) -> Option<&[C64]> {
        self.phases.as_deref()
    }

    /// Entry `(row, col)`.
    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        let k = col * self.n_rows + row;
        C64::new(self.re[k], if self.is_real { 0.0 } else { self.im[k] })
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.n_rows).map(|r| self.entry(r, col)).collect()
    }

    /// Real parts of column `col`.
    pub fn column_re(&self, col: usize) -> &[f64] {
        &self.re[col * self.n_rows..(col + 1) * self.n_rows]
    }

    /// Imaginary parts of column `col`, or `None` for a real dictionary.
    pub fn column_im(&self, col: usize) -> Option<&[f64]> {
        (!self.is_real).then(|| &self.im[col * self.n_rows..(col + 1) * self.n_rows])
    }

    /// `<a_p, a_q> = sum_n a_p[n] conj(a_q[n])`.
    pub fn inner(&self, p: usize, q: usize) -> C64 {
        let (pr, qr) = (self.column_re(p), self.column_re(q));
        match (self.column_im(p), self.column_im(q)) {
            (Some(pi), Some(qi)) => C64::new(dot(pr, qr) + dot(pi, qi), dot(pi, qr) - dot(pr, qi)),
            _ => C64::new(dot(pr, qr), 0.0),
        }
    }

    /// Writes `out[i] = <r, a_i>` for every `i` in `cols`.
    ///
    /// `out` is indexed by absolute column and must have length `L`.
    pub fn correlate(&self, r: &[C64], cols: Range<usize>, out: &mut [C64]) {
        let buf = SplitSignal::new(r);
        self.correlate_split(&buf, cols, out);
    }

    pub(crate) fn correlate_split(&self, r: &SplitSignal, cols: Range<usize>, out: &mut [C64]) {
        debug_assert_eq!(r.re.len(), self.n_rows);
        if let Some(code) = &self.codes {
            let lut = cols.start.min(code.cols)..cols.end.min(code.cols);
            if lut.len() >= LUT_MIN_COLS {
                code.correlate_lut(r, lut.clone(), out);
                let scale = 1.0 / (self.n_rows as f64).sqrt();
                match &self.phases {
                    Some(ph) => lut.clone().for_each(|c| out[c] *= ph[c].conj() * scale),
                    None => lut.clone().for_each(|c| out[c] *= scale),
                }
                self.correlate_dense(r, cols.start..lut.start, out);
                self.correlate_dense(r, lut.end..cols.end, out);
                return;
            }
        }
        self.correlate_dense(r, cols, out);
    }

    fn correlate_dense(&self, r: &SplitSignal, cols: Range<usize>, out: &mut [C64]) {
        let n = self.n_rows;
        match (self.is_real, r.is_real) {
            (true, true) => {
                for i in cols {
                    out[i] = C64::new(dot(&r.re, &self.re[i * n..(i + 1) * n]), 0.0);
                }
            }
            (true, false) => {
                for i in cols {
                    let a = &self.re[i * n..(i + 1) * n];
                    out[i] = C64::new(dot(&r.re, a), dot(&r.im, a));
                }
            }
            (false, _) => {
                for i in cols {
                    let (ar, ai) = (&self.re[i * n..(i + 1) * n], &self.im[i * n..(i + 1) * n]);
                    let re = dot(&r.re, ar) + dot(&r.im, ai);
                    let im = dot(&r.im, ar) - dot(&r.re, ai);
                    out[i] = C64::new(re, im);
                }
            }
        }
    }

    /// `y += coeff * a_col`.
    pub fn axpy(&self, coeff: C64, col: usize, y: &mut [C64]) {
        let ar = self.column_re(col);
        match self.column_im(col) {
            Some(ai) => {
                for ((y, &r), &i) in y.iter_mut().zip(ar).zip(ai) {
                    *y += coeff * C64::new(r, i);
                }
            }
            None => {
                for (y, &r) in y.iter_mut().zip(ar) {
                    *y += coeff * C64::new(r, 0.0);
                }
            }
        }
    }

    /// Mutual coherence `max_{p != q} |<a_p, a_q>| / (|a_p| |a_q|)`.
    ///
    /// Computed once and cached. Structured dictionaries use exact integer
    /// correlations; the random phases do not change magnitudes.
    pub fn mutual_coherence(&self) -> f64 {
        *self.coherence.get_or_init(|| self.compute_coherence())
    }

    /// For structured dictionaries: the largest `|sum_x i^(e_p - e_q)|^2`
    /// over distinct code columns, i.e. `(N * |<a_p, a_q>|)^2` exactly.
    pub fn max_code_correlation_sq(&self) -> Option<i64> {
        let code = self.codes.as_ref()?;
        let cols = code.cols;
        Some(
            (0..cols)
                .into_par_iter()
                .map(|p| {
                    (p + 1..cols)
                        .map(|q| {
                            let (a, b) = code.correlation(p, q);
                            a * a + b * b
                        })
                        .max()
                        .unwrap_or(0)
                })
                .max()
                .unwrap_or(0),
        )
    }

    fn compute_coherence(&self) -> f64 {
        if self.n_cols < 2 {
            return 0.0;
        }
        if let Some(max_sq) = self.max_code_correlation_sq() {
            let n = self.n_rows as f64;
            let mut mu = (max_sq as f64).sqrt() / n;
            if self.identity_column && self.codes.as_ref().is_some_and(|c| c.cols > 0) {
                mu = mu.max(1.0 / n.sqrt());
            }
            return mu;
        }
        let norms: Vec<f64> = (0..self.n_cols).map(|i| self.inner(i, i).re.sqrt()).collect();
        (0..self.n_cols)
            .into_par_iter()
            .map(|p| (p + 1..self.n_cols).map(|q| self.inner(p, q).norm() / (norms[p] * norms[q])).fold(0.0, f64::max))
            .reduce(|| 0.0, f64::max)
    }

    /// Multiplies column `i` by `exp(j theta_i)` with `theta_i` drawn
    /// uniformly from `[0, 2 pi)` by a ChaCha8 generator seeded with `seed`.
    ///
    /// The same seed always reproduces the same matrix, so only the base
    /// dictionary and the seed need to be shared between encoder and
    /// decoder. Only complex MUB dictionaries accept a phase.
    pub fn apply_random_phase(mut self, seed: u64) -> Result<Self> {
        if self.kind != DictionaryKind::Mub {
            return Err(invalid(format!("random phase applies to unphased MUB dictionaries, got {}", self.kind)));
        }
        let phases = random_phases(self.n_cols, seed);
        let n = self.n_rows;
        if self.is_real {
            self.im = vec![0.0; self.re.len()];
            self.is_real = false;
        }
        for (c, ph) in phases.iter().enumerate() {
            for k in c * n..(c + 1) * n {
                let z = C64::new(self.re[k], self.im[k]) * ph;
                self.re[k] = z.re;
                self.im[k] = z.im;
            }
        }
        self.kind = DictionaryKind::MubRandomPhase;
        self.phase_seed = Some(seed);
        self.phases = Some(phases);
        Ok(self)
    }

    /// Records explicit subblock lengths. Each must be positive and their
    /// sum must not exceed `L`.
    pub fn with_subblocks(mut self, lengths: Vec<usize>) -> Result<Self> {
        validate_subblocks(&lengths, self.n_cols)?;
        self.subblock_lengths = lengths;
        Ok(self)
    }

    /// Partitions the columns into `k` power-of-two subblocks with
    /// [`partition_subblocks`].
    pub fn partitioned(self, k: usize) -> Result<Self> {
        let lengths = partition_subblocks(self.n_cols, k)?;
        self.with_subblocks(lengths)
    }

    /// Column ranges of the recorded subblocks.
    pub fn subblock_ranges(&self) -> Vec<Range<usize>> {
        ranges_of(&self.subblock_lengths)
    }
}

pub(crate) fn validate_subblocks(lengths: &[usize], n_cols: usize) -> Result<()> {
    if lengths.is_empty() || lengths.contains(&0) {
        return Err(invalid("subblock lengths must be nonempty and positive"));
    }
    let total: usize = lengths.iter().sum();
    if total > n_cols {
        return Err(invalid(format!("subblocks cover {total} columns but the dictionary has {n_cols}")));
    }
    Ok(())
}

/// Consecutive ranges with the given lengths, starting at column 0.
pub fn ranges_of(lengths: &[usize]) -> Vec<Range<usize>> {
    let mut start = 0;
    lengths
        .iter()
        .map(|&l| {
            let r = start..start + l;
            start += l;
            r
        })
        .collect()
}

pub(crate) fn random_phases(cols: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..cols).map(|_| C64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))).collect()
}

/// A signal split into real and imaginary planes for the correlation kernels.
#[derive(Debug, Clone)]
pub(crate) struct SplitSignal {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub is_real: bool,
}

impl SplitSignal {
    pub fn new(r: &[C64]) -> Self {
        SplitSignal {
            re: r.iter().map(|z| z.re).collect(),
            im: r.iter().map(|z| z.im).collect(),
            is_real: r.iter().all(|z| z.im == 0.0),
        }
    }
}

/// Real dot product with four independent accumulators.
#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let tail: f64 = ra.iter().zip(rb).map(|(x, y)| x * y).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_zero_coherence() {
        let d = Dictionary::identity(5);
        assert_eq!(d.mutual_coherence(), 0.0);
        assert!(d.is_real());
    }

    #[test]
    fn from_columns_rejects_non_unit_norm() {
        let cols = vec![vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]];
        assert!(Dictionary::from_columns(&cols).is_err());
    }

    #[test]
    fn code_correlation_matches_float_inner_product() {
        let d = build_mub(3).unwrap();
        let code = d.codes().unwrap();
        for (p, q) in [(0, 1), (3, 17), (9, 63), (40, 41), (5, 5)] {
            let (a, b) = code.correlation(p, q);
            let z = d.inner(p, q) * 8.0;
            assert!((z.re - a as f64).abs() < 1e-12 && (z.im - b as f64).abs() < 1e-12, "{p},{q}");
        }
    }

    #[test]
    fn random_phase_is_deterministic_and_preserves_magnitudes() {
        let base = build_mub(3).unwrap();
        let a = base.clone().apply_random_phase(11).unwrap();
        let b = base.clone().apply_random_phase(11).unwrap();
        assert_eq!(a.re, b.re);
        assert_eq!(a.im, b.im);
        assert_eq!(a.kind(), DictionaryKind::MubRandomPhase);
        assert!((a.mutual_coherence() - base.mutual_coherence()).abs() < 1e-12);
        for c in 0..a.n_cols() {
            assert!((a.inner(c, c).re - 1.0).abs() < 1e-12);
        }
        assert!(a.apply_random_phase(3).is_err());
    }

    #[test]
    fn subblocks_validated() {
        let d = build_mub(2).unwrap();
        assert!(d.clone().with_subblocks(vec![8, 0]).is_err());
        assert!(d.clone().with_subblocks(vec![16, 8]).is_err());
        assert_eq!(d.clone().with_subblocks(vec![10, 6]).unwrap().subblock_lengths(), &[10, 6]);
        let d = d.partitioned(3).unwrap();
        assert_eq!(d.subblock_lengths(), &[8, 4, 4]);
        assert_eq!(d.subblock_ranges(), vec![0..8, 8..12, 12..16]);
    }

    #[test]
    fn lut_matches_dense() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let dicts =
            [build_gold(5, true).unwrap(), build_mub(3).unwrap(), build_mub(4).unwrap().apply_random_phase(9).unwrap()];
        for d in dicts {
            let n = d.n_rows();
            for real in [true, false] {
                let r: Vec<C64> = (0..n)
                    .map(|_| {
                        C64::new(rng.random_range(-1.0..1.0), if real { 0.0 } else { rng.random_range(-1.0..1.0) })
                    })
                    .collect();
                let sig = SplitSignal::new(&r);
                let l = d.n_cols();
                let mut fast = vec![C64::new(0.0, 0.0); l];
                let mut slow = fast.clone();
                d.correlate_split(&sig, 0..l, &mut fast);
                d.correlate_dense(&sig, 0..l, &mut slow);
                for (a, b) in fast.iter().zip(&slow) {
                    assert!((a - b).norm() < 1e-12, "{} {a} vs {b}", d.kind());
                }
            }
        }
    }

    #[test]
    fn dot_matches_naive() {
        let a: Vec<f64> = (0..11).map(|i| i as f64 * 0.5).collect();
        let b: Vec<f64> = (0..11).map(|i| 1.0 - i as f64).collect();
        let naive: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!((dot(&a, &b) - naive).abs() < 1e-12);
    }
}
