//! Bits to sparse messages to codewords, and back.
//!
//! A [`SchemeSpec`] fixes the dictionary, the sparsity `K`, the constellation
//! and one of two index maps:
//!
//! * [`Scheme::Sc`]: the support is any `K`-subset of the `L` columns,
//!   carrying `floor(log2 C(L, K))` bits through its combinadic rank.
//! * [`Scheme::Ssc`]: the columns are split into `K` subblocks and one
//!   column is picked in each, carrying `sum_k floor(log2 L_k)` bits.
//!
//! In both cases the first `K floor(log2 M)` bits choose the symbols.
//! Column indices are zero-based.

mod bits;
mod combinadic;
mod constellation;

use std::ops::Range;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use bits::{biguint_to_bits, bits_from_hex, bits_to_biguint, bits_to_hex, bits_to_usize, usize_to_bits};
pub use combinadic::{binomial, Combinadic};
pub use constellation::{Constellation, ConstellationKind};

use crate::dictionary::{partition_subblocks, ranges_of, Dictionary};
use crate::error::{invalid, Error, Result};
use crate::C64;

fn floor_log2(x: usize) -> usize {
    (usize::BITS - 1 - x.leading_zeros()) as usize
}

/// Bits carried by sparse coding: `K floor(log2 M) + floor(log2 C(L, K))`.
pub fn bits_capacity_sc(l: usize, k: usize, m: usize) -> Result<usize> {
    if k == 0 || k > l || m == 0 {
        return Err(invalid(format!("need 1 <= K <= L and M >= 1, got L={l} K={k} M={m}")));
    }
    let subsets = binomial(l, k);
    Ok(k * floor_log2(m) + (subsets.bits() - 1) as usize)
}

/// Bits carried by subblock sparse coding: `K floor(log2 M) + sum floor(log2 L_k)`.
pub fn bits_capacity_ssc(subblocks: &[usize], m: usize) -> Result<usize> {
    if subblocks.is_empty() || subblocks.contains(&0) || m == 0 {
        return Err(invalid("need a nonempty partition of positive subblocks and M >= 1"));
    }
    Ok(subblocks.len() * floor_log2(m) + subblocks.iter().map(|&l| floor_log2(l)).sum::<usize>())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Sc,
    Ssc,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Sc => "sc",
            Scheme::Ssc => "ssc",
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sc" => Ok(Scheme::Sc),
            "ssc" => Ok(Scheme::Ssc),
            other => Err(invalid(format!("unknown scheme {other:?}"))),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The `K` nonzero entries of the sparse vector `x`.
///
/// `support[k]` is a column index and `symbols[k]` an index into the
/// constellation, so `x[support[k]] = b[symbols[k]]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseMessage {
    pub support: Vec<usize>,
    pub symbols: Vec<usize>,
}

impl SparseMessage {
    pub fn new(support: Vec<usize>, symbols: Vec<usize>) -> Result<Self> {
        if support.len() != symbols.len() {
            return Err(invalid("support and symbols differ in length"));
        }
        Ok(SparseMessage { support, symbols })
    }

    pub fn k(&self) -> usize {
        self.support.len()
    }

    /// The same message with entries sorted by column index.
    pub fn sorted(&self) -> SparseMessage {
        let mut pairs: Vec<(usize, usize)> = self.support.iter().copied().zip(self.symbols.iter().copied()).collect();
        pairs.sort_unstable();
        let (support, symbols) = pairs.into_iter().unzip();
        SparseMessage { support, symbols }
    }

    /// Order-insensitive equality of the (column, symbol) pairs.
    pub fn same_as(&self, other: &SparseMessage) -> bool {
        self.sorted() == other.sorted()
    }

    /// Checks indices against `L` columns, `M` symbols and distinctness.
    pub fn validate(&self, n_cols: usize, m: usize) -> Result<()> {
        let s = self.sorted();
        if s.support.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("support indices are not distinct"));
        }
        if s.support.last().is_some_and(|&c| c >= n_cols) {
            return Err(invalid(format!("support index outside [0, {n_cols})")));
        }
        if s.symbols.iter().any(|&b| b >= m) {
            return Err(invalid(format!("symbol index outside [0, {m})")));
        }
        Ok(())
    }
}

/// Everything needed to encode and decode one block.
#[derive(Debug, Clone)]
pub struct SchemeSpec {
    scheme: Scheme,
    dict: Arc<Dictionary>,
    k: usize,
    constellation: Constellation,
    subblocks: Vec<usize>,
    n_bits: usize,
    combinadic: Option<Arc<Combinadic>>,
}

impl SchemeSpec {
    /// For SSC, uses the dictionary's recorded subblocks when there are
    /// exactly `K` of them and partitions the columns otherwise.
    pub fn new(dict: Arc<Dictionary>, scheme: Scheme, k: usize, constellation: Constellation) -> Result<Self> {
        let subblocks = match scheme {
            Scheme::Ssc if dict.subblock_lengths().len() == k => dict.subblock_lengths().to_vec(),
            Scheme::Ssc => partition_subblocks(dict.n_cols(), k)?,
            Scheme::Sc => Vec::new(),
        };
        Self::build(dict, scheme, k, constellation, subblocks)
    }

    /// SSC with explicit subblock lengths covering the leading columns.
    pub fn ssc_with_subblocks(
        dict: Arc<Dictionary>,
        subblocks: Vec<usize>,
        constellation: Constellation,
    ) -> Result<Self> {
        crate::dictionary::validate_subblocks(&subblocks, dict.n_cols())?;
        Self::build(dict, Scheme::Ssc, subblocks.len(), constellation, subblocks)
    }

    fn build(
        dict: Arc<Dictionary>,
        scheme: Scheme,
        k: usize,
        constellation: Constellation,
        subblocks: Vec<usize>,
    ) -> Result<Self> {
        let m = constellation.len();
        let (n_bits, combinadic) = match scheme {
            Scheme::Sc => (bits_capacity_sc(dict.n_cols(), k, m)?, Some(Arc::new(Combinadic::new(dict.n_cols(), k)?))),
            Scheme::Ssc => (bits_capacity_ssc(&subblocks, m)?, None),
        };
        Ok(SchemeSpec { scheme, dict, k, constellation, subblocks, n_bits, combinadic })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn dictionary(&self) -> &Arc<Dictionary> {
        &self.dict
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    /// Subblock lengths (empty for SC).
    pub fn subblocks(&self) -> &[usize] {
        &self.subblocks
    }

    pub fn subblock_ranges(&self) -> Vec<Range<usize>> {
        ranges_of(&self.subblocks)
    }

    /// `N_b`, the number of information bits per block.
    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    /// True when every codeword is real: real dictionary and real alphabet.
    pub fn is_real(&self) -> bool {
        self.dict.is_real() && self.constellation.is_real()
    }

    /// Bits per real dimension: `N_b / N` for real signals, `N_b / 2N` otherwise.
    pub fn code_rate(&self) -> f64 {
        let dims = if self.is_real() { self.dict.n_rows() } else { 2 * self.dict.n_rows() };
        self.n_bits as f64 / dims as f64
    }

    /// `E_b = E_s / N_b = K / N_b`.
    pub fn energy_per_bit(&self) -> f64 {
        self.k as f64 / self.n_bits as f64
    }

    fn symbol_bits(&self) -> usize {
        self.constellation.bits_per_symbol()
    }

    pub fn encode(&self, bits: &[bool]) -> Result<SparseMessage> {
        if bits.len() != self.n_bits {
            return Err(Error::BitLength { expected: self.n_bits, got: bits.len() });
        }
        let w = self.symbol_bits();
        let (sym_bits, idx_bits) = bits.split_at(self.k * w);
        let symbols: Vec<usize> = (0..self.k).map(|k| bits_to_usize(&sym_bits[k * w..(k + 1) * w])).collect();
        let support = match self.scheme {
            Scheme::Ssc => {
                let mut pos = 0;
                let mut start = 0;
                self.subblocks
                    .iter()
                    .map(|&l| {
                        let width = floor_log2(l);
                        let alpha = start + bits_to_usize(&idx_bits[pos..pos + width]);
                        pos += width;
                        start += l;
                        alpha
                    })
                    .collect()
            }
            Scheme::Sc => self.combinadic.as_ref().expect("sc table").unrank(&bits_to_biguint(idx_bits))?,
        };
        Ok(SparseMessage { support, symbols })
    }

    /// Inverse of [`encode`](Self::encode). Entries may come in any order.
    ///
    /// Errors when the message is not a codeword: wrong size, repeated or
    /// out-of-range indices, two columns in one subblock, or an index whose
    /// offset (SSC) or rank (SC) falls outside the coded region.
    pub fn decode_bits(&self, msg: &SparseMessage) -> Result<Vec<bool>> {
        if msg.k() != self.k {
            return Err(invalid(format!("message has {} entries, expected {}", msg.k(), self.k)));
        }
        msg.validate(self.dict.n_cols(), self.constellation.len())?;
        let w = self.symbol_bits();
        let mut out = Vec::with_capacity(self.n_bits);
        match self.scheme {
            Scheme::Ssc => {
                let ranges = self.subblock_ranges();
                let mut slot = vec![None; self.k];
                for (&alpha, &beta) in msg.support.iter().zip(&msg.symbols) {
                    let b = ranges
                        .iter()
                        .position(|r| r.contains(&alpha))
                        .ok_or_else(|| Error::Unrepresentable(format!("column {alpha} lies in no subblock")))?;
                    if slot[b].replace((alpha - ranges[b].start, beta)).is_some() {
                        return Err(Error::Unrepresentable(format!("two columns in subblock {b}")));
                    }
                }
                let slot: Vec<(usize, usize)> = slot.into_iter().map(Option::unwrap).collect();
                for &(_, beta) in &slot {
                    usize_to_bits(beta, w, &mut out);
                }
                for (&(offset, _), &l) in slot.iter().zip(&self.subblocks) {
                    let width = floor_log2(l);
                    if offset >> width != 0 {
                        return Err(Error::Unrepresentable(format!(
                            "offset {offset} does not fit in {width} bits of a subblock of {l}"
                        )));
                    }
                    usize_to_bits(offset, width, &mut out);
                }
            }
            Scheme::Sc => {
                let sorted = msg.sorted();
                for &beta in &sorted.symbols {
                    usize_to_bits(beta, w, &mut out);
                }
                let rank = self.combinadic.as_ref().expect("sc table").rank(&sorted.support)?;
                biguint_to_bits(&rank, self.n_bits - self.k * w, &mut out)?;
            }
        }
        Ok(out)
    }

    /// Checks that a message is a valid codeword of this scheme.
    pub fn is_codeword(&self, msg: &SparseMessage) -> bool {
        self.decode_bits(msg).is_ok()
    }

    /// `s = sum_k b[symbols[k]] a[support[k]]`.
    pub fn synthesize(&self, msg: &SparseMessage) -> Vec<C64> {
        synthesize(&self.dict, &self.constellation, msg)
    }
}

/// `s = A x` for the sparse vector described by `msg`.
pub fn synthesize(dict: &Dictionary, constellation: &Constellation, msg: &SparseMessage) -> Vec<C64> {
    let mut s = vec![C64::new(0.0, 0.0); dict.n_rows()];
    for (&alpha, &beta) in msg.support.iter().zip(&msg.symbols) {
        dict.axpy(constellation.symbol(beta), alpha, &mut s);
    }
    s
}
