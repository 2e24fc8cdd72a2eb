//! Gold-code dictionaries.

use super::{lfsr_msequence, CodeTable, Dictionary, DictionaryKind};
use crate::error::{Error, Result};

/// Preferred pair of primitive polynomials (bitmask form) for degree `n`.
///
/// Supported degrees are 3, 5, 6 and 7. Each pair is re-validated by
/// [`build_gold`] through its three-valued cross-correlation.
pub fn preferred_pair(n: u32) -> Result<(u32, u32)> {
    match n {
        // x^3 + x + 1, x^3 + x^2 + 1
        3 => Ok((0b1011, 0b1101)),
        // x^5 + x^2 + 1, x^5 + x^4 + x^3 + x^2 + 1
        5 => Ok((0b10_0101, 0b11_1101)),
        // x^6 + x + 1, x^6 + x^5 + x^2 + x + 1
        6 => Ok((0b100_0011, 0b110_0111)),
        // x^7 + x^3 + 1, x^7 + x^3 + x^2 + x + 1
        7 => Ok((0b1000_1001, 0b1000_1111)),
        _ => Err(Error::UnsupportedDegree(n)),
    }
}

/// Largest magnitude `t(n) = 2^floor((n+2)/2) + 1` of the unnormalized
/// periodic cross-correlation within a Gold family of degree `n`.
pub fn gold_correlation_bound(n: u32) -> i64 {
    (1i64 << ((n + 2) / 2)) + 1
}

/// Builds the Gold dictionary of degree `n`: `N = 2^n - 1` rows and every
/// circular shift of all `2^n + 1` Gold sequences as columns (`2^(2n) - 1`
/// columns), with bit 0 mapped to `+1/sqrt(N)` and bit 1 to `-1/sqrt(N)`.
/// With `include_identity_column` the standard basis vector `e_1` is
/// appended, giving `L = 2^(2n)`.
///
/// Column order: the `N` shifts of `u`, the `N` shifts of `v`, then for
/// each `k` the `N` shifts of `u xor T^k v`. Column `j*N + s` of a sequence
/// block holds the sequence advanced by `s`.
pub fn build_gold(n: u32, include_identity_column: bool) -> Result<Dictionary> {
    let (p1, p2) = preferred_pair(n)?;
    build_gold_from_pair(p1, p2, include_identity_column)
}

pub(crate) fn build_gold_from_pair(p1: u32, p2: u32, include_identity_column: bool) -> Result<Dictionary> {
    let u = lfsr_msequence(p1, 1)?;
    let v = lfsr_msequence(p2, 1)?;
    if u.len() != v.len() {
        return Err(Error::InvalidArgument("preferred pair polynomials must share a degree".into()));
    }
    let n_deg = super::lfsr::degree(p1);
    let len = u.len();

    let mut sequences = Vec::with_capacity(len + 2);
    sequences.push(u.clone());
    sequences.push(v.clone());
    for k in 0..len {
        sequences.push((0..len).map(|x| u[x] ^ v[(x + k) % len]).collect::<Vec<u8>>());
    }

    let code_cols = sequences.len() * len;
    let mut exps = Vec::with_capacity(code_cols * len);
    for seq in &sequences {
        for s in 0..len {
            exps.extend((0..len).map(|x| 2 * seq[(x + s) % len]));
        }
    }
    let code = CodeTable::new(len, code_cols, exps);
    let dict = Dictionary::from_codes(DictionaryKind::Gold, len, code, include_identity_column);

    let max_sq = dict.max_code_correlation_sq().unwrap_or(0);
    let bound = gold_correlation_bound(n_deg);
    if max_sq > bound * bound {
        return Err(Error::NotPreferredPair { observed: (max_sq as f64).sqrt().round() as i64, bound });
    }
    // Cache the coherence computed by the validation pass.
    let mut mu = (max_sq as f64).sqrt() / len as f64;
    if include_identity_column {
        mu = mu.max(1.0 / (len as f64).sqrt());
    }
    let _ = dict.coherence.set(mu);
    Ok(dict)
}
