use num_bigint::BigUint;

use super::{residual_norm, DecodeOutput};
use crate::codec::{binomial, Scheme, SchemeSpec, SparseMessage};
use crate::error::{Error, Result};
use crate::C64;

/// Largest codebook the exhaustive search accepts.
pub const ML_SEARCH_LIMIT: u64 = 1_000_000;

/// Exhaustive minimum-distance decoding over every codeword of `spec`.
///
/// Candidates are visited in lexicographic (support, symbol) order and only
/// a strictly smaller distance replaces the incumbent, so ties resolve to
/// the lexicographically smallest message.
pub fn ml_oracle(y: &[C64], spec: &SchemeSpec) -> Result<DecodeOutput> {
    let d = spec.dictionary();
    let k = spec.k();
    let m = spec.constellation().len();
    let supports = match spec.scheme() {
        Scheme::Sc => binomial(d.n_cols(), k),
        Scheme::Ssc => spec.subblocks().iter().map(|&l| BigUint::from(l)).product(),
    };
    let size = supports * BigUint::from(m).pow(k as u32);
    if size > BigUint::from(ML_SEARCH_LIMIT) {
        return Err(Error::SearchSpaceTooLarge(format!("{size} candidates exceed {ML_SEARCH_LIMIT}")));
    }

    let mut best: Option<(f64, SparseMessage)> = None;
    let mut consider = |support: &[usize]| {
        let mut msg = SparseMessage { support: support.to_vec(), symbols: vec![0; k] };
        if !spec.is_codeword(&msg) {
            return;
        }
        loop {
            let dist = residual_norm(y, &spec.synthesize(&msg));
            if best.as_ref().is_none_or(|b| dist < b.0) {
                best = Some((dist, msg.clone()));
            }
            // Odometer over symbol tuples, last entry fastest.
            let Some(pos) = msg.symbols.iter().rposition(|&s| s + 1 < m) else { break };
            msg.symbols[pos] += 1;
            msg.symbols[pos + 1..].fill(0);
        }
    };

    match spec.scheme() {
        Scheme::Sc => {
            let l = d.n_cols();
            let mut sub: Vec<usize> = (0..k).collect();
            loop {
                consider(&sub);
                let Some(pos) = (0..k).rposition(|j| sub[j] < l - k + j) else { break };
                sub[pos] += 1;
                for j in pos + 1..k {
                    sub[j] = sub[j - 1] + 1;
                }
            }
        }
        Scheme::Ssc => {
            let ranges = spec.subblock_ranges();
            let mut sub: Vec<usize> = ranges.iter().map(|r| r.start).collect();
            loop {
                consider(&sub);
                let Some(pos) = (0..k).rposition(|j| sub[j] + 1 < ranges[j].end) else { break };
                sub[pos] += 1;
                for j in pos + 1..k {
                    sub[j] = ranges[j].start;
                }
            }
        }
    }
    let (distance, message) = best.ok_or_else(|| Error::InvalidArgument("empty codebook".into()))?;
    Ok(DecodeOutput { message, trace: Vec::new(), distance, path: None, degenerate: false })
}
