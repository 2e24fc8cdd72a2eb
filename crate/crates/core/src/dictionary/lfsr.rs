//! Fibonacci linear-feedback shift registers.
//!
//! A polynomial is given as a bitmask: bit `j` is the coefficient of `x^j`,
//! so `x^3 + x + 1` is `0b1011`. The register holds `n` consecutive sequence
//! bits with the oldest bit in position 0; that bit is the output. For a
//! degree-`n` polynomial the recurrence is
//! `a[k+n] = sum_{j<n} p_j a[k+j]` over GF(2).

use crate::error::{Error, Result};

/// Degree of a polynomial bitmask, i.e. the index of its highest set bit.
pub fn degree(poly: u32) -> u32 {
    31 - poly.leading_zeros()
}

/// One period of the maximal-length sequence generated by `poly` starting
/// from register content `init_state`.
///
/// Returns `2^n - 1` bits (each 0 or 1). Fails when the state is zero, the
/// degree is outside `[2, 16]`, or the polynomial is not primitive.
pub fn lfsr_msequence(poly: u32, init_state: u32) -> Result<Vec<u8>> {
    if poly == 0 {
        return Err(Error::UnsupportedDegree(0));
    }
    let n = degree(poly);
    if !(2..=16).contains(&n) {
        return Err(Error::UnsupportedDegree(n));
    }
    let mask = (1u32 << n) - 1;
    let state0 = init_state & mask;
    if state0 == 0 {
        return Err(Error::ZeroState);
    }
    let taps = poly & mask;
    let period = (1usize << n) - 1;

    let mut state = state0;
    let mut out = Vec::with_capacity(period);
    for step in 0..period {
        if step > 0 && state == state0 {
            return Err(Error::NotPrimitive { poly, period: step, expected: period });
        }
        out.push((state & 1) as u8);
        let feedback = (state & taps).count_ones() & 1;
        state = (state >> 1) | (feedback << (n - 1));
    }
    if state != state0 {
        // The orbit of state0 does not close after 2^n - 1 steps, so the
        // recurrence is singular (no x^0 term).
        return Err(Error::NotPrimitive { poly, period: 0, expected: period });
    }
    Ok(out)
}
