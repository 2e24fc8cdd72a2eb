//! Bit strings as `Vec<bool>`, most significant bit first.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Parses exactly `ceil(n_bits / 4)` hex digits into `n_bits` bits.
///
/// The leading `4 * digits - n_bits` bits of the hex value are padding and
/// must be zero.
pub fn bits_from_hex(hex: &str, n_bits: usize) -> Result<Vec<bool>> {
    let hex = hex.trim().trim_start_matches("0x");
    let digits = n_bits.div_ceil(4);
    if hex.len() != digits {
        return Err(Error::BitLength { expected: n_bits, got: hex.len() * 4 });
    }
    let mut bits = Vec::with_capacity(digits * 4);
    for ch in hex.chars() {
        let v = ch.to_digit(16).ok_or_else(|| Error::Format(format!("not a hex digit: {ch:?}")))?;
        bits.extend((0..4).rev().map(|i| v >> i & 1 == 1));
    }
    let pad = digits * 4 - n_bits;
    if bits[..pad].iter().any(|&b| b) {
        return Err(Error::Format(format!("hex value exceeds {n_bits} bits")));
    }
    Ok(bits.split_off(pad))
}

/// Inverse of [`bits_from_hex`].
pub fn bits_to_hex(bits: &[bool]) -> String {
    let pad = bits.len().div_ceil(4) * 4 - bits.len();
    let padded: Vec<bool> = std::iter::repeat_n(false, pad).chain(bits.iter().copied()).collect();
    padded
        .chunks(4)
        .map(|c| {
            let v = c.iter().fold(0u32, |acc, &b| acc << 1 | b as u32);
            char::from_digit(v, 16).unwrap()
        })
        .collect()
}

/// Unsigned big-endian value of a short bit string.
pub fn bits_to_usize(bits: &[bool]) -> usize {
    debug_assert!(bits.len() < usize::BITS as usize);
    bits.iter().fold(0, |acc, &b| acc << 1 | b as usize)
}

/// The low `width` bits of `value`, big-endian.
pub fn usize_to_bits(value: usize, width: usize, out: &mut Vec<bool>) {
    out.extend((0..width).rev().map(|i| value >> i & 1 == 1));
}

pub fn bits_to_biguint(bits: &[bool]) -> BigUint {
    let mut v = BigUint::zero();
    for &b in bits {
        v <<= 1;
        if b {
            v += 1u32;
        }
    }
    v
}

/// `value` as exactly `width` big-endian bits; errors if it needs more.
pub fn biguint_to_bits(value: &BigUint, width: usize, out: &mut Vec<bool>) -> Result<()> {
    if value.bits() > width as u64 {
        return Err(Error::Unrepresentable(format!("value needs {} bits, only {width} available", value.bits())));
    }
    out.extend((0..width as u64).rev().map(|i| value.bit(i)));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip() {
        let bits = bits_from_hex("2b", 7).unwrap();
        assert_eq!(bits, vec![false, true, false, true, false, true, true]);
        assert_eq!(bits_to_hex(&bits), "2b");
        assert!(bits_from_hex("ab", 7).is_err());
        assert!(bits_from_hex("2b0", 7).is_err());
        assert!(bits_from_hex("zz", 8).is_err());
        assert_eq!(bits_to_hex(&[true; 8]), "ff");
        assert_eq!(bits_from_hex("0x0", 1).unwrap(), vec![false]);
    }

    #[test]
    fn integers() {
        let mut out = Vec::new();
        usize_to_bits(5, 3, &mut out);
        assert_eq!(out, vec![true, false, true]);
        assert_eq!(bits_to_usize(&out), 5);
        let big = bits_to_biguint(&out);
        assert_eq!(big, BigUint::from(5u32));
        let mut again = Vec::new();
        biguint_to_bits(&big, 4, &mut again).unwrap();
        assert_eq!(again, vec![false, true, false, true]);
        assert!(biguint_to_bits(&big, 2, &mut again).is_err());
    }
}
