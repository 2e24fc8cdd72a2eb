//! Complex mutually unbiased bases in dimension `N = 2^m`.
//!
//! Basis `a` (a field element of GF(2^m)) is built from the symmetric
//! binary matrix `S_a[i][j] = Tr(a w_i w_j)` over the polynomial basis
//! `w_i = alpha^i`. Its column `b` at row `x` is
//!
//! ```text
//! u_{a,b}[x] = i^(x^T S_a x  mod 4) * (-1)^(b . x) / sqrt(N)
//! ```
//!
//! where `x^T S_a x` is evaluated over the integers. Because
//! `S_a - S_a' = S_{a+a'}` is nonsingular over GF(2) for `a != a'`, every
//! cross-basis inner product has magnitude exactly `1/sqrt(N)`, and every
//! entry is a fourth root of unity over `sqrt(N)`.

use super::{CodeTable, Dictionary, DictionaryKind};
use crate::error::{invalid, Error, Result};

/// Primitive polynomials for GF(2^m), m = 1..=8, indexed by m.
const PRIMITIVE: [u32; 9] = [0, 0b11, 0b111, 0b1011, 0b1_0011, 0b10_0101, 0b100_0011, 0b1000_1001, 0b1_0001_1101];

struct Gf2m {
    m: u32,
    poly: u32,
}

impl Gf2m {
    fn new(m: u32) -> Self {
        Gf2m { m, poly: PRIMITIVE[m as usize] }
    }

    fn mul(&self, mut a: u32, mut b: u32) -> u32 {
        let mut acc = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> self.m & 1 == 1 {
                a ^= self.poly;
            }
        }
        acc
    }

    /// Absolute trace `sum_k z^(2^k)`, which lies in GF(2).
    fn trace(&self, z: u32) -> u32 {
        let mut t = 0;
        let mut p = z;
        for _ in 0..self.m {
            t ^= p;
            p = self.mul(p, p);
        }
        debug_assert!(t <= 1);
        t
    }
}

/// `x -> x^T S_a x mod 4` for every `x` in `0..N`.
fn quadratic_forms(m: u32) -> Vec<Vec<u8>> {
    let field = Gf2m::new(m);
    let n = 1usize << m;
    let powers: Vec<u32> = (0..2 * m).map(|k| (0..k).fold(1, |acc, _| field.mul(acc, 2))).collect();
    (0..n as u32)
        .map(|a| {
            let s: Vec<Vec<u32>> = (0..m as usize)
                .map(|i| (0..m as usize).map(|j| field.trace(field.mul(a, powers[i + j]))).collect())
                .collect();
            (0..n)
                .map(|x| {
                    let mut q = 0u32;
                    for i in 0..m as usize {
                        if x >> i & 1 == 0 {
                            continue;
                        }
                        q += s[i][i];
                        for j in i + 1..m as usize {
                            if x >> j & 1 == 1 {
                                q += 2 * s[i][j];
                            }
                        }
                    }
                    (q % 4) as u8
                })
                .collect()
        })
        .collect()
}

/// In-place Walsh-Hadamard transform of a Gaussian-integer vector.
fn walsh_hadamard(v: &mut [(i64, i64)]) {
    let mut h = 1;
    while h < v.len() {
        for start in (0..v.len()).step_by(2 * h) {
            for i in start..start + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = (a.0 + b.0, a.1 + b.1);
                v[i + h] = (a.0 - b.0, a.1 - b.1);
            }
        }
        h *= 2;
    }
}

const UNIT_POWERS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

/// All cross-basis inner products for bases `a` and `a2`, scaled by `N`:
/// entry `c` is `N <u_{a,b}, u_{a2,b2}>` for any `b ^ b2 = c`.
fn cross_products(forms: &[Vec<u8>], a: usize, a2: usize) -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> =
        forms[a].iter().zip(&forms[a2]).map(|(&q1, &q2)| UNIT_POWERS[((q1 + 4 - q2) % 4) as usize]).collect();
    walsh_hadamard(&mut v);
    v
}

/// Builds `N = 2^m` mutually unbiased bases `A = [U_1 .. U_N]` (`L = N^2`).
///
/// Column `a * N + b` is vector `b` of basis `a`. The construction is
/// checked exactly before returning: every cross-basis inner product must
/// have squared magnitude `1/N`.
pub fn build_mub(m: u32) -> Result<Dictionary> {
    if !(1..=8).contains(&m) {
        return Err(invalid(format!("MUB log2-dimension {m} outside [1, 8]")));
    }
    let n = 1usize << m;
    let forms = quadratic_forms(m);

    for a in 0..n {
        for a2 in a + 1..n {
            for &(re, im) in &cross_products(&forms, a, a2) {
                let norm_sq = re * re + im * im;
                if norm_sq != n as i64 {
                    return Err(Error::MubSelfCheck { basis_a: a, basis_b: a2, norm_sq, expected: n as i64 });
                }
            }
        }
    }

    let mut exps = Vec::with_capacity(n * n * n);
    for form in &forms {
        for b in 0..n {
            exps.extend((0..n).map(|x| (form[x] + 2 * ((b & x).count_ones() as u8 & 1)) % 4));
        }
    }
    let code = CodeTable::new(n, n * n, exps);
    let dict = Dictionary::from_codes(DictionaryKind::Mub, n, code, false);
    let _ = dict.coherence.set(1.0 / (n as f64).sqrt());
    Ok(dict)
}

/// Result of checking whether cross-basis inner products lie in
/// `{+1, -1, +i, -i} / sqrt(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphabetReport {
    pub m: u32,
    /// Cross-basis column pairs examined.
    pub pairs: u64,
    /// Pairs whose scaled inner product is not a fourth root of unity.
    pub off_alphabet: u64,
}

impl AlphabetReport {
    pub fn holds(&self) -> bool {
        self.off_alphabet == 0
    }
}

/// Checks the fourth-root-of-unity property of cross-basis inner products
/// for the bases produced by [`build_mub`]. Reports rather than fails.
pub fn mub_alphabet_report(m: u32) -> Result<AlphabetReport> {
    if !(1..=8).contains(&m) {
        return Err(invalid(format!("MUB log2-dimension {m} outside [1, 8]")));
    }
    let n = 1usize << m;
    let forms = quadratic_forms(m);
    // N <x,y> * sqrt(N) / N must be a unit: (re, im) in {(+-r, 0), (0, +-r)}
    // with r = sqrt(N), which needs N to be a perfect square.
    let root = (n as f64).sqrt().round() as i64;
    let exact_root = root * root == n as i64;
    let mut report = AlphabetReport { m, pairs: 0, off_alphabet: 0 };
    for a in 0..n {
        for a2 in a + 1..n {
            for &(re, im) in &cross_products(&forms, a, a2) {
                report.pairs += n as u64;
                let on = exact_root && ((re.abs() == root && im == 0) || (im.abs() == root && re == 0));
                if !on {
                    report.off_alphabet += n as u64;
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let f = Gf2m::new(3);
        // alpha^3 = alpha + 1 for x^3 + x + 1
        assert_eq!(f.mul(0b100, 0b010), 0b011);
        for z in 0..8 {
            assert!(f.trace(z) <= 1);
        }
        // The trace map is balanced.
        assert_eq!((0..8).filter(|&z| f.trace(z) == 1).count(), 4);
    }

    #[test]
    fn dimension_four() {
        let d = build_mub(2).unwrap();
        assert_eq!((d.n_rows(), d.n_cols()), (4, 16));
        for p in 0..16 {
            for q in 0..16 {
                let mag = d.inner(p, q).norm();
                let expected = if p == q {
                    1.0
                } else if p / 4 == q / 4 {
                    0.0
                } else {
                    0.5
                };
                assert!((mag - expected).abs() < 1e-12, "({p},{q}) -> {mag}");
            }
        }
    }

    #[test]
    fn dimension_eight_gram_magnitudes() {
        let d = build_mub(3).unwrap();
        let allowed = [0.0, 1.0, 1.0 / 8f64.sqrt()];
        for p in 0..64 {
            for q in 0..64 {
                let mag = d.inner(p, q).norm();
                assert!(allowed.iter().any(|a| (mag - a).abs() < 1e-12), "({p},{q}) -> {mag}");
            }
        }
    }

    #[test]
    fn quaternary_entries() {
        let d = build_mub(4).unwrap();
        let s = 4.0;
        for c in 0..d.n_cols() {
            for z in d.column(c) {
                let w = z * s;
                let ok = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]
                    .iter()
                    .any(|&(r, i)| (w.re - r).abs() < 1e-10 && (w.im - i).abs() < 1e-10);
                assert!(ok, "entry {w}");
            }
        }
    }

    #[test]
    fn alphabet_holds_for_even_m_only() {
        for m in 1..=6 {
            let report = mub_alphabet_report(m).unwrap();
            let n = 1u64 << m;
            assert_eq!(report.pairs, n * n * n * (n - 1) / 2);
            // For odd m the scaled products are Gaussian integers of norm
            // 2^m, hence odd multiples of pi/4 in phase.
            assert_eq!(report.holds(), m % 2 == 0, "m = {m}");
        }
    }

    #[test]
    fn range_checked() {
        assert!(build_mub(0).is_err());
        assert!(build_mub(9).is_err());
    }
}
