use nalgebra::{DMatrix, DVector};

use super::{residual_norm, DecodeOutput, Decoder, Iteration};
use crate::codec::SparseMessage;
use crate::dictionary::Dictionary;
use crate::error::{invalid, Result};
use crate::C64;

/// Normal equations are trusted up to this condition number.
pub const CONDITION_LIMIT: f64 = 1e8;

impl Decoder {
    /// Orthogonal matching pursuit with the final least-squares
    /// coefficients quantized to the nearest constellation points.
    pub(crate) fn omp(&self, y: &[C64]) -> Result<DecodeOutput> {
        let d = self.spec.dictionary();
        let constellation = self.spec.constellation();
        let mut ranges = self.candidate_ranges();
        let mut c = vec![C64::new(0.0, 0.0); d.n_cols()];
        let mut support = Vec::with_capacity(self.cfg.k);
        let mut trace = Vec::with_capacity(self.cfg.k);
        let mut r = y.to_vec();
        let mut coeffs = Vec::new();
        let mut degenerate = false;

        for _ in 0..self.cfg.k {
            for range in &ranges {
                d.correlate(&r, range.clone(), &mut c);
            }
            let (mut best, mut second, mut pick) = (f64::NEG_INFINITY, f64::NEG_INFINITY, None);
            for range in &ranges {
                for i in range.clone() {
                    if support.contains(&i) {
                        continue;
                    }
                    let a = c[i].norm();
                    if a > best {
                        (second, best, pick) = (best, a, Some(i));
                    } else if a > second {
                        second = a;
                    }
                }
            }
            let col = pick.ok_or_else(|| invalid("no candidate columns left"))?;
            support.push(col);
            self.discard(&mut ranges, col)?;

            let (x, deg) = least_squares(d, &support, y);
            degenerate |= deg;
            r = y.to_vec();
            for (&s, &xs) in support.iter().zip(&x) {
                d.axpy(-xs, s, &mut r);
            }
            coeffs = x;
            trace.push(Iteration { column: col, symbol: 0, score: best, margin: best - second });
        }
        let symbols: Vec<usize> = coeffs.iter().map(|&x| constellation.nearest(x)).collect();
        for (it, &s) in trace.iter_mut().zip(&symbols) {
            it.symbol = s;
        }
        let message = SparseMessage { support, symbols };
        let distance = residual_norm(y, &self.spec.synthesize(&message));
        Ok(DecodeOutput { message, trace, distance, path: None, degenerate })
    }
}

/// Least-squares coefficients of `y` on the columns in `support`, and
/// whether the pseudo-inverse fallback was used.
pub(crate) fn least_squares(d: &Dictionary, support: &[usize], y: &[C64]) -> (Vec<C64>, bool) {
    let n = d.n_rows();
    let a = DMatrix::from_fn(n, support.len(), |row, j| d.entry(row, support[j]));
    let y = DVector::from_column_slice(y);
    let normal = a.adjoint() * &a;
    let rhs = a.adjoint() * &y;
    let sv = normal.singular_values();
    let (hi, lo) = (sv.max(), sv.min());
    if lo > 0.0 && hi / lo <= CONDITION_LIMIT {
        if let Some(chol) = normal.cholesky() {
            return (chol.solve(&rhs).iter().copied().collect(), false);
        }
    }
    let pinv = a.pseudo_inverse(1e-12).expect("non-negative tolerance");
    ((pinv * y).iter().copied().collect(), true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::build_mub;

    #[test]
    fn exact_for_independent_columns() {
        let d = build_mub(3).unwrap();
        let coeffs = [C64::new(0.5, -1.0), C64::new(2.0, 0.25)];
        let mut y = vec![C64::new(0.0, 0.0); 8];
        d.axpy(coeffs[0], 3, &mut y);
        d.axpy(coeffs[1], 40, &mut y);
        let (x, deg) = least_squares(&d, &[3, 40], &y);
        assert!(!deg);
        assert!((x[0] - coeffs[0]).norm() < 1e-12 && (x[1] - coeffs[1]).norm() < 1e-12);
    }

    #[test]
    fn rank_deficient_support_falls_back() {
        let col = vec![C64::new(0.5, 0.0); 4];
        let d = Dictionary::from_columns(&[col.clone(), col]).unwrap();
        let y = vec![C64::new(1.0, 0.0); 4];
        let (x, deg) = least_squares(&d, &[0, 1], &y);
        assert!(deg);
        // Minimum-norm solution splits the weight evenly.
        assert!((x[0] - C64::new(1.0, 0.0)).norm() < 1e-9 && (x[1] - C64::new(1.0, 0.0)).norm() < 1e-9);
    }
}
