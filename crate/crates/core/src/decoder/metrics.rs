use super::SymbolTable;
use crate::codec::Constellation;
use crate::dictionary::Dictionary;
use crate::C64;

/// Correlations and per-(column, symbol) metrics of one Match step.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchMetrics {
    /// `c_i = <r, a_i>`.
    pub correlations: Vec<C64>,
    /// `p_{i,m}` row-major by column; excluded columns hold `-inf`.
    pub scores: Vec<f64>,
    pub m: usize,
}

impl MatchMetrics {
    pub fn score(&self, column: usize, symbol: usize) -> f64 {
        self.scores[column * self.m + symbol]
    }

    /// Argmax with ties to the lowest column, then the lowest symbol.
    pub fn argmax(&self) -> Option<(usize, usize)> {
        let mut best = (f64::NEG_INFINITY, None);
        for (k, &p) in self.scores.iter().enumerate() {
            if p > best.0 {
                best = (p, Some((k / self.m, k % self.m)));
            }
        }
        best.1
    }
}

/// `c_i = <r, a_i>` and `p_{i,m} = Re{c_i b_m*} - |b_m|^2 / 2`.
pub fn match_metrics(
    residual: &[C64],
    d: &Dictionary,
    constellation: &Constellation,
    excluded: &[usize],
) -> MatchMetrics {
    let mut correlations = vec![C64::new(0.0, 0.0); d.n_cols()];
    d.correlate(residual, 0..d.n_cols(), &mut correlations);
    let table = SymbolTable::new(constellation.symbols());
    let m = constellation.len();
    let mut scores: Vec<f64> =
        correlations.iter().flat_map(|&c| (0..m).map(move |s| (c, s))).map(|(c, s)| table.metric(c, s)).collect();
    for &i in excluded {
        scores[i * m..(i + 1) * m].fill(f64::NEG_INFINITY);
    }
    MatchMetrics { correlations, scores, m }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::build_mub;

    #[test]
    fn column_observation() {
        let d = build_mub(2).unwrap();
        let bpsk = Constellation::bpsk();
        let mm = match_metrics(&d.column(3), &d, &bpsk, &[]);
        assert!((mm.score(3, 0) - 0.5).abs() < 1e-12);
        assert!((mm.score(3, 1) + 1.5).abs() < 1e-12);
        assert_eq!(mm.argmax(), Some((3, 0)));
        let mm = match_metrics(&d.column(3), &d, &bpsk, &[3]);
        assert_eq!(mm.score(3, 0), f64::NEG_INFINITY);
        assert_ne!(mm.argmax().unwrap().0, 3);
    }

    #[test]
    fn zero_residual() {
        let d = build_mub(2).unwrap();
        let mm = match_metrics(&[C64::new(0.0, 0.0); 4], &d, &Constellation::qpsk(), &[]);
        assert!(mm.scores.iter().all(|&p| (p + 0.5).abs() < 1e-12));
        assert_eq!(mm.argmax(), Some((0, 0)));
    }

    #[test]
    fn matches_dense_evaluation() {
        let d = build_mub(2).unwrap();
        let q = Constellation::qpsk();
        let r: Vec<C64> = d.column(6).iter().enumerate().map(|(n, a)| a + C64::new(0.1 * n as f64, -0.05)).collect();
        let mm = match_metrics(&r, &d, &q, &[]);
        // Dense A^H r.
        for i in 0..d.n_cols() {
            let c: C64 = (0..4).map(|n| r[n] * d.entry(n, i).conj()).sum();
            for (m, b) in q.symbols().iter().enumerate() {
                let p = (c * b.conj()).re - b.norm_sqr() / 2.0;
                assert!((mm.score(i, m) - p).abs() < 1e-12);
            }
        }
    }
}
