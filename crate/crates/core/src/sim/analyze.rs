use serde::Serialize;

use super::record::BlerRecord;

/// Where a curve crosses a target BLER.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Crossing {
    At(f64),
    /// The target lies outside the measured range.
    Unbounded,
}

/// First crossing of `target` by a curve of `(ebn0_db, bler)` points in
/// grid order, interpolating `log10(bler)` linearly in dB.
pub fn crossing(points: &[(f64, f64)], target: f64) -> Crossing {
    if let Some(&(x, _)) = points.iter().find(|p| p.1 == target) {
        return Crossing::At(x);
    }
    for w in points.windows(2) {
        let ((x0, b0), (x1, b1)) = (w[0], w[1]);
        if b0 > 0.0 && b1 > 0.0 && (b0 - target) * (b1 - target) < 0.0 {
            let f = (target.log10() - b0.log10()) / (b1.log10() - b0.log10());
            return Crossing::At(x0 + f * (x1 - x0));
        }
    }
    Crossing::Unbounded
}

/// A BLER point reported in the literature for comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferencePoint {
    pub figure: &'static str,
    pub label: &'static str,
    pub ebn0_db: f64,
    pub bler: f64,
    /// `(dict_kind, N, K, scheme)` of the matching simulated curve, if any.
    pub curve: Option<(&'static str, usize, usize, &'static str)>,
}

/// Reference points for the figure presets.
pub fn reference_points() -> Vec<ReferencePoint> {
    vec![
        ReferencePoint {
            figure: "fig8",
            label: "(127,63) SSC, Gold N=127, K=5, parallel MAD",
            ebn0_db: 5.0,
            bler: 1e-4,
            curve: Some(("gold", 127, 5, "ssc")),
        },
        ReferencePoint { figure: "fig7", label: "(20,11) Golay-based code", ebn0_db: 5.5, bler: 1e-4, curve: None },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceComparison {
    pub label: &'static str,
    pub reference_db: f64,
    pub measured: Crossing,
    /// Measured minus reference dB.
    pub delta_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSummary {
    pub curve: String,
    pub points: usize,
    pub target: f64,
    pub crossing: Crossing,
    pub references: Vec<ReferenceComparison>,
}

/// Groups records into curves and reports each crossing of `target`; with
/// `references`, also compares matching curves against reference points.
pub fn analyze(records: &[BlerRecord], target: f64, references: bool) -> Vec<CurveSummary> {
    let mut curves: Vec<(String, &BlerRecord, Vec<(f64, f64)>)> = Vec::new();
    for r in records {
        let key = format!(
            "{} {} N={} L={} K={} M={} {} T={} seed={}",
            r.scheme, r.dict_kind, r.n, r.l, r.k, r.m, r.algo, r.t, r.seed
        );
        match curves.iter_mut().find(|c| c.0 == key) {
            Some(c) => c.2.push((r.ebn0_db, r.bler)),
            None => curves.push((key, r, vec![(r.ebn0_db, r.bler)])),
        }
    }
    curves
        .into_iter()
        .map(|(curve, first, mut pts)| {
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let refs = if references {
                reference_points()
                    .into_iter()
                    .filter(|p| {
                        p.curve.is_some_and(|(kind, n, k, scheme)| {
                            first.dict_kind == kind && first.n == n && first.k == k && first.scheme == scheme
                        })
                    })
                    .map(|p| {
                        let measured = crossing(&pts, p.bler);
                        let delta_db = match measured {
                            Crossing::At(x) => Some(x - p.ebn0_db),
                            Crossing::Unbounded => None,
                        };
                        ReferenceComparison { label: p.label, reference_db: p.ebn0_db, measured, delta_db }
                    })
                    .collect()
            } else {
                Vec::new()
            };
            CurveSummary { curve, points: pts.len(), target, crossing: crossing(&pts, target), references: refs }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_hit_and_midpoint() {
        let pts = [(4.0, 1e-3), (5.0, 1e-4)];
        assert_eq!(crossing(&pts, 1e-4), Crossing::At(5.0));
        match crossing(&pts, 10f64.powf(-3.5)) {
            Crossing::At(x) => assert!((x - 4.5).abs() < 1e-12),
            c => panic!("{c:?}"),
        }
        assert_eq!(crossing(&pts, 1e-6), Crossing::Unbounded);
        assert_eq!(crossing(&[(1.0, 1e-2), (2.0, 0.0)], 1e-3), Crossing::Unbounded);
    }
}
