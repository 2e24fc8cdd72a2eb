//! Sweeps reproducing the figures at two scales.
//!
//! Scaled presets cap every point at a few thousand trials so a whole figure
//! runs in minutes on one core; full presets use the default stopping rule.

use super::config::{DictionarySource, SimConfig, StoppingRule};
use crate::codec::Scheme;
use crate::decoder::Algorithm;
use crate::error::{Error, Result};

const SEED: u64 = 20_190_601;
const PHASE_SEED: u64 = 7;
const SCALED_MAX_TRIALS: u64 = 20_000;

/// A named figure: one config per curve.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub title: &'static str,
    pub curves: Vec<(String, SimConfig)>,
}

const NAMES: [(&str, &str); 8] = [
    ("fig1", "SC vs SSC with MAD, MUB N=64, QPSK, K=1,3,5"),
    ("fig2", "MAD vs OMP, SC, MUB N=64, QPSK, K=1,3"),
    ("fig3", "MAD vs parallel MAD, SSC, MUB N=64, QPSK, K=1,3,5"),
    ("fig4", "Random vs zero phase, SSC MAD, MUB N=64, QPSK, K=4,5"),
    ("fig5", "MUB at rate about 1/2: N=8,16,32,64, parallel MAD"),
    ("fig6", "Gold N=127, BPSK, SSC parallel MAD, K=1..5"),
    ("fig7", "(16,8) and (32,18) MUB SSC schemes, parallel MAD"),
    ("fig8", "(127,63) Gold SSC scheme, K=5, parallel MAD"),
];

pub fn preset_names() -> Vec<(&'static str, &'static str)> {
    NAMES.to_vec()
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

struct Curve {
    source: DictionarySource,
    scheme: Scheme,
    k: usize,
    constellation: &'static str,
    algo: Algorithm,
    phase: bool,
}

impl Curve {
    fn mub64(scheme: Scheme, k: usize, algo: Algorithm, phase: bool) -> Self {
        Curve { source: DictionarySource::mub(6), scheme, k, constellation: "qpsk", algo, phase }
    }

    fn id(&self) -> String {
        let dict = match &self.source {
            DictionarySource::Build { kind, n, .. } => format!("{kind:?}{n}").to_lowercase(),
            DictionarySource::Path { .. } => "file".into(),
        };
        let phase = if self.phase { "-phase" } else { "" };
        format!("{dict}-{}-k{}-{}{phase}", self.scheme, self.k, self.algo)
    }

    fn config(self, ebn0: Vec<f64>, full: bool) -> (String, SimConfig) {
        let id = self.id();
        let mut cfg = SimConfig::new(self.source, self.scheme, self.k, self.constellation, self.algo, ebn0, SEED);
        cfg.random_phase_seed = self.phase.then_some(PHASE_SEED);
        if !full {
            cfg.stopping = StoppingRule::capped(SCALED_MAX_TRIALS);
        }
        (id, cfg)
    }
}

/// The curves of a figure; `full` selects the full-fidelity variant.
pub fn preset(name: &str, full: bool) -> Result<Preset> {
    let title = NAMES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Config(format!("unknown preset {name:?}")))?;
    let mub_grid = if full { grid(0.0, 8.0, 1.0) } else { grid(1.0, 7.0, 2.0) };
    use Algorithm::{Mad, Omp, ParallelMad};
    use Scheme::{Sc, Ssc};
    let curves: Vec<(Curve, Vec<f64>)> = match name {
        "fig1" => [Sc, Ssc]
            .into_iter()
            .flat_map(|s| [1, 3, 5].map(|k| Curve::mub64(s, k, Mad, k == 5)))
            .map(|c| (c, mub_grid.clone()))
            .collect(),
        "fig2" => [Mad, Omp]
            .into_iter()
            .flat_map(|a| [1, 3].map(|k| Curve::mub64(Sc, k, a, false)))
            .map(|c| (c, mub_grid.clone()))
            .collect(),
        "fig3" => [Mad, ParallelMad]
            .into_iter()
            .flat_map(|a| [1, 3, 5].map(|k| Curve::mub64(Ssc, k, a, k == 5)))
            .map(|c| (c, mub_grid.clone()))
            .collect(),
        "fig4" => [false, true]
            .into_iter()
            .flat_map(|p| [4, 5].map(|k| Curve::mub64(Ssc, k, Mad, p)))
            .map(|c| (c, mub_grid.clone()))
            .collect(),
        "fig5" => [(3, 1, false), (4, 2, true), (5, 3, true), (6, 5, true)]
            .into_iter()
            .map(|(m, k, phase)| Curve {
                source: DictionarySource::mub(m),
                scheme: Ssc,
                k,
                constellation: "qpsk",
                algo: ParallelMad,
                phase,
            })
            .map(|c| (c, if full { grid(0.0, 9.0, 1.0) } else { grid(2.0, 6.0, 2.0) }))
            .collect(),
        "fig6" => (1..=5)
            .map(|k| Curve {
                source: DictionarySource::gold(7),
                scheme: Ssc,
                k,
                constellation: "bpsk",
                algo: ParallelMad,
                phase: false,
            })
            .map(|c| (c, if full { grid(0.0, 7.0, 0.5) } else { grid(2.0, 5.0, 1.0) }))
            .collect(),
        "fig7" => [(3, 1, false), (4, 2, true)]
            .into_iter()
            .map(|(m, k, phase)| Curve {
                source: DictionarySource::mub(m),
                scheme: Ssc,
                k,
                constellation: "qpsk",
                algo: ParallelMad,
                phase,
            })
            .map(|c| (c, if full { grid(0.0, 8.0, 0.5) } else { grid(2.0, 6.0, 2.0) }))
            .collect(),
        "fig8" => vec![(
            Curve {
                source: DictionarySource::gold(7),
                scheme: Ssc,
                k: 5,
                constellation: "bpsk",
                algo: ParallelMad,
                phase: false,
            },
            if full { grid(2.0, 6.0, 0.5) } else { grid(3.0, 5.0, 1.0) },
        )],
        _ => unreachable!(),
    };
    let name = NAMES.iter().find(|(n, _)| *n == name).unwrap().0;
    Ok(Preset { name, title, curves: curves.into_iter().map(|(c, g)| c.config(g, full)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        for (name, _) in preset_names() {
            for full in [false, true] {
                let p = preset(name, full).unwrap();
                assert!(!p.curves.is_empty());
                for (_, cfg) in &p.curves {
                    cfg.validate().unwrap();
                    assert_eq!(cfg.stopping.max_trials == SCALED_MAX_TRIALS, !full);
                }
            }
        }
        assert_eq!(preset("fig3", false).unwrap().curves.len(), 6);
        assert!(preset("fig9", false).is_err());
    }

    #[test]
    fn curve_ids_are_unique() {
        for (name, _) in preset_names() {
            let p = preset(name, false).unwrap();
            let mut ids: Vec<&String> = p.curves.iter().map(|c| &c.0).collect();
            ids.sort();
            ids.dedup();
            assert_eq!(ids.len(), p.curves.len());
        }
        assert_eq!(preset("fig8", true).unwrap().curves[0].0, "gold7-ssc-k5-pmad");
    }
}
