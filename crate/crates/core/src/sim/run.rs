use std::collections::HashMap;
use std::ops::Range;
use std::path::Path;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{BuildKind, ChannelModel, DictionarySource, SimConfig, StoppingRule};
use super::record::{BlerRecord, CsvSink};
use super::stats::confidence_interval;
use crate::channel::{add_awgn, assign_subblocks, superpose, NoiseSetting, UserChannel};
use crate::codec::{Constellation, SchemeSpec, SparseMessage};
use crate::decoder::{DecodeConfig, DecodeOutput, Decoder, DEFAULT_GRAM_BUDGET};
use crate::dictionary::{auto_gram, build_gold, build_mub, load, Dictionary, GramRows};
use crate::error::{Error, Result};
use crate::C64;

/// A dictionary source and its random phase seed.
type Key = (DictionarySource, Option<u64>);

/// Dictionaries and Gram caches shared between simulations.
#[derive(Default)]
pub struct Resources {
    dicts: Mutex<HashMap<Key, Arc<Dictionary>>>,
    grams: Mutex<HashMap<Key, Arc<dyn GramRows>>>,
}

impl Resources {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dictionary(&self, source: &DictionarySource, phase_seed: Option<u64>) -> Result<Arc<Dictionary>> {
        let key = (source.clone(), phase_seed);
        if let Some(d) = self.dicts.lock().unwrap().get(&key) {
            return Ok(d.clone());
        }
        let base = match source {
            DictionarySource::Path { path } => load(path)?,
            DictionarySource::Build { kind: BuildKind::Gold, n, identity_column } => build_gold(*n, *identity_column)?,
            DictionarySource::Build { kind: BuildKind::Mub, n, .. } => build_mub(*n)?,
        };
        let d = match (phase_seed, base.phase_seed()) {
            (None, _) => base,
            (Some(s), Some(t)) if s == t => base,
            (Some(_), Some(_)) => {
                return Err(Error::Config("dictionary already carries a different phase seed".into()))
            }
            (Some(s), None) => base.apply_random_phase(s)?,
        };
        let d = Arc::new(d);
        self.dicts.lock().unwrap().insert(key, d.clone());
        Ok(d)
    }

    /// The Gram source for a dictionary returned by [`Resources::dictionary`].
    pub fn gram(&self, source: &DictionarySource, phase_seed: Option<u64>) -> Result<Arc<dyn GramRows>> {
        let d = self.dictionary(source, phase_seed)?;
        Ok(self.cached_gram(source, phase_seed, &d))
    }

    fn cached_gram(
        &self,
        source: &DictionarySource,
        phase_seed: Option<u64>,
        d: &Arc<Dictionary>,
    ) -> Arc<dyn GramRows> {
        let key = (source.clone(), phase_seed);
        let mut grams = self.grams.lock().unwrap();
        grams.entry(key).or_insert_with(|| auto_gram(d, DEFAULT_GRAM_BUDGET)).clone()
    }
}

/// Result of one trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub block_error: bool,
    /// Hamming distance of the recovered bits; every bit counts as wrong
    /// when the decoded message is not a codeword.
    pub bit_errors: usize,
    /// Per-user errors for multi-user channels.
    pub user_errors: Vec<bool>,
}

/// Options that do not change results.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; the machine's parallelism when `None`.
    pub workers: Option<usize>,
    /// Keep completed points of a matching earlier run.
    pub resume: bool,
}

/// A configured simulation ready to run trials.
pub struct Simulation {
    cfg: SimConfig,
    spec: SchemeSpec,
    decoder: Decoder,
    users: Vec<UserChannel>,
    user_ranges: Vec<Range<usize>>,
    interference: Vec<Vec<C64>>,
    complex_noise: bool,
}

impl Simulation {
    pub fn new(cfg: &SimConfig) -> Result<Self> {
        Self::with_resources(cfg, &Resources::new())
    }

    pub fn with_resources(cfg: &SimConfig, res: &Resources) -> Result<Self> {
        cfg.validate()?;
        let dict = res.dictionary(&cfg.dictionary, cfg.random_phase_seed)?;
        let constellation = Constellation::from_name(&cfg.constellation)?;
        let spec = SchemeSpec::new(dict.clone(), cfg.scheme, cfg.k, constellation)?;
        let mut dcfg =
            DecodeConfig::new(cfg.algorithm, &spec).with_paths(cfg.paths()).with_gram_recursion(cfg.gram_recursion);
        dcfg.gram_budget_bytes = DEFAULT_GRAM_BUDGET;
        let gram = (cfg.gram_recursion).then(|| res.cached_gram(&cfg.dictionary, cfg.random_phase_seed, &dict));
        let decoder = Decoder::try_new(&spec, dcfg, gram)?;

        let users: Vec<UserChannel> = cfg.channel.users.iter().map(|u| u.link).collect();
        let user_ranges = if users.is_empty() {
            Vec::new()
        } else {
            assign_subblocks(cfg.k, &cfg.channel.users.iter().map(|u| u.k).collect::<Vec<_>>())?
        };
        let p = users.len();
        let interference: Vec<Vec<C64>> = match &cfg.channel.interference {
            Some(h) => h.iter().map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect()).collect(),
            None => vec![vec![C64::new(1.0, 0.0); p]; p],
        };
        let complex_gain =
            users.iter().any(|u| u.effective_gain().im != 0.0) || interference.iter().flatten().any(|g| g.im != 0.0);
        let complex_noise = !spec.is_real() || complex_gain;
        Ok(Simulation { cfg: cfg.clone(), spec, decoder, users, user_ranges, interference, complex_noise })
    }

    pub fn spec(&self) -> &SchemeSpec {
        &self.spec
    }

    pub fn decoder(&self) -> &Decoder {
        &self.decoder
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    /// `E_b = K / N_b`.
    pub fn energy_per_bit(&self) -> f64 {
        self.spec.energy_per_bit()
    }

    /// The noise settings swept, in grid order.
    pub fn points(&self) -> Vec<NoiseSetting> {
        if self.cfg.channel.noiseless {
            vec![NoiseSetting::Noiseless]
        } else {
            self.cfg.ebn0_db.iter().map(|&db| NoiseSetting::EbN0Db(db)).collect()
        }
    }

    /// CSV `scheme` labels: the scheme name for AWGN, otherwise the model
    /// followed by one label per user.
    pub fn row_labels(&self) -> Vec<String> {
        match self.cfg.channel.model {
            ChannelModel::Awgn => vec![self.cfg.scheme.as_str().into()],
            m => std::iter::once(m.as_str().to_string())
                .chain((0..self.users.len()).map(|i| format!("{}-u{i}", m.as_str())))
                .collect(),
        }
    }

    /// The random stream of one trial: the master seed with the trial
    /// index as stream number, independent of the grid point.
    pub fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(trial);
        rng
    }

    /// Information bits of a trial, the first draws of its stream.
    pub fn draw_bits<R: Rng>(&self, rng: &mut R) -> Vec<bool> {
        (0..self.spec.n_bits()).map(|_| rng.random()).collect()
    }

    pub fn run_trial(&self, noise: NoiseSetting, trial: u64) -> Result<TrialOutcome> {
        let mut rng = self.trial_rng(trial);
        let bits = self.draw_bits(&mut rng);
        let msg = self.spec.encode(&bits)?;
        let sigma = noise.sigma(self.energy_per_bit());
        let judge = |y: &[C64]| -> Result<(DecodeOutput, usize)> {
            let out = self.decoder.decode(y)?;
            let bit_errors = match self.spec.decode_bits(&out.message) {
                Ok(b) => b.iter().zip(&bits).filter(|(a, b)| a != b).count(),
                Err(_) => bits.len(),
            };
            Ok((out, bit_errors))
        };

        match self.cfg.channel.model {
            ChannelModel::Awgn => {
                let mut y = self.spec.synthesize(&msg);
                add_awgn(&mut y, sigma, self.complex_noise, &mut rng);
                let (out, bit_errors) = judge(&y)?;
                Ok(TrialOutcome { block_error: !out.message.same_as(&msg), bit_errors, user_errors: Vec::new() })
            }
            ChannelModel::Mac => {
                let parts = self.split(&msg);
                let gains: Vec<C64> = self.users.iter().map(UserChannel::effective_gain).collect();
                let mut y = self.superpose(&parts, &gains)?;
                add_awgn(&mut y, sigma, self.complex_noise, &mut rng);
                let (out, bit_errors) = judge(&y)?;
                let user_errors: Vec<bool> = parts.iter().map(|p| !contains_all(&out.message, p)).collect();
                Ok(TrialOutcome { block_error: !out.message.same_as(&msg), bit_errors, user_errors })
            }
            ChannelModel::Bc | ChannelModel::Ic => {
                let parts = self.split(&msg);
                let broadcast = self.cfg.channel.model == ChannelModel::Bc;
                let s = if broadcast {
                    Some(self.superpose(&parts, &vec![C64::new(1.0, 0.0); parts.len()])?)
                } else {
                    None
                };
                let mut user_errors = Vec::with_capacity(parts.len());
                let mut bit_errors = 0;
                for (i, user) in self.users.iter().enumerate() {
                    let mut y = match &s {
                        Some(s) => s.clone(),
                        None => self.superpose(&parts, &self.interference[i])?,
                    };
                    add_awgn(&mut y, sigma * user.sigma2.sqrt(), self.complex_noise, &mut rng);
                    let (out, be) = judge(&y)?;
                    // A broadcast user must recover the joint message; an
                    // interference receiver only its own part, since the
                    // cross gains rotate the other users' symbols.
                    user_errors.push(if broadcast {
                        !out.message.same_as(&msg)
                    } else {
                        !contains_all(&out.message, &parts[i])
                    });
                    bit_errors = bit_errors.max(be);
                }
                Ok(TrialOutcome { block_error: user_errors.iter().any(|&e| e), bit_errors, user_errors })
            }
        }
    }

    /// Per-user messages: the entries of each user's subblocks.
    fn split(&self, msg: &SparseMessage) -> Vec<SparseMessage> {
        self.user_ranges
            .iter()
            .map(|r| SparseMessage {
                support: msg.support[r.clone()].to_vec(),
                symbols: msg.symbols[r.clone()].to_vec(),
            })
            .collect()
    }

    fn superpose(&self, parts: &[SparseMessage], gains: &[C64]) -> Result<Vec<C64>> {
        let pairs: Vec<(&SparseMessage, C64)> = parts.iter().zip(gains.iter().copied()).collect();
        superpose(self.spec.dictionary(), self.spec.constellation(), &pairs)
    }

    /// Error flags of a trial packed as bit 0 = overall, bit `1 + i` = user `i`.
    fn trial_mask(&self, noise: NoiseSetting, trial: u64) -> Result<u64> {
        let o = self.run_trial(noise, trial)?;
        let mut mask = o.block_error as u64;
        for (i, &e) in o.user_errors.iter().enumerate() {
            mask |= (e as u64) << (i + 1);
        }
        Ok(mask)
    }

    /// Runs trials `0, 1, 2, ..` until the stopping rule holds and returns
    /// the trial count and per-row error counts.
    ///
    /// Trials run in parallel batches; the stopping index is then found by a
    /// sequential scan, so the result does not depend on the worker count.
    pub fn run_point(
        &self,
        noise: NoiseSetting,
        rule: &StoppingRule,
        pool: &rayon::ThreadPool,
    ) -> Result<(u64, Vec<u64>)> {
        let rows = self.row_labels().len();
        let mut errors = vec![0u64; rows];
        let mut trials = 0u64;
        let mut batch = 1024u64.max(rule.min_trials.min(1 << 16));
        loop {
            let end = (trials + batch).min(rule.max_trials);
            let masks: Vec<u64> = pool
                .install(|| (trials..end).into_par_iter().map(|t| self.trial_mask(noise, t)).collect::<Result<_>>())?;
            for mask in masks {
                trials += 1;
                for (r, e) in errors.iter_mut().enumerate() {
                    *e += mask >> r & 1;
                }
                if rule.done(trials, errors[0]) {
                    return Ok((trials, errors));
                }
            }
            // Aim the next batch at the remaining error budget.
            batch = match errors[0] {
                0 => trials.max(1024),
                e => {
                    let need = rule.min_errors.saturating_sub(e).max(1) as f64 * trials as f64 / e as f64;
                    ((need * 1.1) as u64).saturating_add(256)
                }
            }
            .clamp(256, (4 * trials.max(1024)).min(1 << 20));
        }
    }

    fn record(&self, label: &str, noise: NoiseSetting, trials: u64, errors: u64, wall_time: f64) -> BlerRecord {
        let d = self.spec.dictionary();
        let (ci_low, ci_high) = confidence_interval(errors, trials);
        BlerRecord {
            scheme: label.into(),
            dict_kind: d.kind().as_str().into(),
            n: d.n_rows(),
            l: d.n_cols(),
            k: self.cfg.k,
            m: self.spec.constellation().len(),
            algo: self.cfg.algorithm.as_str().into(),
            t: self.cfg.paths(),
            ebn0_db: match noise {
                NoiseSetting::Noiseless => f64::INFINITY,
                NoiseSetting::EbN0Db(db) => db,
            },
            trials,
            block_errors: errors,
            bler: errors as f64 / trials as f64,
            ci_low,
            ci_high,
            seed: self.cfg.seed,
            wall_time,
            digest: self.cfg.digest(),
        }
    }

    /// Runs every grid point, appending to the configured CSV after each.
    pub fn run(&self, opts: &RunOptions, mut progress: impl FnMut(&BlerRecord)) -> Result<Vec<BlerRecord>> {
        let workers = opts.workers.unwrap_or_else(default_workers).max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        let labels = self.row_labels();
        let digest = self.cfg.digest();
        let (mut sink, mut records) = match &self.cfg.output {
            Some(path) => {
                let (sink, kept) = CsvSink::open(path, &digest, opts.resume, labels.len())?;
                (Some(sink), kept)
            }
            None => (None, Vec::new()),
        };
        for rec in &mut records {
            rec.digest = digest.clone();
        }
        let done_points = records.len() / labels.len();
        for noise in self.points().into_iter().skip(done_points) {
            let start = Instant::now();
            let (trials, errors) = self.run_point(noise, &self.cfg.stopping, &pool)?;
            let secs = start.elapsed().as_secs_f64();
            let point: Vec<BlerRecord> =
                labels.iter().zip(&errors).map(|(l, &e)| self.record(l, noise, trials, e, secs)).collect();
            if let Some(sink) = &mut sink {
                sink.append(&point)?;
            }
            point.iter().for_each(&mut progress);
            records.extend(point);
        }
        Ok(records)
    }
}

fn contains_all(decoded: &SparseMessage, part: &SparseMessage) -> bool {
    part.support
        .iter()
        .zip(&part.symbols)
        .all(|(a, b)| decoded.support.iter().zip(&decoded.symbols).any(|(x, y)| x == a && y == b))
}

/// Worker count from `SPARSECODE_WORKERS`, else the available parallelism.
pub fn default_workers() -> usize {
    std::env::var("SPARSECODE_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Single-user AWGN BLER sweep.
pub fn run_bler_sweep(cfg: &SimConfig, opts: &RunOptions) -> Result<Vec<BlerRecord>> {
    if cfg.channel.model != ChannelModel::Awgn {
        return Err(Error::Config("use run_multiuser_sim for mac, bc and ic".into()));
    }
    Simulation::new(cfg)?.run(opts, |_| {})
}

/// Multi-user sweep: one overall row and one row per user at each point.
pub fn run_multiuser_sim(cfg: &SimConfig, opts: &RunOptions) -> Result<Vec<BlerRecord>> {
    if cfg.channel.model == ChannelModel::Awgn {
        return Err(Error::Config("multi-user sweeps need a mac, bc or ic channel".into()));
    }
    Simulation::new(cfg)?.run(opts, |_| {})
}

/// Loads a JSON config from disk.
pub fn load_config(path: &Path) -> Result<SimConfig> {
    SimConfig::from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::Scheme;
    use crate::decoder::Algorithm;
    use crate::sim::config::UserConfig;

    fn config() -> SimConfig {
        SimConfig::new(DictionarySource::mub(3), Scheme::Ssc, 3, "qpsk", Algorithm::Mad, vec![1.0, 3.0], 11)
    }

    #[test]
    fn row_labels_per_model() {
        assert_eq!(Simulation::new(&config()).unwrap().row_labels(), ["ssc"]);
        let mut cfg = config();
        cfg.channel.model = ChannelModel::Bc;
        cfg.channel.users = [1, 2].map(|k| UserConfig { k, link: UserChannel::default() }).to_vec();
        assert_eq!(Simulation::new(&cfg).unwrap().row_labels(), ["bc", "bc-u0", "bc-u1"]);
    }

    #[test]
    fn fixed_rule_runs_exactly_n_trials_with_errors() {
        let mut cfg = config();
        cfg.ebn0_db = vec![-2.0];
        cfg.stopping = StoppingRule::fixed(3_000);
        let recs = Simulation::new(&cfg).unwrap().run(&RunOptions { workers: Some(2), resume: false }, |_| {}).unwrap();
        assert_eq!(recs[0].trials, 3_000);
        assert!(recs[0].block_errors > 0);
    }

    #[test]
    fn noiseless_replaces_the_grid() {
        let mut cfg = config();
        assert_eq!(Simulation::new(&cfg).unwrap().points().len(), 2);
        cfg.channel.noiseless = true;
        assert_eq!(Simulation::new(&cfg).unwrap().points(), [NoiseSetting::Noiseless]);
    }

    #[test]
    fn trial_streams_are_reproducible_and_distinct() {
        let sim = Simulation::new(&config()).unwrap();
        let a = sim.draw_bits(&mut sim.trial_rng(4));
        assert_eq!(a, sim.draw_bits(&mut sim.trial_rng(4)));
        assert_ne!(a, sim.draw_bits(&mut sim.trial_rng(5)));
        // K = 1 is below the coherence bound, so a noiseless trial never errs.
        let mut cfg = config();
        cfg.k = 1;
        let o = Simulation::new(&cfg).unwrap().run_trial(NoiseSetting::Noiseless, 4).unwrap();
        assert!(!o.block_error && o.bit_errors == 0 && o.user_errors.is_empty());
    }

    #[test]
    fn contains_all_ignores_order_and_extra_entries() {
        let decoded = SparseMessage { support: vec![9, 2, 5], symbols: vec![1, 0, 3] };
        assert!(contains_all(&decoded, &SparseMessage { support: vec![5, 9], symbols: vec![3, 1] }));
        assert!(!contains_all(&decoded, &SparseMessage { support: vec![5], symbols: vec![2] }));
        assert!(!contains_all(&decoded, &SparseMessage { support: vec![7], symbols: vec![0] }));
    }

    #[test]
    fn resources_share_builds() {
        let res = Resources::new();
        let a = res.dictionary(&DictionarySource::mub(2), Some(3)).unwrap();
        let b = res.dictionary(&DictionarySource::mub(2), Some(3)).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert!(!Arc::ptr_eq(&a, &res.dictionary(&DictionarySource::mub(2), None).unwrap()));
        assert!(res.dictionary(&DictionarySource::gold(7), Some(1)).is_err());
    }
}
