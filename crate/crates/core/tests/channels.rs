use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sparsecode::channel::{add_awgn, assign_subblocks, mac_combine, NoiseSetting, UserChannel};
use sparsecode::codec::{Scheme, SparseMessage};
use sparsecode::decoder::Algorithm;
use sparsecode::sim::{
    run_bler_sweep, run_multiuser_sim, BlerRecord, ChannelModel, DictionarySource, RunOptions, SimConfig, Simulation,
    StoppingRule, UserConfig,
};
use sparsecode::C64;

fn noise_power(sigma: f64, complex: bool, n: usize, seed: u64) -> f64 {
    let mut y = vec![C64::new(0.0, 0.0); n];
    add_awgn(&mut y, sigma, complex, &mut ChaCha8Rng::seed_from_u64(seed));
    let dims = if complex { 2 * n } else { n };
    y.iter().map(C64::norm_sqr).sum::<f64>() / dims as f64
}

#[test]
fn per_dimension_variance_is_half_n0() {
    let sigma = NoiseSetting::EbN0Db(0.0).sigma(1.0);
    assert!((noise_power(sigma, false, 1_000_000, 1) / 0.5 - 1.0).abs() < 0.01);
    assert!((noise_power(sigma, true, 500_000, 2) / 0.5 - 1.0).abs() < 0.01);
}

#[test]
fn calibration_for_mub64_single_column() {
    let cfg = SimConfig::new(DictionarySource::mub(6), Scheme::Ssc, 1, "qpsk", Algorithm::Mad, vec![3.0], 1);
    let sim = Simulation::new(&cfg).unwrap();
    assert_eq!(sim.spec().n_bits(), 14);
    assert!((sim.energy_per_bit() - 1.0 / 14.0).abs() < 1e-15);
    let noise = NoiseSetting::EbN0Db(3.0);
    let sigma = noise.sigma(sim.energy_per_bit());
    let mut total = 0.0;
    let codewords = 10_000;
    for t in 0..codewords {
        let mut rng = sim.trial_rng(t);
        let s = sim.spec().synthesize(&sim.spec().encode(&sim.draw_bits(&mut rng)).unwrap());
        let mut y = s.clone();
        add_awgn(&mut y, sigma, true, &mut rng);
        total += y.iter().zip(&s).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>();
    }
    let measured = total / (codewords as f64 * 128.0);
    let expected = noise.n0(sim.energy_per_bit()) / 2.0;
    assert!((measured / expected - 1.0).abs() < 0.01, "{measured} vs {expected}");
}

fn users(k: &[usize], sigma2: &[f64]) -> Vec<UserConfig> {
    k.iter()
        .zip(sigma2)
        .map(|(&k, &s)| UserConfig { k, link: UserChannel { sigma2: s, ..UserChannel::default() } })
        .collect()
}

fn mub64_k5(seed: u64) -> SimConfig {
    let mut cfg =
        SimConfig::new(DictionarySource::mub(6), Scheme::Ssc, 5, "qpsk", Algorithm::Mad, vec![3.0, 5.0], seed);
    cfg.stopping = StoppingRule { min_errors: 30, min_trials: 500, max_trials: 5_000 };
    cfg
}

fn rows<'a>(recs: &'a [BlerRecord], label: &str) -> Vec<&'a BlerRecord> {
    recs.iter().filter(|r| r.scheme == label).collect()
}

#[test]
fn unit_gain_mac_observations_match_single_user() {
    let single = Simulation::new(&mub64_k5(3)).unwrap();
    let spec = single.spec();
    let parts = assign_subblocks(5, &[1; 5]).unwrap();
    let unit = vec![UserChannel::default(); 5];
    let sigma = NoiseSetting::EbN0Db(4.0).sigma(single.energy_per_bit());
    for t in 0..200 {
        let mut rng = single.trial_rng(t);
        let msg = spec.encode(&single.draw_bits(&mut rng)).unwrap();
        let mut y = spec.synthesize(&msg);
        add_awgn(&mut y, sigma, true, &mut rng);

        let mut rng = single.trial_rng(t);
        let msg2 = spec.encode(&single.draw_bits(&mut rng)).unwrap();
        let split: Vec<SparseMessage> = parts
            .iter()
            .map(|r| SparseMessage {
                support: msg2.support[r.clone()].to_vec(),
                symbols: msg2.symbols[r.clone()].to_vec(),
            })
            .collect();
        let y_mac = mac_combine(spec.dictionary(), spec.constellation(), &split, &unit, sigma, true, &mut rng).unwrap();
        assert_eq!(y, y_mac, "trial {t}");
    }
}

#[test]
fn unit_gain_mac_bler_matches_single_user() {
    let base = mub64_k5(4);
    let single = run_bler_sweep(&base, &RunOptions::default()).unwrap();
    for per_user in [vec![1; 5], vec![2, 3], vec![5]] {
        let mut cfg = base.clone();
        cfg.channel.model = ChannelModel::Mac;
        cfg.channel.users = users(&per_user, &vec![1.0; per_user.len()]);
        let recs = run_multiuser_sim(&cfg, &RunOptions::default()).unwrap();
        let overall = rows(&recs, "mac");
        assert_eq!(overall.len(), single.len());
        for (a, b) in overall.iter().zip(&single) {
            assert_eq!((a.trials, a.block_errors, a.bler), (b.trials, b.block_errors, b.bler));
        }
        for i in 0..per_user.len() {
            for (u, o) in rows(&recs, &format!("mac-u{i}")).iter().zip(&overall) {
                assert!(u.block_errors <= o.block_errors);
            }
        }
    }
}

#[test]
fn broadcast_worst_user_has_largest_noise() {
    let mut cfg = SimConfig::new(DictionarySource::mub(4), Scheme::Ssc, 2, "qpsk", Algorithm::Mad, vec![4.0], 5);
    cfg.stopping = StoppingRule::fixed(20_000);
    cfg.channel.model = ChannelModel::Bc;
    cfg.channel.users = users(&[1, 1], &[1.0, 2.0]);
    let recs = run_multiuser_sim(&cfg, &RunOptions::default()).unwrap();
    let (u0, u1) = (rows(&recs, "bc-u0")[0], rows(&recs, "bc-u1")[0]);
    assert!(u1.block_errors > u0.block_errors, "{} vs {}", u1.bler, u0.bler);
    let overall = rows(&recs, "bc")[0];
    assert!(overall.block_errors >= u1.block_errors);

    // With unit noise, user 0 draws exactly the single-user noise.
    let mut single = cfg.clone();
    single.channel = Default::default();
    let s = run_bler_sweep(&single, &RunOptions::default()).unwrap();
    assert_eq!(s[0].block_errors, u0.block_errors);
}

#[test]
fn interference_phase_does_not_change_own_bler() {
    let mut cfg = SimConfig::new(DictionarySource::mub(4), Scheme::Ssc, 2, "qpsk", Algorithm::Mad, vec![3.0], 6);
    cfg.stopping = StoppingRule::fixed(20_000);
    cfg.channel.model = ChannelModel::Ic;
    cfg.channel.users = users(&[1, 1], &[1.0, 1.0]);
    let mut recs = Vec::new();
    for phi in [0.0, FRAC_PI_2] {
        let cross = [phi.cos(), phi.sin()];
        cfg.channel.interference = Some(vec![vec![[1.0, 0.0], cross], vec![cross, [1.0, 0.0]]]);
        let out = run_multiuser_sim(&cfg, &RunOptions::default()).unwrap();
        recs.push(rows(&out, "ic-u0")[0].clone());
    }
    let (a, b) = (&recs[0], &recs[1]);
    assert!(a.block_errors > 0);
    assert!(a.ci_low <= b.ci_high && b.ci_low <= a.ci_high, "{} vs {}", a.bler, b.bler);
}

#[test]
fn single_user_mac_is_the_awgn_sweep() {
    let base = mub64_k5(7);
    let mut cfg = base.clone();
    cfg.channel.model = ChannelModel::Mac;
    cfg.channel.users = users(&[5], &[1.0]);
    let recs = run_multiuser_sim(&cfg, &RunOptions::default()).unwrap();
    let single = run_bler_sweep(&base, &RunOptions::default()).unwrap();
    for (a, b) in rows(&recs, "mac-u0").iter().zip(&single) {
        assert_eq!((a.trials, a.block_errors), (b.trials, b.block_errors));
    }
}
