use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsecode::channel::{awgn, NoiseSetting};
use sparsecode::codec::{Constellation, Scheme, SchemeSpec, SparseMessage};
use sparsecode::decoder::{ml_oracle, Algorithm, DecodeConfig, Decoder, DEFAULT_GRAM_BUDGET};
use sparsecode::dictionary::{auto_gram, build_gold, build_mub, Dictionary, GramRows};
use sparsecode::C64;

/// A decoder over all columns with the unit constellation.
fn unit_decoder(d: &Arc<Dictionary>, k: usize, algo: Algorithm) -> Decoder {
    let spec = SchemeSpec::new(d.clone(), Scheme::Sc, k, Constellation::unit()).unwrap();
    Decoder::for_scheme(&spec, DecodeConfig::new(algo, &spec))
}

fn unit_decoder_with(d: &Arc<Dictionary>, k: usize, algo: Algorithm, gram: &Arc<dyn GramRows>) -> Decoder {
    let spec = SchemeSpec::new(d.clone(), Scheme::Sc, k, Constellation::unit()).unwrap();
    Decoder::try_new(&spec, DecodeConfig::new(algo, &spec), Some(gram.clone())).unwrap()
}

fn random_support(rng: &mut ChaCha8Rng, l: usize, k: usize) -> SparseMessage {
    SparseMessage { support: sample(rng, l, k).into_vec(), symbols: vec![0; k] }
}

fn check_noiseless_recovery(d: Arc<Dictionary>, k_max: usize, trials: usize, algos: &[Algorithm]) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let unit = Constellation::unit();
    let gram = auto_gram(&d, DEFAULT_GRAM_BUDGET);
    for k in 1..=k_max {
        let decoders: Vec<Decoder> = algos.iter().map(|&a| unit_decoder_with(&d, k, a, &gram)).collect();
        for _ in 0..trials {
            let msg = random_support(&mut rng, d.n_cols(), k);
            let y = sparsecode::codec::synthesize(&d, &unit, &msg);
            for dec in &decoders {
                let out = dec.decode(&y).unwrap();
                assert!(
                    out.message.same_as(&msg),
                    "{} K={k}: sent {:?}, got {:?}",
                    dec.config().algorithm,
                    msg.sorted().support,
                    out.message.sorted().support
                );
            }
        }
    }
}

#[test]
fn mub64_noiseless_recovery_below_coherence_bound() {
    let d = Arc::new(build_mub(6).unwrap());
    // 1/mu = 8, so K < 4.5.
    assert!(4.0 < 0.5 * (1.0 / d.mutual_coherence() + 1.0));
    check_noiseless_recovery(d, 4, 10_000, &[Algorithm::Mad, Algorithm::Omp]);
}

#[test]
fn gold127_noiseless_recovery_k4() {
    let d = Arc::new(build_gold(7, true).unwrap());
    check_noiseless_recovery(d, 4, 10_000, &[Algorithm::Mad]);
}

#[test]
fn gold7_exhaustive_single_column() {
    let d = Arc::new(build_gold(3, true).unwrap());
    assert!(1.0 < 0.5 * (1.0 / d.mutual_coherence() + 1.0));
    let unit = Constellation::unit();
    for algo in [Algorithm::Mad, Algorithm::ParallelMad, Algorithm::Omp, Algorithm::Ml] {
        let dec = unit_decoder(&d, 1, algo);
        for col in 0..d.n_cols() {
            let msg = SparseMessage { support: vec![col], symbols: vec![0] };
            let y = sparsecode::codec::synthesize(&d, &unit, &msg);
            assert_eq!(dec.decode(&y).unwrap().message.support, vec![col], "{algo}");
        }
    }
}

#[test]
fn mad_never_beats_ml_and_mostly_agrees() {
    let d = Arc::new(build_mub(2).unwrap());
    let spec = SchemeSpec::new(d, Scheme::Sc, 1, Constellation::qpsk()).unwrap();
    assert_eq!(spec.n_bits(), 6);
    let mad = Decoder::for_scheme(&spec, DecodeConfig::new(Algorithm::Mad, &spec));
    let sigma = NoiseSetting::EbN0Db(10.0).sigma(spec.energy_per_bit());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let trials = 10_000;
    let mut agree = 0;
    for _ in 0..trials {
        let bits: Vec<bool> = (0..6).map(|_| rng.random()).collect();
        let y = awgn(&spec.synthesize(&spec.encode(&bits).unwrap()), sigma, true, &mut rng);
        let m = mad.decode(&y).unwrap();
        let o = ml_oracle(&y, &spec).unwrap();
        assert!(o.distance <= m.distance + 1e-12);
        if m.message.same_as(&o.message) {
            agree += 1;
        } else {
            assert!(o.distance < m.distance);
        }
    }
    assert!(agree as f64 >= 0.95 * trials as f64, "agreement {agree}/{trials}");
}

#[test]
fn ml_matches_brute_force_enumeration() {
    let d = Arc::new(build_mub(2).unwrap());
    let q = Constellation::qpsk();
    let spec = SchemeSpec::new(d.clone(), Scheme::Sc, 1, q.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let y: Vec<C64> = (0..4).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let mut best = (f64::INFINITY, 0, 0);
        for col in 0..16 {
            for m in 0..4 {
                let dist: f64 = (0..4).map(|r| (y[r] - q.symbol(m) * d.entry(r, col)).norm_sqr()).sum::<f64>().sqrt();
                if dist < best.0 {
                    best = (dist, col, m);
                }
            }
        }
        let o = ml_oracle(&y, &spec).unwrap();
        assert_eq!((o.message.support[0], o.message.symbols[0]), (best.1, best.2));
        assert!((o.distance - best.0).abs() < 1e-12);
    }
}

fn noisy_inputs(spec: &SchemeSpec, db: f64, n: usize, seed: u64) -> Vec<Vec<C64>> {
    let sigma = NoiseSetting::EbN0Db(db).sigma(spec.energy_per_bit());
    let complex = !spec.is_real();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let bits: Vec<bool> = (0..spec.n_bits()).map(|_| rng.random()).collect();
            awgn(&spec.synthesize(&spec.encode(&bits).unwrap()), sigma, complex, &mut rng)
        })
        .collect()
}

#[test]
fn gram_recursion_does_not_change_decisions() {
    let cases = [
        (Arc::new(build_mub(6).unwrap()), Scheme::Ssc, 5, Constellation::qpsk()),
        (Arc::new(build_mub(6).unwrap().apply_random_phase(4).unwrap()), Scheme::Sc, 3, Constellation::qpsk()),
        (Arc::new(build_gold(5, true).unwrap()), Scheme::Ssc, 3, Constellation::bpsk()),
    ];
    for (d, scheme, k, c) in cases {
        let spec = SchemeSpec::new(d, scheme, k, c).unwrap();
        for algo in [Algorithm::Mad, Algorithm::ParallelMad] {
            let on = Decoder::for_scheme(&spec, DecodeConfig::new(algo, &spec));
            let off = Decoder::for_scheme(&spec, DecodeConfig::new(algo, &spec).with_gram_recursion(false));
            assert!(on.gram().is_some() && off.gram().is_none());
            for y in noisy_inputs(&spec, 3.0, 1_000, 5) {
                let (a, b) = (on.decode(&y).unwrap(), off.decode(&y).unwrap());
                assert_eq!(a.message, b.message);
                for (x, z) in a.trace.iter().zip(&b.trace) {
                    assert!((x.score - z.score).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn parallel_mad_dominates_mad_in_distance() {
    let d = Arc::new(build_mub(6).unwrap().apply_random_phase(7).unwrap());
    let spec = SchemeSpec::new(d, Scheme::Ssc, 5, Constellation::qpsk()).unwrap();
    let mad = Decoder::for_scheme(&spec, DecodeConfig::new(Algorithm::Mad, &spec));
    let pmad = Decoder::for_scheme(&spec, DecodeConfig::new(Algorithm::ParallelMad, &spec));
    let single = Decoder::for_scheme(&spec, DecodeConfig::new(Algorithm::ParallelMad, &spec).with_paths(1));
    let mut strictly_better = 0;
    for y in noisy_inputs(&spec, 2.0, 2_000, 6) {
        let (m, p, s) = (mad.decode(&y).unwrap(), pmad.decode(&y).unwrap(), single.decode(&y).unwrap());
        assert!(p.distance <= m.distance);
        assert_eq!(s.message, m.message);
        strictly_better += (p.distance < m.distance) as usize;
    }
    assert!(strictly_better > 0);
}

#[test]
fn decoding_is_deterministic() {
    let spec = SchemeSpec::new(Arc::new(build_mub(4).unwrap()), Scheme::Sc, 2, Constellation::qpsk()).unwrap();
    for algo in [Algorithm::Mad, Algorithm::ParallelMad, Algorithm::Omp] {
        let dec = Decoder::for_scheme(&spec, DecodeConfig::new(algo, &spec));
        for y in noisy_inputs(&spec, 1.0, 100, 8) {
            assert_eq!(dec.decode(&y).unwrap(), dec.decode(&y).unwrap());
        }
    }
}
