//! Error-control coding with sparse signals.
//!
//! Information bits select a sparse vector `x` of length `L`: which `K`
//! entries are nonzero, and which constellation symbols they carry. The
//! transmitted codeword is `s = A x`, a sparse linear combination of the
//! columns of an `N x L` dictionary `A` whose columns have low mutual
//! coherence. The receiver recovers `x` from `y = s + v` with greedy
//! correlation decoders.
//!
//! The crate is organized by pipeline stage:
//!
//! * [`dictionary`]: Gold-code and mutually-unbiased-basis dictionaries,
//!   random column phases, coherence, Gram rows, subblock partitioning and
//!   the on-disk cache format.
//! * [`codec`]: constellations, bit capacity, sparse coding (SC) and
//!   subblock sparse coding (SSC) maps between bits and sparse messages,
//!   and codeword synthesis.
//! * [`decoder`]: match-and-decode (MAD), parallel MAD, orthogonal matching
//!   pursuit and an exhaustive maximum-likelihood oracle.
//! * [`channel`]: AWGN with exact `Eb/N0` accounting and the multiple
//!   access, broadcast and interference channel models.
//! * [`sim`]: seeded, worker-count independent Monte Carlo BLER sweeps,
//!   CSV persistence, figure presets and curve analysis.
//!
//! ```
//! use std::sync::Arc;
//! use sparsecode::codec::{Constellation, Scheme, SchemeSpec};
//! use sparsecode::decoder::{Algorithm, DecodeConfig, Decoder};
//! use sparsecode::dictionary::build_mub;
//!
//! let dict = Arc::new(build_mub(3)?); // N = 8, L = 64
//! let spec = SchemeSpec::new(dict.clone(), Scheme::Ssc, 2, Constellation::qpsk())?;
//! assert_eq!(spec.n_bits(), 4 + 5 + 5);
//!
//! let bits: Vec<bool> = (0..spec.n_bits()).map(|i| i % 3 == 0).collect();
//! let msg = spec.encode(&bits)?;
//! let y = spec.synthesize(&msg);
//!
//! let decoder = Decoder::for_scheme(&spec, DecodeConfig::new(Algorithm::Mad, &spec));
//! let out = decoder.decode(&y)?;
//! assert_eq!(spec.decode_bits(&out.message)?, bits);
//! # Ok::<(), sparsecode::Error>(())
//! ```

pub mod channel;
pub mod codec;
pub mod decoder;
pub mod dictionary;
mod error;
pub mod sim;

pub use error::{Error, Result};

/// Complex sample type used throughout the crate.
pub type C64 = num_complex::Complex64;
