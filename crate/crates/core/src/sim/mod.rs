//! Monte Carlo BLER estimation.
//!
//! Trial `t` of a sweep draws everything (bits, then noise) from its own
//! ChaCha8 stream: the master seed with stream number `t`. The same streams
//! are reused at every grid point, so outcomes depend only on the config and
//! never on the worker count or scheduling.

mod analyze;
mod config;
mod presets;
mod record;
mod run;
mod stats;

pub use analyze::{analyze, crossing, reference_points, Crossing, CurveSummary, ReferencePoint};
pub use config::{
    BuildKind, ChannelConfig, ChannelModel, DictionarySource, SimConfig, StoppingRule, UserConfig, CONFIG_VERSION,
};
pub use presets::{preset, preset_names, Preset};
pub use record::{digest_path, read_records, write_records, BlerRecord, CSV_HEADER};
pub use run::{
    default_workers, load_config, run_bler_sweep, run_multiuser_sim, Resources, RunOptions, Simulation, TrialOutcome,
};
pub use stats::{confidence_interval, Z95};
