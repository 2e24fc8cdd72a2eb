use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::UserChannel;
use crate::codec::Scheme;
use crate::decoder::Algorithm;
use crate::error::{Error, Result};

pub const CONFIG_VERSION: u32 = 1;

fn version() -> u32 {
    CONFIG_VERSION
}

fn yes() -> bool {
    true
}

/// Where the dictionary comes from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DictionarySource {
    /// A cache file written by `dictionary::save`.
    Path { path: PathBuf },
    /// Built in memory: Gold codes of degree `n` or MUB of dimension `2^n`.
    Build {
        kind: BuildKind,
        n: u32,
        #[serde(default = "yes")]
        identity_column: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuildKind {
    Gold,
    Mub,
}

impl DictionarySource {
    pub fn gold(n: u32) -> Self {
        DictionarySource::Build { kind: BuildKind::Gold, n, identity_column: true }
    }

    pub fn mub(m: u32) -> Self {
        DictionarySource::Build { kind: BuildKind::Mub, n: m, identity_column: true }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelModel {
    #[default]
    Awgn,
    Mac,
    Bc,
    Ic,
}

impl ChannelModel {
    pub fn as_str(self) -> &'static str {
        match self {
            ChannelModel::Awgn => "awgn",
            ChannelModel::Mac => "mac",
            ChannelModel::Bc => "bc",
            ChannelModel::Ic => "ic",
        }
    }
}

/// One user of a multi-user channel: `k` consecutive subblocks and a link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserConfig {
    pub k: usize,
    #[serde(flatten)]
    pub link: UserChannel,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    #[serde(default)]
    pub model: ChannelModel,
    /// Run one point with no noise at all, ignoring the grid.
    #[serde(default)]
    pub noiseless: bool,
    #[serde(default)]
    pub users: Vec<UserConfig>,
    /// Interference gains `h[i][j]` as `[re, im]`; all ones when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interference: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoppingRule {
    #[serde(default = "StoppingRule::default_min_errors")]
    pub min_errors: u64,
    #[serde(default = "StoppingRule::default_min_trials")]
    pub min_trials: u64,
    #[serde(default = "StoppingRule::default_max_trials")]
    pub max_trials: u64,
}

impl StoppingRule {
    fn default_min_errors() -> u64 {
        100
    }
    fn default_min_trials() -> u64 {
        1_000
    }
    fn default_max_trials() -> u64 {
        10_000_000
    }

    /// Exactly `n` trials.
    pub fn fixed(n: u64) -> Self {
        StoppingRule { min_errors: u64::MAX, min_trials: n, max_trials: n }
    }

    pub fn capped(max_trials: u64) -> Self {
        StoppingRule { max_trials, min_trials: max_trials.min(Self::default_min_trials()), ..Default::default() }
    }

    /// True once `trials` with `errors` satisfy the rule.
    pub fn done(&self, trials: u64, errors: u64) -> bool {
        (errors >= self.min_errors && trials >= self.min_trials) || trials >= self.max_trials
    }
}

impl Default for StoppingRule {
    fn default() -> Self {
        StoppingRule {
            min_errors: Self::default_min_errors(),
            min_trials: Self::default_min_trials(),
            max_trials: Self::default_max_trials(),
        }
    }
}

/// A BLER sweep, serialized as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(default = "version")]
    pub version: u32,
    pub dictionary: DictionarySource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_phase_seed: Option<u64>,
    pub scheme: Scheme,
    pub k: usize,
    pub constellation: String,
    pub algorithm: Algorithm,
    /// `T` for parallel MAD; defaults to `K`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallel_paths: Option<usize>,
    #[serde(default = "yes")]
    pub gram_recursion: bool,
    #[serde(default)]
    pub channel: ChannelConfig,
    #[serde(default)]
    pub ebn0_db: Vec<f64>,
    #[serde(default)]
    pub stopping: StoppingRule,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl SimConfig {
    /// A single-user AWGN sweep with default stopping.
    pub fn new(
        dictionary: DictionarySource,
        scheme: Scheme,
        k: usize,
        constellation: &str,
        algorithm: Algorithm,
        ebn0_db: Vec<f64>,
        seed: u64,
    ) -> Self {
        SimConfig {
            version: CONFIG_VERSION,
            dictionary,
            random_phase_seed: None,
            scheme,
            k,
            constellation: constellation.into(),
            algorithm,
            parallel_paths: None,
            gram_recursion: true,
            channel: ChannelConfig::default(),
            ebn0_db,
            stopping: StoppingRule::default(),
            seed,
            output: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SimConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// `T`, defaulting to `K` for parallel MAD and 1 otherwise.
    pub fn paths(&self) -> usize {
        match (self.parallel_paths, self.algorithm) {
            (Some(t), _) => t,
            (None, Algorithm::ParallelMad) => self.k,
            (None, _) => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.version != CONFIG_VERSION {
            return bad(format!("unsupported config version {}", self.version));
        }
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if !self.channel.noiseless && self.ebn0_db.is_empty() {
            return bad("ebn0_db grid is empty".into());
        }
        if self.ebn0_db.iter().any(|x| !x.is_finite()) {
            return bad("ebn0_db entries must be finite".into());
        }
        let s = &self.stopping;
        if s.min_errors == 0 || s.max_trials == 0 || s.min_trials > s.max_trials {
            return bad("stopping rule needs min_errors >= 1 and 1 <= min_trials <= max_trials".into());
        }
        let users = &self.channel.users;
        if self.channel.model != ChannelModel::Awgn {
            if self.scheme != Scheme::Ssc {
                return bad("multi-user channels need the ssc scheme".into());
            }
            if users.is_empty() || users.len() > 63 {
                return bad("multi-user channels need 1 to 63 users".into());
            }
            if users.iter().map(|u| u.k).sum::<usize>() != self.k || users.iter().any(|u| u.k == 0) {
                return bad("user subblock counts must be positive and sum to k".into());
            }
            if users.iter().any(|u| !(u.link.sigma2 > 0.0)) {
                return bad("sigma2 must be positive".into());
            }
            if let Some(h) = &self.channel.interference {
                if h.len() != users.len() || h.iter().any(|row| row.len() != users.len()) {
                    return bad("interference matrix must be P x P".into());
                }
            }
        } else if !users.is_empty() || self.channel.interference.is_some() {
            return bad("users and interference apply only to mac, bc and ic".into());
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON with the output path removed.
    pub fn digest(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        let json = serde_json::to_string(&c).expect("config serializes");
        let hash = Sha256::digest(json.as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}
