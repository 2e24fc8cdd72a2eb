use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use sparsecode::codec::{bits_from_hex, bits_to_hex, Constellation, Scheme, SchemeSpec};
use sparsecode::decoder::{Algorithm, DecodeConfig, Decoder, Iteration};
use sparsecode::dictionary::{self, build_gold, build_mub, partition_bits, partition_subblocks, DictionaryKind};
use sparsecode::sim::{
    analyze, load_config, reference_points, preset, preset_names, write_records, BlerRecord, Crossing, RunOptions,
    Simulation,
};

/// `println!` that treats a closed stdout as the end of output.
macro_rules! outln {
    ($($arg:tt)*) => {
        match writeln!(io::stdout().lock(), $($arg)*) {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => return Ok(()),
            r => r?,
        }
    };
}

#[derive(Parser)]
#[command(
    name = "sparsecode",
    version,
    about = "Sparse-signal error-control coding: dictionaries, codec, decoders and BLER sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or inspect dictionary cache files.
    #[command(subcommand)]
    Dict(DictCommand),
    /// Encode a hex bit string into a codeword (JSON array of [re, im]).
    Encode(EncodeArgs),
    /// Decode an observation (JSON array) back to bits.
    Decode(DecodeArgs),
    /// Run a BLER sweep from a JSON config or a named preset.
    Simulate(SimulateArgs),
    /// Report where each curve of a results CSV crosses a target BLER.
    Analyze(AnalyzeArgs),
    /// List presets, show their configs, or export reference points.
    #[command(subcommand)]
    Preset(PresetCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Gold,
    Mub,
}

#[derive(Subcommand)]
enum DictCommand {
    Build {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Gold: LFSR degree. MUB: log2 of the dimension.
        #[arg(long)]
        n: u32,
        /// Multiply every column by a seeded random phase (MUB only).
        #[arg(long)]
        random_phase_seed: Option<u64>,
        /// Gold: leave out the appended e_1 column.
        #[arg(long)]
        no_identity: bool,
        #[arg(long)]
        out: PathBuf,
    },
    Inspect {
        path: PathBuf,
        /// Also print the subblock plan for this sparsity.
        #[arg(short = 'K')]
        k: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct SchemeArgs {
    #[arg(long)]
    dict: PathBuf,
    #[arg(long, default_value = "ssc")]
    scheme: Scheme,
    #[arg(short = 'K')]
    k: usize,
    /// Defaults to bpsk for real dictionaries and qpsk otherwise.
    #[arg(long)]
    constellation: Option<String>,
}

impl SchemeArgs {
    fn spec(&self) -> Result<SchemeSpec> {
        let d = Arc::new(dictionary::load(&self.dict).with_context(|| format!("loading {}", self.dict.display()))?);
        let name = self.constellation.clone().unwrap_or_else(|| if d.is_real() { "bpsk" } else { "qpsk" }.into());
        Ok(SchemeSpec::new(d, self.scheme, self.k, Constellation::from_name(&name)?)?)
    }
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Most significant bit first, exactly ceil(bits / 4) digits.
    #[arg(long)]
    bits: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, default_value = "mad")]
    algo: Algorithm,
    /// Parallel MAD paths; defaults to K.
    #[arg(short = 'T')]
    t: Option<usize>,
    /// JSON array of [re, im] pairs or of real numbers; `-` reads stdin.
    #[arg(long)]
    obs: PathBuf,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct SimulateArgs {
    #[command(subcommand)]
    preset: Option<SimulatePreset>,
    #[arg(long, required = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct RunArgs {
    /// Defaults to SPARSECODE_WORKERS, else all cores.
    #[arg(long, env = "SPARSECODE_WORKERS")]
    workers: Option<usize>,
    /// Continue a CSV written by an earlier run of the same config.
    #[arg(long)]
    resume: bool,
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum SimulatePreset {
    /// Run every curve of a figure preset, one CSV per curve.
    Preset {
        name: String,
        /// Full-fidelity stopping rule and grid instead of the scaled one.
        #[arg(long)]
        full: bool,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(required = true)]
    csv: Vec<PathBuf>,
    #[arg(long, default_value_t = 1e-4)]
    target: f64,
    /// Compare against the stored reference points.
    #[arg(long)]
    references: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum PresetCommand {
    List {
        #[arg(long)]
        json: bool,
    },
    /// Print the JSON configs of a preset.
    Show {
        name: String,
        #[arg(long)]
        full: bool,
    },
    /// Export reference BLER points as JSON.
    Refs {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Dict(DictCommand::Build { kind, n, random_phase_seed, no_identity, out }) => {
            let mut d = match kind {
                Kind::Gold => build_gold(n, !no_identity)?,
                Kind::Mub => build_mub(n)?,
            };
            if let Some(seed) = random_phase_seed {
                d = d.apply_random_phase(seed)?;
            }
            dictionary::save(&d, &out)?;
            eprintln!("wrote {} ({} x {})", out.display(), d.n_rows(), d.n_cols());
            Ok(())
        }
        Command::Dict(DictCommand::Inspect { path, k, json }) => inspect(&path, k, json),
        Command::Encode(args) => encode(args),
        Command::Decode(args) => decode(args),
        Command::Simulate(args) => match args.preset {
            Some(SimulatePreset::Preset { name, full, out, run }) => simulate_preset(&name, full, &out, &run),
            None => simulate(args.config.as_deref().expect("required by clap"), &args.run),
        },
        Command::Analyze(args) => analyze_csv(args),
        Command::Preset(PresetCommand::List { json }) => {
            let names = preset_names();
            if json {
                let list: Vec<_> = names.iter().map(|(n, t)| serde_json::json!({ "name": n, "title": t })).collect();
                outln!("{}", serde_json::to_string_pretty(&list)?);
            } else {
                for (n, t) in names {
                    outln!("{n}  {t}");
                }
            }
            Ok(())
        }
        Command::Preset(PresetCommand::Show { name, full }) => {
            let p = preset(&name, full)?;
            let curves: Vec<_> =
                p.curves.iter().map(|(id, cfg)| serde_json::json!({ "id": id, "config": cfg })).collect();
            outln!("{}", serde_json::to_string_pretty(&curves)?);
            Ok(())
        }
        Command::Preset(PresetCommand::Refs { out }) => {
            let text = serde_json::to_string_pretty(&reference_points())? + "\n";
            match out {
                Some(path) => fs::write(path, text)?,
                None => io::stdout().write_all(text.as_bytes())?,
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Inspection {
    kind: DictionaryKind,
    n: usize,
    l: usize,
    mu: f64,
    alphabet: &'static str,
    phase_seed: Option<u64>,
    identity_column: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    plan: Option<Plan>,
}

#[derive(Serialize)]
struct Plan {
    k: usize,
    subblocks: Vec<usize>,
    index_bits: usize,
}

fn inspect(path: &Path, k: Option<usize>, json: bool) -> Result<()> {
    let d = dictionary::load(path).with_context(|| format!("loading {}", path.display()))?;
    let alphabet = match d.kind() {
        DictionaryKind::Gold => "{+1, -1} / sqrt(N)",
        DictionaryKind::Mub => "{+1, -1, +i, -i} / sqrt(N)",
        DictionaryKind::MubRandomPhase => "unit modulus / sqrt(N)",
        DictionaryKind::Custom => "arbitrary",
    };
    let plan = k
        .map(|k| -> Result<Plan> {
            let subblocks = partition_subblocks(d.n_cols(), k)?;
            Ok(Plan { k, index_bits: partition_bits(&subblocks) as usize, subblocks })
        })
        .transpose()?;
    let info = Inspection {
        kind: d.kind(),
        n: d.n_rows(),
        l: d.n_cols(),
        mu: d.mutual_coherence(),
        alphabet,
        phase_seed: d.phase_seed(),
        identity_column: d.has_identity_column(),
        plan,
    };
    if json {
        outln!("{}", serde_json::to_string_pretty(&info)?);
        return Ok(());
    }
    outln!("kind={} N={} L={} mu={}", info.kind, info.n, info.l, info.mu);
    outln!("alphabet {}", info.alphabet);
    if let Some(seed) = info.phase_seed {
        outln!("random phase seed {seed}");
    }
    if let Some(p) = &info.plan {
        outln!("K={} subblocks {:?} ({} index bits)", p.k, p.subblocks, p.index_bits);
    }
    Ok(())
}

fn encode(args: EncodeArgs) -> Result<()> {
    let spec = args.scheme.spec()?;
    let bits = bits_from_hex(&args.bits, spec.n_bits())?;
    let msg = spec.encode(&bits)?;
    let y: Vec<[f64; 2]> = spec.synthesize(&msg).iter().map(|z| [z.re, z.im]).collect();
    let text = serde_json::to_string(&y)? + "\n";
    match args.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    eprintln!("{} bits -> support {:?} symbols {:?}", spec.n_bits(), msg.support, msg.symbols);
    Ok(())
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum Sample {
    Complex([f64; 2]),
    Real(f64),
}

fn read_observation(path: &Path) -> Result<Vec<Complex64>> {
    let text = if path == Path::new("-") {
        io::read_to_string(io::stdin())?
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let samples: Vec<Sample> = serde_json::from_str(&text).context("observation must be a JSON array")?;
    Ok(samples
        .into_iter()
        .map(|s| match s {
            Sample::Complex([re, im]) => Complex64::new(re, im),
            Sample::Real(re) => Complex64::new(re, 0.0),
        })
        .collect())
}

#[derive(Serialize)]
struct Decoded {
    bits: String,
    n_bits: usize,
    support: Vec<usize>,
    symbols: Vec<usize>,
    distance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<usize>,
    degenerate: bool,
    iterations: Vec<Iteration>,
}

fn decode(args: DecodeArgs) -> Result<()> {
    let spec = args.scheme.spec()?;
    let y = read_observation(&args.obs)?;
    if y.len() != spec.dictionary().n_rows() {
        bail!("observation has {} samples, dictionary has N = {}", y.len(), spec.dictionary().n_rows());
    }
    let mut cfg = DecodeConfig::new(args.algo, &spec);
    if let Some(t) = args.t {
        cfg = cfg.with_paths(t);
    }
    let out = Decoder::try_new(&spec, cfg, None)?.decode(&y)?;
    let bits = spec.decode_bits(&out.message).context("decoded support is not a codeword of this scheme")?;
    let result = Decoded {
        bits: bits_to_hex(&bits),
        n_bits: bits.len(),
        support: out.message.support,
        symbols: out.message.symbols,
        distance: out.distance,
        path: out.path,
        degenerate: out.degenerate,
        iterations: out.trace,
    };
    outln!("{}", serde_json::to_string_pretty(&result)?);
    Ok(())
}

fn run_options(run: &RunArgs) -> RunOptions {
    RunOptions { workers: run.workers, resume: run.resume }
}

fn report(quiet: bool) -> impl FnMut(&BlerRecord) {
    move |r| {
        if !quiet {
            eprintln!(
                "{} K={} {} {:>5} dB  {:>9} trials  {:>6} errors  BLER {:.3e}  ({:.1}s)",
                r.scheme, r.k, r.algo, r.ebn0_db, r.trials, r.block_errors, r.bler, r.wall_time
            );
        }
    }
}

fn simulate(config: &Path, run: &RunArgs) -> Result<()> {
    let cfg = load_config(config).with_context(|| format!("loading {}", config.display()))?;
    let records = Simulation::new(&cfg)?.run(&run_options(run), report(run.quiet))?;
    match &cfg.output {
        Some(path) => eprintln!("wrote {}", path.display()),
        None => write_records(io::stdout().lock(), &records)?,
    }
    Ok(())
}

fn simulate_preset(name: &str, full: bool, out: &Path, run: &RunArgs) -> Result<()> {
    let p = preset(name, full)?;
    fs::create_dir_all(out)?;
    eprintln!("{}: {}", p.name, p.title);
    for (id, mut cfg) in p.curves {
        let path = out.join(format!("{}-{id}.csv", p.name));
        cfg.output = Some(path.clone());
        Simulation::new(&cfg)?.run(&run_options(run), report(run.quiet))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn analyze_csv(args: AnalyzeArgs) -> Result<()> {
    if !(args.target > 0.0 && args.target < 1.0) {
        bail!("target BLER must lie in (0, 1)");
    }
    let mut records = Vec::new();
    for path in &args.csv {
        records.extend(sparsecode::sim::read_records(path).with_context(|| format!("reading {}", path.display()))?);
    }
    let summary = analyze(&records, args.target, args.references);
    if args.json {
        outln!("{}", serde_json::to_string_pretty(&summary)?);
        return Ok(());
    }
    let db = |c: &Crossing| match c {
        Crossing::At(x) => format!("{x:.2} dB"),
        Crossing::Unbounded => "unbounded".into(),
    };
    for s in &summary {
        outln!("{}: BLER {:.0e} at {} ({} points)", s.curve, s.target, db(&s.crossing), s.points);
        for r in &s.references {
            let delta = r.delta_db.map_or(String::new(), |d| format!(", {d:+.2} dB"));
            outln!("  reference {}: {:.2} dB, measured {}{delta}", r.label, r.reference_db, db(&r.measured));
        }
    }
    Ok(())
}
