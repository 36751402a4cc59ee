//! Command-line front end.
//!
//! Four subcommands emit CSV data files plus a JSON run manifest:
//!
//! - `capacity` — bit-level and constellation capacities over an SNR grid
//!   (schema `capacity.v1`).
//! - `unionbound` — BLER union bounds for interleaver-1, interleaver-2 and
//!   seeded random assignments over capacity instances (`unionbound.v1`).
//! - `simulate` — Monte Carlo BLER rows, spectral-efficiency markers, or the
//!   Shannon-bound overlay (`simulate-bler.v1`, `simulate-sweep.v1`,
//!   `shannon.v1`).
//! - `construct` — reliability profile and information-set dump for one code
//!   construction (`construct.v1`).
//!
//! Every command honors `--seed`, `--threads`, `--out` and `--config`; a flat
//! TOML config file supplies defaults that explicit flags override, and the
//! `POLAR_CM_*` environment variables override built-in defaults in CI.
//! Exit codes: 0 success, 2 usage error, 3 config validation error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::channels::{
    bit_level_capacity, constellation_capacity, Constellation, Labeling, Principle,
};
use crate::construction::{
    bec_evolve, ga_evolve, select_info_set, surrogate_level_means, union_bound,
    ReliabilityProfile,
};
use crate::interleave::{interleaver1, interleaver2, random_interleaver, ChannelAssignment};
use crate::sim::{
    run_bler, shannon_bound, spectral_efficiency_sweep, union_bound_sweep, BoundChannels,
    DetectorKind, Scheme, SimConfig,
};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Argument surface
// ---------------------------------------------------------------------------

#[derive(Parser, Debug)]
#[command(
    name = "polar-cm",
    version,
    about = "Polar coded modulation laboratory: constructions, bounds and Monte Carlo sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Base RNG seed.
    #[arg(long, global = true, env = "POLAR_CM_SEED")]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "POLAR_CM_THREADS")]
    threads: Option<usize>,
    /// Output CSV path (default: ./<command>.csv).
    #[arg(long, global = true, env = "POLAR_CM_OUT")]
    out: Option<PathBuf>,
    /// Flat TOML config file; explicit flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum LabelingArg {
    Sp,
    Gray,
}

impl From<LabelingArg> for Labeling {
    fn from(l: LabelingArg) -> Self {
        match l {
            LabelingArg::Sp => Labeling::SetPartition,
            LabelingArg::Gray => Labeling::Gray,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SchemeArg {
    Cpcm,
    Mlc,
    Bicm,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Cpcm => Scheme::Cpcm,
            SchemeArg::Mlc => Scheme::Mlc,
            SchemeArg::Bicm => Scheme::Bicm,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ChannelsArg {
    Bec,
    Awgn,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ProfileArg {
    /// CI-friendly scale: BLER target 1e-2, short blocks.
    Desk,
    /// Full-scale methodology: BLER target 1e-5, N = 512 (opt in, slow).
    Paper,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SimulateMode {
    /// BLER rows over the whole (rate, Eb/N0) grid.
    Bler,
    /// Largest rate meeting the BLER target per Eb/N0 point.
    Sweep,
    /// Shannon-bound overlay curve for the rate grid.
    Shannon,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum AssignmentArg {
    Interleaver1,
    Interleaver2,
    Random,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ConstructChannelsArg {
    Bec,
    Awgn,
    Pam,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum DetectorArg {
    Genie,
    Crc,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bit-level and constellation capacities over an Es/N0 grid.
    Capacity {
        #[command(flatten)]
        common: CommonArgs,
        /// Bits per symbol.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum)]
        labeling: Option<LabelingArg>,
        /// Es/N0 grid in dB as start:stop:step.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// BLER union bounds across interleavers and capacity instances.
    Unionbound {
        #[command(flatten)]
        common: CommonArgs,
        /// Channel family for the reliability recursion.
        #[arg(long, value_enum)]
        channels: Option<ChannelsArg>,
        /// Channel types per instance (ignored with --table1).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Code rate as num/den.
        #[arg(long)]
        rate: Option<String>,
        /// Use the 20 stored 4-channel bi-AWGN capacity instances.
        #[arg(long)]
        table1: bool,
        /// Average capacity of the swept instances.
        #[arg(long)]
        avg_capacity: Option<f64>,
        /// Capacity grid step for the swept instances.
        #[arg(long)]
        grid_step: Option<f64>,
        /// Number of seeded random assignments per instance.
        #[arg(long)]
        random_count: Option<usize>,
    },
    /// Monte Carlo BLER and spectral-efficiency campaigns.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Codewords per CPCM frame.
        #[arg(long)]
        l: Option<usize>,
        /// Comma-separated rates, e.g. 1/8,1/4,3/8,1/2.
        #[arg(long)]
        rates: Option<String>,
        /// Eb/N0 grid in dB as start:stop:step.
        #[arg(long, allow_hyphen_values = true)]
        ebn0: Option<String>,
        #[arg(long, value_enum)]
        profile: Option<ProfileArg>,
        #[arg(long, value_enum)]
        mode: Option<SimulateMode>,
        /// BLER target for sweep mode.
        #[arg(long)]
        target: Option<f64>,
        #[arg(long)]
        max_frames: Option<u64>,
        #[arg(long)]
        max_errors: Option<u64>,
        #[arg(long, value_enum)]
        labeling: Option<LabelingArg>,
        #[arg(long, value_enum)]
        detector: Option<DetectorArg>,
        #[arg(long)]
        crc_width: Option<usize>,
        #[arg(long)]
        crc_poly: Option<String>,
    },
    /// Reliability profile and information-set dump.
    Construct {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        channels: Option<ConstructChannelsArg>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Per-type BEC erasure probabilities, comma separated.
        #[arg(long)]
        z: Option<String>,
        /// Per-type channel capacities, comma separated (awgn mode).
        #[arg(long)]
        capacities: Option<String>,
        /// PAM mode: bits per symbol.
        #[arg(long)]
        m: Option<usize>,
        /// PAM mode: noise level.
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long, value_enum)]
        labeling: Option<LabelingArg>,
        #[arg(long, value_enum)]
        assignment: Option<AssignmentArg>,
        /// Seed for --assignment random.
        #[arg(long)]
        assignment_seed: Option<u64>,
    },
}

// ---------------------------------------------------------------------------
// Config file handling
// ---------------------------------------------------------------------------

/// Flat key-value defaults loaded from a TOML file.
struct FileConfig {
    table: toml::Table,
}

impl FileConfig {
    fn load(path: Option<&Path>) -> Result<Self> {
        let table = match path {
            None => toml::Table::new(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    Error::InvalidConfig(format!("cannot read {}: {e}", p.display()))
                })?;
                text.parse::<toml::Table>()
                    .map_err(|e| Error::InvalidConfig(format!("{}: {e}", p.display())))?
            }
        };
        Ok(Self { table })
    }

    fn u64(&self, key: &str) -> Result<Option<u64>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(v)) if *v >= 0 => Ok(Some(*v as u64)),
            Some(other) => Err(Error::InvalidConfig(format!(
                "key {key}: expected nonnegative integer, got {other}"
            ))),
        }
    }

    fn usize(&self, key: &str) -> Result<Option<usize>> {
        Ok(self.u64(key)?.map(|v| v as usize))
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::Float(v)) => Ok(Some(*v)),
            Some(toml::Value::Integer(v)) => Ok(Some(*v as f64)),
            Some(other) => Err(Error::InvalidConfig(format!(
                "key {key}: expected number, got {other}"
            ))),
        }
    }

    fn string(&self, key: &str) -> Result<Option<String>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::String(v)) => Ok(Some(v.clone())),
            Some(other) => Err(Error::InvalidConfig(format!(
                "key {key}: expected string, got {other}"
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing helpers
// ---------------------------------------------------------------------------

/// Parses `start:stop:step` into an inclusive grid.
fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidConfig(format!(
            "grid {text} must be start:stop:step"
        )));
    }
    let parse = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| Error::InvalidConfig(format!("bad grid number {s}")))
    };
    let (start, stop, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
    if step <= 0.0 || stop < start {
        return Err(Error::InvalidConfig(format!("grid {text} is empty")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| start + i as f64 * step).collect())
}

/// Parses `num/den`.
fn parse_rate(text: &str) -> Result<(u64, u64)> {
    let parts: Vec<&str> = text.split('/').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidConfig(format!("rate {text} must be num/den")));
    }
    let num = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad rate numerator in {text}")))?;
    let den = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad rate denominator in {text}")))?;
    Ok((num, den))
}

fn parse_rate_list(text: &str) -> Result<Vec<(u64, u64)>> {
    text.split(',').map(parse_rate).collect()
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad number {s}")))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

/// Reproducibility record written next to every CSV output.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub schema: String,
    pub config: serde_json::Value,
    pub seed: u64,
    pub version: String,
    pub timestamp_unix: u64,
    pub outputs: Vec<String>,
}

fn write_outputs(
    out_path: &Path,
    header: &str,
    rows: &[String],
    manifest: RunManifest,
) -> Result<()> {
    let mut csv = String::with_capacity(rows.len() * 32 + header.len() + 1);
    csv.push_str(header);
    csv.push('\n');
    for row in rows {
        csv.push_str(row);
        csv.push('\n');
    }
    std::fs::write(out_path, csv)?;
    let manifest_path = out_path.with_extension("manifest.json");
    std::fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(format!("serialization: {e}"))
    }
}

fn manifest_for(
    command: &str,
    schema: &str,
    seed: u64,
    config: serde_json::Value,
    out_path: &Path,
) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        argv: std::env::args().collect(),
        schema: schema.to_string(),
        config,
        seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        outputs: vec![out_path.display().to_string()],
    }
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Runs the CLI; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => 0,
        Err(Error::InvalidConfig(msg)) => {
            eprintln!("config error: {msg}");
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn init_threads(threads: Option<usize>) {
    if let Some(t) = threads {
        // Ignore the error when a global pool already exists (tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Capacity {
            common,
            m,
            labeling,
            grid,
        } => cmd_capacity(common, m, labeling, grid),
        Command::Unionbound {
            common,
            channels,
            m,
            n,
            rate,
            table1,
            avg_capacity,
            grid_step,
            random_count,
        } => cmd_unionbound(
            common,
            channels,
            m,
            n,
            rate,
            table1,
            avg_capacity,
            grid_step,
            random_count,
        ),
        Command::Simulate {
            common,
            scheme,
            m,
            n,
            l,
            rates,
            ebn0,
            profile,
            mode,
            target,
            max_frames,
            max_errors,
            labeling,
            detector,
            crc_width,
            crc_poly,
        } => cmd_simulate(SimulateArgs {
            common,
            scheme,
            m,
            n,
            l,
            rates,
            ebn0,
            profile,
            mode,
            target,
            max_frames,
            max_errors,
            labeling,
            detector,
            crc_width,
            crc_poly,
        }),
        Command::Construct {
            common,
            channels,
            n,
            k,
            z,
            capacities,
            m,
            sigma,
            labeling,
            assignment,
            assignment_seed,
        } => cmd_construct(
            common,
            channels,
            n,
            k,
            z,
            capacities,
            m,
            sigma,
            labeling,
            assignment,
            assignment_seed,
        ),
    }
}

// ---------------------------------------------------------------------------
// capacity
// ---------------------------------------------------------------------------

fn cmd_capacity(
    common: CommonArgs,
    m: Option<usize>,
    labeling: Option<LabelingArg>,
    grid: Option<String>,
) -> Result<()> {
    let file = FileConfig::load(common.config.as_deref())?;
    init_threads(common.threads.or(file.usize("threads")?));
    let m = m.or(file.usize("m")?).unwrap_or(2);
    let labeling: Labeling = labeling
        .map(Labeling::from)
        .or(match file.string("labeling")?.as_deref() {
            Some("sp") => Some(Labeling::SetPartition),
            Some("gray") => Some(Labeling::Gray),
            Some(other) => {
                return Err(Error::InvalidConfig(format!("unknown labeling {other}")))
            }
            None => None,
        })
        .unwrap_or(Labeling::SetPartition);
    let grid_text = grid
        .or(file.string("grid")?)
        .unwrap_or_else(|| "-5:20:0.5".to_string());
    let snr_grid = parse_grid(&grid_text)?;
    let seed = common.seed.or(file.u64("seed")?).unwrap_or(0);

    let constellation = Constellation::new(m, labeling)
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let label_name = match labeling {
        Labeling::SetPartition => "sp",
        Labeling::Gray => "gray",
    };
    let mut rows = Vec::new();
    for &snr_db in &snr_grid {
        let sigma = (1.0 / (2.0 * 10f64.powf(snr_db / 10.0))).sqrt();
        let total = constellation_capacity(&constellation, sigma);
        rows.push(format!(
            "{snr_db},{sigma},{m},{label_name},constellation,0,{total}"
        ));
        for principle in [Principle::Mlc, Principle::Bicm] {
            let pname = match principle {
                Principle::Mlc => "mlc",
                Principle::Bicm => "bicm",
            };
            for level in 0..m {
                let c = bit_level_capacity(&constellation, sigma, level, principle);
                rows.push(format!(
                    "{snr_db},{sigma},{m},{label_name},{pname},{},{c}",
                    level + 1
                ));
            }
        }
    }
    let out = common
        .out
        .unwrap_or_else(|| PathBuf::from("capacity.csv"));
    let config = serde_json::json!({
        "m": m, "labeling": label_name, "grid": grid_text,
    });
    let manifest = manifest_for("capacity", "capacity.v1", seed, config, &out);
    write_outputs(
        &out,
        "snr_db,sigma,m,labeling,principle,level,capacity",
        &rows,
        manifest,
    )
}

// ---------------------------------------------------------------------------
// unionbound
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn cmd_unionbound(
    common: CommonArgs,
    channels: Option<ChannelsArg>,
    m: Option<usize>,
    n: Option<usize>,
    rate: Option<String>,
    table1: bool,
    avg_capacity: Option<f64>,
    grid_step: Option<f64>,
    random_count: Option<usize>,
) -> Result<()> {
    let file = FileConfig::load(common.config.as_deref())?;
    init_threads(common.threads.or(file.usize("threads")?));
    let seed = common.seed.or(file.u64("seed")?).unwrap_or(0);
    let n = n.or(file.usize("n")?).unwrap_or(256);
    let rate_text = rate
        .or(file.string("rate")?)
        .unwrap_or_else(|| "1/2".to_string());
    let rate = parse_rate(&rate_text)?;
    if rate.0 == 0 || rate.0 >= rate.1 {
        return Err(Error::InvalidConfig(format!(
            "rate {rate_text} outside (0, 1)"
        )));
    }
    let random_count = random_count.or(file.usize("random_count")?).unwrap_or(100);
    let avg_capacity = avg_capacity.or(file.f64("avg_capacity")?).unwrap_or(0.7);
    let grid_step = grid_step.or(file.f64("grid_step")?).unwrap_or(0.05);

    let (channels, instances, mode_name): (BoundChannels, Vec<Vec<f64>>, &str) = if table1 {
        let rows: Vec<Vec<f64>> = crate::construction::table1_instances()
            .iter()
            .map(|r| r.to_vec())
            .collect();
        (BoundChannels::Awgn, rows, "table1")
    } else {
        let m = m.or(file.usize("m")?).unwrap_or(2);
        let channels = match channels {
            Some(ChannelsArg::Bec) | None => BoundChannels::Bec,
            Some(ChannelsArg::Awgn) => BoundChannels::Awgn,
        };
        let instances = match m {
            2 => crate::sim::bec_pair_instances(avg_capacity, grid_step),
            3 => crate::sim::awgn_triple_instances(avg_capacity, grid_step),
            other => {
                return Err(Error::InvalidConfig(format!(
                    "capacity sweeps support m of 2 or 3, got {other}; use --table1 for m = 4"
                )))
            }
        };
        (channels, instances, "sweep")
    };

    let rows_out = union_bound_sweep(channels, &instances, n, rate, random_count, seed)
        .map_err(|e| match e {
            Error::InvalidInput(m) => Error::InvalidConfig(m),
            other => other,
        })?;
    let chan_name = match channels {
        BoundChannels::Bec => "bec",
        BoundChannels::Awgn => "awgn",
    };
    let mut rows = Vec::new();
    for r in &rows_out {
        let caps = instances[r.instance - 1]
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("|");
        let seed_field = r.seed.map(|s| s.to_string()).unwrap_or_default();
        rows.push(format!(
            "{},{chan_name},{},{seed_field},{},{},{},{caps},{}",
            r.instance, r.kind, r.n, r.n_short, r.k, r.bound
        ));
    }
    let out = common
        .out
        .unwrap_or_else(|| PathBuf::from("unionbound.csv"));
    let config = serde_json::json!({
        "channels": chan_name, "mode": mode_name, "n": n, "rate": rate_text,
        "random_count": random_count, "avg_capacity": avg_capacity,
        "grid_step": grid_step, "instances": instances.len(),
    });
    let manifest = manifest_for("unionbound", "unionbound.v1", seed, config, &out);
    write_outputs(
        &out,
        "instance,channels,kind,seed,n,n_short,k,capacities,bound",
        &rows,
        manifest,
    )
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
    common: CommonArgs,
    scheme: Option<SchemeArg>,
    m: Option<usize>,
    n: Option<usize>,
    l: Option<usize>,
    rates: Option<String>,
    ebn0: Option<String>,
    profile: Option<ProfileArg>,
    mode: Option<SimulateMode>,
    target: Option<f64>,
    max_frames: Option<u64>,
    max_errors: Option<u64>,
    labeling: Option<LabelingArg>,
    detector: Option<DetectorArg>,
    crc_width: Option<usize>,
    crc_poly: Option<String>,
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    init_threads(args.common.threads.or(file.usize("threads")?));
    let scheme: Scheme = args
        .scheme
        .map(Scheme::from)
        .or(match file.string("scheme")?.as_deref() {
            Some("cpcm") => Some(Scheme::Cpcm),
            Some("mlc") => Some(Scheme::Mlc),
            Some("bicm") => Some(Scheme::Bicm),
            Some(other) => return Err(Error::InvalidConfig(format!("unknown scheme {other}"))),
            None => None,
        })
        .unwrap_or(Scheme::Cpcm);
    let profile = args.profile.unwrap_or(ProfileArg::Desk);
    let (default_n, default_target, default_frames, default_errors) = match profile {
        ProfileArg::Desk => (128usize, 1e-2, 20_000u64, 100u64),
        ProfileArg::Paper => (512usize, 1e-5, 100_000_000u64, 100u64),
    };
    let m = args.m.or(file.usize("m")?).unwrap_or(2);
    let n = args.n.or(file.usize("n")?).unwrap_or(default_n);
    let l = args.l.or(file.usize("l")?).unwrap_or(10);
    let rates_text = args
        .rates
        .or(file.string("rates")?)
        .unwrap_or_else(|| "1/8,1/4,3/8,1/2,5/8,3/4,7/8".to_string());
    let rate_set = parse_rate_list(&rates_text)?;
    let ebn0_text = args
        .ebn0
        .or(file.string("ebn0")?)
        .unwrap_or_else(|| "0:10:1".to_string());
    let ebn0_grid = parse_grid(&ebn0_text)?;
    let bler_target = args.target.or(file.f64("target")?).unwrap_or(default_target);
    let max_frames = args
        .max_frames
        .or(file.u64("max_frames")?)
        .unwrap_or(default_frames);
    let max_errors = args
        .max_errors
        .or(file.u64("max_errors")?)
        .unwrap_or(default_errors);
    let seed = args.common.seed.or(file.u64("seed")?).unwrap_or(0);
    // Set-partition labeling for CPCM/MLC, Gray for BICM, unless overridden.
    let labeling = args
        .labeling
        .map(Labeling::from)
        .unwrap_or(match scheme {
            Scheme::Bicm => Labeling::Gray,
            _ => Labeling::SetPartition,
        });
    let detector = match args.detector.unwrap_or(DetectorArg::Genie) {
        DetectorArg::Genie => DetectorKind::Genie,
        DetectorArg::Crc => {
            let width = args.crc_width.unwrap_or(16);
            let poly = match args.crc_poly {
                Some(p) => u64::from_str_radix(p.trim_start_matches("0x"), 16)
                    .map_err(|_| Error::InvalidConfig(format!("bad CRC polynomial {p}")))?,
                None => 0x1021,
            };
            DetectorKind::Crc { width, poly }
        }
    };
    let mode = args.mode.unwrap_or(SimulateMode::Bler);

    let cfg = SimConfig {
        scheme,
        m,
        n,
        l,
        rate_set: rate_set.clone(),
        ebn0_grid_db: ebn0_grid.clone(),
        bler_target,
        max_frames,
        max_errors,
        seed,
        labeling,
        detector,
    };
    cfg.validate()?;

    let scheme_name = match scheme {
        Scheme::Cpcm => "cpcm",
        Scheme::Mlc => "mlc",
        Scheme::Bicm => "bicm",
    };
    let config_snapshot = serde_json::to_value(&cfg)?;
    let out_default = match mode {
        SimulateMode::Bler => "simulate-bler.csv",
        SimulateMode::Sweep => "simulate-sweep.csv",
        SimulateMode::Shannon => "shannon.csv",
    };
    let out = args
        .common
        .out
        .unwrap_or_else(|| PathBuf::from(out_default));

    match mode {
        SimulateMode::Bler => {
            let mut rows = Vec::new();
            for &(num, den) in &cfg.rate_set {
                for &ebn0 in &cfg.ebn0_grid_db {
                    let r = run_bler(&cfg, (num, den), ebn0)?;
                    rows.push(format!(
                        "{scheme_name},{},{},{},{ebn0},{num},{den},{},{},{},{},{},{},{}",
                        r.m, r.n, r.l, r.r_cm, r.bler, r.frames, r.trials, r.errors,
                        r.wilson_lo, r.wilson_hi
                    ));
                }
            }
            let manifest =
                manifest_for("simulate", "simulate-bler.v1", seed, config_snapshot, &out);
            write_outputs(
                &out,
                "scheme,m,n,l,ebn0_db,r_num,r_den,r_cm,bler,frames,trials,errors,wilson_lo,wilson_hi",
                &rows,
                manifest,
            )
        }
        SimulateMode::Sweep => {
            let sweep = spectral_efficiency_sweep(&cfg)?;
            let mut rows = Vec::new();
            for r in sweep {
                match (r.rate, r.r_cm, r.bler) {
                    (Some((num, den)), Some(r_cm), Some(bler)) => rows.push(format!(
                        "{scheme_name},{m},{n},{l},{},{num},{den},{r_cm},{bler},1",
                        r.ebn0_db
                    )),
                    _ => rows.push(format!("{scheme_name},{m},{n},{l},{},,,,,0", r.ebn0_db)),
                }
            }
            let manifest =
                manifest_for("simulate", "simulate-sweep.v1", seed, config_snapshot, &out);
            write_outputs(
                &out,
                "scheme,m,n,l,ebn0_db,r_num,r_den,r_cm,bler,achieved",
                &rows,
                manifest,
            )
        }
        SimulateMode::Shannon => {
            // Overlay curve across the R_cm range covered by the rate set.
            let r_cms: Vec<f64> = {
                let mut grid: Vec<f64> = Vec::new();
                let max_rcm = cfg
                    .rate_set
                    .iter()
                    .map(|&(num, den)| cfg.r_cm(num, den))
                    .fold(0.0f64, f64::max);
                let steps = 200;
                for i in 1..=steps {
                    grid.push(max_rcm * i as f64 / steps as f64);
                }
                grid
            };
            let rows: Vec<String> = shannon_bound(&r_cms)
                .into_iter()
                .map(|(r, e)| format!("{r},{e}"))
                .collect();
            let manifest = manifest_for("simulate", "shannon.v1", seed, config_snapshot, &out);
            write_outputs(&out, "r_cm,ebn0_db", &rows, manifest)
        }
    }
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn cmd_construct(
    common: CommonArgs,
    channels: Option<ConstructChannelsArg>,
    n: Option<usize>,
    k: Option<usize>,
    z: Option<String>,
    capacities: Option<String>,
    m: Option<usize>,
    sigma: Option<f64>,
    labeling: Option<LabelingArg>,
    assignment: Option<AssignmentArg>,
    assignment_seed: Option<u64>,
) -> Result<()> {
    let file = FileConfig::load(common.config.as_deref())?;
    init_threads(common.threads.or(file.usize("threads")?));
    let seed = common.seed.or(file.u64("seed")?).unwrap_or(0);
    let n = n.or(file.usize("n")?).unwrap_or(256);
    let k = k.or(file.usize("k")?).unwrap_or(n / 2);
    let channels = channels.unwrap_or(ConstructChannelsArg::Bec);
    let assignment_seed = assignment_seed.or(file.u64("assignment_seed")?).unwrap_or(seed);

    let build_assignment = |count: usize, types: usize| -> Result<ChannelAssignment> {
        let kind = assignment.unwrap_or(AssignmentArg::Interleaver2);
        let a = match kind {
            AssignmentArg::Interleaver1 => interleaver1(count, types),
            AssignmentArg::Interleaver2 => interleaver2(count, types),
            AssignmentArg::Random => random_interleaver(count, types, assignment_seed),
        };
        a.map_err(|e| Error::InvalidConfig(e.to_string()))
    };

    let (profile, source): (ReliabilityProfile, String) = match channels {
        ConstructChannelsArg::Bec => {
            let zs = parse_f64_list(&z.or(file.string("z")?).unwrap_or_else(|| "0.5".into()))?;
            let a = build_assignment(n, zs.len())?;
            (
                bec_evolve(&a, &zs).map_err(|e| Error::InvalidConfig(e.to_string()))?,
                format!("bec z={zs:?}"),
            )
        }
        ConstructChannelsArg::Awgn => {
            let caps = parse_f64_list(
                &capacities
                    .or(file.string("capacities")?)
                    .ok_or_else(|| Error::InvalidConfig("awgn mode needs --capacities".into()))?,
            )?;
            let means: Vec<f64> = caps
                .iter()
                .map(|&c| crate::construction::mean_for_capacity(c))
                .collect();
            let a = build_assignment(n, means.len())?;
            (
                ga_evolve(&a, &means).map_err(|e| Error::InvalidConfig(e.to_string()))?,
                format!("awgn capacities={caps:?}"),
            )
        }
        ConstructChannelsArg::Pam => {
            let m = m.or(file.usize("m")?).unwrap_or(2);
            let sigma = sigma
                .or(file.f64("sigma")?)
                .ok_or_else(|| Error::InvalidConfig("pam mode needs --sigma".into()))?;
            let labeling: Labeling = labeling
                .map(Labeling::from)
                .unwrap_or(Labeling::SetPartition);
            let constellation = Constellation::new(m, labeling)
                .map_err(|e| Error::InvalidConfig(e.to_string()))?;
            let means = surrogate_level_means(&constellation, sigma, Principle::Mlc);
            let a = build_assignment(n, m)?;
            (
                ga_evolve(&a, &means).map_err(|e| Error::InvalidConfig(e.to_string()))?,
                format!("pam m={m} sigma={sigma}"),
            )
        }
    };
    let info = select_info_set(&profile, k).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let bound = union_bound(&profile, &info);
    let metric_name = match profile.metric {
        crate::construction::Metric::BhattacharyyaZ => "bhattacharyya_z",
        crate::construction::Metric::LlrMean => "llr_mean",
        crate::construction::Metric::ErrorProb => "error_prob",
    };
    let in_set: Vec<bool> = {
        let mut v = vec![false; n];
        for &i in &info.indices {
            v[i] = true;
        }
        v
    };
    let rows: Vec<String> = (0..n)
        .map(|p| {
            format!(
                "{p},{metric_name},{},{},{}",
                profile.per_position[p],
                profile.error_metric(p),
                in_set[p] as u8
            )
        })
        .collect();
    let out = common
        .out
        .unwrap_or_else(|| PathBuf::from("construct.csv"));
    let config = serde_json::json!({
        "source": source, "n": n, "k": k, "union_bound": bound,
        "assignment_seed": assignment_seed,
    });
    let manifest = manifest_for("construct", "construct.v1", seed, config, &out);
    write_outputs(
        &out,
        "position,metric,value,error_metric,in_info_set",
        &rows,
        manifest,
    )
}
