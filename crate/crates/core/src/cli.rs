//! Command-line front end.
//!
//! Reports are written as `{"manifest": ..., "result": ...}`. CSV outputs
//! (sweeps, estimates, samples) carry no manifest in the file itself; when
//! written with `--out PATH` the manifest goes to `PATH.manifest.json`.
//! Everything except the manifest's `wall_clock_ms` is a deterministic
//! function of the command line and the input files.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::algebra::{format_rational, DEFAULT_ENUMERATION_CAP};
use crate::channel::{load_channel, ChannelMatrix};
use crate::condition::{check_all, check_condition_star, phi, ConditionReport, MAX_CANDIDATES};
use crate::dimest::{aligned_grid, estimate_dimension, power_grid, DimensionConfig};
use crate::dofbound::{
    build_w_n, dof_lower_bound, fig1_demo, rational_example_uniform, sweep, BoundOptions,
};
use crate::error::{Error, Result};
use crate::ifs::{exact_overlap_search, fixed_point_discrepancy, hochman_dimension, sample, separation_check, IfsSpec};

#[derive(Debug, Parser)]
#[command(name = "iadof", version, about = "Degrees-of-freedom toolkit for constant interference channels")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test the monomial independence condition.
    Check(CheckArgs),
    /// Build the input alphabet W_N.
    Build(BuildArgs),
    /// Evaluate the degrees-of-freedom lower bound.
    Bound(BoundArgs),
    /// Evaluate the bound on a grid of degrees and ranges (CSV).
    Sweep(SweepArgs),
    /// Integer cross gains with irrational direct gains.
    ExampleRational(RationalArgs),
    /// Sumset sizes of a hexagonal point set.
    Fig1,
    /// Estimate information dimension from samples (CSV).
    Estimate(EstimateArgs),
    /// Self-similar distribution utilities.
    #[command(subcommand)]
    Ifs(IfsCommand),
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long)]
    pub degree: u32,
    /// 0-based receiver; all receivers when absent.
    #[arg(long)]
    pub receiver: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct BuildArgs {
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long)]
    pub degree: u32,
    #[arg(long)]
    pub range: u64,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: usize,
    /// Largest alphabet whose elements are listed in the report.
    #[arg(long, default_value_t = 4096)]
    pub list_limit: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundArgs {
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long)]
    pub degree: u32,
    #[arg(long)]
    pub range: u64,
    #[arg(long)]
    pub waive_condition: bool,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub channel: PathBuf,
    /// Comma-separated degrees.
    #[arg(long, value_delimiter = ',', required = true)]
    pub degrees: Vec<u32>,
    /// Comma-separated coefficient ranges.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ranges: Vec<u64>,
    #[arg(long)]
    pub waive_condition: bool,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct RationalArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub hmax: i64,
    #[arg(long)]
    pub range: u64,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    /// Powers of 1/r when it is an integer, else powers of two.
    Aligned,
    Pow2,
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateArgs {
    /// Inline JSON or path to a JSON file.
    #[arg(long)]
    pub spec: String,
    #[arg(long)]
    pub kmin: u64,
    #[arg(long)]
    pub kmax: u64,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long, value_enum, default_value_t = Grid::Aligned)]
    pub grid: Grid,
    /// Plain plug-in entropies without the Miller-Madow correction.
    #[arg(long)]
    pub no_bias_correction: bool,
}

#[derive(Debug, Subcommand)]
pub enum IfsCommand {
    /// Dimension formula min{H(p)/log2(1/r), 1}.
    Dimension(SpecArgs),
    /// Separation bound m/(m+M).
    Separation(SpecArgs),
    /// Exact overlaps among words of equal length.
    Overlaps(OverlapArgs),
    /// Draw samples (CSV or little-endian f64).
    Sample(SampleArgs),
    /// KS distance between X and r X' + W.
    FixedPoint(FixedPointArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SpecArgs {
    #[arg(long)]
    pub spec: String,
}

#[derive(Debug, Args, Serialize)]
pub struct OverlapArgs {
    #[arg(long)]
    pub spec: String,
    #[arg(long)]
    pub depth: u32,
    #[arg(long, default_value_t = 0.0)]
    pub tolerance: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleFormat {
    Csv,
    Bin,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub spec: String,
    #[arg(long)]
    pub depth: u32,
    #[arg(long)]
    pub count: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SampleFormat::Csv)]
    pub format: SampleFormat,
}

#[derive(Debug, Args, Serialize)]
pub struct FixedPointArgs {
    #[arg(long)]
    pub spec: String,
    #[arg(long)]
    pub depth: u32,
    #[arg(long)]
    pub count: usize,
    #[arg(long)]
    pub seed: u64,
}

/// Provenance of one output document.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub version: &'static str,
    /// SHA-256 of every input file (or inline document).
    pub inputs: BTreeMap<String, String>,
    pub wall_clock_ms: u128,
}

struct Run {
    command: &'static str,
    params: Value,
    seed: Option<u64>,
    inputs: BTreeMap<String, String>,
    start: Instant,
}

impl Run {
    fn new(command: &'static str, params: impl Serialize, seed: Option<u64>) -> Self {
        Run {
            command,
            params: serde_json::to_value(params).expect("arguments serialize"),
            seed,
            inputs: BTreeMap::new(),
            start: Instant::now(),
        }
    }

    fn channel(&mut self, path: &Path) -> Result<ChannelMatrix> {
        let bytes = std::fs::read(path)?;
        self.inputs.insert(path.display().to_string(), digest(&bytes));
        let text = String::from_utf8(bytes).map_err(|e| Error::InvalidChannel(e.to_string()))?;
        load_channel(&text)
    }

    fn spec(&mut self, spec: &str) -> Result<IfsSpec> {
        let trimmed = spec.trim_start();
        if trimmed.starts_with('{') {
            self.inputs.insert("inline".into(), digest(spec.as_bytes()));
        } else {
            self.inputs.insert(spec.to_string(), digest(&std::fs::read(spec)?));
        }
        IfsSpec::load(spec)
    }

    fn manifest(self) -> RunManifest {
        RunManifest {
            command: self.command.into(),
            params: self.params,
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION"),
            inputs: self.inputs,
            wall_clock_ms: self.start.elapsed().as_millis(),
        }
    }
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Serialises `result` wrapped with its manifest.
fn report(out: &Option<PathBuf>, run: Run, result: impl Serialize) -> Result<()> {
    let doc = json!({ "manifest": run.manifest(), "result": result });
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    emit(out, text.as_bytes())
}

/// Writes a raw payload; the manifest goes next to it.
fn payload(out: &Option<PathBuf>, run: Run, bytes: &[u8], extra: Value) -> Result<()> {
    emit(out, bytes)?;
    if let Some(path) = out {
        let mut side = path.clone().into_os_string();
        side.push(".manifest.json");
        let doc = json!({ "manifest": run.manifest(), "summary": extra });
        std::fs::write(PathBuf::from(side), serde_json::to_string_pretty(&doc)? + "\n")?;
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn check(args: &CheckArgs, out: &Option<PathBuf>) -> Result<()> {
    let mut run = Run::new("check", args, None);
    let h = run.channel(&args.channel)?;
    let result = match args.receiver {
        None => check_all(&h, args.degree)?,
        Some(i) => ConditionReport {
            degree: args.degree,
            phi: phi(h.k(), args.degree, MAX_CANDIDATES / 2)?,
            receivers: vec![check_condition_star(&h, args.degree, i)?],
        },
    };
    let all = result.all_independent();
    report(out, run, json!({ "all_independent": all, "report": result }))
}

fn build(args: &BuildArgs, out: &Option<PathBuf>) -> Result<()> {
    let mut run = Run::new("build", args, None);
    let h = run.channel(&args.channel)?;
    let w = build_w_n(&h, args.degree, args.range, args.cap)?;
    let elements = w
        .elements()
        .filter(|e| e.len() <= args.list_limit)
        .map(|e| e.iter().map(|x| x.display(h.generators()).to_string()).collect::<Vec<_>>());
    let basis: Vec<String> = w.basis.iter().map(|x| x.display(h.generators()).to_string()).collect();
    report(
        out,
        run,
        json!({
            "degree": args.degree,
            "range": args.range,
            "phi": w.phi(),
            "basis": basis,
            "cardinality": w.cardinality.to_string(),
            "unique_representation": w.unique_representation,
            "r_n": format_rational(&w.r_n),
            "elements": elements,
        }),
    )
}

fn bound(args: &BoundArgs, out: &Option<PathBuf>) -> Result<()> {
    let mut run = Run::new("bound", args, None);
    let h = run.channel(&args.channel)?;
    let options = BoundOptions {
        waive_condition: args.waive_condition,
        cap: args.cap,
    };
    match dof_lower_bound(&h, args.degree, args.range, &options) {
        Ok(r) => report(out, run, r),
        Err(Error::ConditionViolated {
            receiver,
            degree,
            certificate,
        }) => {
            report(
                out,
                run,
                json!({ "refused": "condition violated", "receiver": receiver, "degree": degree, "certificate": certificate }),
            )?;
            Err(Error::ConditionViolated {
                receiver,
                degree,
                certificate,
            })
        }
        Err(e) => Err(e),
    }
}

/// Shortest round-trip form, with an exponent for very small or large values.
fn real(x: f64) -> String {
    format!("{x:?}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

fn sweep_cmd(args: &SweepArgs, out: &Option<PathBuf>) -> Result<()> {
    let mut run = Run::new("sweep", args, None);
    let h = run.channel(&args.channel)?;
    let options = BoundOptions {
        waive_condition: args.waive_condition,
        cap: args.cap,
    };
    let cells = sweep(&h, &args.degrees, &args.ranges, &options)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["K", "d", "N", "total", "ratio_bound", "cardinality"])?;
    for c in &cells {
        w.write_record([
            c.k.to_string(),
            c.degree.to_string(),
            c.range.to_string(),
            real(c.total),
            fmt_opt(c.ratio_bound),
            c.cardinality.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    let runtimes: Vec<Value> = cells
        .iter()
        .map(|c| json!({ "d": c.degree, "N": c.range, "runtime_ms": c.runtime_ms }))
        .collect();
    payload(out, run, &bytes, json!({ "cells": runtimes }))
}

fn estimate(args: &EstimateArgs, out: &Option<PathBuf>) -> Result<()> {
    let mut run = Run::new("estimate", args, Some(args.seed));
    let spec = run.spec(&args.spec)?;
    let grid = match args.grid {
        Grid::Aligned => aligned_grid(&spec, args.kmin, args.kmax),
        Grid::Pow2 => power_grid(2, args.kmin.max(2), args.kmax),
    };
    let mut config = DimensionConfig::new(grid, args.samples, args.seed);
    config.depth = args.depth;
    config.miller_madow = !args.no_bias_correction;
    let est = estimate_dimension(&spec, &config)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["k", "H_bits", "H_over_logk"])?;
    for ((k, h), p) in est.k_grid.iter().zip(&est.entropies).zip(&est.pointwise) {
        w.write_record([k.to_string(), real(*h), real(*p)])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    let summary = json!({
        "slope": est.slope,
        "intercept": est.intercept,
        "formula": hochman_dimension(&spec),
        "depth": est.depth,
        "undersampled": est.undersampled,
    });
    payload(out, run, &bytes, summary)
}

fn ifs(cmd: &IfsCommand, out: &Option<PathBuf>) -> Result<()> {
    match cmd {
        IfsCommand::Dimension(a) => {
            let mut run = Run::new("ifs dimension", a, None);
            let spec = run.spec(&a.spec)?;
            report(out, run, json!({ "dimension": hochman_dimension(&spec), "letter_entropy": spec.letter_entropy() }))
        }
        IfsCommand::Separation(a) => {
            let mut run = Run::new("ifs separation", a, None);
            let spec = run.spec(&a.spec)?;
            report(out, run, separation_check(&spec)?)
        }
        IfsCommand::Overlaps(a) => {
            let mut run = Run::new("ifs overlaps", a, None);
            let spec = run.spec(&a.spec)?;
            let found = exact_overlap_search(&spec, a.depth, a.tolerance)?;
            report(out, run, json!({ "count": found.len(), "overlaps": found }))
        }
        IfsCommand::Sample(a) => {
            let mut run = Run::new("ifs sample", a, Some(a.seed));
            let spec = run.spec(&a.spec)?;
            let xs = sample(&spec, a.depth, a.count, a.seed)?;
            let bytes = match a.format {
                SampleFormat::Bin => xs.iter().flat_map(|x| x.to_le_bytes()).collect::<Vec<u8>>(),
                SampleFormat::Csv => {
                    let mut text = String::from("x\n");
                    for x in &xs {
                        text.push_str(&real(*x));
                        text.push('\n');
                    }
                    text.into_bytes()
                }
            };
            payload(out, run, &bytes, json!({ "count": xs.len() }))
        }
        IfsCommand::FixedPoint(a) => {
            let mut run = Run::new("ifs fixed-point", a, Some(a.seed));
            let spec = run.spec(&a.spec)?;
            let ks = fixed_point_discrepancy(&spec, a.depth, a.count, a.seed)?;
            report(out, run, json!({ "ks_statistic": ks }))
        }
    }
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = &cli.out;
    match &cli.command {
        Command::Check(a) => check(a, out),
        Command::Build(a) => build(a, out),
        Command::Bound(a) => bound(a, out),
        Command::Sweep(a) => sweep_cmd(a, out),
        Command::ExampleRational(a) => {
            let run = Run::new("example-rational", a, None);
            let r = rational_example_uniform(a.k, a.hmax, a.range, a.cap)?;
            report(out, run, r)
        }
        Command::Fig1 => {
            let run = Run::new("fig1", json!({}), None);
            report(out, run, fig1_demo())
        }
        Command::Estimate(a) => estimate(a, out),
        Command::Ifs(c) => ifs(c, out),
    }
}

/// Process entry point: 0 on success, 1 on domain errors, 2 on usage errors.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
