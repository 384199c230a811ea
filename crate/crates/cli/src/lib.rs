//! Command-line front end for `debranges`.
//!
//! Every command writes a versioned JSON report. Exit codes: 0 when the
//! outcome is determined, 2 when it is inconclusive, 3 on any error.

pub mod input;
pub mod report;

use std::f64::consts::PI;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use debranges::{
    classify, construct_e_on, discrete_inner, eigenfunction_section, find_spectrum, kernel_section, model, phase,
    spectral_measure, verify_hb, Complex64, EntireEvaluable, HbGrid, HermiteBiehlerFunction, ModelDescriptor, Overall,
    SpectrumSequence, TruncationPolicy,
};
use serde::Serialize;
use thiserror::Error;

use crate::input::{load_efile, load_sequence, InputError};
use crate::report::*;

pub const EXIT_DETERMINED: i32 = 0;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "debranges", version, about = "Entire-operator tests and de Branges space numerics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify from two spectra: Entire, GeneralizedEntireOnly, NotGeneralizedEntire or Inconclusive.
    Check {
        /// Spectrum of h_0 (JSON or CSV).
        seq0: Option<PathBuf>,
        /// Spectrum the conditions are tested on.
        seq_gamma: Option<PathBuf>,
        #[command(flatten)]
        source: ModelArgs,
        #[command(flatten)]
        policy: PolicyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build e = -h1 - i sigma h2 from two interlaced spectra and sample it.
    Construct {
        seq1: Option<PathBuf>,
        seq2: Option<PathBuf>,
        #[command(flatten)]
        source: ModelArgs,
        /// Samples per axis of the output and verification grid.
        #[arg(long, default_value_t = 41)]
        grid: usize,
        /// Round-trip tolerance on interior roots.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        policy: PolicyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Zeros of s_beta in an open interval.
    Roots {
        #[command(flatten)]
        source: FunctionArgs,
        #[arg(long, default_value_t = 0.0, value_parser = parse_beta)]
        beta: f64,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, required = true)]
        interval: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample |e(z)| > |e#(z)| on an upper half-plane grid.
    VerifyHb {
        #[command(flatten)]
        source: FunctionArgs,
        #[arg(long, default_value_t = 41)]
        grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Discrete inner product over the spectral measure of s_beta.
    Parseval {
        #[command(flatten)]
        source: FunctionArgs,
        /// kernel:W or kernel:RE,IM (reproducing kernel at W), or eigen:X.
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 0.0, value_parser = parse_beta)]
        beta: f64,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, default_values_t = [-1000.5, 1000.5])]
        interval: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Unwrapped phase on a uniform grid.
    Phase {
        #[command(flatten)]
        source: FunctionArgs,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, default_values_t = [-10.0, 10.0])]
        interval: Vec<f64>,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Built-in model instead of input files.
    #[arg(long)]
    pub model: Option<String>,
    /// Model parameter, repeatable.
    #[arg(long = "param", value_name = "K=V", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
}

#[derive(Debug, Args)]
pub struct FunctionArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// JSON file describing e (polynomial, exp_linear, atan, two_spectra).
    #[arg(long)]
    pub efile: Option<PathBuf>,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PolicyArgs {
    /// Product cutoff |b| <= R.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Confidence margin on fitted exponents.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Largest |x_n| in the series window.
    #[arg(long)]
    pub window: Option<f64>,
    #[arg(long)]
    pub richardson: Option<u8>,
    /// Ignore tail models.
    #[arg(long)]
    pub no_tail_correction: bool,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the report here; stdout then gets a one-line summary.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timing (makes reports non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("BadParameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Failed(String),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::BadParameters(msg.into())
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn parse_beta(s: &str) -> Result<f64, String> {
    let b: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if (0.0..PI).contains(&b) {
        Ok(b)
    } else {
        Err(format!("beta must lie in [0, pi), got {b}"))
    }
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected K=V, got {s}"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("not a number: {v}"))?;
    Ok((k.trim().to_string(), v))
}

impl PolicyArgs {
    fn policy(&self) -> Result<TruncationPolicy, CliError> {
        let mut p = TruncationPolicy::default();
        if let Some(r) = self.radius {
            p.radius = r;
        }
        if let Some(d) = self.delta {
            p.delta = d;
        }
        p.window = self.window;
        if let Some(k) = self.richardson {
            p.richardson_levels = k;
        }
        p.tail_correction = !self.no_tail_correction;
        p.validate().map_err(|e| bad(e.to_string()))?;
        Ok(p)
    }
}

impl ModelArgs {
    fn descriptor(&self) -> Result<Option<ModelDescriptor>, CliError> {
        let Some(name) = &self.model else { return Ok(None) };
        let params: Vec<(&str, f64)> = self.params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        model(name, &params).map(Some).map_err(|e| bad(e.to_string()))
    }
}

/// Inputs shared by report assembly: raw file bytes for the digest.
struct Run {
    command: &'static str,
    args: Vec<String>,
    inputs: Vec<Vec<u8>>,
    started: Instant,
}

impl Run {
    fn report<T: Serialize>(&self, result: T, output: &OutputArgs) -> RunReport<T> {
        let inputs: Vec<&[u8]> = self.inputs.iter().map(Vec::as_slice).collect();
        RunReport {
            schema: SCHEMA,
            command: self.command.to_string(),
            args: self.args.clone(),
            inputs_digest: digest(self.command, &self.args, &inputs),
            result,
            timing_ms: output.timing.then(|| self.started.elapsed().as_secs_f64() * 1e3),
        }
    }
}

fn emit<T: Serialize>(
    report: &RunReport<T>,
    output: &OutputArgs,
    summary: &str,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(report).map_err(failed)?;
    let write_err = |source| CliError::Output { path: PathBuf::from("<stdout>"), source };
    match &output.out {
        Some(path) => {
            std::fs::write(path, json + "\n").map_err(|source| CliError::Output { path: path.clone(), source })?;
            writeln!(out, "{summary}").map_err(write_err)
        }
        None => writeln!(out, "{json}").map_err(write_err),
    }
}

fn two_sequences(
    a: &Option<PathBuf>,
    b: &Option<PathBuf>,
    source: &ModelArgs,
    run: &mut Run,
) -> Result<(SpectrumSequence, SpectrumSequence), CliError> {
    match (a, b, source.descriptor()?) {
        (Some(a), Some(b), None) => {
            let (la, lb) = (load_sequence(a)?, load_sequence(b)?);
            run.inputs.push(la.bytes);
            run.inputs.push(lb.bytes);
            Ok((la.value, lb.value))
        }
        (None, None, Some(m)) => m.pair().map_err(|e| bad(e.to_string())),
        _ => Err(bad("give either two sequence files or --model")),
    }
}

fn function(source: &FunctionArgs, run: &mut Run) -> Result<(HermiteBiehlerFunction, TruncationPolicy), CliError> {
    let policy = source.policy.policy()?;
    match (&source.efile, source.model.descriptor()?) {
        (Some(path), None) => {
            let loaded = load_efile(path, &policy)?;
            run.inputs.push(loaded.bytes);
            Ok((loaded.value, policy))
        }
        (None, Some(m)) => {
            let name = m.name;
            let e = m.e.ok_or_else(|| bad(format!("{name} has no closed-form e; use construct or --efile")))?;
            Ok((e, policy))
        }
        _ => Err(bad("give exactly one of --model or --efile")),
    }
}

fn interval(v: &[f64]) -> Result<(f64, f64), CliError> {
    match v {
        [lo, hi] if lo.is_finite() && hi.is_finite() && lo < hi => Ok((*lo, *hi)),
        _ => Err(bad("--interval needs finite LO < HI")),
    }
}

/// `kernel:W`, `kernel:RE,IM` or `eigen:X`.
fn section(spec: &str, e: &HermiteBiehlerFunction, beta: f64) -> Result<EntireEvaluable, CliError> {
    let (kind, arg) = spec.split_once(':').ok_or_else(|| bad(format!("expected kernel:W or eigen:X, got {spec}")))?;
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(format!("not a number in {spec}")));
    match kind {
        "kernel" => {
            let w = match arg.split_once(',') {
                Some((re, im)) => Complex64::new(num(re)?, num(im)?),
                None => Complex64::new(num(arg)?, 0.0),
            };
            Ok(kernel_section(e, w))
        }
        "eigen" => eigenfunction_section(e, beta, num(arg)?).map_err(failed),
        _ => Err(bad(format!("unknown function kind {kind:?}"))),
    }
}

fn grid_from(n: usize) -> Result<HbGrid, CliError> {
    if n < 2 {
        return Err(bad("--grid must be at least 2"));
    }
    Ok(HbGrid { nx: n, ny: n.div_ceil(2), ..HbGrid::default() })
}

fn execute(cli: Cli, args: Vec<String>, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut run = Run { command: "", args, inputs: Vec::new(), started: Instant::now() };
    match cli.command {
        Command::Check { seq0, seq_gamma, source, policy, output } => {
            run.command = "check";
            let policy = policy.policy()?;
            let (s0, sg) = two_sequences(&seq0, &seq_gamma, &source, &mut run)?;
            let c = classify(&s0, &sg, &policy).map_err(failed)?;
            let result = CheckOut {
                seq0: (&s0).into(),
                seq_gamma: (&sg).into(),
                policy: (&policy).into(),
                classification: (&c).into(),
            };
            emit(&run.report(result, &output), &output, c.overall.as_str(), out)?;
            Ok(if c.overall == Overall::Inconclusive { EXIT_INCONCLUSIVE } else { EXIT_DETERMINED })
        }
        Command::Construct { seq1, seq2, source, grid, tol, policy, output } => {
            run.command = "construct";
            let grid = grid_from(grid)?;
            if tol.is_nan() || tol < 0.0 {
                return Err(bad("--tol must be non-negative"));
            }
            let policy = policy.policy()?;
            let (s1, s2) = two_sequences(&seq1, &seq2, &source, &mut run)?;
            let mut r = construct_e_on(&s1, &s2, &policy, &grid).map_err(failed)?;
            let rt = r.verify_roundtrip(tol).map_err(failed)?.clone();
            let samples = grid
                .plane_points()
                .into_iter()
                .map(|z| {
                    let v = r.e.eval(z);
                    SampleRow { x: z.re, y: z.im, re: v.re, im: v.im }
                })
                .collect();
            let result = ConstructOut {
                seq1: (&s1).into(),
                seq2: (&s2).into(),
                policy: (&policy).into(),
                sigma: r.sigma,
                c0: r.c0.status.as_str(),
                hb: (&r.hb_report).into(),
                roundtrip: (&rt).into(),
                samples,
            };
            let summary = format!("hb verified, roundtrip {}", if rt.pass { "pass" } else { "fail" });
            emit(&run.report(result, &output), &output, &summary, out)?;
            Ok(if rt.pass { EXIT_DETERMINED } else { EXIT_INCONCLUSIVE })
        }
        Command::Roots { source, beta, interval: iv, output } => {
            run.command = "roots";
            let (e, _) = function(&source, &mut run)?;
            let (lo, hi) = interval(&iv)?;
            let roots = find_spectrum(&e, beta, lo, hi).map_err(failed)?;
            let result = RootsOut { beta, interval: [lo, hi], count: roots.len(), roots: roots.points().to_vec() };
            let summary = format!("{} roots", result.count);
            emit(&run.report(result, &output), &output, &summary, out)?;
            Ok(EXIT_DETERMINED)
        }
        Command::VerifyHb { source, grid, output } => {
            run.command = "verify-hb";
            let grid = grid_from(grid)?;
            let (e, _) = function(&source, &mut run)?;
            let rep = verify_hb(e.evaluable(), &grid);
            let result = VerifyHbOut {
                grid: GridOut {
                    x_range: [grid.x_range.0, grid.x_range.1],
                    y_range: [grid.y_range.0, grid.y_range.1],
                    nx: grid.nx,
                    ny: grid.ny,
                    real_samples: grid.real_samples,
                },
                hb: (&rep).into(),
            };
            let summary = result.hb.status;
            emit(&run.report(result, &output), &output, summary, out)?;
            Ok(EXIT_DETERMINED)
        }
        Command::Parseval { source, f, g, beta, interval: iv, output } => {
            run.command = "parseval";
            let (e, _) = function(&source, &mut run)?;
            let (lo, hi) = interval(&iv)?;
            let (fs, gs) = (section(&f, &e, beta)?, section(&g, &e, beta)?);
            let sd = spectral_measure(&e, beta, lo, hi).map_err(failed)?;
            let v = discrete_inner(&sd, &fs, &gs);
            let result = ParsevalOut {
                beta,
                f,
                g,
                interval: [lo, hi],
                terms: sd.zeros.len(),
                re: v.value.re,
                im: v.value.im,
                tail_estimate: v.tail_estimate.is_finite().then_some(v.tail_estimate),
            };
            let summary = format!("{} + {}i", result.re, result.im);
            emit(&run.report(result, &output), &output, &summary, out)?;
            Ok(EXIT_DETERMINED)
        }
        Command::Phase { source, interval: iv, samples, output } => {
            run.command = "phase";
            let (e, _) = function(&source, &mut run)?;
            let (lo, hi) = interval(&iv)?;
            if samples < 2 {
                return Err(bad("--samples must be at least 2"));
            }
            let xs: Vec<f64> = (0..samples).map(|k| lo + (hi - lo) * k as f64 / (samples - 1) as f64).collect();
            let phi = phase(&e, &xs).map_err(failed)?;
            let rows = xs.iter().zip(&phi).map(|(&x, &phi)| PhaseRow { x, phi }).collect();
            let result = PhaseOut { interval: [lo, hi], rows };
            emit(&run.report(result, &output), &output, &format!("{samples} samples"), out)?;
            Ok(EXIT_DETERMINED)
        }
    }
}

/// Arguments after the subcommand, minus `--out` and `--timing`, which do not
/// affect the result.
fn echoed_args(argv: &[OsString]) -> Vec<String> {
    let mut args = Vec::new();
    let mut it = argv.iter().skip(2).map(|a| a.to_string_lossy().into_owned());
    while let Some(a) = it.next() {
        match a.as_str() {
            "--out" => {
                it.next();
            }
            "--timing" => {}
            _ if a.starts_with("--out=") => {}
            _ => args.push(a),
        }
    }
    args
}

/// Parse `argv` and run; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(err, "{e}");
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_DETERMINED,
                _ => EXIT_ERROR,
            };
        }
    };
    let args = echoed_args(&argv);
    match execute(cli, args, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}
