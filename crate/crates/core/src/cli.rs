//! Command-line front end. `run_with` takes explicit output streams so it
//! can be driven in-process.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::affine::GroupSpec;
use crate::classifier::{classify_group, homeomorphy_note, ClassifyError};
use crate::invariant::{enumerate_words_with_budget, InvariantError, DEFAULT_ELEMENT_BUDGET};
use crate::io::{component_label, load_spec, parse_point, DescriptionJson, OmegaJson, PointError, ReportJson, SpecError};
use crate::linalg::Vector;
use crate::simulator::{density_report, point_to_f64, sample_orbit, write_csv, DensityReport, SampleConfig, SimError};

pub mod exit {
    pub const OK: u8 = 0;
    /// `member` answered false, or `verify` failed its thresholds.
    pub const NEGATIVE: u8 = 1;
    pub const ABELIAN: u8 = 2;
    /// An exact closure needed for the answer is unresolved or unavailable.
    pub const UNRESOLVED: u8 = 3;
    pub const BUDGET_EXCEEDED: u8 = 4;
    pub const PARSE_ERROR: u8 = 64;
    pub const SEMANTIC_ERROR: u8 = 65;
    pub const NO_INPUT: u8 = 66;
}

pub const THREADS_ENV: &str = "HOMOTHETY_THREADS";

#[derive(Debug, Parser)]
#[command(name = "homothety", version, about = "Orbit closures of groups of homotheties and translations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the group and print the JSON report.
    Classify { spec: PathBuf },
    /// Describe the orbit closure of a point.
    Closure {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Exact membership of a query point in the orbit closure of a point.
    Member {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        query: String,
    },
    /// Sample orbit points by random words and write them as CSV.
    Simulate {
        spec: PathBuf,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare sampled orbit points with the predicted closure.
    Verify {
        spec: PathBuf,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Probe grid step.
        #[arg(long, default_value_t = 0.25)]
        grid: f64,
        /// Coverage radius.
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Largest accepted distance from a sample to the predicted set.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Smallest accepted coverage fraction.
        #[arg(long, default_value_t = 0.95)]
        min_coverage: f64,
    },
    /// Enumerate group elements up to a word length and print the buckets.
    Oracle {
        spec: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_word_len: usize,
        #[arg(long, default_value_t = DEFAULT_ELEMENT_BUDGET)]
        budget: usize,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct SamplingArgs {
    /// Starting point; the origin when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    #[arg(long, default_value_t = SampleConfig::DEFAULT_NUM_WORDS)]
    pub steps: usize,
    #[arg(long, default_value_t = SampleConfig::DEFAULT_MAX_WORD_LEN)]
    pub max_word_len: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Half-width of the sampling window.
    #[arg(long, default_value_t = SampleConfig::DEFAULT_WINDOW)]
    pub window: f64,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        let code = match &e {
            SpecError::Read { .. } => exit::NO_INPUT,
            e if e.is_syntax() => exit::PARSE_ERROR,
            _ => exit::SEMANTIC_ERROR,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<PointError> for Failure {
    fn from(e: PointError) -> Self {
        let code = match &e {
            PointError::Literal(crate::scalar::ScalarError::Syntax { .. }) => exit::PARSE_ERROR,
            _ => exit::SEMANTIC_ERROR,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        let code = match &e {
            ClassifyError::AbelianGroup | ClassifyError::Invariant(InvariantError::AbelianGroup) => exit::ABELIAN,
            ClassifyError::UnresolvedClosure { .. } | ClassifyError::NonRationalRatio(_) => exit::UNRESOLVED,
            ClassifyError::Invariant(InvariantError::BudgetExceeded(_)) => exit::BUDGET_EXCEEDED,
            _ => exit::SEMANTIC_ERROR,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Classify(c) => c.into(),
            SimError::InvalidConfig(_) | SimError::DimensionMismatch { .. } => {
                Failure { code: exit::SEMANTIC_ERROR, message: e.to_string() }
            }
            SimError::Io(_) => Failure { code: exit::NO_INPUT, message: e.to_string() },
        }
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        let code = match e {
            InvariantError::BudgetExceeded(_) => exit::BUDGET_EXCEEDED,
            _ => exit::SEMANTIC_ERROR,
        };
        Failure { code, message: e.to_string() }
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    let _ = writeln!(out, "{text}");
}

fn point_or_origin(spec: &GroupSpec, text: Option<&str>) -> Result<Vector, Failure> {
    match text {
        Some(t) => Ok(parse_point(t, spec.context(), spec.dim())?),
        None => Ok(spec.identity().translation().to_vec()),
    }
}

fn sample_config(spec: &GroupSpec, args: &SamplingArgs) -> Result<(Vector, SampleConfig), Failure> {
    let x = point_or_origin(spec, args.point.as_deref())?;
    let cfg = SampleConfig {
        x: point_to_f64(&x),
        num_words: args.steps,
        max_word_len: args.max_word_len,
        window: args.window,
        seed: args.seed,
    };
    cfg.validate()?;
    Ok((x, cfg))
}

#[derive(Serialize)]
struct ClosureOutput {
    description: DescriptionJson,
    components: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    cosets_coincide: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    compared_with_origin: Option<String>,
}

#[derive(Serialize)]
struct VerifyOutput {
    #[serde(flatten)]
    report: DensityReport,
    tol: f64,
    min_coverage: f64,
    passed: bool,
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<u8, Failure> {
    match cli.command {
        Command::Classify { spec } => {
            let spec = load_spec(&spec)?;
            let report = classify_group(&spec)?;
            emit_json(out, &ReportJson::from(&report));
            let undecided = report.warnings.iter().any(|w| w.starts_with("Unresolved") || w.starts_with("NonRational"));
            Ok(if undecided { exit::UNRESOLVED } else { exit::OK })
        }
        Command::Closure { spec, point } => {
            let spec = load_spec(&spec)?;
            let x = parse_point(&point, spec.context(), spec.dim())?;
            let report = classify_group(&spec)?;
            let desc = report.orbit_closure(&x)?;
            let components = desc.connected_components()?;
            let origin = spec.identity().translation().to_vec();
            let compared_with_origin = if x == origin {
                None
            } else {
                let c0 = report.orbit_closure(&origin)?.connected_components()?;
                Some(format!("orbit closures of the origin and of the point: {}", homeomorphy_note(c0, components)))
            };
            emit_json(
                out,
                &ClosureOutput {
                    description: (&desc).into(),
                    components: component_label(components),
                    cosets_coincide: desc.cosets_coincide()?,
                    compared_with_origin,
                },
            );
            Ok(exit::OK)
        }
        Command::Member { spec, point, query } => {
            let spec = load_spec(&spec)?;
            let x = parse_point(&point, spec.context(), spec.dim())?;
            let y = parse_point(&query, spec.context(), spec.dim())?;
            let desc = classify_group(&spec)?.orbit_closure(&x)?;
            let inside = desc.member(&y)?;
            let _ = writeln!(out, "{inside}");
            Ok(if inside { exit::OK } else { exit::NEGATIVE })
        }
        Command::Simulate { spec, sampling, out: path } => {
            let spec = load_spec(&spec)?;
            let (_, cfg) = sample_config(&spec, &sampling)?;
            let sample = sample_orbit(&spec, &cfg)?;
            match path {
                Some(p) => {
                    let file = std::fs::File::create(&p)
                        .map_err(|e| Failure { code: exit::NO_INPUT, message: format!("{}: {e}", p.display()) })?;
                    write_csv(&sample.points, spec.dim(), std::io::BufWriter::new(file)).map_err(SimError::from)?;
                }
                None => write_csv(&sample.points, spec.dim(), &mut *out).map_err(SimError::from)?,
            }
            Ok(exit::OK)
        }
        Command::Verify { spec, sampling, grid, eps, tol, min_coverage } => {
            let spec = load_spec(&spec)?;
            let (x, cfg) = sample_config(&spec, &sampling)?;
            if !(grid > 0.0 && eps > 0.0) {
                return Err(Failure { code: exit::SEMANTIC_ERROR, message: "grid and eps must be positive".into() });
            }
            let desc = classify_group(&spec)?.orbit_closure(&x)?;
            let sample = sample_orbit(&spec, &cfg)?;
            let report = density_report(&sample, &desc, cfg.window, grid, eps)?;
            let passed = report.max_deviation <= tol && report.coverage >= min_coverage;
            emit_json(out, &VerifyOutput { report, tol, min_coverage, passed });
            Ok(if passed { exit::OK } else { exit::NEGATIVE })
        }
        Command::Oracle { spec, max_word_len, budget } => {
            let spec = load_spec(&spec)?;
            let sample = enumerate_words_with_budget(&spec, max_word_len, budget)?;
            emit_json(out, &OmegaJson::new(&spec, &sample));
            Ok(exit::OK)
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parse `args` (including the program name) and run, writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::PARSE_ERROR } else { exit::OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    configure_threads();
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "homothety: {}", f.message);
            f.code
        }
    }
}

pub fn run() -> u8 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
