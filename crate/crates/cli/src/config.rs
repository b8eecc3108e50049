//! Command-line arguments and the validated run configuration.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use dynroc_core::{BetaParams, Priors};

use crate::error::CliError;
use crate::input::LabelMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Cumulative,
    Sliding,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

/// Evaluate AUC and H-measure over a stream of `score,label` lines.
#[derive(Debug, Clone, Parser)]
#[command(name = "dynroc", version)]
pub struct Args {
    /// Input CSV; standard input when absent or `-`.
    pub input: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "cumulative")]
    pub mode: Mode,

    /// Window size for sliding mode (at least 2).
    #[arg(long)]
    pub window: Option<u64>,

    /// Comma-separated subset of auc, h, happrox.
    #[arg(long, default_value = "auc,h")]
    pub metrics: String,

    /// Approximation factor for happrox.
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub epsilon: f64,

    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub alpha: f64,

    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub beta: f64,

    /// `empirical` or `P1,P2`.
    #[arg(long, default_value = "empirical")]
    pub priors: String,

    #[arg(long, default_value_t = 1)]
    pub report_every: u64,

    /// Recompute every step from scratch, compare, and time it.
    #[arg(long)]
    pub baseline: bool,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Skip the first input line.
    #[arg(long)]
    pub has_header: bool,

    /// Label tokens as `1=TOKEN,2=TOKEN`.
    #[arg(long)]
    pub label_map: Option<String>,
}

/// Requested metrics, as named on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MetricSet {
    pub auc: bool,
    pub h: bool,
    pub happrox: bool,
}

pub fn parse_metrics(spec: &str) -> Result<MetricSet, String> {
    let mut m = MetricSet::default();
    for name in spec.split(',').map(str::trim) {
        match name {
            "auc" => m.auc = true,
            "h" => m.h = true,
            "happrox" => m.happrox = true,
            other => {
                return Err(format!(
                    "unknown metric `{other}` (expected auc, h, happrox)"
                ))
            }
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorChoice {
    Empirical,
    Explicit(Priors),
}

pub fn parse_priors(spec: &str) -> Result<PriorChoice, String> {
    let spec = spec.trim();
    if spec == "empirical" {
        return Ok(PriorChoice::Empirical);
    }
    let (a, b) = spec
        .split_once(',')
        .ok_or_else(|| format!("priors `{spec}` must be `empirical` or `P1,P2`"))?;
    let p1: f64 = a
        .trim()
        .parse()
        .map_err(|_| format!("prior `{a}` is not a number"))?;
    let p2: f64 = b
        .trim()
        .parse()
        .map_err(|_| format!("prior `{b}` is not a number"))?;
    Priors::new(p1, p2)
        .map(PriorChoice::Explicit)
        .map_err(|e| e.to_string())
}

/// Which columns a run fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outputs {
    pub auc: bool,
    pub h_exact: bool,
    pub h_approx: bool,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub window: Option<u64>,
    pub outputs: Outputs,
    pub epsilon: f64,
    pub params: BetaParams,
    pub priors: PriorChoice,
    pub report_every: u64,
    pub baseline: bool,
    pub format: Format,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub has_header: bool,
    pub labels: LabelMap,
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<RunConfig, CliError> {
        let cfg = |m: String| CliError::Config(m);
        let window = match (args.mode, args.window) {
            (Mode::Sliding, Some(w)) if w >= 2 => Some(w),
            (Mode::Sliding, Some(w)) => {
                return Err(cfg(format!("--window must be at least 2, got {w}")))
            }
            (Mode::Sliding, None) => return Err(cfg("--mode sliding requires --window".into())),
            (Mode::Cumulative, Some(_)) => {
                return Err(cfg("--window only applies to --mode sliding".into()))
            }
            (Mode::Cumulative, None) => None,
        };
        if args.report_every == 0 {
            return Err(cfg("--report-every must be positive".into()));
        }
        if !(args.epsilon > 0.0 && args.epsilon.is_finite()) {
            return Err(cfg(format!(
                "--epsilon must be positive, got {}",
                args.epsilon
            )));
        }
        let params = BetaParams::new(args.alpha, args.beta).map_err(|e| cfg(e.to_string()))?;
        let priors = parse_priors(&args.priors).map_err(cfg)?;
        let metrics = parse_metrics(&args.metrics).map_err(cfg)?;
        // Exact H needs priors taken from the evaluated data itself.
        let explicit = matches!(priors, PriorChoice::Explicit(_));
        let outputs = Outputs {
            auc: metrics.auc,
            h_exact: metrics.h && !explicit,
            h_approx: metrics.happrox || (metrics.h && explicit),
        };
        let labels = match &args.label_map {
            Some(spec) => LabelMap::parse(spec).map_err(cfg)?,
            None => LabelMap::default(),
        };
        let input = args.input.filter(|p| p.as_os_str() != "-");
        Ok(RunConfig {
            mode: args.mode,
            window,
            outputs,
            epsilon: args.epsilon,
            params,
            priors,
            report_every: args.report_every,
            baseline: args.baseline,
            format: args.format,
            input,
            output: args.output,
            has_header: args.has_header,
            labels,
        })
    }

    /// Parses and validates a full command line (program name first).
    pub fn from_cli<I, T>(argv: I) -> Result<RunConfig, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let args = Args::try_parse_from(argv).map_err(|e| CliError::Config(e.to_string()))?;
        RunConfig::from_args(args)
    }
}
