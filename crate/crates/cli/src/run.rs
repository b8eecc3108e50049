//! The evaluation loop.

use std::collections::VecDeque;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::time::{Duration, Instant};

use dynroc_core::DataPoint;

use crate::config::{Mode, RunConfig};
use crate::engine::{baseline, compare, Engine, MetricSpec};
use crate::error::CliError;
use crate::input::Records;
use crate::output::{MetricReport, ReportWriter};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSummary {
    pub steps: u64,
    pub reports: u64,
}

impl RunConfig {
    pub fn metric_spec(&self) -> MetricSpec {
        MetricSpec {
            outputs: self.outputs,
            params: self.params,
            priors: self.priors,
            epsilon: self.epsilon,
        }
    }
}

/// Runs the evaluation over `points`, writing one report every
/// `report_every` steps.
pub fn run<I, W>(cfg: &RunConfig, points: I, out: W) -> Result<RunSummary, CliError>
where
    I: IntoIterator<Item = Result<DataPoint, CliError>>,
    W: Write,
{
    let spec = cfg.metric_spec();
    let mut engine = Engine::new(spec);
    let mut writer =
        ReportWriter::new(out, cfg.format).map_err(|e| CliError::io("writing output", e))?;
    let window = match cfg.mode {
        Mode::Sliding => cfg.window,
        Mode::Cumulative => None,
    };
    // Sliding mode needs the evicted point; baseline mode needs the whole
    // retained multiset.
    let keep = window.is_some() || cfg.baseline;
    let mut retained: VecDeque<DataPoint> = VecDeque::new();
    let mut step = 0u64;
    let mut reports = 0u64;
    let mut update_time = Duration::ZERO;
    let mut baseline_time = Duration::ZERO;

    for p in points {
        let p = p?;
        step += 1;
        let started = Instant::now();
        engine.add(p);
        if keep {
            retained.push_back(p);
        }
        if let Some(w) = window {
            if step > w {
                let old = retained.pop_front().expect("window is full");
                engine.delete(old);
            }
        }
        let values = engine.values();
        update_time += started.elapsed();

        if cfg.baseline {
            let started = Instant::now();
            let flat: Vec<DataPoint> = retained.iter().copied().collect();
            let base = baseline(&flat, &spec);
            baseline_time += started.elapsed();
            if let Err((metric, dynamic, baseline)) = compare(&values, &base, cfg.epsilon) {
                return Err(CliError::BaselineMismatch {
                    step,
                    metric,
                    dynamic,
                    baseline,
                });
            }
        }

        if step.is_multiple_of(cfg.report_every) {
            let n = values.totals;
            let report = MetricReport {
                step,
                n: n.total(),
                n1: n.c1,
                n2: n.c2,
                auc: values.auc,
                h_exact: values.h_exact,
                h_approx: values.h_approx,
                update_micros: micros(update_time),
                baseline_micros: cfg.baseline.then(|| micros(baseline_time)),
            };
            writer
                .write(&report)
                .map_err(|e| CliError::io("writing output", e))?;
            reports += 1;
            update_time = Duration::ZERO;
            baseline_time = Duration::ZERO;
        }
    }
    writer
        .finish()
        .map_err(|e| CliError::io("writing output", e))?;
    Ok(RunSummary {
        steps: step,
        reports,
    })
}

fn micros(d: Duration) -> u64 {
    u64::try_from(d.as_micros()).unwrap_or(u64::MAX)
}

/// Opens the configured input and output and runs.
pub fn execute(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let input: Box<dyn io::BufRead> = match &cfg.input {
        Some(path) => {
            let f = File::open(path)
                .map_err(|e| CliError::io(format!("opening {}", path.display()), e))?;
            Box::new(BufReader::new(f))
        }
        None => Box::new(io::stdin().lock()),
    };
    let records = Records::new(input, cfg.labels.clone(), cfg.has_header);
    match &cfg.output {
        Some(path) => {
            let f = File::create(path)
                .map_err(|e| CliError::io(format!("creating {}", path.display()), e))?;
            run(cfg, records, BufWriter::new(f))
        }
        None => run(cfg, records, BufWriter::new(io::stdout().lock())),
    }
}
