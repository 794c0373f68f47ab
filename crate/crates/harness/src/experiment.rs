//! Multi-seed experiment execution.

use std::time::Instant;

use quantopt::{run, Algorithm, RunConfig64, RunTrace64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};

/// Outcome of one (function, algorithm, seed) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub function: String,
    pub algorithm: String,
    pub seed: u64,
    /// Evaluation index at which the incumbent first met the tolerance.
    pub iterations_to_success: Option<u64>,
    pub evaluations: u64,
    pub best_f: f64,
    pub improvement_ratio: f64,
    pub wall_ms: Option<f64>,
}

/// Aggregate over the seeds of one (function, algorithm) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub function: String,
    pub algorithm: String,
    pub runs: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Median with failed runs counted as infinitely slow; `None` when that
    /// median is infinite.
    pub median_iterations: Option<f64>,
    pub median_best_f: f64,
    pub mean_improvement_ratio: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Experiment {
    pub rows: Vec<ResultRow>,
    pub summary: Vec<SummaryRow>,
    /// Full traces in row order, present only when tracing is enabled.
    pub traces: Vec<RunTrace64>,
}

/// Runs every cell of `config` on up to `jobs` threads (0 lets rayon decide).
///
/// All names are resolved before the first run starts, and the output order
/// depends only on the config, never on scheduling.
pub fn run_experiment(config: &ExperimentConfig, jobs: usize) -> Result<Experiment> {
    config.validate()?;
    let algorithms = config.algorithm_list()?;
    let seeds = config.seed_list()?;
    let params = config.params()?;
    let mut cells = Vec::new();
    for function in &config.functions {
        let objective = config.objective(function)?;
        for &algorithm in &algorithms {
            for &seed in &seeds {
                let mut run_config = RunConfig64::new(objective.clone(), seed, config.max_evaluations, config.success_tolerance)?;
                run_config.keep_records = config.trace;
                cells.push((function.clone(), algorithm, run_config));
            }
        }
    }
    cells.sort_by(|a, b| (&a.0, a.1.name(), a.2.seed).cmp(&(&b.0, b.1.name(), b.2.seed)));

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot start {jobs} worker threads: {e}")))?;
    let outcomes: Vec<Result<(ResultRow, RunTrace64)>> = pool.install(|| {
        cells
            .par_iter()
            .map(|(function, algorithm, run_config)| run_cell(function, *algorithm, run_config, &params, config.timing))
            .collect()
    });

    let mut experiment = Experiment::default();
    for outcome in outcomes {
        let (row, trace) = outcome?;
        experiment.rows.push(row);
        if config.trace {
            experiment.traces.push(trace);
        }
    }
    experiment.summary = summarize(&experiment.rows);
    Ok(experiment)
}

fn run_cell(
    function: &str,
    algorithm: Algorithm,
    run_config: &RunConfig64,
    params: &quantopt::AlgorithmParams64,
    timing: bool,
) -> Result<(ResultRow, RunTrace64)> {
    let start = Instant::now();
    let trace = run(algorithm, run_config, params)?;
    let wall_ms = timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let row = ResultRow {
        function: function.to_string(),
        algorithm: algorithm.name().to_string(),
        seed: trace.seed,
        iterations_to_success: trace.iterations_to_success,
        evaluations: trace.evaluations_used,
        best_f: trace.best_f,
        improvement_ratio: trace.improvement_ratio(run_config.objective.opt_value())?,
        wall_ms,
    };
    Ok((row, trace))
}

/// One summary row per (function, algorithm), in the order of `rows`.
pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let mut out: Vec<SummaryRow> = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let key = (&rows[start].function, &rows[start].algorithm);
        let end = start + rows[start..].iter().take_while(|r| (&r.function, &r.algorithm) == key).count();
        let group = &rows[start..end];
        let iterations: Vec<f64> =
            group.iter().map(|r| r.iterations_to_success.map_or(f64::INFINITY, |t| t as f64)).collect();
        let best: Vec<f64> = group.iter().map(|r| r.best_f).collect();
        let successes = group.iter().filter(|r| r.iterations_to_success.is_some()).count();
        let median_iterations = median(&iterations).filter(|m| m.is_finite());
        out.push(SummaryRow {
            function: key.0.clone(),
            algorithm: key.1.clone(),
            runs: group.len(),
            successes,
            success_rate: successes as f64 / group.len() as f64,
            median_iterations,
            median_best_f: median(&best).unwrap_or(f64::NAN),
            mean_improvement_ratio: group.iter().map(|r| r.improvement_ratio).sum::<f64>() / group.len() as f64,
        });
        start = end;
    }
    out
}

/// Median of `values`, averaging the middle pair for even counts.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 })
}
