use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quantopt_harness::{grid_sample, run_experiment, validate, write_outputs, ExperimentConfig, HarnessError, Slice};

#[derive(Parser)]
#[command(name = "quantopt", version, about = "Quantization-based global optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (function, algorithm, seed) cell of a config file.
    Run {
        config: PathBuf,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        output_dir: Option<PathBuf>,
        #[arg(long)]
        max_evaluations: Option<u64>,
        #[arg(long)]
        success_tolerance: Option<f64>,
        #[arg(long)]
        seed_base: Option<u64>,
        #[arg(long)]
        n_seeds: Option<u64>,
        /// Write one JSONL trace per cell.
        #[arg(long)]
        trace: bool,
        /// Record wall-clock time per cell.
        #[arg(long)]
        timing: bool,
        /// Override any config key, e.g. `--set sa.alpha=0.99`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Sample an objective over its search box as CSV.
    Grid {
        objective: String,
        #[arg(long)]
        resolution: usize,
        /// Fix one coordinate, e.g. `y=0`.
        #[arg(long)]
        slice: Option<String>,
        /// Box `lo,hi` applied to both coordinates.
        #[arg(long, value_name = "LO,HI", allow_hyphen_values = true)]
        r#box: Option<String>,
        /// Write to a file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the quantizer and Langevin statistical suites.
    Validate,
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(command: Command) -> Result<ExitCode, HarnessError> {
    match command {
        Command::Run { config, jobs, output_dir, max_evaluations, success_tolerance, seed_base, n_seeds, trace, timing, mut set } => {
            let flags = [
                output_dir.map(|v| format!("output_dir={:?}", v.display().to_string())),
                max_evaluations.map(|v| format!("max_evaluations={v}")),
                success_tolerance.map(|v| format!("success_tolerance={v:e}")),
                seed_base.map(|v| format!("seed_base={v}")),
                n_seeds.map(|v| format!("n_seeds={v}")),
                trace.then(|| "trace=true".to_string()),
                timing.then(|| "timing=true".to_string()),
            ];
            set.extend(flags.into_iter().flatten());
            let cfg = ExperimentConfig::load(&config, &set)?;
            let experiment = run_experiment(&cfg, jobs)?;
            let manifest = write_outputs(&experiment.rows, &experiment.summary, &experiment.traces, &cfg.output_dir)?;
            println!("{:<16} {:<4} {:>5} {:>9} {:>14}", "function", "alg", "runs", "success", "median_iters");
            for s in &experiment.summary {
                let median = s.median_iterations.map_or("-".to_string(), |m| format!("{m}"));
                println!("{:<16} {:<4} {:>5} {:>9.3} {:>14}", s.function, s.algorithm, s.runs, s.success_rate, median);
            }
            println!("wrote {} files to {}", manifest.files.len(), cfg.output_dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Grid { objective, resolution, slice, r#box, output } => {
            let mut obj = quantopt::Objective64::by_name(&objective, 2)?;
            if let Some(bounds) = r#box {
                let parsed: Option<Vec<f64>> = bounds.split(',').map(|v| v.trim().parse().ok()).collect();
                let Some([lo, hi]) = parsed.as_deref().and_then(|v| <[f64; 2]>::try_from(v).ok()) else {
                    return Err(HarnessError::Config(format!("--box expects `lo,hi`, got `{bounds}`")));
                };
                let d = obj.dim();
                obj = obj.with_box(vec![lo; d], vec![hi; d])?;
            }
            let slice = slice.map(|s| s.parse::<Slice>()).transpose()?;
            let csv = grid_sample(&obj, resolution, slice)?.to_csv();
            match output {
                Some(path) => std::fs::write(&path, csv).map_err(|e| HarnessError::Io { path, source: e })?,
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate => {
            let checks = validate::all_checks();
            for c in &checks {
                println!("{c}");
            }
            Ok(if checks.iter().all(|c| c.passed) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}
