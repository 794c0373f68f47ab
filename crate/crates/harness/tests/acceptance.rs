//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --release -p quantopt-harness --test acceptance -- --nocapture`
//! to see the report.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use quantopt_harness::experiment::median;
use quantopt_harness::validate::{self, Check};
use quantopt_harness::{run_experiment, ExperimentConfig, SummaryRow};

struct Verdict {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn timed(limit: Duration, check: impl FnOnce() -> Check) -> (bool, String) {
    let start = Instant::now();
    let c = check();
    let took = start.elapsed();
    let in_time = took < limit;
    let mut detail = format!("{} [{:.1}s", c.detail, took.as_secs_f64());
    if !in_time {
        detail.push_str(&format!(", limit {}s exceeded", limit.as_secs()));
    }
    detail.push(']');
    (c.passed && in_time, detail)
}

fn summary<'a>(rows: &'a [SummaryRow], function: &str, algorithm: &str) -> &'a SummaryRow {
    rows.iter().find(|s| s.function == function && s.algorithm == algorithm).expect("configured cell")
}

fn benchmark_criteria() -> (Verdict, Verdict) {
    let start = Instant::now();
    let text = r#"
functions = ["drop_wave", "salomon", "schaffer_n2", "xin_she_yang_n4"]
algorithms = ["qbo"]
seed_base = 0
n_seeds = 50
max_evaluations = 100000
success_tolerance = 1e-3
"#;
    let qbo = run_experiment(&ExperimentConfig::from_toml_str(text, &[]).unwrap(), 0).unwrap();
    let took = start.elapsed();
    let sa_text = text
        .replace(r#"["drop_wave", "salomon", "schaffer_n2", "xin_she_yang_n4"]"#, r#"["drop_wave", "schaffer_n2"]"#)
        .replace(r#"["qbo"]"#, r#"["sa"]"#);
    let sa = run_experiment(&ExperimentConfig::from_toml_str(&sa_text, &[]).unwrap(), 0).unwrap();

    let mut passed = took < Duration::from_secs(300);
    let mut parts = Vec::new();
    for f in ["drop_wave", "schaffer_n2", "salomon"] {
        let s = summary(&qbo.summary, f, "qbo");
        passed &= s.success_rate >= 0.95;
        parts.push(format!("{f} {}/{}", s.successes, s.runs));
    }
    let yang: Vec<f64> = qbo.rows.iter().filter(|r| r.function == "xin_she_yang_n4").map(|r| r.best_f).collect();
    let mut sorted = yang.clone();
    sorted.sort_by(f64::total_cmp);
    parts.push(format!(
        "xin_she_yang_n4 best_f min {:.2e} median {:.2e} max {:.2e}",
        sorted[0],
        median(&yang).unwrap(),
        sorted[sorted.len() - 1]
    ));
    parts.push(format!("[{:.1}s]", took.as_secs_f64()));
    let success = Verdict { id: 4, title: "QBO success rate", passed, detail: parts.join("; ") };

    let mut passed = true;
    let mut parts = Vec::new();
    for f in ["drop_wave", "schaffer_n2"] {
        let q = summary(&qbo.summary, f, "qbo").median_iterations;
        let s = summary(&sa.summary, f, "sa").median_iterations;
        let ok = match (q, s) {
            (Some(q), Some(s)) => q < s,
            (Some(_), None) => true,
            (None, _) => false,
        };
        passed &= ok;
        let show = |m: Option<f64>| m.map_or("inf".to_string(), |v| v.to_string());
        parts.push(format!("{f} median QBO {} vs SA {}", show(q), show(s)));
    }
    let ordering = Verdict { id: 5, title: "QBO faster than SA", passed, detail: parts.join("; ") };
    (success, ordering)
}

fn reproducibility() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"
functions = ["drop_wave", "schaffer_n2", "salomon"]
algorithms = ["qbo", "sa", "qa"]
seed_base = 7
n_seeds = 5
max_evaluations = 20000
"#;
    fs::write(dir.path().join("exp.toml"), config).unwrap();
    let mut outputs = Vec::new();
    for (jobs, out) in [("1", "a"), ("1", "b"), ("8", "c")] {
        let status = Command::new(env!("CARGO_BIN_EXE_quantopt"))
            .args(["run", "exp.toml", "--jobs", jobs, "--output-dir", out])
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        outputs.push(fs::read(dir.path().join(out).join("results.csv")).unwrap());
    }
    let passed = outputs[0] == outputs[1] && outputs[0] == outputs[2];
    Verdict {
        id: 10,
        title: "byte-identical results",
        passed,
        detail: format!("repeat equal {}, --jobs 1 vs 8 equal {}", outputs[0] == outputs[1], outputs[0] == outputs[2]),
    }
}

fn from_check(id: u32, title: &'static str, limit: Option<Duration>, check: fn() -> Check) -> Verdict {
    let (passed, detail) = timed(limit.unwrap_or(Duration::MAX), check);
    Verdict { id, title, passed, detail }
}

#[test]
fn acceptance() {
    let mut verdicts = vec![
        from_check(1, "quantization error model", Some(Duration::from_secs(10)), validate::quantization_error_model),
        from_check(2, "quantizer algebra", None, validate::quantizer_algebra),
        from_check(3, "objective calculus", None, validate::objective_calculus),
    ];
    let (success, ordering) = benchmark_criteria();
    verdicts.push(success);
    verdicts.push(ordering);
    verdicts.push(from_check(6, "langevin stationarity", Some(Duration::from_secs(30)), validate::langevin_stationarity));
    verdicts.push(from_check(7, "witten potential", None, validate::witten_identity));
    verdicts.push(from_check(8, "escape rate", Some(Duration::from_secs(120)), validate::escape_rate_ordering));
    verdicts.push(from_check(9, "search noise bound", None, validate::lemma1_bound));
    verdicts.push(reproducibility());

    for v in &verdicts {
        println!("{} criterion {:>2} ({}): {}", if v.passed { "PASS" } else { "FAIL" }, v.id, v.title, v.detail);
    }
    let failed: Vec<u32> = verdicts.iter().filter(|v| !v.passed).map(|v| v.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
