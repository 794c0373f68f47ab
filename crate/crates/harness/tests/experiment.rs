use std::fs;

use quantopt::quantize;
use quantopt_harness::output::{parse_results_csv, results_csv, RESULTS_HEADER};
use quantopt_harness::{run_experiment, write_outputs, ExperimentConfig, HarnessError, ResultRow};

fn config(extra: &str) -> ExperimentConfig {
    let text = format!(
        r#"
functions = ["xin_she_yang_n4", "salomon", "drop_wave", "schaffer_n2"]
algorithms = ["qbo", "sa", "qa"]
seeds = [3]
max_evaluations = 2000
{extra}
"#
    );
    ExperimentConfig::from_toml_str(&text, &[]).unwrap()
}

#[test]
fn twelve_cells_give_twelve_rows_each() {
    let exp = run_experiment(&config(""), 0).unwrap();
    assert_eq!(exp.rows.len(), 12);
    assert_eq!(exp.summary.len(), 12);
    assert!(exp.traces.is_empty());
    let keys: Vec<(String, String)> = exp.rows.iter().map(|r| (r.function.clone(), r.algorithm.clone())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for r in &exp.rows {
        assert!((0.0..=100.0).contains(&r.improvement_ratio));
        assert!(r.evaluations <= 2000);
        assert!(r.wall_ms.is_none());
    }
}

#[test]
fn row_count_is_the_cell_product() {
    let text = r#"
functions = ["drop_wave", "sphere"]
algorithms = ["sa", "qbo"]
seed_base = 100
n_seeds = 4
max_evaluations = 500
"#;
    let exp = run_experiment(&ExperimentConfig::from_toml_str(text, &[]).unwrap(), 2).unwrap();
    assert_eq!(exp.rows.len(), 2 * 2 * 4);
    assert_eq!(exp.summary.len(), 4);
    assert_eq!(exp.rows[0].algorithm, "qbo");
    assert_eq!(exp.rows.iter().map(|r| r.seed).take(4).collect::<Vec<_>>(), vec![100, 101, 102, 103]);
}

#[test]
fn traced_run_writes_manifest_and_replayable_traces() {
    let dir = tempfile::tempdir().unwrap();
    let exp = run_experiment(&config("trace = true"), 0).unwrap();
    let manifest = write_outputs(&exp.rows, &exp.summary, &exp.traces, dir.path()).unwrap();
    let jsonl = manifest.files.iter().filter(|(n, _)| n.ends_with(".jsonl")).count();
    assert_eq!(jsonl, 12);
    assert_eq!(manifest.files.len(), 15);
    for (name, size) in &manifest.files {
        assert_eq!(fs::metadata(dir.path().join(name)).unwrap().len(), *size, "{name}");
    }
    let listed = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
    assert_eq!(listed.lines().count(), 15);

    let text = fs::read_to_string(dir.path().join("trace_drop_wave_qbo_3.jsonl")).unwrap();
    let mut lines = 0;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let obj = v.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(keys, ["accepted", "f", "fq", "qp", "t", "x"]);
        let (f, fq, qp) = (v["f"].as_f64().unwrap(), v["fq"].as_f64().unwrap(), v["qp"].as_f64().unwrap());
        assert_eq!(quantize(f, qp).unwrap().quantized, fq);
        lines += 1;
    }
    let row = exp.rows.iter().find(|r| r.function == "drop_wave" && r.algorithm == "qbo").unwrap();
    assert_eq!(lines as u64, row.evaluations);
}

#[test]
fn results_round_trip_through_csv() {
    let exp = run_experiment(&config("timing = true"), 0).unwrap();
    let text = results_csv(&exp.rows);
    assert!(text.starts_with(RESULTS_HEADER));
    let parsed = parse_results_csv(&text).unwrap();
    assert_eq!(parsed.len(), exp.rows.len());
    let close = |a: f64, b: f64| (a - b).abs() <= 5e-6 * a.abs().max(b.abs()) || a == b;
    for (p, r) in parsed.iter().zip(&exp.rows) {
        assert_eq!((&p.function, &p.algorithm, p.seed), (&r.function, &r.algorithm, r.seed));
        assert_eq!(p.iterations_to_success, r.iterations_to_success);
        assert_eq!(p.evaluations, r.evaluations);
        assert!(close(p.best_f, r.best_f), "{} vs {}", p.best_f, r.best_f);
        assert!(close(p.improvement_ratio, r.improvement_ratio));
        assert!(close(p.wall_ms.unwrap(), r.wall_ms.unwrap()));
    }
}

#[test]
fn failure_fields_are_blank() {
    let text = r#"
functions = ["salomon"]
algorithms = ["qbo"]
seeds = [1]
max_evaluations = 5
success_tolerance = 0.0
"#;
    let exp = run_experiment(&ExperimentConfig::from_toml_str(text, &[]).unwrap(), 1).unwrap();
    let csv = results_csv(&exp.rows);
    let line = csv.lines().nth(1).unwrap();
    assert!(line.starts_with("salomon,qbo,1,,5,"), "{line}");
    assert!(line.ends_with(','));
}

#[test]
fn full_improvement_prints_as_100() {
    let row = ResultRow {
        function: "sphere".into(),
        algorithm: "qbo".into(),
        seed: 0,
        iterations_to_success: Some(17),
        evaluations: 18,
        best_f: 0.0,
        improvement_ratio: 100.0,
        wall_ms: None,
    };
    assert_eq!(results_csv(&[row]).lines().nth(1).unwrap(), "sphere,qbo,0,17,18,0,100,");
}

#[test]
fn unwritable_output_is_an_io_error_without_torn_files() {
    let dir = tempfile::tempdir().unwrap();
    let exp = run_experiment(&config(""), 0).unwrap();
    // a directory squatting on one target name makes the rename fail
    fs::create_dir(dir.path().join("summary.csv")).unwrap();
    let err = write_outputs(&exp.rows, &exp.summary, &[], dir.path()).unwrap_err();
    assert!(matches!(err, HarnessError::Io { .. }));
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("summary.csv"));
    let left: Vec<String> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert_eq!(left, ["summary.csv"]);

    let file = dir.path().join("plain");
    fs::write(&file, "x").unwrap();
    let err = write_outputs(&exp.rows, &exp.summary, &[], &file.join("sub")).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn zero_rows_write_header_only() {
    let dir = tempfile::tempdir().unwrap();
    write_outputs(&[], &[], &[], dir.path()).unwrap();
    assert_eq!(fs::read_to_string(dir.path().join("results.csv")).unwrap(), format!("{RESULTS_HEADER}\n"));
}
