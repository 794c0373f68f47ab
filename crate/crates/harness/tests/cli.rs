use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn quantopt(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quantopt")).args(args).current_dir(cwd).output().unwrap()
}

const CONFIG: &str = r#"
functions = ["drop_wave", "schaffer_n2"]
algorithms = ["qbo", "sa", "qa"]
seed_base = 0
n_seeds = 4
max_evaluations = 3000
output_dir = "out"
"#;

#[test]
fn run_is_byte_identical_across_repeats_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("exp.toml"), CONFIG).unwrap();
    let mut files = Vec::new();
    for (jobs, out) in [("1", "a"), ("8", "b"), ("8", "c")] {
        let o = quantopt(&["run", "exp.toml", "--jobs", jobs, "--output-dir", out, "--trace"], dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        files.push(fs::read(dir.path().join(out).join("results.csv")).unwrap());
        let traces = fs::read(dir.path().join(out).join("trace_schaffer_n2_qa_2.jsonl")).unwrap();
        files.push(traces);
    }
    assert_eq!(files[0], files[2]);
    assert_eq!(files[0], files[4]);
    assert_eq!(files[1], files[3]);
    assert_eq!(files[1], files[5]);
}

#[test]
fn flags_and_set_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("exp.toml"), CONFIG).unwrap();
    let o = quantopt(
        &["run", "exp.toml", "--max-evaluations", "50", "--set", "algorithms=[\"sa\"]", "--set", "n_seeds=2"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("out/results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2);
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(4) == Some("50")));
}

#[test]
fn precondition_failures_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("exp.toml"), CONFIG.replace("drop_wave", "rastrigin")).unwrap();
    let o = quantopt(&["run", "exp.toml"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rastrigin"));
    // nothing ran, so nothing was written
    assert!(!dir.path().join("out").exists());

    let o = quantopt(&["grid", "drop_wave", "--resolution", "1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn io_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = quantopt(&["run", "missing.toml"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.toml"));

    fs::write(dir.path().join("exp.toml"), CONFIG).unwrap();
    fs::write(dir.path().join("blocker"), "").unwrap();
    let o = quantopt(&["run", "exp.toml", "--output-dir", "blocker/out"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn grid_subcommand_emits_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = quantopt(&["grid", "sphere", "--resolution", "3", "--box", "-1,1"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 10);
    assert!(text.lines().any(|l| l == "0,0,0"));

    let o = quantopt(&["grid", "schaffer_n2", "--resolution", "401", "--slice", "y=0", "--output", "s.csv"], dir.path());
    assert!(o.status.success());
    let text = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let best = text
        .lines()
        .skip(1)
        .map(|l| {
            let (x, f) = l.split_once(',').unwrap();
            (x.parse::<f64>().unwrap(), f.parse::<f64>().unwrap())
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert_eq!(best.0, 0.0);
}
