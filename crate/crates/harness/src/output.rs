//! Result files: `results.csv`, `summary.csv`, per-cell JSONL traces and a
//! manifest of everything written.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use quantopt::RunTrace64;
use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::experiment::{ResultRow, SummaryRow};

pub const RESULTS_HEADER: &str = "function,algorithm,seed,iterations_to_success,evaluations,best_f,improvement_ratio,wall_ms";
pub const SUMMARY_HEADER: &str =
    "function,algorithm,runs,successes,success_rate,median_iterations_to_success,median_best_f,mean_improvement_ratio";

/// Formats like C's `%g`: six significant digits, trailing zeros removed,
/// exponent notation outside `[1e-4, 1e6)`.
pub fn format_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // rounding to six digits can carry into the next decade, so take the
    // exponent from the rounded form
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    }
}

fn strip_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn opt_g(x: Option<f64>) -> String {
    x.map(format_g).unwrap_or_default()
}

pub fn results_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.function,
            r.algorithm,
            r.seed,
            r.iterations_to_success.map(|t| t.to_string()).unwrap_or_default(),
            r.evaluations,
            format_g(r.best_f),
            format_g(r.improvement_ratio),
            opt_g(r.wall_ms),
        ));
    }
    out
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.function,
            r.algorithm,
            r.runs,
            r.successes,
            format_g(r.success_rate),
            opt_g(r.median_iterations),
            format_g(r.median_best_f),
            format_g(r.mean_improvement_ratio),
        ));
    }
    out
}

/// Parses a `results.csv` produced by [`results_csv`].
pub fn parse_results_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(RESULTS_HEADER) {
        return Err(HarnessError::Config("results.csv header mismatch".into()));
    }
    let bad = |line: &str| HarnessError::Config(format!("malformed results line `{line}`"));
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 8 {
                return Err(bad(line));
            }
            let opt_u = |s: &str| if s.is_empty() { Ok(None) } else { s.parse().map(Some) };
            let opt_f = |s: &str| if s.is_empty() { Ok(None) } else { s.parse().map(Some) };
            Ok(ResultRow {
                function: f[0].to_string(),
                algorithm: f[1].to_string(),
                seed: f[2].parse().map_err(|_| bad(line))?,
                iterations_to_success: opt_u(f[3]).map_err(|_| bad(line))?,
                evaluations: f[4].parse().map_err(|_| bad(line))?,
                best_f: f[5].parse().map_err(|_| bad(line))?,
                improvement_ratio: f[6].parse().map_err(|_| bad(line))?,
                wall_ms: opt_f(f[7]).map_err(|_| bad(line))?,
            })
        })
        .collect()
}

#[derive(Serialize)]
struct TraceLine<'a> {
    t: u64,
    x: &'a [f64],
    f: f64,
    fq: f64,
    qp: Option<f64>,
    accepted: bool,
}

/// One JSON object per record; a non-finite `qp` is written as `null`.
pub fn trace_jsonl(trace: &RunTrace64) -> String {
    let mut out = String::new();
    for r in &trace.records {
        let line = TraceLine { t: r.t, x: &r.x, f: r.f, fq: r.fq, qp: r.qp.is_finite().then_some(r.qp), accepted: r.accepted };
        out.push_str(&serde_json::to_string(&line).expect("trace records serialize"));
        out.push('\n');
    }
    out
}

pub fn trace_file_name(trace: &RunTrace64) -> String {
    format!("trace_{}_{}_{}.jsonl", trace.objective, trace.algorithm.name(), trace.seed)
}

/// Files written by [`write_outputs`] with their sizes in bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub files: Vec<(String, u64)>,
}

/// Writes all result files into `out_dir`.
///
/// Each file is written to a temporary name and renamed into place. If any
/// step fails, every file this call already placed is removed again, so the
/// directory never holds a torn result set.
pub fn write_outputs(rows: &[ResultRow], summary: &[SummaryRow], traces: &[RunTrace64], out_dir: &Path) -> Result<Manifest> {
    fs::create_dir_all(out_dir).map_err(|e| HarnessError::io(out_dir, e))?;
    let mut contents: Vec<(String, String)> = vec![
        ("results.csv".into(), results_csv(rows)),
        ("summary.csv".into(), summary_csv(summary)),
    ];
    for trace in traces {
        contents.push((trace_file_name(trace), trace_jsonl(trace)));
    }
    let mut files: Vec<(String, u64)> = contents.iter().map(|(n, c)| (n.clone(), c.len() as u64)).collect();
    let manifest_text = manifest_text(&mut files);
    contents.push(("manifest.txt".into(), manifest_text));

    let mut placed: Vec<PathBuf> = Vec::new();
    for (name, text) in &contents {
        let target = out_dir.join(name);
        if let Err(e) = write_atomic(&target, text.as_bytes()) {
            for p in &placed {
                let _ = fs::remove_file(p);
            }
            return Err(e);
        }
        placed.push(target);
    }
    Ok(Manifest { files })
}

/// Renders the manifest, including its own line and size, and adds that
/// entry to `files`. Files are listed by name.
fn manifest_text(files: &mut Vec<(String, u64)>) -> String {
    files.sort();
    let body: String = files.iter().map(|(n, s)| format!("{n} {s}\n")).collect();
    // the manifest's own size appears inside it, so iterate to a fixed point
    let mut size = body.len() as u64;
    loop {
        let candidate = body.len() as u64 + format!("manifest.txt {size}\n").len() as u64;
        if candidate == size {
            break;
        }
        size = candidate;
    }
    files.push(("manifest.txt".into(), size));
    files.sort();
    files.iter().map(|(n, s)| format!("{n} {s}\n")).collect()
}

fn write_atomic(target: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = target.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = target.with_file_name(format!(".{file_name}.partial"));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, target)
    })();
    result.map_err(|e| {
        let _ = fs::remove_file(&tmp);
        HarnessError::io(target, e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_formatting() {
        assert_eq!(format_g(100.0), "100");
        assert_eq!(format_g(54.57), "54.57");
        assert_eq!(format_g(0.0), "0");
        assert_eq!(format_g(1.0 / 3.0), "0.333333");
        assert_eq!(format_g(123456.7), "123457");
        assert_eq!(format_g(999999.7), "1e+06");
        assert_eq!(format_g(1234567.0), "1.23457e+06");
        assert_eq!(format_g(0.0001), "0.0001");
        assert_eq!(format_g(0.00001234), "1.234e-05");
        assert_eq!(format_g(-2.5e-7), "-2.5e-07");
        assert_eq!(format_g(f64::INFINITY), "inf");
    }

    #[test]
    fn manifest_counts_itself() {
        let mut files = vec![("results.csv".to_string(), 12), ("summary.csv".to_string(), 3)];
        let text = manifest_text(&mut files);
        let own = files.iter().find(|(n, _)| n == "manifest.txt").unwrap().1;
        assert_eq!(own, text.len() as u64);
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn empty_results_are_header_only() {
        assert_eq!(results_csv(&[]), format!("{RESULTS_HEADER}\n"));
        assert!(parse_results_csv(&results_csv(&[])).unwrap().is_empty());
    }
}
