//! Statistical validation suites behind the `validate` subcommand.
//!
//! Each check runs a fixed-seed Monte Carlo experiment and compares it with
//! the analytic prediction, returning a pass/fail verdict with the measured
//! numbers.

use std::fmt;

use quantopt::langevin::{
    escape_rate, euler_maruyama, lemma1_bound_check, witten_potential, EscapeConfig, DEFAULT_BURN_IN,
};
use quantopt::objectives::REGISTERED;
use quantopt::quantizer::ks_critical_1pct;
use quantopt::{error_statistics, quantize, ErrorStatistics, Objective64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.name, self.detail)
    }
}

/// Quantization errors of uniform samples look like uniform white noise.
pub fn quantization_error_model() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let samples: Vec<f64> = (0..1_000_000).map(|_| rng.random_range(-100.0..100.0)).collect();
    let mut passed = true;
    let mut detail = Vec::new();
    for q in [1.0, 4.0, 16.0] {
        let s = match error_statistics(&samples, q) {
            Ok(s) => s,
            Err(e) => return Check::new("quantization error model", false, e.to_string()),
        };
        let model = ErrorStatistics::model_variance(q);
        let se = (model / s.n as f64).sqrt();
        let ok = s.mean.abs() < 3.0 * se
            && (s.variance - model).abs() < 0.02 * model
            && s.ks_uniform < ks_critical_1pct(s.n)
            && s.lag1_autocorr.abs() < 0.01;
        passed &= ok;
        detail.push(format!(
            "Q={q}: mean/se={:.2} var/model={:.4} ks={:.5} lag1={:.4}",
            s.mean / se,
            s.variance / model,
            s.ks_uniform,
            s.lag1_autocorr
        ));
    }
    Check::new("quantization error model", passed, detail.join("; "))
}

/// Idempotence and the half-step bound at parameters a base-2 schedule
/// produces, with lattice points and midpoints mixed into the inputs.
pub fn quantizer_algebra() -> Check {
    let qs = [0.125, 0.5, 1.0, 2.0, 4.0, 16.0, 1024.0];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = 0usize;
    let n = 100_000;
    for i in 0..n {
        let q = qs[rng.random_range(0..qs.len())];
        let x = match i % 3 {
            0 => rng.random_range(-1e3..1e3),
            1 => rng.random_range(-10_000i64..10_000) as f64 / q,
            _ => (rng.random_range(-10_000i64..10_000) as f64 + 0.5) / q,
        };
        let v = quantize(x, q).expect("valid input");
        let again = quantize(v.quantized, q).expect("valid input");
        if again.quantized != v.quantized || (v.quantized - x).abs() > 0.5 / q {
            failures += 1;
        }
    }
    Check::new("quantizer algebra", failures == 0, format!("{failures} failures in {n} inputs"))
}

/// Analytic gradients and Laplacians against central differences at random
/// smooth points of every registered objective.
pub fn objective_calculus() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_grad = 0.0f64;
    let mut worst_lap = 0.0f64;
    let mut failures = 0usize;
    for name in REGISTERED {
        let obj = Objective64::by_name(name, 2).expect("registered");
        let mut done = 0;
        while done < 1000 {
            let x: Vec<f64> = obj.box_lo().iter().zip(obj.box_hi()).map(|(&l, &h)| rng.random_range(l..h)).collect();
            if x.iter().any(|v| v.abs() < 0.1) {
                continue;
            }
            done += 1;
            let grad = obj.gradient(&x).expect("smooth point");
            let f0 = obj.evaluate(&x).expect("dimension");
            let mut lap_fd = 0.0;
            for i in 0..x.len() {
                let shifted = |h: f64| {
                    let mut y = x.clone();
                    y[i] += h;
                    obj.evaluate(&y).expect("dimension")
                };
                let g_fd = (shifted(1e-5) - shifted(-1e-5)) / 2e-5;
                let err = (grad[i] - g_fd).abs();
                if err > 1e-8 {
                    worst_grad = worst_grad.max(err / g_fd.abs());
                    if err > 1e-5 * g_fd.abs() {
                        failures += 1;
                    }
                }
                lap_fd += (shifted(1e-4) - 2.0 * f0 + shifted(-1e-4)) / 1e-8;
            }
            let lap = obj.laplacian(&x).expect("smooth point");
            let err = (lap - lap_fd).abs();
            if err > 1e-6 {
                worst_lap = worst_lap.max(err / lap_fd.abs());
                if err > 1e-3 * lap_fd.abs() {
                    failures += 1;
                }
            }
        }
    }
    Check::new(
        "objective calculus",
        failures == 0,
        format!("{failures} failures; worst relative error gradient {worst_grad:.2e}, laplacian {worst_lap:.2e}"),
    )
}

/// Long-run variance of Langevin dynamics on the sphere equals `1/Q`.
pub fn langevin_stationarity() -> Check {
    let sphere = Objective64::sphere(1).expect("valid dimension");
    let steps = (1_000_000.0 / (1.0 - DEFAULT_BURN_IN)).ceil() as usize;
    let mut passed = true;
    let mut detail = Vec::new();
    for (q, seed) in [(5.0, 100), (10.0, 101)] {
        match euler_maruyama(&sphere, |_| q, 0.01, steps, &[0.0], seed) {
            Ok(path) => {
                let var = path.stationary_covariance(DEFAULT_BURN_IN)[0];
                let rel = (var * q - 1.0).abs();
                passed &= rel < 0.05;
                detail.push(format!("Q={q}: variance {var:.5} (target {:.5})", 1.0 / q));
            }
            Err(e) => {
                passed = false;
                detail.push(format!("Q={q}: {e}"));
            }
        }
    }
    Check::new("langevin stationarity", passed, detail.join("; "))
}

/// At quadratic minima the Witten potential is `(m·h/2)·Δf`, and without the
/// curvature term it is never positive.
pub fn witten_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let d = rng.random_range(1..6);
        let coeffs: Vec<f64> = (0..d).map(|_| rng.random_range(0.1..5.0)).collect();
        let center: Vec<f64> = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
        let obj = Objective64::quadratic(coeffs.clone(), center.clone()).expect("valid quadratic");
        let (h, mass) = (rng.random_range(0.01..2.0), rng.random_range(0.1..3.0));
        let lap: f64 = coeffs.iter().map(|a| 2.0 * a).sum();
        let v = witten_potential(&obj, h, mass, &center).expect("smooth point");
        worst = worst.max((v - mass * h / 2.0 * lap).abs());
    }
    let mut positive = 0usize;
    for name in REGISTERED {
        let obj = Objective64::by_name(name, 2).expect("registered");
        for _ in 0..10_000 {
            let x: Vec<f64> = obj.box_lo().iter().zip(obj.box_hi()).map(|(&l, &h)| rng.random_range(l..h)).collect();
            match witten_potential(&obj, 0.0, 1.0, &x) {
                Ok(v) if v > 0.0 => positive += 1,
                _ => {}
            }
        }
    }
    Check::new(
        "witten potential",
        worst <= 1e-12 && positive == 0,
        format!("max critical-point deviation {worst:.1e}; {positive} positive values with h=0"),
    )
}

/// Escape from the shallow well of the tilted double well: none without
/// noise, some at `Q = 5`, more at `Q = 2` on the same noise streams.
pub fn escape_rate_ordering() -> Check {
    let well = Objective64::double_well(0.3, 0.3);
    let cfg = EscapeConfig { seed: 2024, ..EscapeConfig::default() };
    let rates: Result<Vec<f64>, _> =
        [f64::INFINITY, 5.0, 2.0].iter().map(|&q| escape_rate(&well, q, &cfg)).collect();
    match rates {
        Ok(r) => Check::new(
            "escape rate",
            r[0] == 0.0 && r[1] > 0.0 && r[2] > r[1],
            format!("noise off {}, Q=5 {}, Q=2 {} over {} trials", r[0], r[1], r[2], cfg.trials),
        ),
        Err(e) => Check::new("escape rate", false, e.to_string()),
    }
}

/// Noise within the analytic norm bound never increases the surrogate.
pub fn lemma1_bound() -> Check {
    let mut passed = true;
    let mut detail = Vec::new();
    for (lambda0, q) in [(1.0, 2.0), (2.0, 8.0), (4.0, 1.0)] {
        match lemma1_bound_check(lambda0, q, 2, 100_000, 9) {
            Ok(c) => {
                passed &= c.violation_fraction == 0.0;
                detail.push(format!("({lambda0},{q}): bound {:.4}, violations {}", c.bound, c.violation_fraction));
            }
            Err(e) => {
                passed = false;
                detail.push(e.to_string());
            }
        }
    }
    Check::new("search noise bound", passed, detail.join("; "))
}

/// Every suite, in a fixed order.
pub fn all_checks() -> Vec<Check> {
    vec![
        quantization_error_model(),
        quantizer_algebra(),
        objective_calculus(),
        langevin_stationarity(),
        witten_identity(),
        escape_rate_ordering(),
        lemma1_bound(),
    ]
}
