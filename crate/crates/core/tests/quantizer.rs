use num_rational::Ratio;
use proptest::prelude::*;
use quantopt::quantizer::ks_critical_1pct;
use quantopt::{error_statistics, initial_eta, quantize, ErrorStatistics, QuantizationSchedule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Parameters a base-2 schedule can produce.
const SCHEDULE_Q: [f64; 7] = [0.125, 0.5, 1.0, 2.0, 4.0, 16.0, 1024.0];

/// Parameters whose step `1/Q` is not a binary fraction.
const OTHER_Q: [f64; 4] = [0.1, 3.0, 7.0, 1e3];

/// Uniform values mixed with lattice points and half-way points.
fn algebra_inputs(qs: &[f64], n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let q = qs[rng.random_range(0..qs.len())];
            let x = match i % 3 {
                0 => rng.random_range(-1e3..1e3),
                1 => rng.random_range(-10_000i64..10_000) as f64 / q,
                _ => (rng.random_range(-10_000i64..10_000) as f64 + 0.5) / q,
            };
            (x, q)
        })
        .collect()
}

#[test]
fn algebra_holds_on_randomized_inputs() {
    let mut failures = 0;
    for (x, q) in algebra_inputs(&SCHEDULE_Q, 100_000, 1) {
        let v = quantize(x, q).unwrap();
        let again = quantize(v.quantized, q).unwrap();
        if again.quantized != v.quantized {
            failures += 1;
        }
        if (v.quantized - x).abs() > 0.5 / q {
            failures += 1;
        }
        if !(-0.5..=0.5).contains(&v.fraction) {
            failures += 1;
        }
    }
    assert_eq!(failures, 0);
}

/// Lattice points and midpoints of a non-binary step are themselves rounded,
/// so the bound can only hold up to a few units in the last place.
#[test]
fn algebra_holds_to_rounding_for_other_steps() {
    for (x, q) in algebra_inputs(&OTHER_Q, 100_000, 2) {
        let v = quantize(x, q).unwrap();
        assert_eq!(quantize(v.quantized, q).unwrap().quantized, v.quantized, "x={x}, Q={q}");
        let slack = 4.0 * f64::EPSILON * x.abs().max(1.0 / q);
        assert!((v.quantized - x).abs() <= 0.5 / q + slack, "x={x}, Q={q}");
    }
}

#[test]
fn half_way_points_round_up() {
    for q in SCHEDULE_Q {
        for k in -20..20 {
            let x = (k as f64 + 0.5) / q;
            let v = quantize(x, q).unwrap();
            assert_eq!(v.quantized, (k + 1) as f64 / q);
            assert_eq!(v.fraction, 0.5);
        }
    }
}

proptest! {
    #[test]
    fn quantize_is_idempotent(x in -1e6..1e6f64, p in 0u32..12) {
        let q = 2f64.powi(p as i32);
        let once = quantize(x, q).unwrap().quantized;
        prop_assert_eq!(quantize(once, q).unwrap().quantized, once);
    }

    #[test]
    fn error_is_at_most_half_a_step(x in -1e6..1e6f64, p in 0u32..12) {
        let q = 2f64.powi(p as i32);
        let v = quantize(x, q).unwrap();
        prop_assert!((v.quantized - x).abs() <= 0.5 / q);
        prop_assert!((q * v.quantized).fract() == 0.0);
    }

    #[test]
    fn quantize_is_monotone(a in -1e4..1e4f64, b in -1e4..1e4f64, p in 0u32..10) {
        let q = 2f64.powi(p as i32);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(quantize(lo, q).unwrap().quantized <= quantize(hi, q).unwrap().quantized);
    }
}

#[test]
fn uniform_errors_behave_like_white_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let samples: Vec<f64> = (0..1_000_000).map(|_| rng.random_range(-100.0..100.0)).collect();
    for q in [1.0, 4.0, 16.0] {
        let stats = error_statistics(&samples, q).unwrap();
        let model = ErrorStatistics::model_variance(q);
        let std_err = (model / stats.n as f64).sqrt();
        assert!(stats.mean.abs() < 3.0 * std_err, "Q={q}: mean {}", stats.mean);
        assert!((stats.variance - model).abs() < 0.02 * model, "Q={q}: variance {}", stats.variance);
        assert!(stats.ks_uniform < ks_critical_1pct(stats.n), "Q={q}: ks {}", stats.ks_uniform);
        assert!(stats.lag1_autocorr.abs() < 0.01, "Q={q}: lag-1 {}", stats.lag1_autocorr);
    }
}

#[test]
fn schedule_drives_algorithm_initialization() {
    // f(x0) = 5 gives η = 1/4, and three acceptances reach Q = 2
    let eta = initial_eta(5.0, 2).unwrap();
    let mut s = QuantizationSchedule::new(eta, 2, 40).unwrap();
    assert_eq!(s.q_param::<f64>(), 0.25);
    for _ in 0..3 {
        s.advance();
    }
    assert_eq!(s.q_param::<f64>(), 2.0);
    assert_eq!(s.q_param_exact(), Some(Ratio::from_integer(2)));
}
