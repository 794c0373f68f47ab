//! Scalar quantization, the geometric quantization-parameter schedule, and
//! empirical checks of the white-noise model for quantization error.
//!
//! A quantization parameter `Q` defines the lattice `{k / Q : k ∈ Z}`. A value
//! is mapped to `floor(Q·(x + 1/(2Q))) / Q`, so the quantization step is `1/Q`
//! and the error never exceeds half a step.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// A value together with its lattice image under a given quantization parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizedValue<F> {
    pub raw: F,
    pub quantized: F,
    /// Signed residual `Q·(quantized − raw)`, in units of the quantization step.
    pub fraction: F,
    pub q_param: F,
}

/// Quantizes `x` onto the lattice with spacing `1/q_param`.
///
/// Exact ties round up (the floor keeps the integer), so the residual lies in
/// `(−1/2, 1/2]` and equals `+1/2` only when `x` sits exactly halfway between
/// two lattice points.
pub fn quantize<F: Scalar>(x: F, q_param: F) -> Result<QuantizedValue<F>> {
    if !x.is_finite() {
        return invalid(format!("cannot quantize non-finite value {x}"));
    }
    if !(q_param > F::zero()) || !q_param.is_finite() {
        return invalid(format!("quantization parameter must be positive and finite, got {q_param}"));
    }
    let half = F::lit(0.5);
    let k = (q_param * (x + half / q_param)).floor();
    let quantized = k / q_param;
    let fraction = (q_param * (quantized - x)).max(-half).min(half);
    Ok(QuantizedValue { raw: x, quantized, fraction, q_param })
}

/// Outcome of [`QuantizationSchedule::advance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Advance {
    Advanced,
    /// The exponent was already at its cap; the schedule is unchanged.
    Saturated,
}

impl Advance {
    pub fn is_saturated(self) -> bool {
        matches!(self, Advance::Saturated)
    }
}

/// Monotone schedule `Q = eta · base^power` with an advance-only exponent.
///
/// `eta` is kept as an exact rational so that the lattice parameter is exact
/// for power-of-two bases and the usual `eta = base^-k` initialisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantizationSchedule {
    eta: Ratio<u64>,
    base: u32,
    power: u32,
    power_cap: u32,
}

impl QuantizationSchedule {
    pub const DEFAULT_BASE: u32 = 2;
    /// With base 2 the step is about 9.1e-13 at the cap; past that, quantizing
    /// values of order 10^3 in double precision is the identity.
    pub const DEFAULT_POWER_CAP: u32 = 40;

    pub fn new(eta: Ratio<u64>, base: u32, power_cap: u32) -> Result<Self> {
        if *eta.numer() == 0 {
            return invalid("schedule constant eta must be positive");
        }
        if base < 2 {
            return invalid(format!("schedule base must be at least 2, got {base}"));
        }
        Ok(Self { eta, base, power: 0, power_cap })
    }

    /// Schedule already advanced to `power`.
    pub fn with_power(mut self, power: u32) -> Result<Self> {
        if power > self.power_cap {
            return invalid(format!("power {power} exceeds cap {}", self.power_cap));
        }
        if power < self.power {
            return invalid("schedule exponent cannot move backwards");
        }
        self.power = power;
        Ok(self)
    }

    pub fn eta(&self) -> Ratio<u64> {
        self.eta
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn power_cap(&self) -> u32 {
        self.power_cap
    }

    pub fn is_saturated(&self) -> bool {
        self.power >= self.power_cap
    }

    /// Current quantization parameter `eta · base^power`.
    pub fn q_param<F: Scalar>(&self) -> F {
        let eta = F::from_u64(*self.eta.numer()).unwrap() / F::from_u64(*self.eta.denom()).unwrap();
        eta * F::from_u32(self.base).unwrap().powi(self.power as i32)
    }

    /// Exact rational value of the quantization parameter, if it fits in 128 bits.
    pub fn q_param_exact(&self) -> Option<Ratio<u128>> {
        let scale = (self.base as u128).checked_pow(self.power)?;
        let numer = (*self.eta.numer() as u128).checked_mul(scale)?;
        Some(Ratio::new(numer, *self.eta.denom() as u128))
    }

    pub fn advance(&mut self) -> Advance {
        if self.is_saturated() {
            Advance::Saturated
        } else {
            self.power += 1;
            Advance::Advanced
        }
    }
}

/// Initial schedule constant `base^-floor(log_base(f0 + 1))`.
///
/// The exponent is found by integer search rather than a floating logarithm,
/// so exact powers of the base land on the right side of the floor.
pub fn initial_eta<F: Scalar>(f0: F, base: u32) -> Result<Ratio<u64>> {
    if !f0.is_finite() || f0 < F::zero() {
        return invalid(format!("initial objective value must be finite and nonnegative, got {f0}"));
    }
    if base < 2 {
        return invalid(format!("schedule base must be at least 2, got {base}"));
    }
    let target = f0 + F::one();
    let b = F::from_u32(base).unwrap();
    let mut exponent = 0u32;
    let mut next = b;
    while next <= target {
        exponent += 1;
        next = next * b;
    }
    match (base as u64).checked_pow(exponent) {
        Some(denom) => Ok(Ratio::new(1, denom)),
        None => invalid(format!("initial objective value {f0} is too large for base {base}")),
    }
}

/// Summary of quantization errors over a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorStatistics {
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Kolmogorov–Smirnov distance of the scaled errors from `Uniform[−1/2, 1/2)`.
    pub ks_uniform: f64,
    pub lag1_autocorr: f64,
    pub n: usize,
}

impl ErrorStatistics {
    /// Variance predicted by the white-noise model, `1/(12 Q²)`.
    pub fn model_variance(q_param: f64) -> f64 {
        1.0 / (12.0 * q_param * q_param)
    }
}

/// Quantizes every sample and summarises the errors `quantized − raw`.
pub fn error_statistics<F: Scalar>(samples: &[F], q_param: F) -> Result<ErrorStatistics> {
    if samples.len() < 2 {
        return invalid(format!("need at least 2 samples, got {}", samples.len()));
    }
    let q = q_param.to_f64_lossy();
    let mut errors = Vec::with_capacity(samples.len());
    for &s in samples {
        let qv = quantize(s, q_param)?;
        errors.push((qv.quantized - qv.raw).to_f64_lossy());
    }
    let n = errors.len() as f64;
    let mean = errors.iter().sum::<f64>() / n;
    let ss: f64 = errors.iter().map(|e| (e - mean) * (e - mean)).sum();
    let variance = ss / (n - 1.0);
    let lag1_autocorr = if ss > 0.0 {
        errors.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum::<f64>() / ss
    } else {
        0.0
    };

    let mut scaled: Vec<f64> = errors.iter().map(|e| (q * e + 0.5).clamp(0.0, 1.0)).collect();
    scaled.sort_by(f64::total_cmp);
    let ks_uniform = scaled
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let above = (i + 1) as f64 / n - u;
            let below = u - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max);

    Ok(ErrorStatistics { mean, variance, ks_uniform, lag1_autocorr, n: errors.len() })
}

/// Asymptotic one-sample Kolmogorov–Smirnov critical value at the 1% level.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}
