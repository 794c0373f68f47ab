//! Continuous-time diagnostics for the quantized search.
//!
//! As the quantization step shrinks, the accepted moves of the search behave
//! like overdamped Langevin dynamics `dX = −∇f dt + √(2/Q) dW`, whose
//! stationary law is the Gibbs density `∝ exp(−Q f)`. This module simulates
//! that SDE next to the discrete search step it approximates, and measures
//! how often noise carries a path out of a shallow minimum.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::objectives::Objective;
use crate::scalar::{norm_sq, Scalar};

/// Largest time step accepted by [`euler_maruyama`].
pub const MAX_DT: f64 = 0.1;

/// Share of a stationary path discarded before computing moments.
pub const DEFAULT_BURN_IN: f64 = 0.2;

/// Parameters of one discrete search update.
///
/// `eta_step` is the update step size. It is unrelated to the `eta` constant of
/// [`QuantizationSchedule`](crate::QuantizationSchedule) despite the shared
/// letter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchStepParams<F> {
    pub eta_step: F,
    /// Largest Hessian eigenvalue of the quadratic surrogate objective.
    pub lambda0: F,
    pub q_param: F,
}

impl<F: Scalar> SearchStepParams<F> {
    /// Uses the step size `1/λ₀`.
    pub fn new(lambda0: F, q_param: F) -> Result<Self> {
        Self::with_step(lambda0.recip(), lambda0, q_param)
    }

    pub fn with_step(eta_step: F, lambda0: F, q_param: F) -> Result<Self> {
        for (name, v) in [("eta_step", eta_step), ("lambda0", lambda0), ("q_param", q_param)] {
            if !(v > F::zero()) {
                return invalid(format!("{name} must be positive, got {v}"));
            }
        }
        Ok(Self { eta_step, lambda0, q_param })
    }

    /// Noise norm below which the surrogate objective cannot increase.
    pub fn noise_bound(&self) -> F {
        (F::lit(2.0) * self.lambda0 / self.q_param).sqrt()
    }

    /// Per-coordinate variance of the search noise, `2λ₀/Q`.
    pub fn noise_variance(&self) -> F {
        F::lit(2.0) * self.lambda0 / self.q_param
    }
}

/// `x − η·grad + η·r`: one step of gradient search perturbed by `r`.
pub fn discrete_search_step<F: Scalar>(x: &[F], grad: &[F], r: &[F], eta_step: F) -> Result<Vec<F>> {
    if grad.len() != x.len() || r.len() != x.len() {
        return invalid(format!(
            "dimension mismatch: x has {}, grad has {}, r has {}",
            x.len(),
            grad.len(),
            r.len()
        ));
    }
    // grouped as x + η(r − g) so that noise equal to the gradient cancels exactly
    Ok(x.iter().zip(grad).zip(r).map(|((&xi, &gi), &ri)| xi + eta_step * (ri - gi)).collect())
}

/// Gaussian search noise with covariance `(2λ₀/Q)·I`.
pub fn sample_search_noise<F: Scalar, R: rand::Rng + ?Sized>(rng: &mut R, dim: usize, lambda0: F, q_param: F) -> Vec<F> {
    let sd = (F::lit(2.0) * lambda0 / q_param).sqrt();
    (0..dim).map(|_| sd * F::standard_normal(rng)).collect()
}

/// A simulated Langevin trajectory.
///
/// States are stored row-major: state `k` occupies `states[k*dim..(k+1)*dim]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LangevinPath<F> {
    dt: F,
    dim: usize,
    seed: u64,
    /// `Q` in force during step `k`, one entry per step.
    q_params: Vec<F>,
    states: Vec<F>,
}

impl<F: Scalar> LangevinPath<F> {
    pub fn dt(&self) -> F {
        self.dt
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn steps(&self) -> usize {
        self.q_params.len()
    }

    pub fn q_params(&self) -> &[F] {
        &self.q_params
    }

    /// Number of stored states, `steps + 1`.
    pub fn len(&self) -> usize {
        self.states.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, k: usize) -> &[F] {
        &self.states[k * self.dim..(k + 1) * self.dim]
    }

    pub fn states(&self) -> impl Iterator<Item = &[F]> {
        self.states.chunks_exact(self.dim)
    }

    pub fn last(&self) -> &[F] {
        self.state(self.len() - 1)
    }

    /// Empirical mean of the states after discarding the leading
    /// `burn_in` share of the path.
    pub fn stationary_mean(&self, burn_in: f64) -> Vec<F> {
        let kept = self.kept(burn_in);
        let n = F::from_usize(kept.len() / self.dim).unwrap();
        let mut mean = vec![F::zero(); self.dim];
        for s in kept.chunks_exact(self.dim) {
            for (m, &v) in mean.iter_mut().zip(s) {
                *m = *m + v;
            }
        }
        mean.iter_mut().for_each(|m| *m = *m / n);
        mean
    }

    /// Unbiased sample covariance (row-major `dim × dim`) after burn-in.
    pub fn stationary_covariance(&self, burn_in: f64) -> Vec<F> {
        let d = self.dim;
        let mean = self.stationary_mean(burn_in);
        let kept = self.kept(burn_in);
        let n = kept.len() / d;
        let mut cov = vec![F::zero(); d * d];
        for s in kept.chunks_exact(d) {
            for i in 0..d {
                let di = s[i] - mean[i];
                for j in 0..d {
                    cov[i * d + j] = cov[i * d + j] + di * (s[j] - mean[j]);
                }
            }
        }
        let denom = F::from_usize(n.saturating_sub(1).max(1)).unwrap();
        cov.iter_mut().for_each(|c| *c = *c / denom);
        cov
    }

    fn kept(&self, burn_in: f64) -> &[F] {
        let skip = ((self.len() as f64) * burn_in.clamp(0.0, 1.0)).floor() as usize;
        let skip = skip.min(self.len().saturating_sub(1));
        &self.states[skip * self.dim..]
    }
}

/// Advances `x` in place by `steps` Euler–Maruyama steps, calling `visit`
/// after each one. `Q = ∞` switches the noise off entirely, so the update is
/// then exactly explicit gradient descent.
fn integrate<F: Scalar, R: rand::Rng>(
    objective: &Objective<F>,
    q_of_t: &impl Fn(F) -> F,
    dt: F,
    steps: usize,
    x: &mut [F],
    rng: &mut R,
    mut visit: impl FnMut(F, &[F]),
) -> Result<()> {
    let sqrt_dt = dt.sqrt();
    for k in 0..steps {
        let t = F::from_usize(k).unwrap() * dt;
        let q = q_of_t(t);
        if !(q > F::zero()) {
            return invalid(format!("Q must be positive, got {q} at t = {t}"));
        }
        let grad = objective.gradient(x)?;
        if q.is_infinite() {
            for (xi, gi) in x.iter_mut().zip(&grad) {
                *xi = *xi - *gi * dt;
            }
        } else {
            let sd = (F::lit(2.0) / q).sqrt() * sqrt_dt;
            for (xi, gi) in x.iter_mut().zip(&grad) {
                *xi = *xi - *gi * dt + sd * F::standard_normal(rng);
            }
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { step: k + 1 });
        }
        visit(q, x);
    }
    Ok(())
}

fn check_dt<F: Scalar>(dt: F) -> Result<()> {
    if !(dt > F::zero() && dt <= F::lit(MAX_DT)) {
        return invalid(format!("dt must lie in (0, {MAX_DT}], got {dt}"));
    }
    Ok(())
}

/// Simulates `dX = −∇f(X) dt + √(2/Q(t)) dW` from `x0` and returns the full
/// path of `steps + 1` states.
///
/// `q_of_t` maps simulated time to the quantization parameter and may return
/// `F::infinity()` to switch the noise off.
pub fn euler_maruyama<F: Scalar>(
    objective: &Objective<F>,
    q_of_t: impl Fn(F) -> F,
    dt: F,
    steps: usize,
    x0: &[F],
    seed: u64,
) -> Result<LangevinPath<F>> {
    check_dt(dt)?;
    if steps == 0 {
        return invalid("steps must be positive");
    }
    if x0.len() != objective.dim() {
        return invalid(format!("{} expects {} coordinates, got {}", objective.name(), objective.dim(), x0.len()));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return invalid("x0 must be finite");
    }
    let dim = x0.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = Vec::with_capacity((steps + 1) * dim);
    let mut q_params = Vec::with_capacity(steps);
    states.extend_from_slice(x0);
    let mut x = x0.to_vec();
    integrate(objective, &q_of_t, dt, steps, &mut x, &mut rng, |q, s| {
        q_params.push(q);
        states.extend_from_slice(s);
    })?;
    Ok(LangevinPath { dt, dim, seed, q_params, states })
}

/// Unnormalized Gibbs log-density `−Q·f(x)`.
pub fn gibbs_log_density<F: Scalar>(objective: &Objective<F>, q_param: F, x: &[F]) -> Result<F> {
    if !(q_param > F::zero()) {
        return invalid(format!("q_param must be positive, got {q_param}"));
    }
    Ok(-q_param * objective.evaluate(x)?)
}

/// Witten potential `V = −(m/2)(‖∇f‖² − h·Δf)`.
///
/// At a critical point this is `(m·h/2)·Δf`, which is positive at a strict
/// minimum: the curvature term keeps probability flowing out even where the
/// drift vanishes.
pub fn witten_potential<F: Scalar>(objective: &Objective<F>, h: F, mass: F, x: &[F]) -> Result<F> {
    if h < F::zero() || !(mass > F::zero()) {
        return invalid(format!("need h >= 0 and mass > 0, got h = {h}, mass = {mass}"));
    }
    let grad = objective.gradient(x)?;
    let lap = objective.laplacian(x)?;
    Ok(-(mass / F::lit(2.0)) * (norm_sq(&grad) - h * lap))
}

/// Settings for [`escape_rate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EscapeConfig {
    pub dt: f64,
    pub horizon_steps: usize,
    pub trials: usize,
    pub seed: u64,
    /// Index into [`Objective::local_minima`] of the starting minimum.
    pub minimum: usize,
}

impl Default for EscapeConfig {
    /// The step is small enough that the default horizon (total time 10) ends
    /// well before the wells equilibrate, so the terminal position still
    /// reflects how often the barrier was crossed.
    fn default() -> Self {
        Self { dt: 1e-4, horizon_steps: 100_000, trials: 500, seed: 0, minimum: 0 }
    }
}

/// Fraction of Langevin paths started at a registered local minimum whose
/// terminal value lies below the minimum's value by more than half its
/// barrier, i.e. that ended in a deeper basin.
///
/// Trial `i` draws its noise from stream `i` of the configured seed, so two
/// calls that differ only in `q_param` are paired trial by trial.
pub fn escape_rate<F: Scalar>(objective: &Objective<F>, q_param: F, config: &EscapeConfig) -> Result<F> {
    let dt = F::lit(config.dt);
    check_dt(dt)?;
    if config.trials == 0 {
        return invalid("trials must be at least 1");
    }
    if !(q_param > F::zero()) {
        return invalid(format!("q_param must be positive, got {q_param}"));
    }
    let Some(start) = objective.local_minima().get(config.minimum) else {
        return invalid(format!(
            "{} has no registered local minimum with index {}",
            objective.name(),
            config.minimum
        ));
    };
    let threshold = start.value - start.barrier / F::lit(2.0);
    let q_of_t = |_: F| q_param;

    let outcomes: Vec<Result<bool>> = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            let mut x = start.point.clone();
            integrate(objective, &q_of_t, dt, config.horizon_steps, &mut x, &mut rng, |_, _| {})?;
            Ok(objective.value(&x) < threshold)
        })
        .collect();
    let mut escaped = 0usize;
    for o in outcomes {
        escaped += usize::from(o?);
    }
    Ok(F::from_usize(escaped).unwrap() / F::from_usize(config.trials).unwrap())
}

/// Outcome of [`lemma1_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck<F> {
    /// `√(2λ₀/Q)`.
    pub bound: F,
    /// Trials whose noise norm fell within the bound.
    pub within_bound: usize,
    /// Share of all trials that were within the bound yet increased the
    /// surrogate objective.
    pub violation_fraction: F,
}

/// Samples search steps on the surrogate `(λ₀/2)‖x‖²` with step size `1/λ₀`
/// and a gradient of the worst-case norm `√(2λ₀/Q)`, and checks that noise
/// within that norm never produces an increase of the quadratic upper bound
/// `∇f·h + (λ₀/2)‖h‖²`.
pub fn lemma1_bound_check<F: Scalar>(lambda0: F, q_param: F, dim: usize, trials: usize, seed: u64) -> Result<BoundCheck<F>> {
    let params = SearchStepParams::new(lambda0, q_param)?;
    if dim == 0 {
        return invalid("dim must be positive");
    }
    let bound = params.noise_bound();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut within = 0usize;
    let mut violations = 0usize;
    for _ in 0..trials {
        let x: Vec<F> = (0..dim).map(|_| F::standard_normal(&mut rng)).collect();
        let dir: Vec<F> = (0..dim).map(|_| F::standard_normal(&mut rng)).collect();
        let scale = bound / norm_sq(&dir).sqrt();
        let grad: Vec<F> = dir.iter().map(|&d| d * scale).collect();
        let r = sample_search_noise(&mut rng, dim, lambda0, q_param);
        if norm_sq(&r).sqrt() > bound {
            continue;
        }
        within += 1;
        if surrogate_increase(&x, &grad, &r, &params)? > F::zero() {
            violations += 1;
        }
    }
    let violation_fraction = if trials == 0 {
        F::zero()
    } else {
        F::from_usize(violations).unwrap() / F::from_usize(trials).unwrap()
    };
    Ok(BoundCheck { bound, within_bound: within, violation_fraction })
}

/// Upper bound on the surrogate change for one step, less a rounding
/// allowance of a few ulps of `‖∇f‖²/λ₀`.
fn surrogate_increase<F: Scalar>(x: &[F], grad: &[F], r: &[F], params: &SearchStepParams<F>) -> Result<F> {
    let next = discrete_search_step(x, grad, r, params.eta_step)?;
    let h: Vec<F> = next.iter().zip(x).map(|(&a, &b)| a - b).collect();
    let linear = grad.iter().zip(&h).fold(F::zero(), |acc, (&g, &hi)| acc + g * hi);
    let change = linear + params.lambda0 / F::lit(2.0) * norm_sq(&h);
    let slack = F::lit(16.0) * F::epsilon() * norm_sq(grad) / params.lambda0;
    Ok(change - slack)
}
