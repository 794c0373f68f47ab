//! Quantization-based blind random search and the two annealing baselines.
//!
//! All three optimizers share [`RunConfig`] and produce a [`RunTrace`]. Every
//! run owns a ChaCha8 generator seeded from the config, so a config fully
//! determines its trace. The first generator draw is always the uniform
//! starting point `x₀`.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::objectives::Objective;
use crate::quantizer::{initial_eta, quantize, QuantizationSchedule};
use crate::scalar::{reflect_into, uniform_in, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Qbo,
    Sa,
    Qa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Qbo, Algorithm::Sa, Algorithm::Qa];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Qbo => "qbo",
            Algorithm::Sa => "sa",
            Algorithm::Qa => "qa",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qbo" => Ok(Algorithm::Qbo),
            "sa" => Ok(Algorithm::Sa),
            "qa" => Ok(Algorithm::Qa),
            other => Err(Error::NotFound(format!("algorithm `{other}`"))),
        }
    }
}

/// Settings common to every optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig<F> {
    pub objective: Objective<F>,
    pub seed: u64,
    pub max_evaluations: u64,
    /// Success once the best shifted value is at most this.
    pub success_tolerance: F,
    /// Keep one [`RunRecord`] per evaluation. Summaries are kept either way.
    pub keep_records: bool,
}

impl<F: Scalar> RunConfig<F> {
    pub fn new(objective: Objective<F>, seed: u64, max_evaluations: u64, success_tolerance: F) -> Result<Self> {
        let cfg = Self { objective, seed, max_evaluations, success_tolerance, keep_records: true };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Config for a registered objective; unknown names are a not-found error.
    pub fn named(name: &str, dim: usize, seed: u64, max_evaluations: u64, success_tolerance: F) -> Result<Self> {
        Self::new(Objective::by_name(name, dim)?, seed, max_evaluations, success_tolerance)
    }

    pub fn without_records(mut self) -> Self {
        self.keep_records = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_evaluations == 0 {
            return invalid("max_evaluations must be at least 1");
        }
        if !(self.success_tolerance >= F::zero()) {
            return invalid("success_tolerance must be nonnegative");
        }
        Ok(())
    }
}

/// One objective evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord<F> {
    /// Zero-based evaluation index; `t = 0` is the starting point.
    pub t: u64,
    pub x: Vec<F>,
    pub f: F,
    /// Quantized value; equals `f` for the annealing baselines.
    pub fq: F,
    /// Quantization parameter for QBO; the baselines store the reciprocal of
    /// their temperature or field here.
    pub qp: F,
    pub accepted: bool,
    /// QBO restart counter; always 0 for the baselines.
    pub epoch: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StopReason {
    Success,
    Budget,
    Saturated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace<F> {
    pub algorithm: Algorithm,
    pub objective: String,
    pub dim: usize,
    pub seed: u64,
    pub max_evaluations: u64,
    pub success_tolerance: F,
    pub records: Vec<RunRecord<F>>,
    /// Objective value at the starting point.
    pub initial_f: F,
    pub best_x: Vec<F>,
    pub best_f: F,
    pub evaluations_used: u64,
    /// Index of the evaluation at which the best value first met the tolerance.
    pub iterations_to_success: Option<u64>,
    pub stop_reason: StopReason,
    /// Number of schedule epochs started (QBO restarts + 1).
    pub epochs: u32,
}

impl<F: Scalar> RunTrace<F> {
    pub fn succeeded(&self) -> bool {
        self.iterations_to_success.is_some()
    }

    /// Improvement ratio of this run against a known optimum of zero.
    pub fn improvement_ratio(&self, f_opt: F) -> Result<F> {
        improvement_ratio(self.initial_f, self.best_f, f_opt)
    }
}

/// Percentage of the gap between the initial and optimal values closed by
/// `f_best`, clamped to `[0, 100]`; 100 when the start was already optimal.
pub fn improvement_ratio<F: Scalar>(f_initial: F, f_best: F, f_opt: F) -> Result<F> {
    if !f_initial.is_finite() || !f_opt.is_finite() || !f_best.is_finite() {
        return invalid("improvement ratio needs finite values");
    }
    if f_initial < f_opt {
        return invalid(format!("initial value {f_initial} is below the optimum {f_opt}"));
    }
    let hundred = F::lit(100.0);
    if f_initial == f_opt {
        return Ok(hundred);
    }
    let ratio = hundred * (f_initial - f_best) / (f_initial - f_opt);
    Ok(ratio.max(F::zero()).min(hundred))
}

/// Candidate generator for QBO.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Proposal<F> {
    /// Uniform over the search box.
    Uniform,
    /// Gaussian move around the incumbent whose per-coordinate standard
    /// deviation is `initial_step · width · sqrt(Q(0)/Q)`, so the proposal
    /// variance shrinks like the quantization step `1/Q`. With probability
    /// `global_fraction` the candidate is drawn uniformly over the box instead.
    Local { initial_step: F, global_fraction: F },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QboParams<F> {
    pub base: u32,
    pub power_cap: u32,
    pub proposal: Proposal<F>,
    /// Start a fresh schedule from a new uniform point when the cap is reached
    /// with budget left, instead of stopping.
    pub restart_on_saturation: bool,
    /// End the epoch after this many consecutive rejections, as if saturated.
    /// Zero disables the rule.
    pub stall_limit: u64,
}

impl<F: Scalar> Default for QboParams<F> {
    fn default() -> Self {
        Self {
            base: QuantizationSchedule::DEFAULT_BASE,
            power_cap: QuantizationSchedule::DEFAULT_POWER_CAP,
            proposal: Proposal::Local { initial_step: F::one(), global_fraction: F::lit(0.2) },
            restart_on_saturation: true,
            stall_limit: 1500,
        }
    }
}

impl<F: Scalar> QboParams<F> {
    /// Plain blind random search: uniform candidates, stop at saturation.
    pub fn blind() -> Self {
        Self { proposal: Proposal::Uniform, restart_on_saturation: false, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.base < 2 {
            return invalid("qbo base must be at least 2");
        }
        if let Proposal::Local { initial_step, global_fraction } = self.proposal {
            if !(initial_step > F::zero()) || !initial_step.is_finite() {
                return invalid("qbo initial_step must be positive");
            }
            if !(global_fraction >= F::zero() && global_fraction <= F::one()) {
                return invalid("qbo global_fraction must lie in [0, 1]");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaParams<F> {
    /// Starting temperature; `None` means `f(x₀) + 1`.
    pub initial_temperature: Option<F>,
    /// Geometric cooling factor applied after every evaluation.
    pub cooling: F,
    /// Proposal standard deviation as a fraction of the box width.
    pub step: F,
}

impl<F: Scalar> Default for SaParams<F> {
    fn default() -> Self {
        Self { initial_temperature: None, cooling: F::lit(0.995), step: F::lit(0.1) }
    }
}

impl<F: Scalar> SaParams<F> {
    pub fn validate(&self) -> Result<()> {
        if let Some(t0) = self.initial_temperature {
            if !(t0 >= F::zero()) || !t0.is_finite() {
                return invalid("sa initial_temperature must be finite and nonnegative");
            }
        }
        if !(self.cooling > F::zero() && self.cooling <= F::one()) {
            return invalid("sa cooling must lie in (0, 1]");
        }
        if !(self.step > F::zero()) || !self.step.is_finite() {
            return invalid("sa step must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QaParams<F> {
    /// Number of Trotter replicas.
    pub replicas: usize,
    /// Initial transverse field.
    pub gamma0: F,
    /// Per-sweep decay factor of the transverse field.
    pub gamma_decay: F,
    /// Slice temperature.
    pub temperature: F,
    /// Proposal standard deviation at `Γ = Γ₀`, as a fraction of the box
    /// width; it shrinks in proportion to `Γ`.
    pub step: F,
}

impl<F: Scalar> Default for QaParams<F> {
    fn default() -> Self {
        Self {
            replicas: 20,
            gamma0: F::one(),
            gamma_decay: F::lit(0.9995),
            temperature: F::lit(0.05),
            step: F::lit(0.1),
        }
    }
}

impl<F: Scalar> QaParams<F> {
    pub fn validate(&self) -> Result<()> {
        if self.replicas < 2 {
            return invalid(format!("qa needs at least 2 replicas, got {}", self.replicas));
        }
        if !(self.gamma0 > F::zero()) || !self.gamma0.is_finite() {
            return Err(Error::DegenerateSchedule(format!(
                "transverse field {} locks the replicas (coupling diverges)",
                self.gamma0
            )));
        }
        if !(self.gamma_decay > F::zero() && self.gamma_decay <= F::one()) {
            return Err(Error::DegenerateSchedule("gamma_decay must lie in (0, 1]".into()));
        }
        if !(self.temperature > F::zero()) || !self.temperature.is_finite() {
            return invalid("qa temperature must be positive");
        }
        if !(self.step > F::zero()) || !self.step.is_finite() {
            return invalid("qa step must be positive");
        }
        Ok(())
    }

    /// Inter-replica coupling `−(T/2)·ln tanh(Γ/(P·T))`.
    pub fn coupling(&self, gamma: F) -> F {
        let p = F::from_usize(self.replicas).unwrap();
        let arg = (gamma / (p * self.temperature)).max(F::min_positive_value());
        let th = arg.tanh().max(F::min_positive_value());
        -(self.temperature * F::lit(0.5)) * th.ln()
    }
}

/// Parameters for all algorithms; each run reads the block for its algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmParams<F> {
    pub qbo: QboParams<F>,
    pub sa: SaParams<F>,
    pub qa: QaParams<F>,
}

impl<F: Scalar> Default for AlgorithmParams<F> {
    fn default() -> Self {
        Self { qbo: QboParams::default(), sa: SaParams::default(), qa: QaParams::default() }
    }
}

/// Runs `algorithm` with its parameter block from `params`.
pub fn run<F: Scalar>(algorithm: Algorithm, config: &RunConfig<F>, params: &AlgorithmParams<F>) -> Result<RunTrace<F>> {
    match algorithm {
        Algorithm::Qbo => run_qbo(config, &params.qbo),
        Algorithm::Sa => run_sa(config, &params.sa),
        Algorithm::Qa => run_qa(config, &params.qa),
    }
}

/// Bookkeeping shared by the optimizers: evaluation counting, best-so-far,
/// success detection and optional record keeping.
struct Tracker<'a, F> {
    config: &'a RunConfig<F>,
    records: Vec<RunRecord<F>>,
    evaluations: u64,
    initial_f: Option<F>,
    best_x: Vec<F>,
    best_f: F,
    success_at: Option<u64>,
}

impl<'a, F: Scalar> Tracker<'a, F> {
    fn new(config: &'a RunConfig<F>) -> Self {
        Self {
            config,
            records: Vec::new(),
            evaluations: 0,
            initial_f: None,
            best_x: Vec::new(),
            best_f: F::infinity(),
            success_at: None,
        }
    }

    fn budget_left(&self) -> bool {
        self.evaluations < self.config.max_evaluations
    }

    fn succeeded(&self) -> bool {
        self.success_at.is_some()
    }

    /// Evaluates `x`, returning its index and value.
    fn evaluate(&mut self, x: &[F]) -> (u64, F) {
        let t = self.evaluations;
        self.evaluations += 1;
        let f = self.config.objective.value(x);
        if self.initial_f.is_none() {
            self.initial_f = Some(f);
        }
        if f < self.best_f || self.best_x.is_empty() {
            self.best_f = f;
            self.best_x = x.to_vec();
        }
        if self.success_at.is_none() && self.best_f <= self.config.success_tolerance {
            self.success_at = Some(t);
        }
        (t, f)
    }

    fn record(&mut self, record: impl FnOnce() -> RunRecord<F>) {
        if self.config.keep_records {
            self.records.push(record());
        }
    }

    fn finish(self, algorithm: Algorithm, stop_reason: StopReason, epochs: u32) -> RunTrace<F> {
        let cfg = self.config;
        RunTrace {
            algorithm,
            objective: cfg.objective.name().to_string(),
            dim: cfg.objective.dim(),
            seed: cfg.seed,
            max_evaluations: cfg.max_evaluations,
            success_tolerance: cfg.success_tolerance,
            records: self.records,
            initial_f: self.initial_f.unwrap_or_else(F::nan),
            best_x: self.best_x,
            best_f: self.best_f,
            evaluations_used: self.evaluations,
            iterations_to_success: self.success_at,
            stop_reason: if self.success_at.is_some() { StopReason::Success } else { stop_reason },
            epochs,
        }
    }
}

fn uniform_point<F: Scalar>(rng: &mut ChaCha8Rng, obj: &Objective<F>) -> Vec<F> {
    obj.box_lo().iter().zip(obj.box_hi()).map(|(&lo, &hi)| uniform_in(rng, lo, hi)).collect()
}

/// Gaussian step of relative size `scale` around `x`, reflected into the box.
fn gaussian_move<F: Scalar>(rng: &mut ChaCha8Rng, obj: &Objective<F>, x: &[F], scale: F) -> Vec<F> {
    x.iter()
        .zip(obj.box_lo().iter().zip(obj.box_hi()))
        .map(|(&v, (&lo, &hi))| {
            let sigma = scale * (hi - lo);
            reflect_into(v + sigma * F::standard_normal(rng), lo, hi)
        })
        .collect()
}

/// Blind random search on the quantized objective.
///
/// Each epoch starts from a uniform point `x₀`, sets `η = b^-⌊log_b(f(x₀)+1)⌋`
/// and `Q = η`, and then accepts a candidate whenever its quantized value does
/// not exceed the quantized incumbent. Every acceptance advances the schedule
/// and re-quantizes the incumbent at the new, finer `Q`. An epoch ends when the
/// schedule exponent reaches its cap or after `stall_limit` straight rejections;
/// with `restart_on_saturation` a new epoch then begins while budget remains.
pub fn run_qbo<F: Scalar>(config: &RunConfig<F>, params: &QboParams<F>) -> Result<RunTrace<F>> {
    config.validate()?;
    params.validate()?;
    let obj = &config.objective;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tracker = Tracker::new(config);
    let mut epoch = 0u32;

    let stop = loop {
        let x0 = uniform_point(&mut rng, obj);
        let (t0, f0) = tracker.evaluate(&x0);
        let eta = initial_eta(f0, params.base)?;
        let mut schedule = QuantizationSchedule::new(eta, params.base, params.power_cap)?;
        let mut qp: F = schedule.q_param();
        let mut fq_opt = quantize(f0, qp)?.quantized;
        tracker.record(|| RunRecord { t: t0, x: x0.clone(), f: f0, fq: fq_opt, qp, accepted: true, epoch });
        let mut x_opt = x0;
        let mut rejections = 0u64;

        let epoch_end = loop {
            if tracker.succeeded() {
                break StopReason::Success;
            }
            if schedule.is_saturated() || (params.stall_limit > 0 && rejections >= params.stall_limit) {
                break StopReason::Saturated;
            }
            if !tracker.budget_left() {
                break StopReason::Budget;
            }
            let candidate = match params.proposal {
                Proposal::Uniform => uniform_point(&mut rng, obj),
                Proposal::Local { initial_step, global_fraction } => {
                    if F::unit_uniform(&mut rng) < global_fraction {
                        uniform_point(&mut rng, obj)
                    } else {
                        let shrink = F::from_u32(params.base).unwrap().powi(schedule.power() as i32).sqrt();
                        gaussian_move(&mut rng, obj, &x_opt, initial_step / shrink)
                    }
                }
            };
            let (t, f) = tracker.evaluate(&candidate);
            let fq = quantize(f, qp)?.quantized;
            let accepted = fq <= fq_opt;
            tracker.record(|| RunRecord { t, x: candidate.clone(), f, fq, qp, accepted, epoch });
            if !accepted {
                rejections += 1;
            } else {
                rejections = 0;
                x_opt = candidate;
                schedule.advance();
                qp = schedule.q_param();
                fq_opt = quantize(f, qp)?.quantized;
            }
        };

        match epoch_end {
            StopReason::Saturated if params.restart_on_saturation && tracker.budget_left() => epoch += 1,
            reason => break reason,
        }
    };
    Ok(tracker.finish(Algorithm::Qbo, stop, epoch + 1))
}

/// Metropolis random search with geometric cooling.
pub fn run_sa<F: Scalar>(config: &RunConfig<F>, params: &SaParams<F>) -> Result<RunTrace<F>> {
    config.validate()?;
    params.validate()?;
    let obj = &config.objective;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tracker = Tracker::new(config);

    let mut x = uniform_point(&mut rng, obj);
    let (t0, mut fx) = tracker.evaluate(&x);
    let mut temperature = params.initial_temperature.unwrap_or(fx + F::one());
    tracker.record(|| RunRecord { t: t0, x: x.clone(), f: fx, fq: fx, qp: temperature.recip(), accepted: true, epoch: 0 });

    while !tracker.succeeded() && tracker.budget_left() {
        let candidate = gaussian_move(&mut rng, obj, &x, params.step);
        let (t, f) = tracker.evaluate(&candidate);
        let delta = f - fx;
        let accepted = delta <= F::zero()
            || (temperature > F::zero() && F::unit_uniform(&mut rng) < (-delta / temperature).exp());
        let qp = temperature.recip();
        tracker.record(|| RunRecord { t, x: candidate.clone(), f, fq: f, qp, accepted, epoch: 0 });
        if accepted {
            x = candidate;
            fx = f;
        }
        temperature = temperature * params.cooling;
    }
    Ok(tracker.finish(Algorithm::Sa, StopReason::Budget, 1))
}

/// Path-integral simulated quantum annealing on continuous variables.
///
/// `P` replicas form a ring with harmonic coupling `J(Γ)·‖x_k − x_{k+1}‖²`.
/// Each sweep proposes one Gaussian move per replica and accepts it with the
/// Metropolis rule at the slice temperature on the change of
/// `f(x_k) + J·(‖x_k − x_{k−1}‖² + ‖x_k − x_{k+1}‖²)`. The transverse field
/// decays geometrically per sweep, which tightens the coupling.
pub fn run_qa<F: Scalar>(config: &RunConfig<F>, params: &QaParams<F>) -> Result<RunTrace<F>> {
    config.validate()?;
    params.validate()?;
    let obj = &config.objective;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tracker = Tracker::new(config);
    let p = params.replicas;

    let x0 = uniform_point(&mut rng, obj);
    let (t0, f0) = tracker.evaluate(&x0);
    let mut gamma = params.gamma0;
    tracker.record(|| RunRecord { t: t0, x: x0.clone(), f: f0, fq: f0, qp: gamma.recip(), accepted: true, epoch: 0 });
    let mut xs = vec![x0; p];
    let mut fs = vec![f0; p];

    let dist_sq = |a: &[F], b: &[F]| a.iter().zip(b).fold(F::zero(), |acc, (&u, &v)| acc + (u - v) * (u - v));

    'sweeps: loop {
        let coupling = params.coupling(gamma);
        let scale = params.step * gamma / params.gamma0;
        let qp = gamma.recip();
        for k in 0..p {
            if tracker.succeeded() || !tracker.budget_left() {
                break 'sweeps;
            }
            let candidate = gaussian_move(&mut rng, obj, &xs[k], scale);
            let (t, f) = tracker.evaluate(&candidate);
            let prev = &xs[(k + p - 1) % p];
            let next = &xs[(k + 1) % p];
            let spring_new = dist_sq(&candidate, prev) + dist_sq(&candidate, next);
            let spring_old = dist_sq(&xs[k], prev) + dist_sq(&xs[k], next);
            let delta = (f - fs[k]) + coupling * (spring_new - spring_old);
            let accepted =
                delta <= F::zero() || F::unit_uniform(&mut rng) < (-delta / params.temperature).exp();
            tracker.record(|| RunRecord { t, x: candidate.clone(), f, fq: f, qp, accepted, epoch: 0 });
            if accepted {
                xs[k] = candidate;
                fs[k] = f;
            }
        }
        gamma = (gamma * params.gamma_decay).max(F::min_positive_value());
    }
    Ok(tracker.finish(Algorithm::Qa, StopReason::Budget, 1))
}
