//! Quantization-based global optimization.
//!
//! At the center is blind random search on a quantized objective whose
//! quantization step shrinks as the search succeeds ([`run_qbo`]). Around it
//! sit the quantizer itself, benchmark objectives with analytic derivatives,
//! two annealing baselines for comparison, and Langevin-dynamics diagnostics
//! for the continuous-time picture of the search.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the double-precision instantiation used by the harness.

// `!(x > 0)` is used on purpose so that NaN parameters are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod langevin;
pub mod objectives;
pub mod optimizers;
pub mod quantizer;
pub mod scalar;

pub use error::{Error, Result};
pub use objectives::{LocalMinimum, Objective, ObjectiveKind};
pub use optimizers::{
    improvement_ratio, run, run_qa, run_qbo, run_sa, Algorithm, AlgorithmParams, Proposal, QaParams, QboParams,
    RunConfig, RunRecord, RunTrace, SaParams, StopReason,
};
pub use quantizer::{
    error_statistics, initial_eta, quantize, Advance, ErrorStatistics, QuantizationSchedule, QuantizedValue,
};
pub use scalar::Scalar;

pub type QuantizedValue64 = QuantizedValue<f64>;
pub type QuantizedValue32 = QuantizedValue<f32>;
pub type Objective64 = Objective<f64>;
pub type Objective32 = Objective<f32>;
pub type RunConfig64 = RunConfig<f64>;
pub type RunTrace64 = RunTrace<f64>;
pub type RunRecord64 = RunRecord<f64>;
pub type AlgorithmParams64 = AlgorithmParams<f64>;
pub type LangevinPath64 = langevin::LangevinPath<f64>;
pub type SearchStepParams64 = langevin::SearchStepParams<f64>;
