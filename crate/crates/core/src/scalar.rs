//! Floating-point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Real scalar used throughout the crate: `f32` or `f64`.
///
/// Sampling hooks live on the trait so generic code does not need to carry
/// `StandardNormal: Distribution<F>` bounds around.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    fn lit(x: f64) -> Self;

    fn to_f64_lossy(self) -> f64;

    /// Standard normal draw.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Uniform draw on `[0, 1)`.
    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

macro_rules! impl_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            #[inline]
            fn lit(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn to_f64_lossy(self) -> f64 {
                self as f64
            }

            #[inline]
            fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                <StandardNormal as Distribution<$t>>::sample(&StandardNormal, rng)
            }

            #[inline]
            fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
                rng.random::<$t>()
            }
        }
    };
}

impl_scalar!(f32);
impl_scalar!(f64);

/// Uniform draw on `[lo, hi)`.
#[inline]
pub(crate) fn uniform_in<F: Scalar, R: Rng + ?Sized>(rng: &mut R, lo: F, hi: F) -> F {
    let x = lo + (hi - lo) * F::unit_uniform(rng);
    // lo + w*u can round up to hi
    if x >= hi {
        lo
    } else {
        x
    }
}

/// Reflects `x` back into `[lo, hi]`, folding repeatedly for large excursions.
pub(crate) fn reflect_into<F: Scalar>(x: F, lo: F, hi: F) -> F {
    if x >= lo && x <= hi {
        return x;
    }
    let width = hi - lo;
    let period = width + width;
    let mut y = (x - lo) % period;
    if y < F::zero() {
        y = y + period;
    }
    if y > width {
        y = period - y;
    }
    (lo + y).max(lo).min(hi)
}

pub(crate) fn norm_sq<F: Scalar>(v: &[F]) -> F {
    v.iter().fold(F::zero(), |acc, &x| acc + x * x)
}
