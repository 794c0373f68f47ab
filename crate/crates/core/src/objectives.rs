//! Benchmark objectives with analytic gradients and Laplacians.
//!
//! Every registered objective is shifted by its raw minimum so that the global
//! minimum value is exactly zero and all values are nonnegative.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::{norm_sq, Scalar};

/// Names accepted by [`Objective::by_name`].
pub const REGISTERED: [&str; 6] = [
    "xin_she_yang_n4",
    "salomon",
    "drop_wave",
    "schaffer_n2",
    "sphere",
    "double_well",
];

/// The four benchmark functions used in the optimizer comparison.
pub const BENCHMARKS: [&str; 4] = ["xin_she_yang_n4", "salomon", "drop_wave", "schaffer_n2"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ObjectiveKind<F> {
    /// `2 + (Σ sin²xᵢ − exp(−Σxᵢ²))·exp(−Σ sin²√|xᵢ|)`
    XinSheYangN4,
    /// `1 − cos(2π‖x‖) + 0.1‖x‖`
    Salomon,
    /// `−(1 + cos(12‖x‖)) / (0.5‖x‖² + 2)`, two-dimensional.
    DropWave,
    /// `0.5 + (sin²(x² − y²) − 0.5) / (1 + 0.001(x² + y²))²`, two-dimensional.
    SchafferN2,
    /// `‖x‖² / 2`
    Sphere,
    /// `Σ aᵢ (xᵢ − cᵢ)²`
    Quadratic { coeffs: Vec<F>, center: Vec<F> },
    /// One-dimensional tilted double well `(x² − 1)² + tilt·x + lift`.
    DoubleWell { tilt: F, lift: F },
    /// Constant value; not shifted.
    Constant(F),
}

/// A non-global local minimum with the height of the barrier guarding it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalMinimum<F> {
    pub point: Vec<F>,
    /// Shifted objective value at `point`.
    pub value: F,
    /// Rise from `value` to the lowest saddle leading to a deeper basin.
    pub barrier: F,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Objective<F> {
    name: String,
    kind: ObjectiveKind<F>,
    dim: usize,
    box_lo: Vec<F>,
    box_hi: Vec<F>,
    opt_point: Vec<F>,
    raw_min: F,
    local_minima: Vec<LocalMinimum<F>>,
}

impl<F: Scalar> Objective<F> {
    /// Looks up a registered objective. `dim` applies to the dimension-free
    /// functions and is ignored for the fixed-dimension ones.
    pub fn by_name(name: &str, dim: usize) -> Result<Self> {
        match name {
            "xin_she_yang_n4" => Self::xin_she_yang_n4(dim),
            "salomon" => Self::salomon(dim),
            "drop_wave" => Ok(Self::drop_wave()),
            "schaffer_n2" => Ok(Self::schaffer_n2()),
            "sphere" => Self::sphere(dim),
            "double_well" => Ok(Self::double_well(F::lit(0.3), F::lit(0.3))),
            other => Err(Error::NotFound(format!("objective `{other}`"))),
        }
    }

    pub fn xin_she_yang_n4(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::symmetric("xin_she_yang_n4", ObjectiveKind::XinSheYangN4, dim, F::lit(10.0), F::one()))
    }

    pub fn salomon(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::symmetric("salomon", ObjectiveKind::Salomon, dim, F::lit(100.0), F::zero()))
    }

    pub fn drop_wave() -> Self {
        Self::symmetric("drop_wave", ObjectiveKind::DropWave, 2, F::lit(5.12), -F::one())
    }

    pub fn schaffer_n2() -> Self {
        Self::symmetric("schaffer_n2", ObjectiveKind::SchafferN2, 2, F::lit(100.0), F::zero())
    }

    /// Validation-only quadratic with unit Hessian.
    pub fn sphere(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::symmetric("sphere", ObjectiveKind::Sphere, dim, F::lit(10.0), F::zero()))
    }

    /// Separable quadratic `Σ aᵢ (xᵢ − cᵢ)²` with minimum zero at `center`.
    pub fn quadratic(coeffs: Vec<F>, center: Vec<F>) -> Result<Self> {
        check_dim(coeffs.len())?;
        if coeffs.len() != center.len() {
            return invalid("quadratic coefficients and center differ in length");
        }
        if coeffs.iter().any(|&a| !(a > F::zero()) || !a.is_finite()) {
            return invalid("quadratic coefficients must be positive and finite");
        }
        let ten = F::lit(10.0);
        let box_lo = center.iter().map(|&c| c - ten).collect();
        let box_hi = center.iter().map(|&c| c + ten).collect();
        Ok(Self {
            name: "quadratic".into(),
            dim: coeffs.len(),
            opt_point: center.clone(),
            kind: ObjectiveKind::Quadratic { coeffs, center },
            box_lo,
            box_hi,
            raw_min: F::zero(),
            local_minima: Vec::new(),
        })
    }

    /// Tilted double well on `[−2, 2]`. For positive tilt the right-hand well
    /// is the shallower one and is registered as a local minimum.
    pub fn double_well(tilt: F, lift: F) -> Self {
        let raw = |x: F| {
            let s = x * x - F::one();
            s * s + tilt * x + lift
        };
        let slope = |x: F| F::lit(4.0) * x * x * x - F::lit(4.0) * x + tilt;
        let curvature = |x: F| F::lit(12.0) * x * x - F::lit(4.0);
        let newton = |mut x: F| {
            for _ in 0..100 {
                let step = slope(x) / curvature(x);
                x = x - step;
                if step.abs() <= F::epsilon() * F::lit(4.0) {
                    break;
                }
            }
            x
        };
        let left = newton(-F::one());
        let right = newton(F::one());
        let saddle = newton(F::zero());
        let (global, local) = if raw(left) <= raw(right) { (left, right) } else { (right, left) };
        let raw_min = raw(global);
        let mut local_minima = Vec::new();
        // no local minimum when the wells are level or merged by a large tilt
        if (local - global).abs() > F::lit(1e-6) && raw(local) - raw_min > F::lit(1e-9) && curvature(local) > F::zero() {
            local_minima.push(LocalMinimum {
                point: vec![local],
                value: raw(local) - raw_min,
                barrier: raw(saddle) - raw(local),
            });
        }
        Self {
            name: "double_well".into(),
            kind: ObjectiveKind::DoubleWell { tilt, lift },
            dim: 1,
            box_lo: vec![-F::lit(2.0)],
            box_hi: vec![F::lit(2.0)],
            opt_point: vec![global],
            raw_min,
            local_minima,
        }
    }

    /// Constant objective over `[lo, hi]^dim`; its value is reported unshifted.
    pub fn constant(dim: usize, value: F, lo: F, hi: F) -> Result<Self> {
        check_dim(dim)?;
        if !(lo < hi) {
            return invalid("box lower bound must be below upper bound");
        }
        Ok(Self {
            name: "constant".into(),
            kind: ObjectiveKind::Constant(value),
            dim,
            box_lo: vec![lo; dim],
            box_hi: vec![hi; dim],
            opt_point: vec![(lo + hi) * F::lit(0.5); dim],
            raw_min: F::zero(),
            local_minima: Vec::new(),
        })
    }

    fn symmetric(name: &str, kind: ObjectiveKind<F>, dim: usize, half_width: F, raw_min: F) -> Self {
        Self {
            name: name.into(),
            kind,
            dim,
            box_lo: vec![-half_width; dim],
            box_hi: vec![half_width; dim],
            opt_point: vec![F::zero(); dim],
            raw_min,
            local_minima: Vec::new(),
        }
    }

    /// Replaces the search box.
    pub fn with_box(mut self, lo: Vec<F>, hi: Vec<F>) -> Result<Self> {
        if lo.len() != self.dim || hi.len() != self.dim {
            return invalid(format!("box must have {} coordinates", self.dim));
        }
        if lo.iter().zip(&hi).any(|(&l, &h)| !(l < h) || !l.is_finite() || !h.is_finite()) {
            return invalid("box lower bounds must be finite and strictly below upper bounds");
        }
        self.box_lo = lo;
        self.box_hi = hi;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &ObjectiveKind<F> {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn box_lo(&self) -> &[F] {
        &self.box_lo
    }

    pub fn box_hi(&self) -> &[F] {
        &self.box_hi
    }

    pub fn opt_point(&self) -> &[F] {
        &self.opt_point
    }

    /// Raw (unshifted) minimum value.
    pub fn opt_value_raw(&self) -> F {
        self.raw_min
    }

    /// Shifted minimum value; zero for every registered objective.
    pub fn opt_value(&self) -> F {
        match self.kind {
            ObjectiveKind::Constant(c) => c,
            _ => F::zero(),
        }
    }

    pub fn local_minima(&self) -> &[LocalMinimum<F>] {
        &self.local_minima
    }

    pub fn contains(&self, x: &[F]) -> bool {
        x.len() == self.dim && x.iter().zip(self.box_lo.iter().zip(&self.box_hi)).all(|(&v, (&l, &h))| v >= l && v <= h)
    }

    fn check_point(&self, x: &[F]) -> Result<()> {
        if x.len() != self.dim {
            return invalid(format!("{} expects {} coordinates, got {}", self.name, self.dim, x.len()));
        }
        Ok(())
    }

    /// Shifted objective value `f_raw(x) − min f_raw`.
    pub fn evaluate(&self, x: &[F]) -> Result<F> {
        self.check_point(x)?;
        Ok(self.value(x))
    }

    /// Unshifted formula value.
    pub fn evaluate_raw(&self, x: &[F]) -> Result<F> {
        self.check_point(x)?;
        Ok(self.raw(x))
    }

    /// Shifted value without the dimension check.
    #[inline]
    pub(crate) fn value(&self, x: &[F]) -> F {
        self.raw(x) - self.raw_min
    }

    fn raw(&self, x: &[F]) -> F {
        let one = F::one();
        let half = F::lit(0.5);
        match &self.kind {
            ObjectiveKind::XinSheYangN4 => {
                let (sum_sin2, sum_sq, sum_root) = x.iter().fold((F::zero(), F::zero(), F::zero()), |(a, b, c), &v| {
                    let s = v.sin();
                    let r = v.abs().sqrt().sin();
                    (a + s * s, b + v * v, c + r * r)
                });
                F::lit(2.0) + (sum_sin2 - (-sum_sq).exp()) * (-sum_root).exp()
            }
            ObjectiveKind::Salomon => {
                let r = norm_sq(x).sqrt();
                one - (F::TAU() * r).cos() + F::lit(0.1) * r
            }
            ObjectiveKind::DropWave => {
                let s = norm_sq(x);
                -(one + (F::lit(12.0) * s.sqrt()).cos()) / (half * s + F::lit(2.0))
            }
            ObjectiveKind::SchafferN2 => {
                let (a, b) = (x[0], x[1]);
                let sn = (a * a - b * b).sin();
                let p = one + F::lit(0.001) * (a * a + b * b);
                half + (sn * sn - half) / (p * p)
            }
            ObjectiveKind::Sphere => half * norm_sq(x),
            ObjectiveKind::Quadratic { coeffs, center } => coeffs
                .iter()
                .zip(center)
                .zip(x)
                .fold(F::zero(), |acc, ((&a, &c), &v)| acc + a * (v - c) * (v - c)),
            ObjectiveKind::DoubleWell { tilt, lift } => {
                let v = x[0];
                let s = v * v - one;
                s * s + *tilt * v + *lift
            }
            ObjectiveKind::Constant(c) => *c,
        }
    }

    fn check_smooth(&self, x: &[F]) -> Result<()> {
        let kink = match self.kind {
            ObjectiveKind::Salomon | ObjectiveKind::DropWave => norm_sq(x) == F::zero(),
            ObjectiveKind::XinSheYangN4 => x.iter().any(|&v| v == F::zero()),
            _ => false,
        };
        if kink {
            Err(Error::NonDifferentiable { objective: self.name.clone() })
        } else {
            Ok(())
        }
    }

    /// Analytic gradient.
    pub fn gradient(&self, x: &[F]) -> Result<Vec<F>> {
        self.check_point(x)?;
        self.check_smooth(x)?;
        Ok(self.grad_unchecked(x))
    }

    pub(crate) fn grad_unchecked(&self, x: &[F]) -> Vec<F> {
        let two = F::lit(2.0);
        match &self.kind {
            ObjectiveKind::Salomon | ObjectiveKind::DropWave => {
                let r = norm_sq(x).sqrt();
                let (d1, _) = self.radial_derivatives(r);
                x.iter().map(|&v| d1 * v / r).collect()
            }
            ObjectiveKind::SchafferN2 => {
                let t = SchafferTerms::new(x[0], x[1]);
                (0..2).map(|i| t.first(i)).collect()
            }
            ObjectiveKind::XinSheYangN4 => {
                let t = YangTerms::new(x);
                (0..x.len()).map(|i| t.a_i[i] * t.b + t.a * t.b_i(i)).collect()
            }
            ObjectiveKind::Sphere => x.to_vec(),
            ObjectiveKind::Quadratic { coeffs, center } => {
                coeffs.iter().zip(center).zip(x).map(|((&a, &c), &v)| two * a * (v - c)).collect()
            }
            ObjectiveKind::DoubleWell { tilt, .. } => {
                let v = x[0];
                vec![F::lit(4.0) * v * v * v - F::lit(4.0) * v + *tilt]
            }
            ObjectiveKind::Constant(_) => vec![F::zero(); x.len()],
        }
    }

    /// Analytic Laplacian `Σ ∂²f/∂xᵢ²`.
    pub fn laplacian(&self, x: &[F]) -> Result<F> {
        self.check_point(x)?;
        self.check_smooth(x)?;
        Ok(self.laplacian_unchecked(x))
    }

    pub(crate) fn laplacian_unchecked(&self, x: &[F]) -> F {
        let two = F::lit(2.0);
        match &self.kind {
            ObjectiveKind::Salomon | ObjectiveKind::DropWave => {
                let r = norm_sq(x).sqrt();
                let (d1, d2) = self.radial_derivatives(r);
                d2 + F::from_usize(x.len() - 1).unwrap() * d1 / r
            }
            ObjectiveKind::SchafferN2 => {
                let t = SchafferTerms::new(x[0], x[1]);
                t.second(0) + t.second(1)
            }
            ObjectiveKind::XinSheYangN4 => {
                let t = YangTerms::new(x);
                (0..x.len()).fold(F::zero(), |acc, i| {
                    let b_i = t.b_i(i);
                    let b_ii = (t.c_i[i] * t.c_i[i] - t.c_ii[i]) * t.b;
                    acc + t.a_ii[i] * t.b + two * t.a_i[i] * b_i + t.a * b_ii
                })
            }
            ObjectiveKind::Sphere => F::from_usize(x.len()).unwrap(),
            ObjectiveKind::Quadratic { coeffs, .. } => two * coeffs.iter().fold(F::zero(), |acc, &a| acc + a),
            ObjectiveKind::DoubleWell { .. } => F::lit(12.0) * x[0] * x[0] - F::lit(4.0),
            ObjectiveKind::Constant(_) => F::zero(),
        }
    }

    /// First and second derivative of the radial profile for Salomon and Drop-Wave.
    fn radial_derivatives(&self, r: F) -> (F, F) {
        match self.kind {
            ObjectiveKind::Salomon => {
                let w = F::TAU();
                ((w * r).sin() * w + F::lit(0.1), (w * r).cos() * w * w)
            }
            ObjectiveKind::DropWave => {
                let (sin, cos) = (F::lit(12.0) * r).sin_cos();
                let n = F::one() + cos;
                let n1 = -F::lit(12.0) * sin;
                let n2 = -F::lit(144.0) * cos;
                let d = F::lit(0.5) * r * r + F::lit(2.0);
                let d1 = r;
                let d2 = F::one();
                let num1 = n1 * d - n * d1;
                let u1 = num1 / (d * d);
                let u2 = (n2 * d - n * d2) / (d * d) - F::lit(2.0) * d1 * num1 / (d * d * d);
                (-u1, -u2)
            }
            _ => unreachable!("radial profile requested for a non-radial objective"),
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        invalid("dimension must be positive")
    } else {
        Ok(())
    }
}

/// Pieces of Schaffer N2 written as `0.5 + N·P⁻²` with `N = sin²(x² − y²) − 0.5`.
struct SchafferTerms<F> {
    x: [F; 2],
    sin2a: F,
    cos2a: F,
    n: F,
    p: F,
}

impl<F: Scalar> SchafferTerms<F> {
    fn new(x: F, y: F) -> Self {
        let a = x * x - y * y;
        let s = a.sin();
        let (sin2a, cos2a) = (a + a).sin_cos();
        Self {
            x: [x, y],
            sin2a,
            cos2a,
            n: s * s - F::lit(0.5),
            p: F::one() + F::lit(0.001) * (x * x + y * y),
        }
    }

    fn sign(i: usize) -> F {
        if i == 0 {
            F::one()
        } else {
            -F::one()
        }
    }

    fn first(&self, i: usize) -> F {
        let v = self.x[i];
        let n_i = F::lit(2.0) * Self::sign(i) * v * self.sin2a;
        let p2 = self.p * self.p;
        n_i / p2 - F::lit(0.004) * v * self.n / (p2 * self.p)
    }

    fn second(&self, i: usize) -> F {
        let v = self.x[i];
        let sg = Self::sign(i);
        let n_i = F::lit(2.0) * sg * v * self.sin2a;
        let n_ii = F::lit(2.0) * sg * self.sin2a + F::lit(8.0) * v * v * self.cos2a;
        let p2 = self.p * self.p;
        let p3 = p2 * self.p;
        let inv_p2_i = -F::lit(0.004) * v / p3;
        let inv_p2_ii = -F::lit(0.004) / p3 + F::lit(0.000024) * v * v / (p3 * self.p);
        n_ii / p2 + F::lit(2.0) * n_i * inv_p2_i + self.n * inv_p2_ii
    }
}

/// Pieces of Xin-She Yang N4 written as `2 + A·B` with `B = exp(−C)`.
struct YangTerms<F> {
    a: F,
    b: F,
    a_i: Vec<F>,
    a_ii: Vec<F>,
    c_i: Vec<F>,
    c_ii: Vec<F>,
}

impl<F: Scalar> YangTerms<F> {
    fn new(x: &[F]) -> Self {
        let two = F::lit(2.0);
        let four = F::lit(4.0);
        let sum_sq = norm_sq(x);
        let e = (-sum_sq).exp();
        let mut sum_sin2 = F::zero();
        let mut c = F::zero();
        let mut a_i = Vec::with_capacity(x.len());
        let mut a_ii = Vec::with_capacity(x.len());
        let mut c_i = Vec::with_capacity(x.len());
        let mut c_ii = Vec::with_capacity(x.len());
        for &v in x {
            let s = v.sin();
            sum_sin2 = sum_sin2 + s * s;
            a_i.push((two * v).sin() + two * v * e);
            a_ii.push(two * (two * v).cos() + two * e - four * v * v * e);

            let u = v.abs().sqrt();
            let su = u.sin();
            c = c + su * su;
            let (sin2u, cos2u) = (two * u).sin_cos();
            c_i.push(v.signum() * sin2u / (two * u));
            c_ii.push((two * u * cos2u - sin2u) / (four * u * u * u));
        }
        Self { a: sum_sin2 - e, b: (-c).exp(), a_i, a_ii, c_i, c_ii }
    }

    fn b_i(&self, i: usize) -> F {
        -self.c_i[i] * self.b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn central_gradient(obj: &Objective<f64>, x: &[f64], h: f64) -> Vec<f64> {
        (0..x.len())
            .map(|i| {
                let mut p = x.to_vec();
                let mut m = x.to_vec();
                p[i] += h;
                m[i] -= h;
                (obj.evaluate(&p).unwrap() - obj.evaluate(&m).unwrap()) / (2.0 * h)
            })
            .collect()
    }

    fn second_difference_laplacian(obj: &Objective<f64>, x: &[f64], h: f64) -> f64 {
        let f0 = obj.evaluate(x).unwrap();
        (0..x.len())
            .map(|i| {
                let mut p = x.to_vec();
                let mut m = x.to_vec();
                p[i] += h;
                m[i] -= h;
                (obj.evaluate(&p).unwrap() - 2.0 * f0 + obj.evaluate(&m).unwrap()) / (h * h)
            })
            .sum()
    }

    #[test]
    fn table_values_at_origin() {
        assert_eq!(Objective::<f64>::salomon(2).unwrap().evaluate(&[0.0, 0.0]).unwrap(), 0.0);
        let schaffer = Objective::<f64>::schaffer_n2();
        assert_eq!(schaffer.evaluate_raw(&[0.0, 0.0]).unwrap(), 0.0);
        let drop = Objective::<f64>::drop_wave();
        assert_eq!(drop.evaluate_raw(&[0.0, 0.0]).unwrap(), -1.0);
        assert_eq!(drop.evaluate(&[0.0, 0.0]).unwrap(), 0.0);
        let yang = Objective::<f64>::xin_she_yang_n4(2).unwrap();
        assert_eq!(yang.evaluate_raw(&[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(yang.evaluate(&[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn lookup_by_name() {
        for name in REGISTERED {
            let obj = Objective::<f64>::by_name(name, 3).unwrap();
            assert_eq!(obj.name(), name);
        }
        assert_eq!(Objective::<f64>::by_name("drop_wave", 7).unwrap().dim(), 2);
        assert_eq!(Objective::<f64>::by_name("salomon", 7).unwrap().dim(), 7);
        assert!(matches!(Objective::<f64>::by_name("rosenbrock", 2), Err(Error::NotFound(_))));
        assert!(Objective::<f64>::by_name("sphere", 0).is_err());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let obj = Objective::<f64>::drop_wave();
        assert!(obj.evaluate(&[1.0]).is_err());
        assert!(obj.gradient(&[1.0, 2.0, 3.0]).is_err());
        assert!(obj.laplacian(&[]).is_err());
    }

    #[test]
    fn sphere_and_quadratic_calculus() {
        let sphere = Objective::<f64>::sphere(2).unwrap();
        assert_eq!(sphere.gradient(&[3.0, -4.0]).unwrap(), vec![3.0, -4.0]);
        let sphere5 = Objective::<f64>::sphere(5).unwrap();
        assert_eq!(sphere5.laplacian(&[0.3, -1.0, 2.0, 7.0, 0.0]).unwrap(), 5.0);
        let quad = Objective::quadratic(vec![1.0, 2.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(quad.laplacian(&[0.4, -9.0]).unwrap(), 6.0);
        assert_eq!(quad.evaluate(&[1.0, 1.0]).unwrap(), 3.0);
    }

    #[test]
    fn schaffer_origin_is_stationary() {
        let g = Objective::<f64>::schaffer_n2().gradient(&[0.0, 0.0]).unwrap();
        assert_eq!(g, vec![0.0, 0.0]);
    }

    #[test]
    fn non_smooth_loci_are_reported() {
        let err = Error::NonDifferentiable { objective: "salomon".into() };
        assert_eq!(Objective::<f64>::salomon(2).unwrap().gradient(&[0.0, 0.0]), Err(err));
        assert!(Objective::<f64>::drop_wave().laplacian(&[0.0, 0.0]).is_err());
        assert!(Objective::<f64>::xin_she_yang_n4(2).unwrap().gradient(&[0.5, 0.0]).is_err());
        assert!(Objective::<f64>::xin_she_yang_n4(2).unwrap().gradient(&[0.5, 0.1]).is_ok());
    }

    #[test]
    fn drop_wave_gradient_matches_finite_differences() {
        let obj = Objective::<f64>::drop_wave();
        let x = [0.5, 0.5];
        let g = obj.gradient(&x).unwrap();
        let fd = central_gradient(&obj, &x, 1e-5);
        for (a, b) in g.iter().zip(&fd) {
            assert!((a - b).abs() <= 1e-5 * a.abs().max(b.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn schaffer_laplacian_matches_second_differences() {
        let obj = Objective::<f64>::schaffer_n2();
        let x = [0.3, -0.7];
        let lap = obj.laplacian(&x).unwrap();
        let fd = second_difference_laplacian(&obj, &x, 1e-4);
        assert!((lap - fd).abs() <= 1e-3 * lap.abs(), "{lap} vs {fd}");
    }

    #[test]
    fn double_well_minima() {
        let dw = Objective::<f64>::double_well(0.3, 0.3);
        let global = dw.opt_point()[0];
        assert!(global < -1.0 && global > -1.1, "{global}");
        assert!(dw.evaluate(&[global]).unwrap().abs() < 1e-12);
        let local = &dw.local_minima()[0];
        assert!(local.point[0] > 0.9 && local.point[0] < 1.0);
        assert!(local.value > 0.5 && local.barrier > 0.3);
        assert!(dw.gradient(&local.point).unwrap()[0].abs() < 1e-12);
        // untilted well has two equal minima: no local minimum is registered
        assert!(Objective::<f64>::double_well(0.0, 0.0).local_minima().is_empty());
    }

    #[test]
    fn box_override() {
        let obj = Objective::<f64>::sphere(2).unwrap().with_box(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(obj.box_hi(), &[1.0, 1.0]);
        assert!(obj.clone().with_box(vec![1.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(obj.with_box(vec![0.0], vec![1.0]).is_err());
    }

    #[test]
    fn single_precision_evaluation() {
        let obj = Objective::<f32>::drop_wave();
        assert_eq!(obj.evaluate(&[0.0, 0.0]).unwrap(), 0.0);
        let g = obj.gradient(&[0.5, 0.5]).unwrap();
        let g64 = Objective::<f64>::drop_wave().gradient(&[0.5, 0.5]).unwrap();
        assert!((g[0] as f64 - g64[0]).abs() < 1e-4);
    }
}
