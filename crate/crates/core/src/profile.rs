//! Shear-modulus profiles, the calibration transform to a Schrödinger
//! potential with Robin data, and potential profiles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{lerp_uniform, nodal_derivatives, trapezoid};
use crate::scalar::Real;

/// Default number of intervals of the potential grid over `[0, x_I]`.
pub const DEFAULT_POTENTIAL_INTERVALS: usize = 2048;

/// Relative tolerance for "differs from the tail value" checks.
pub const TAIL_TOLERANCE: f64 = 1e-12;

const STENCIL_WIDTH: usize = 7;

/// Density-normalized shear modulus sampled in depth, constant `mu_tail`
/// below `x_i`.
///
/// The profile is interpolated by a C² piecewise quintic Hermite rule whose
/// nodal first and second derivatives come from 7-point finite-difference
/// stencils; nodes at or below `x_i` carry zero derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct ShearProfile<T: Real> {
    depth: Vec<T>,
    mu: Vec<T>,
    mu_tail: T,
    x_i: T,
    d1: Vec<T>,
    d2: Vec<T>,
}

impl<T: Real> ShearProfile<T> {
    pub fn new(depth: Vec<T>, mu: Vec<T>, mu_tail: T, x_i: T) -> Result<Self> {
        if depth.len() != mu.len() {
            return Err(Error::Domain(format!(
                "depth grid has {} samples but mu has {}",
                depth.len(),
                mu.len()
            )));
        }
        if depth.len() < STENCIL_WIDTH {
            return Err(Error::Domain(format!(
                "at least {STENCIL_WIDTH} samples are required"
            )));
        }
        if depth[0] != T::zero() {
            return Err(Error::Domain("depth grid must start at the surface x = 0".into()));
        }
        if depth.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("depth grid must be strictly increasing".into()));
        }
        if !(x_i > T::zero()) || *depth.last().unwrap() < x_i {
            return Err(Error::Domain("x_I must lie inside the depth grid".into()));
        }
        if !(mu_tail > T::zero()) {
            return Err(Error::Domain("mu_tail must be positive".into()));
        }
        if let Some((i, m)) = mu.iter().enumerate().find(|(_, m)| !(**m > T::zero())) {
            return Err(Error::Domain(format!(
                "non-positive shear modulus {m} at depth {}",
                depth[i]
            )));
        }
        let tol = T::of(TAIL_TOLERANCE) * mu_tail;
        if let Some(i) = (0..depth.len()).find(|&i| depth[i] >= x_i && (mu[i] - mu_tail).abs() > tol) {
            return Err(Error::Invariant(format!(
                "profile is not constant below x_I: mu({}) = {} != {}",
                depth[i], mu[i], mu_tail
            )));
        }
        let (mut d1, mut d2) = nodal_derivatives(&depth, &mu, STENCIL_WIDTH);
        for i in 0..depth.len() {
            if depth[i] >= x_i {
                d1[i] = T::zero();
                d2[i] = T::zero();
            }
        }
        Ok(Self { depth, mu, mu_tail, x_i, d1, d2 })
    }

    /// Samples `mu(x)` on `n + 1` uniform nodes over `[0, x_I + margin]`;
    /// `mu_tail` is used at and below `x_I`.
    pub fn from_fn(mu: impl Fn(T) -> T, mu_tail: T, x_i: T, margin: T, n: usize) -> Result<Self> {
        let len = x_i + margin;
        let nt = T::from_usize(n).unwrap();
        let depth: Vec<T> = (0..=n).map(|i| len * T::from_usize(i).unwrap() / nt).collect();
        let values = depth
            .iter()
            .map(|&x| if x >= x_i { mu_tail } else { mu(x) })
            .collect();
        Self::new(depth, values, mu_tail, x_i)
    }

    pub fn depth(&self) -> &[T] {
        &self.depth
    }

    pub fn mu(&self) -> &[T] {
        &self.mu
    }

    pub fn mu_tail(&self) -> T {
        self.mu_tail
    }

    pub fn x_i(&self) -> T {
        self.x_i
    }

    /// Last-cell nonvanishing: the last sample above `x_I` differs from the
    /// tail value by more than the tail tolerance.
    pub fn in_potential_family(&self) -> bool {
        let tol = T::of(TAIL_TOLERANCE) * self.mu_tail;
        self.depth
            .iter()
            .zip(&self.mu)
            .filter(|(x, _)| **x < self.x_i)
            .last()
            .is_some_and(|(_, m)| (*m - self.mu_tail).abs() > tol)
    }

    /// `(mu, mu', mu'')` at depth `x`, approaching from above (x-derivatives).
    pub fn eval(&self, x: T) -> (T, T, T) {
        if x > self.x_i || x > *self.depth.last().unwrap() {
            return (self.mu_tail, T::zero(), T::zero());
        }
        let n = self.depth.len();
        let i = self.depth.partition_point(|d| *d <= x).clamp(1, n - 1) - 1;
        let h = self.depth[i + 1] - self.depth[i];
        let t = (x - self.depth[i]) / h;
        let a0 = self.mu[i];
        let a1 = h * self.d1[i];
        let a2 = h * h * self.d2[i] * T::of(0.5);
        let p = self.mu[i + 1] - a0 - a1 - a2;
        let d = h * self.d1[i + 1] - a1 - T::of(2.0) * a2;
        let s = h * h * self.d2[i + 1] - T::of(2.0) * a2;
        let a3 = T::of(10.0) * p - T::of(4.0) * d + s * T::of(0.5);
        let a4 = T::of(-15.0) * p + T::of(7.0) * d - s;
        let a5 = T::of(6.0) * p - T::of(3.0) * d + s * T::of(0.5);
        let v = a0 + t * (a1 + t * (a2 + t * (a3 + t * (a4 + t * a5))));
        let dv = a1
            + t * (T::of(2.0) * a2 + t * (T::of(3.0) * a3 + t * (T::of(4.0) * a4 + t * T::of(5.0) * a5)));
        let ddv = T::of(2.0) * a2
            + t * (T::of(6.0) * a3 + t * (T::of(12.0) * a4 + t * T::of(20.0) * a5));
        (v, dv / h, ddv / (h * h))
    }
}

/// Real potential on a uniform grid over `[0, x_I]`, zero beyond, with its
/// Robin coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialProfile<T: Real> {
    pub grid: Vec<T>,
    #[serde(rename = "V")]
    pub values: Vec<T>,
    pub h: T,
    #[serde(rename = "x_I")]
    pub x_i: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<T>,
}

impl<T: Real> PotentialProfile<T> {
    pub fn new(values: Vec<T>, x_i: T, h: T) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Domain("a potential needs at least two samples".into()));
        }
        if !(x_i > T::zero()) {
            return Err(Error::Domain("x_I must be positive".into()));
        }
        if values.iter().any(|v| !v.is_finite()) || !h.is_finite() {
            return Err(Error::Domain("potential samples must be finite".into()));
        }
        let n = T::from_usize(values.len() - 1).unwrap();
        let grid = (0..values.len())
            .map(|i| x_i * T::from_usize(i).unwrap() / n)
            .collect();
        Ok(Self { grid, values, h, x_i, omega: None })
    }

    /// Samples `v` on `n + 1` uniform nodes over `[0, x_I]`.
    pub fn from_fn(v: impl Fn(T) -> T, x_i: T, h: T, n: usize) -> Result<Self> {
        let nt = T::from_usize(n).unwrap();
        let values = (0..=n).map(|i| v(x_i * T::from_usize(i).unwrap() / nt)).collect();
        Self::new(values, x_i, h)
    }

    pub fn zero(x_i: T, h: T, n: usize) -> Self {
        Self::new(vec![T::zero(); n + 1], x_i, h).expect("valid zero potential")
    }

    pub fn with_omega(mut self, omega: T) -> Self {
        self.omega = Some(omega);
        self
    }

    pub fn intervals(&self) -> usize {
        self.values.len() - 1
    }

    pub fn dx(&self) -> T {
        self.x_i / T::from_usize(self.intervals()).unwrap()
    }

    /// Linear interpolation of the samples; zero outside `[0, x_I]`.
    pub fn value_at(&self, x: T) -> T {
        lerp_uniform(&self.values, T::zero(), self.dx(), x)
    }

    /// ‖V‖ = ∫|V| by the trapezoid rule on the grid.
    pub fn l1_norm(&self) -> T {
        let abs: Vec<T> = self.values.iter().map(|v| v.abs()).collect();
        trapezoid(&abs, self.dx())
    }

    /// ∫|V′| for the piecewise-linear interpolant (total variation).
    pub fn derivative_l1_norm(&self) -> T {
        self.values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == T::zero())
    }

    /// The last grid cell carries nonzero potential.
    pub fn in_potential_family(&self) -> bool {
        let n = self.values.len();
        let scale = self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let tol = T::of(TAIL_TOLERANCE) * scale.max(T::one());
        self.values[n - 2].abs() > tol || self.values[n - 1].abs() > tol
    }

    pub fn to_f64(&self) -> PotentialProfile<f64> {
        PotentialProfile {
            grid: self.grid.iter().map(|v| v.to_f64_lossy()).collect(),
            values: self.values.iter().map(|v| v.to_f64_lossy()).collect(),
            h: self.h.to_f64_lossy(),
            x_i: self.x_i.to_f64_lossy(),
            omega: self.omega.map(|o| o.to_f64_lossy()),
        }
    }
}

/// Robin coefficient `h = -(1/2) μ̂_Z(0)/μ̂(0)` with `d/dZ = -d/dx`, i.e.
/// `h = (1/2) μ̂'(0)/μ̂(0)` in the stored depth coordinate.
pub fn robin_coefficient<T: Real>(profile: &ShearProfile<T>) -> T {
    let (mu0, dmu0, _) = profile.eval(T::zero());
    T::of(0.5) * dmu0 / mu0
}

/// Calibration transform at frequency `omega` onto `intervals + 1` uniform
/// nodes of `[0, x_I]`:
/// `V = μ̂''/(2μ̂) − (μ̂')²/(4μ̂²) − ω²/μ̂ + ω²/μ_I`.
pub fn calibrate<T: Real>(
    profile: &ShearProfile<T>,
    omega: T,
    intervals: usize,
) -> Result<PotentialProfile<T>> {
    if !(omega > T::zero()) {
        return Err(Error::Domain(format!("frequency must be positive, got {omega}")));
    }
    if intervals < 1 {
        return Err(Error::Domain("potential grid needs at least one interval".into()));
    }
    let x_i = profile.x_i();
    let w2 = omega * omega;
    let nt = T::from_usize(intervals).unwrap();
    let mut values = Vec::with_capacity(intervals + 1);
    for i in 0..=intervals {
        // left limit at x_I
        let x = if i == intervals { x_i } else { x_i * T::from_usize(i).unwrap() / nt };
        let (m, dm, ddm) = profile.eval(x);
        let v = ddm / (T::of(2.0) * m) - dm * dm / (T::of(4.0) * m * m) - w2 / m
            + w2 / profile.mu_tail();
        values.push(v);
    }
    let mut out = PotentialProfile::new(values, x_i, robin_coefficient(profile))?;
    out.omega = Some(omega);
    Ok(out)
}

/// Bump `sin⁸(π x / x_I)` on `[0, x_I]`, C⁷ across both ends.
pub fn smooth_bump<T: Real>(x: T, x_i: T) -> T {
    if x <= T::zero() || x >= x_i {
        return T::zero();
    }
    (T::PI() * x / x_i).sin().powi(8)
}
