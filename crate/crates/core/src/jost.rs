//! Jost solution and Jost function of `-u'' + V u = k² u` on the half line
//! with Robin data `u'(0) + h u(0) = 0`.
//!
//! The Faddeev function `χ = f e^{-ikx}` solves `χ'' + 2ik χ' = V χ` with
//! `χ(x_I) = 1`, `χ'(x_I) = 0`. It is propagated from `x_I` to `0` with a
//! fixed-step fourth-order Magnus integrator over the piecewise-linear
//! interpolant of the potential samples, and the k-derivative is carried as
//! the exact tangent of the same propagator. Cells where the potential is
//! constant are propagated exactly.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::PotentialProfile;

type C = Complex64;
type Mat = [[C; 2]; 2];

/// Largest `|k|·step` of the Magnus integrator.
pub const DEFAULT_STEP_FACTOR: f64 = 0.1;

/// On sloped cells the step also keeps `|V'|^{1/3}·step` below this share
/// of the step factor; constant cells are exact.
const SLOPE_STEP_FACTOR: f64 = 0.1;

/// Target `|k| Δx` for the refined grid of the square integral.
const SQUARE_INTEGRAL_STEP: f64 = 0.005;

/// Log-magnitude beyond which results are not representable in f64.
const LOG_OVERFLOW: f64 = 700.0;
const RESCALE_ABOVE: f64 = 1e100;

const I: C = C { re: 0.0, im: 1.0 };
const ZERO: C = C { re: 0.0, im: 0.0 };
const ONE: C = C { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JostEval {
    pub k: C,
    /// f(0, k)
    pub f0: C,
    /// f'(0, k)
    pub fp0: C,
    /// f_h(k) = h f(0,k) + f'(0,k)
    pub fh: C,
    /// ∂_k f_h(k)
    pub fh_dk: C,
    /// |W(f, f̄) + 2ik| at x = 0, for real k only.
    pub wronskian_residual: Option<f64>,
}

/// Evaluator of a Jost function and its k-derivative.
///
/// Implementations must be pure and reentrant.
pub trait JostEvaluator: Sync {
    fn fh(&self, k: C) -> Result<C> {
        Ok(self.fh_with_dk(k)?.0)
    }

    fn fh_with_dk(&self, k: C) -> Result<(C, C)>;
}

impl<E: JostEvaluator + ?Sized> JostEvaluator for &E {
    fn fh(&self, k: C) -> Result<C> {
        (**self).fh(k)
    }
    fn fh_with_dk(&self, k: C) -> Result<(C, C)> {
        (**self).fh_with_dk(k)
    }
}

/// Closed-form evaluator from a pair of functions.
pub struct Analytic<F, D> {
    pub f: F,
    pub df: D,
}

impl<F, D> JostEvaluator for Analytic<F, D>
where
    F: Fn(C) -> C + Sync,
    D: Fn(C) -> C + Sync,
{
    fn fh(&self, k: C) -> Result<C> {
        Ok((self.f)(k))
    }
    fn fh_with_dk(&self, k: C) -> Result<(C, C)> {
        Ok(((self.f)(k), (self.df)(k)))
    }
}

/// Jost function of a sampled potential with Robin coefficient `h`.
#[derive(Debug, Clone)]
pub struct ForwardJost {
    potential: PotentialProfile<f64>,
    h: f64,
    step_factor: f64,
    constant_cells: Vec<bool>,
    max_abs_v: f64,
    l1: f64,
}

/// Faddeev data at the surface plus the tangent, with a common log scale.
#[derive(Debug, Clone, Copy)]
struct SurfaceState {
    chi: C,
    dchi: C,
    chi_k: C,
    dchi_k: C,
    log_scale: f64,
}

impl ForwardJost {
    pub fn new(potential: &PotentialProfile<f64>) -> Self {
        Self::with_h(potential, potential.h)
    }

    pub fn with_h(potential: &PotentialProfile<f64>, h: f64) -> Self {
        let constant_cells = potential.values.windows(2).map(|w| w[0] == w[1]).collect();
        let max_abs_v = potential.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Self {
            potential: potential.clone(),
            h,
            step_factor: DEFAULT_STEP_FACTOR,
            constant_cells,
            max_abs_v,
            l1: potential.l1_norm(),
        }
    }

    pub fn with_step_factor(mut self, step_factor: f64) -> Self {
        assert!(step_factor > 0.0);
        self.step_factor = step_factor;
        self
    }

    pub fn potential(&self) -> &PotentialProfile<f64> {
        &self.potential
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn x_i(&self) -> f64 {
        self.potential.x_i
    }

    /// ‖V‖ by the trapezoid rule.
    pub fn l1_norm(&self) -> f64 {
        self.l1
    }

    /// Largest |Im k| in the lower half-plane that the configured precision
    /// can represent.
    pub fn max_safe_im_k(&self) -> f64 {
        LOG_OVERFLOW / (2.0 * self.potential.x_i)
    }

    fn substeps(&self, k: C, dx: f64) -> usize {
        let scale = k.norm().max(self.max_abs_v.sqrt());
        ((scale * dx / self.step_factor).ceil() as usize).max(1)
    }

    /// Propagates `(χ, χ')` and its k-tangent from `x_I` down to the node
    /// `stop` (inclusive), calling `visit(node, state)` at every node.
    fn propagate(
        &self,
        k: C,
        stop: usize,
        mut visit: impl FnMut(usize, &SurfaceState),
    ) -> Result<SurfaceState> {
        let n = self.potential.intervals();
        let dx = self.potential.dx();
        let v = &self.potential.values;
        let m = self.substeps(k, dx);
        let hs = -dx / m as f64;
        let mut st = SurfaceState {
            chi: ONE,
            dchi: ZERO,
            chi_k: ZERO,
            dchi_k: ZERO,
            log_scale: 0.0,
        };
        visit(n, &st);
        let g = 3f64.sqrt() / 6.0;
        for cell in (stop..n).rev() {
            let (v_left, v_right) = (v[cell], v[cell + 1]);
            if self.constant_cells[cell] {
                let (e, de) = magnus_step(k, v_left, v_left, hs);
                for _ in 0..m {
                    apply(&mut st, &e, &de);
                }
            } else {
                let slope = ((v_right - v_left) / dx).abs();
                let m_sloped = m.max((dx * slope.cbrt() / (self.step_factor * SLOPE_STEP_FACTOR)).ceil() as usize);
                let hs = -dx / m_sloped as f64;
                for j in 0..m_sloped {
                    // substep runs from s0 to s0 + hs, measured from the left node
                    let s0 = dx + j as f64 * hs;
                    let at = |s: f64| v_left + (v_right - v_left) * (s / dx);
                    let v1 = at(s0 + (0.5 - g) * hs);
                    let v2 = at(s0 + (0.5 + g) * hs);
                    let (e, de) = magnus_step(k, v1, v2, hs);
                    apply(&mut st, &e, &de);
                }
            }
            let big = st.chi.norm().max(st.dchi.norm()).max(st.chi_k.norm()).max(st.dchi_k.norm());
            if big > RESCALE_ABOVE {
                st.chi /= big;
                st.dchi /= big;
                st.chi_k /= big;
                st.dchi_k /= big;
                st.log_scale += big.ln();
            }
            if !big.is_finite() {
                return Err(self.overflow(k));
            }
            visit(cell, &st);
        }
        Ok(st)
    }

    fn overflow(&self, k: C) -> Error {
        Error::Overflow {
            im_k: k.im.abs(),
            max_safe: self.max_safe_im_k(),
            x_i: self.potential.x_i,
        }
    }

    fn unscale(&self, k: C, st: &SurfaceState) -> Result<[C; 4]> {
        let peak = st.chi.norm().max(st.dchi.norm()).max(1e-300).ln() + st.log_scale;
        if peak > LOG_OVERFLOW {
            return Err(self.overflow(k));
        }
        let s = st.log_scale.exp();
        Ok([st.chi * s, st.dchi * s, st.chi_k * s, st.dchi_k * s])
    }

    /// `(χ(0,k), χ'(0,k))`; `f'(0,k) = χ'(0,k) + ik χ(0,k)`.
    pub fn faddeev_solve(&self, k: C) -> Result<(C, C)> {
        let st = self.propagate(k, 0, |_, _| {})?;
        let [chi, dchi, _, _] = self.unscale(k, &st)?;
        Ok((chi, dchi))
    }

    pub fn evaluate(&self, k: C) -> Result<JostEval> {
        let st = self.propagate(k, 0, |_, _| {})?;
        let [chi, dchi, chi_k, dchi_k] = self.unscale(k, &st)?;
        let f0 = chi;
        let fp0 = dchi + I * k * chi;
        let f0_k = chi_k;
        let fp0_k = dchi_k + I * chi + I * k * chi_k;
        let fh = self.h * f0 + fp0;
        let fh_dk = self.h * f0_k + fp0_k;
        let wronskian_residual = if k.im == 0.0 {
            // f(0,-k) = conj f(0,k) for real k and real V
            let w = f0 * fp0.conj() - fp0 * f0.conj();
            Some((w + 2.0 * I * k).norm())
        } else {
            None
        };
        Ok(JostEval { k, f0, fp0, fh, fh_dk, wronskian_residual })
    }

    /// `(f(x_j,k), f'(x_j,k))` at every grid node `x_j`.
    pub fn solution_on_grid(&self, k: C) -> Result<Vec<(C, C)>> {
        let n = self.potential.intervals();
        let dx = self.potential.dx();
        let mut raw = vec![(ZERO, ZERO, 0.0); n + 1];
        self.propagate(k, 0, |j, st| raw[j] = (st.chi, st.dchi, st.log_scale))?;
        raw.iter()
            .enumerate()
            .map(|(j, (chi, dchi, ls))| {
                let x = j as f64 * dx;
                let phase = I * k * x + *ls;
                if phase.re + chi.norm().max(1e-300).ln() > LOG_OVERFLOW {
                    return Err(self.overflow(k));
                }
                let e = phase.exp();
                Ok((chi * e, (dchi + I * k * chi) * e))
            })
            .collect()
    }

    /// `W(f(·,k), f(·,-k))(x)` at grid node `node`.
    pub fn wronskian_at(&self, k: C, node: usize) -> Result<C> {
        let plus = self.solution_on_grid(k)?;
        let minus = self.solution_on_grid(-k)?;
        let (f, fp) = plus[node];
        let (g, gp) = minus[node];
        Ok(f * gp - fp * g)
    }

    /// `∫₀^∞ f(x,k)² dx` for `Im k > 0`: endpoint-corrected trapezoid on a
    /// refined copy of the grid plus the exact plane-wave tail.
    pub fn square_integral(&self, k: C) -> Result<C> {
        if !(k.im > 0.0) {
            return Err(Error::Domain(format!("square integral needs Im k > 0, got {k}")));
        }
        let dx = self.potential.dx();
        let scale = k.norm().max(self.max_abs_v.sqrt());
        let r = ((scale * dx / SQUARE_INTEGRAL_STEP).ceil() as usize).max(1);
        let v = &self.potential.values;
        // linear interpolation reproduces the propagator's cell model
        let fine: Vec<f64> = (0..v.len() - 1)
            .flat_map(|c| (0..r).map(move |j| v[c] + (v[c + 1] - v[c]) * (j as f64 / r as f64)))
            .chain(std::iter::once(v[v.len() - 1]))
            .collect();
        let refined = PotentialProfile::new(fine, self.potential.x_i, self.potential.h)?;
        let sol = ForwardJost::with_h(&refined, self.h).with_step_factor(self.step_factor).solution_on_grid(k)?;
        let hs = refined.dx();
        let g: Vec<C> = sol.iter().map(|(f, _)| f * f).collect();
        let dg = |(f, fp): &(C, C)| 2.0 * f * fp;
        let trapezoid = hs * (g.iter().sum::<C>() - 0.5 * (g[0] + g[g.len() - 1]));
        let correction = hs * hs / 12.0 * (dg(&sol[0]) - dg(&sol[sol.len() - 1]));
        let x_i = self.potential.x_i;
        let tail = -(2.0 * I * k * x_i).exp() / (2.0 * I * k);
        Ok(trapezoid + correction + tail)
    }
}

impl JostEvaluator for ForwardJost {
    fn fh(&self, k: C) -> Result<C> {
        Ok(self.evaluate(k)?.fh)
    }
    fn fh_with_dk(&self, k: C) -> Result<(C, C)> {
        let e = self.evaluate(k)?;
        Ok((e.fh, e.fh_dk))
    }
}

/// `(χ(0,k), χ'(0,k))` for potential `v`.
pub fn faddeev_solve(v: &PotentialProfile<f64>, k: C) -> Result<(C, C)> {
    ForwardJost::new(v).faddeev_solve(k)
}

pub fn jost_function(v: &PotentialProfile<f64>, h: f64, k: C) -> Result<JostEval> {
    ForwardJost::with_h(v, h).evaluate(k)
}

/// `∂_k f_h(k)`.
pub fn jost_derivative(v: &PotentialProfile<f64>, h: f64, k: C) -> Result<C> {
    Ok(ForwardJost::with_h(v, h).evaluate(k)?.fh_dk)
}

#[inline]
fn mul(a: &Mat, b: &Mat) -> Mat {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

#[inline]
fn comm(a: &Mat, b: &Mat) -> Mat {
    let ab = mul(a, b);
    let ba = mul(b, a);
    [
        [ab[0][0] - ba[0][0], ab[0][1] - ba[0][1]],
        [ab[1][0] - ba[1][0], ab[1][1] - ba[1][1]],
    ]
}

#[inline]
fn apply(st: &mut SurfaceState, e: &Mat, de: &Mat) {
    let (y0, y1) = (st.chi, st.dchi);
    let (t0, t1) = (st.chi_k, st.dchi_k);
    st.chi = e[0][0] * y0 + e[0][1] * y1;
    st.dchi = e[1][0] * y0 + e[1][1] * y1;
    st.chi_k = de[0][0] * y0 + de[0][1] * y1 + e[0][0] * t0 + e[0][1] * t1;
    st.dchi_k = de[1][0] * y0 + de[1][1] * y1 + e[1][0] * t0 + e[1][1] * t1;
}

/// One fourth-order Magnus step of `y' = A y`, `A = [[0,1],[V,-2ik]]`,
/// with Gauss-point potentials `v1`, `v2`; returns `exp(Ω)` and `∂_k exp(Ω)`.
fn magnus_step(k: C, v1: f64, v2: f64, hs: f64) -> (Mat, Mat) {
    let a1: Mat = [[ZERO, ONE], [C::new(v1, 0.0), -2.0 * I * k]];
    let a2: Mat = [[ZERO, ONE], [C::new(v2, 0.0), -2.0 * I * k]];
    let ak: Mat = [[ZERO, ZERO], [ZERO, -2.0 * I]];
    let w = 3f64.sqrt() / 12.0 * hs * hs;
    let mut omega = [[ZERO; 2]; 2];
    let mut d_omega = [[ZERO; 2]; 2];
    let (c21, dc) = if v1 != v2 {
        let c = comm(&a2, &a1);
        let d1 = comm(&ak, &a1);
        let d2 = comm(&a2, &ak);
        (c, [[d1[0][0] + d2[0][0], d1[0][1] + d2[0][1]], [d1[1][0] + d2[1][0], d1[1][1] + d2[1][1]]])
    } else {
        ([[ZERO; 2]; 2], [[ZERO; 2]; 2])
    };
    for r in 0..2 {
        for c in 0..2 {
            omega[r][c] = 0.5 * hs * (a1[r][c] + a2[r][c]) + w * c21[r][c];
            d_omega[r][c] = hs * ak[r][c] + w * dc[r][c];
        }
    }
    expm2(&omega, &d_omega)
}

/// `exp(Ω)` of a 2×2 complex matrix and its directional derivative along `dΩ`.
fn expm2(o: &Mat, d: &Mat) -> (Mat, Mat) {
    let t = 0.5 * (o[0][0] + o[1][1]);
    let dt = 0.5 * (d[0][0] + d[1][1]);
    let m00 = o[0][0] - t;
    let dm00 = d[0][0] - dt;
    // M = Ω - tI is traceless, M² = q I
    let q = m00 * m00 + o[0][1] * o[1][0];
    let dq = 2.0 * m00 * dm00 + d[0][1] * o[1][0] + o[0][1] * d[1][0];
    let (ch, sh, dsh) = cosh_sinhc(q);
    let et = t.exp();
    let m: Mat = [[m00, o[0][1]], [o[1][0], -m00]];
    let dm: Mat = [[dm00, d[0][1]], [d[1][0], -dm00]];
    let dch = 0.5 * sh * dq;
    let dshq = dsh * dq;
    let mut e = [[ZERO; 2]; 2];
    let mut de = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            let id = if r == c { ONE } else { ZERO };
            let base = ch * id + sh * m[r][c];
            e[r][c] = et * base;
            de[r][c] = et * (dt * base + dch * id + dshq * m[r][c] + sh * dm[r][c]);
        }
    }
    (e, de)
}

/// `cosh √q`, `sinh √q / √q` and `d/dq (sinh √q / √q)`.
fn cosh_sinhc(q: C) -> (C, C, C) {
    if q.norm() < 0.05 {
        // Taylor series; 1/(2n)!, 1/(2n+1)!
        let mut ch = ZERO;
        let mut sh = ZERO;
        let mut dsh = ZERO;
        let mut qn = ONE;
        let mut fact_even = 1.0; // (2n)!
        for n in 0..10 {
            let fact_odd = fact_even * (2 * n + 1) as f64;
            ch += qn / fact_even;
            sh += qn / fact_odd;
            let fact_next_odd = fact_odd * (2 * n + 2) as f64 * (2 * n + 3) as f64;
            dsh += (n + 1) as f64 * qn / fact_next_odd;
            qn *= q;
            fact_even = fact_odd * (2 * n + 2) as f64;
        }
        (ch, sh, dsh)
    } else {
        let s = q.sqrt();
        let ch = s.cosh();
        let sh = s.sinh() / s;
        (ch, sh, (ch - sh) / (2.0 * q))
    }
}

/// Slack of the two uniform bounds on the Jost function at one `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub k: C,
    /// `‖V‖ e^{(|Im k| - Im k) x_I} e^a - |f_h(k) - ik|`
    pub first_slack: f64,
    /// First bound with the Robin term: `(‖V‖ + |h|) e^{…} e^a - |f_h - ik|`.
    pub first_slack_with_h: f64,
    /// `[|h| + ‖V‖/2] a e^{…} e^a - |f_h - ik - h + (V̂(0) + V̂(k))/2|`
    pub second_slack: f64,
    pub first_rhs: f64,
    pub second_rhs: f64,
}

impl BoundReport {
    /// Both slacks nonnegative up to rounding at the scale of `|k|`.
    pub fn holds(&self) -> bool {
        let tol = -1e-12 * (1.0 + self.k.norm());
        self.first_slack >= tol && self.second_slack >= tol
    }
}

/// `V̂(k) = ∫₀^{x_I} e^{2ikt} V(t) dt` by the trapezoid rule.
pub fn fourier_potential(v: &PotentialProfile<f64>, k: C) -> C {
    let dx = v.dx();
    let n = v.values.len();
    let mut acc = ZERO;
    for (j, val) in v.values.iter().enumerate() {
        let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        acc += w * val * (2.0 * I * k * v.grid[j]).exp();
    }
    acc * dx
}

pub fn bound_check(v: &PotentialProfile<f64>, h: f64, k: C) -> Result<BoundReport> {
    let solver = ForwardJost::with_h(v, h);
    let fh = solver.evaluate(k)?.fh;
    Ok(bound_report(v, h, k, fh))
}

pub(crate) fn bound_report(v: &PotentialProfile<f64>, h: f64, k: C, fh: C) -> BoundReport {
    let norm = v.l1_norm();
    let a = norm / k.norm().max(1.0);
    let grow = ((k.im.abs() - k.im) * v.x_i).exp() * a.exp();
    let first_rhs = norm * grow;
    let lhs1 = (fh - I * k).norm();
    let second_rhs = (h.abs() + 0.5 * norm) * a * grow;
    let lhs2 = (fh - I * k - h + 0.5 * (fourier_potential(v, ZERO) + fourier_potential(v, k))).norm();
    BoundReport {
        k,
        first_slack: first_rhs - lhs1,
        first_slack_with_h: (norm + h.abs()) * grow - lhs1,
        second_slack: second_rhs - lhs2,
        first_rhs,
        second_rhs,
    }
}
