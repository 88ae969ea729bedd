//! Scattering data `(S, m_j, k_j)`, class validation and the Marchenko
//! kernels `G` and `G₀`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jost::{ForwardJost, JostEvaluator};
use crate::numeric::{oscillatory_tail, sine_integral};
use crate::profile::PotentialProfile;

type C = Complex64;

/// Scattering function on the real axis.
pub trait ScatteringFunction: Sync {
    fn s(&self, k: f64) -> Result<C>;
}

impl<T: ScatteringFunction + ?Sized> ScatteringFunction for &T {
    fn s(&self, k: f64) -> Result<C> {
        (**self).s(k)
    }
}

/// `S(k) = −f_h(−k)/f_h(k)` for a Jost evaluator.
#[derive(Debug, Clone)]
pub struct JostScattering<E> {
    jost: E,
    origin_zero: bool,
}

impl<E: JostEvaluator> JostScattering<E> {
    pub fn jost(&self) -> &E {
        &self.jost
    }

    /// Whether `f_h(0) = 0`, the degenerate case with `S(0) = 1`.
    pub fn origin_zero(&self) -> bool {
        self.origin_zero
    }
}

impl<E: JostEvaluator> ScatteringFunction for JostScattering<E> {
    fn s(&self, k: f64) -> Result<C> {
        if k == 0.0 {
            return Ok(if self.origin_zero { C::new(1.0, 0.0) } else { C::new(-1.0, 0.0) });
        }
        let fk = self.jost.fh(C::new(k, 0.0))?;
        let fm = self.jost.fh(C::new(-k, 0.0))?;
        if fk.norm() <= 1e-14 * (1.0 + k.abs()) {
            return Err(Error::ClassViolation(format!("f_h has a real zero at k = {k}")));
        }
        Ok(-fm / fk)
    }
}

/// Wraps a Jost evaluator as a scattering function; checks `f_h(0)`.
pub fn scattering_function<E: JostEvaluator>(jost: E) -> Result<JostScattering<E>> {
    let f0 = jost.fh(C::new(0.0, 0.0))?;
    let scale = jost.fh(C::new(1.0, 0.0))?.norm().max(1.0);
    Ok(JostScattering { origin_zero: f0.norm() <= 1e-10 * scale, jost })
}

/// Closure-backed scattering function.
pub struct FnScattering<F>(pub F);

impl<F: Fn(f64) -> C + Sync> ScatteringFunction for FnScattering<F> {
    fn s(&self, k: f64) -> Result<C> {
        Ok((self.0)(k))
    }
}

#[derive(Debug, Clone)]
pub struct ScatteringData<S> {
    pub s: S,
    /// Eigenvalues `k_j ∈ iℝ₊` by decreasing |k_j|.
    pub k_bound: Vec<C>,
    /// Norming constants `m_j > 0`.
    pub m: Vec<f64>,
}

impl<S: ScatteringFunction> ScatteringData<S> {
    pub fn new(s: S, k_bound: Vec<C>, m: Vec<f64>) -> Result<Self> {
        if k_bound.len() != m.len() {
            return Err(Error::Invariant(format!(
                "{} eigenvalues but {} norming constants",
                k_bound.len(),
                m.len()
            )));
        }
        if let Some(bad) = m.iter().find(|m| !(**m > 0.0)) {
            return Err(Error::ClassViolation(format!("norming constant {bad} is not positive")));
        }
        Ok(Self { s, k_bound, m })
    }

    pub fn n(&self) -> usize {
        self.k_bound.len()
    }
}

impl<E: JostEvaluator> ScatteringData<JostScattering<E>> {
    /// Forward data: S from the evaluator and `m_j` by the ratio formula.
    pub fn from_jost(jost: E, k_bound: Vec<C>) -> Result<Self> {
        let m = k_bound
            .iter()
            .map(|k| norming_ratio(&jost, *k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(scattering_function(jost)?, k_bound, m)
    }
}

/// `m_j = −i ḟ_h(k_j)/f_h(−k_j)`, required real and positive.
pub fn norming_ratio<E: JostEvaluator + ?Sized>(jost: &E, k: C) -> Result<f64> {
    let (_, dk) = jost.fh_with_dk(k)?;
    let fm = jost.fh(-k)?;
    let m = -C::i() * dk / fm;
    if !(m.re > 0.0) || m.im.abs() > 1e-6 * m.norm() {
        return Err(Error::ClassViolation(format!("norming constant at k = {k} is {m}, not positive real")));
    }
    Ok(m.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormingConstant {
    pub k: C,
    /// `−i ḟ_h(k)/f_h(−k)`
    pub ratio: f64,
    /// `∫₀^∞ f(x,k)² dx`
    pub integral: f64,
}

/// Relative tolerance between the two norming-constant routes.
pub const NORMING_TOLERANCE: f64 = 1e-6;

/// Norming constants by both routes.
pub fn norming_constants_checked(v: &PotentialProfile<f64>, h: f64, eigenvalues: &[C]) -> Result<Vec<NormingConstant>> {
    let jost = ForwardJost::with_h(v, h);
    eigenvalues
        .iter()
        .map(|&k| {
            let (_, dk) = jost.fh_with_dk(k)?;
            if dk.norm() == 0.0 {
                return Err(Error::Inconsistent(format!("eigenvalue {k} is not simple")));
            }
            let ratio = norming_ratio(&jost, k)?;
            let integral = jost.square_integral(k)?.re;
            if (ratio - integral).abs() > NORMING_TOLERANCE * ratio.abs() {
                return Err(Error::Inconsistent(format!(
                    "norming constant at {k}: ratio {ratio} vs quadrature {integral}"
                )));
            }
            Ok(NormingConstant { k, ratio, integral })
        })
        .collect()
}

/// Norming constants `m_j` (ratio formula, cross-checked by quadrature).
pub fn norming_constants(v: &PotentialProfile<f64>, h: f64, eigenvalues: &[C]) -> Result<Vec<f64>> {
    Ok(norming_constants_checked(v, h, eigenvalues)?.into_iter().map(|m| m.ratio).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderEntry {
    pub k: C,
    /// `i(−1)^j ḟ_h(k_j)`, expected positive.
    pub derivative_sign: f64,
    /// `(−1)^j f_h(−k_j)`, expected negative.
    pub reflected_sign: f64,
}

/// Sign ladder over eigenvalues ordered by decreasing |k_j|, indexed from 1.
pub fn sign_ladder<E: JostEvaluator + ?Sized>(jost: &E, eigenvalues: &[C]) -> Result<Vec<LadderEntry>> {
    eigenvalues
        .iter()
        .enumerate()
        .map(|(j, &k)| {
            let sign = if (j + 1) % 2 == 0 { 1.0 } else { -1.0 };
            let (_, dk) = jost.fh_with_dk(k)?;
            let fm = jost.fh(-k)?;
            Ok(LadderEntry {
                k,
                derivative_sign: (C::i() * sign * dk).re,
                reflected_sign: sign * fm.re,
            })
        })
        .collect()
}

pub fn ladder_holds(entries: &[LadderEntry]) -> bool {
    entries.iter().all(|e| e.derivative_sign > 0.0 && e.reflected_sign < 0.0)
}

/// Sampling of S on `[0, k_max]` for class validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationConfig {
    pub k_max: f64,
    pub dk: f64,
    pub unimodularity_tol: f64,
}

impl ValidationConfig {
    pub fn for_interval(x_i: f64) -> Self {
        Self { k_max: 400.0 / x_i, dk: 0.05 / x_i, unimodularity_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    /// `max ||S(k)| − 1|`
    pub unimodularity_residual: f64,
    /// `max |S(k) − conj S(−k)|`
    pub symmetry_residual: f64,
    /// `max |S(k) S(−k) − 1|`
    pub reciprocity_residual: f64,
    pub condition1: bool,
    /// `max |k| |S(k) − 1|` over `[k_max/2, k_max]`.
    pub decay_constant: f64,
    /// `max |S(k) − 1|` over `[k_max/2, k_max]`.
    pub decay_at_window: f64,
    pub s0: C,
    pub n: usize,
    /// `(1/2πi)[log(−S(+0)) − log(−S(+∞))]` by unwrapped phase.
    pub increment: f64,
    /// `increment + (1 − S(0))/4`, which equals N for `f_h ~ ik`.
    pub implied_n: f64,
    pub condition3: bool,
    /// `N + (S(0)+1)/4 − increment`, the relation as printed in the source.
    pub stated_relation_residual: f64,
    /// `S(0) = 1`: zero of `f_h` at the origin.
    pub origin_degenerate: bool,
}

impl ClassReport {
    pub fn passes(&self) -> bool {
        self.condition1 && self.condition3 && !self.origin_degenerate
    }
}

fn unwrapped_phase_change<S: ScatteringFunction + ?Sized>(s: &S, a: f64, b: f64, sa: C, sb: C, depth: usize) -> Result<f64> {
    let d = ((-sb) / (-sa)).arg();
    if d.abs() < 0.5 || depth == 0 {
        return Ok(d);
    }
    let m = 0.5 * (a + b);
    let sm = s.s(m)?;
    Ok(unwrapped_phase_change(s, a, m, sa, sm, depth - 1)? + unwrapped_phase_change(s, m, b, sm, sb, depth - 1)?)
}

/// Checks conditions (1) and (3) of the scattering class and measures the
/// decay of `S − 1`.
pub fn validate_scattering_class<S: ScatteringFunction>(data: &ScatteringData<S>, cfg: &ValidationConfig) -> Result<ClassReport> {
    let n_samples = (cfg.k_max / cfg.dk).ceil() as usize;
    let ks: Vec<f64> = (0..=n_samples).map(|j| cfg.k_max * j as f64 / n_samples as f64).collect();
    let pairs = ks
        .par_iter()
        .map(|&k| Ok((data.s.s(k)?, data.s.s(-k)?)))
        .collect::<Result<Vec<(C, C)>>>()?;
    let mut uni = 0.0f64;
    let mut sym = 0.0f64;
    let mut rec = 0.0f64;
    let mut decay_c = 0.0f64;
    let mut decay_w = 0.0f64;
    for (&k, &(sp, sm)) in ks.iter().zip(&pairs) {
        uni = uni.max((sp.norm() - 1.0).abs()).max((sm.norm() - 1.0).abs());
        sym = sym.max((sp - sm.conj()).norm());
        rec = rec.max((sp * sm - 1.0).norm());
        if k >= 0.5 * cfg.k_max {
            decay_c = decay_c.max(k * (sp - 1.0).norm());
            decay_w = decay_w.max((sp - 1.0).norm());
        }
    }
    let mut phase = 0.0;
    for j in 0..n_samples {
        phase += unwrapped_phase_change(&data.s, ks[j], ks[j + 1], pairs[j].0, pairs[j + 1].0, 20)?;
    }
    let s0 = pairs[0].0;
    // log(−S(+0)) − log(−S(+∞)) = −i·phase
    let increment = -phase / (2.0 * PI);
    let implied_n = increment + (1.0 - s0.re) / 4.0;
    let n = data.n();
    let origin_degenerate = (s0 - 1.0).norm() < 1e-6;
    Ok(ClassReport {
        unimodularity_residual: uni,
        symmetry_residual: sym,
        reciprocity_residual: rec,
        condition1: uni < cfg.unimodularity_tol && sym < cfg.unimodularity_tol && rec < cfg.unimodularity_tol,
        decay_constant: decay_c,
        decay_at_window: decay_w,
        s0,
        n,
        increment,
        implied_n,
        condition3: implied_n.round() as i64 == n as i64 && (implied_n - n as f64).abs() < 0.05,
        stated_relation_residual: n as f64 + (s0.re + 1.0) / 4.0 - increment,
        origin_degenerate,
    })
}

/// Quadrature and grid parameters of the kernel assembly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    /// Grid step in y; the Marchenko solver uses the same step.
    pub dy: f64,
    /// Grid spans `[0, y_max]`.
    pub y_max: f64,
    /// Truncation window `|k| ≤ k_max`.
    pub k_max: f64,
    pub dk: f64,
    /// Coefficient `a` of `S − 1 ≈ a/(ik)`; fitted from S when absent.
    pub tail_coefficient: Option<f64>,
    /// Decay certificate threshold.
    pub support_tol: f64,
    /// Support margin past `2x_I`.
    pub margin: f64,
    pub x_i: f64,
}

impl KernelConfig {
    /// Defaults for a potential supported in `[0, x_I]`: 256 steps per `x_I`,
    /// margin `0.1 x_I`, window `400/x_I`.
    pub fn for_interval(x_i: f64) -> Self {
        let dy = x_i / 256.0;
        let margin = 0.1 * x_i;
        Self {
            dy,
            y_max: 4.0 * x_i + 2.0 * margin,
            k_max: 400.0 / x_i,
            dk: 0.01 / x_i,
            tail_coefficient: None,
            support_tol: 1e-4,
            margin,
            x_i,
        }
    }

    pub fn with_window(mut self, k_max: f64) -> Self {
        self.k_max = k_max;
        self
    }

    pub fn points(&self) -> usize {
        (self.y_max / self.dy).round() as usize + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarchenkoKernel {
    pub grid: Vec<f64>,
    #[serde(rename = "G")]
    pub g: Vec<f64>,
    #[serde(rename = "G0")]
    pub g0: Vec<f64>,
    /// `max |G₀|` on `[2x_I, 2x_I + margin]`.
    pub decay_certificate: f64,
    pub support_ok: bool,
    /// Coefficient `a` of the `a/(ik)` tail, so `f_h(k) = ik − a/2 + o(1)`.
    pub tail_coefficient: f64,
    pub tail: TailModel,
    pub k_max: f64,
    pub x_i: f64,
    pub margin: f64,
    /// `G = +(1/2π)∫(S − 1)e^{ikx}dk`, the Robin sign.
    pub sign_convention: String,
}

impl MarchenkoKernel {
    pub fn dy(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    /// `G₀(y)`, zero beyond the grid.
    pub fn g0_at_index(&self, j: usize) -> f64 {
        self.g0.get(j).copied().unwrap_or(0.0)
    }
}

/// `(∫₀¹ e^{iθt}dt, ∫₀¹ t e^{iθt}dt)`.
fn filon_moments(theta: f64) -> (C, C) {
    if theta.abs() < 1e-2 {
        let t = C::new(0.0, theta);
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t2 * t2;
        (
            1.0 + t / 2.0 + t2 / 6.0 + t3 / 24.0 + t4 / 120.0,
            0.5 + t / 3.0 + t2 / 8.0 + t3 / 30.0 + t4 / 144.0,
        )
    } else {
        let e = C::new(0.0, theta).exp();
        let it = C::new(0.0, theta);
        ((e - 1.0) / it, e / it + (e - 1.0) / (theta * theta))
    }
}

/// `(1/π) Re ∫₀^K g(k) e^{iky} dk` for piecewise-linear `g` on `k_j = j·dk`.
fn filon_cosine_transform(g: &[C], dk: f64, y: f64) -> f64 {
    let theta = y * dk;
    let (p0, p1) = filon_moments(theta);
    let step = C::new(0.0, theta).exp();
    let mut phase = C::new(1.0, 0.0);
    let mut acc = C::new(0.0, 0.0);
    for j in 0..g.len() - 1 {
        if j % 512 == 0 {
            phase = C::new(0.0, j as f64 * theta).exp();
        }
        acc += phase * (g[j] * p0 + (g[j + 1] - g[j]) * p1);
        phase *= step;
    }
    (acc * dk).re / PI
}

/// Large-k model of `S − 1`:
/// `a/(ik) + (b + c₊e^{2ikx_I} + c₋e^{−2ikx_I})/(ik)² + (d + d₊e^{2ikx_I} + d₋e^{−2ikx_I})/(ik)³ + e/(ik)⁴`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TailModel {
    pub a: f64,
    pub b: f64,
    pub c_plus: C,
    pub c_minus: C,
    /// Coefficients of `1/(ik)³` and `1/(ik)⁴`.
    pub d: f64,
    pub e: f64,
    /// Coefficients of `e^{±2ikx_I}/(ik)³`.
    pub d_plus: C,
    pub d_minus: C,
}

impl TailModel {
    /// Terms `(power, shift)` of `e^{ik·shift}/(ik)^power` after the leading `a/(ik)`.
    fn terms(x_i: f64) -> [(u32, f64); 7] {
        [(2, 0.0), (2, 2.0 * x_i), (2, -2.0 * x_i), (3, 0.0), (4, 0.0), (3, 2.0 * x_i), (3, -2.0 * x_i)]
    }

    fn coefficients(&self) -> [C; 7] {
        [C::from(self.b), self.c_plus, self.c_minus, C::from(self.d), C::from(self.e), self.d_plus, self.d_minus]
    }

    fn basis(k: f64, x_i: f64) -> [C; 8] {
        let ik = C::new(0.0, k);
        let mut out = [1.0 / ik; 8];
        for (slot, (n, shift)) in out.iter_mut().skip(1).zip(Self::terms(x_i)) {
            *slot = C::new(0.0, k * shift).exp() / ik.powu(n);
        }
        out
    }

    /// Least-squares fit over `window`, optionally with `a` held fixed.
    fn fit(window: &[(f64, C)], x_i: f64, fixed_a: Option<f64>) -> Self {
        let first = usize::from(fixed_a.is_some());
        let cols: Vec<usize> = (first..8).collect();
        let p = cols.len();
        let m = window.len();
        let mut scale = vec![0.0f64; p];
        for &(k, _) in window {
            let phi = Self::basis(k, x_i);
            for (c, &j) in cols.iter().enumerate() {
                scale[c] += phi[j].norm_sqr();
            }
        }
        let scale: Vec<f64> = scale.iter().map(|s| if *s > 0.0 { 1.0 / s.sqrt() } else { 1.0 }).collect();
        let mut design = DMatrix::<C>::zeros(m, p);
        let mut rhs = DVector::<C>::zeros(m);
        for (r, &(k, g)) in window.iter().enumerate() {
            let phi = Self::basis(k, x_i);
            for (c, &j) in cols.iter().enumerate() {
                design[(r, c)] = phi[j] * scale[c];
            }
            rhs[r] = g - fixed_a.map_or(C::new(0.0, 0.0), |a| a * phi[0]);
        }
        let coef = design
            .svd(true, true)
            .solve(&rhs, 1e-13)
            .unwrap_or_else(|_| DVector::zeros(p));
        let get = |j: usize| cols.iter().position(|c| *c == j).map_or(C::new(0.0, 0.0), |c| coef[c] * scale[c]);
        Self {
            a: fixed_a.unwrap_or(get(0).re),
            b: get(1).re,
            c_plus: get(2),
            c_minus: get(3),
            d: get(4).re,
            e: get(5).re,
            d_plus: get(6),
            d_minus: get(7),
        }
    }

    /// `(1/π) ∫_K^∞ Re[model(k) e^{iky}] dk` for `y ≥ 0`, the `y → 0⁺` limit at 0.
    fn transform(&self, k_max: f64, y: f64, x_i: f64) -> f64 {
        let rest = PI / 2.0 - sine_integral(k_max * y);
        let w: C = Self::terms(x_i)
            .iter()
            .zip(self.coefficients())
            .map(|(&(n, shift), c)| c * C::i().powu(4 - n % 4) * oscillatory_tail(n, k_max, y + shift))
            .sum();
        (self.a * rest + w.re) / PI
    }
}

pub fn build_g0<S: ScatteringFunction>(data: &ScatteringData<S>, cfg: &KernelConfig) -> Result<MarchenkoKernel> {
    if !(cfg.dy > 0.0 && cfg.dk > 0.0 && cfg.k_max > cfg.dk && cfg.y_max > 0.0) {
        return Err(Error::Domain(format!("invalid kernel configuration {cfg:?}")));
    }
    let nk = (cfg.k_max / cfg.dk).round() as usize;
    let dk = cfg.k_max / nk as f64;
    let g_k = (0..=nk)
        .into_par_iter()
        .map(|j| Ok(data.s.s(j as f64 * dk)? - 1.0))
        .collect::<Result<Vec<C>>>()?;
    let window: Vec<(f64, C)> = (nk / 2..=nk).map(|j| (j as f64 * dk, g_k[j])).collect();
    let tail = TailModel::fit(&window, cfg.x_i, cfg.tail_coefficient);
    let ny = cfg.points();
    let grid: Vec<f64> = (0..ny).map(|j| j as f64 * cfg.dy).collect();
    let g: Vec<f64> = grid
        .par_iter()
        .map(|&y| filon_cosine_transform(&g_k, dk, y) + tail.transform(cfg.k_max, y, cfg.x_i))
        .collect();
    let g0: Vec<f64> = grid
        .iter()
        .zip(&g)
        .map(|(&y, &gy)| {
            gy + data
                .k_bound
                .iter()
                .zip(&data.m)
                .map(|(k, m)| (-y * k.norm()).exp() / m)
                .sum::<f64>()
        })
        .collect();
    let lo = 2.0 * cfg.x_i;
    let hi = lo + cfg.margin;
    let decay_certificate = grid
        .iter()
        .zip(&g0)
        .filter(|(y, _)| **y > lo + 0.5 * cfg.dy && **y <= hi + 0.5 * cfg.dy)
        .fold(0.0f64, |m, (_, v)| m.max(v.abs()));
    Ok(MarchenkoKernel {
        grid,
        g,
        g0,
        decay_certificate,
        support_ok: decay_certificate <= cfg.support_tol,
        tail_coefficient: tail.a,
        tail,
        k_max: cfg.k_max,
        x_i: cfg.x_i,
        margin: cfg.margin,
        sign_convention: "robin_plus".into(),
    })
}
