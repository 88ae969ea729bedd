//! Reconstruction from eigenvalues and resonances: Hadamard product →
//! scattering data → Marchenko → potential, and the two-frequency shear
//! modulus recovery.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Stage};
use crate::jost::JostEvaluator;
use crate::marchenko::{recover_potential, solve_all, MarchenkoSolution};
use crate::profile::{PotentialProfile, ShearProfile};
use crate::resonances::ResonanceSet;
use crate::scalar::Real;
use crate::scattering::{
    build_g0, ladder_holds, sign_ladder, validate_scattering_class, ClassReport, JostScattering,
    KernelConfig, LadderEntry, MarchenkoKernel, ScatteringData, ScatteringFunction, ValidationConfig,
};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationConfig {
    /// Probe heights `T` (times `1/x_I`) for `f_h(iT) = −T + b`.
    pub probes: [f64; 2],
    /// Height (times `1/x_I`) of the independent check.
    pub validation_probe: f64,
    /// Largest accepted `|f_h(iT) − (i·iT + b)| / T` at the check height.
    pub tol: f64,
    /// Window `[lo·R, hi·R]` of the phase fit for the exponent.
    pub phase_window: (f64, f64),
    /// Extend the zero lattice beyond R from its fitted asymptotics.
    pub extrapolate: bool,
    /// Explicit synthetic zeros out to this multiple of R.
    pub extrapolation_factor: f64,
    /// Resonances in `Re k > 0`, `|k| ∈ [R/2, R]` needed for a trend fit.
    pub min_trend_zeros: usize,
    /// Symmetry matching tolerance.
    pub symmetry_tol: f64,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self {
            probes: [50.0, 100.0],
            validation_probe: 75.0,
            tol: 1e-2,
            phase_window: (0.25, 1.0),
            extrapolate: true,
            extrapolation_factor: 8.0,
            min_trend_zeros: 6,
            symmetry_tol: 1e-6,
        }
    }
}

/// Fitted asymptotics of the resonance lattice in terms of the lattice
/// index `m`: `Re k = r₀ + r₁ m + r₂/m + r₃ ln m/m`,
/// `Im k = i₀ + i₁ ln Re k + i₂/Re k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeFit {
    /// Index of the first trend zero.
    pub first_index: usize,
    pub re: [f64; 4],
    pub im: [f64; 3],
    /// Largest fit residual over the trend zeros.
    pub residual: f64,
    /// Number of synthetic zeros added, counting both half-planes.
    pub synthetic: usize,
}

impl LatticeFit {
    fn re_basis(m: f64) -> Vec<f64> {
        vec![1.0, m, 1.0 / m, m.ln() / m]
    }

    fn im_basis(x: f64) -> Vec<f64> {
        vec![1.0, x.ln(), 1.0 / x]
    }

    /// Lattice point with index `m`.
    pub fn at(&self, m: usize) -> C {
        let dot = |c: &[f64], b: Vec<f64>| c.iter().zip(b).map(|(c, b)| c * b).sum::<f64>();
        let x = dot(&self.re, Self::re_basis(m as f64));
        C::new(x, dot(&self.im, Self::im_basis(x)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeResidual {
    pub t: f64,
    /// `|f_h(iT) − (−T + b)| / T`
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub probes: Vec<ProbeResidual>,
    pub validation: ProbeResidual,
    /// `b` in `f_h(k) = ik + b + o(1)`.
    pub asymptotic_constant: C,
    /// Coefficient `a` of `S − 1 ≈ a/(ik)` from the phase fit.
    pub phase_tail: f64,
    /// Integer winding of the phase fit intercept.
    pub phase_winding: i64,
    pub f0_imag: f64,
    pub lattice: Option<LatticeFit>,
}

/// Jost function rebuilt from its zeros,
/// `f_h(k) = f_h(0) e^{ck} ∏_{|k_n| ≤ R} (1 − k/k_n)`, with `c = iβ`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HadamardJost {
    pub zeros: Vec<C>,
    pub radius: f64,
    pub x_i: f64,
    pub f0: C,
    pub exp_coeff: C,
    /// Zeros beyond R generated from the lattice fit.
    pub synthetic: Vec<C>,
    /// Power sums `Σ k_n^{−m}`, m ≥ 2, over the modelled zeros past the synthetic ones.
    pub far_sums: Vec<C>,
    pub calibration_report: Option<CalibrationReport>,
}

const FAR_TERMS: usize = 2_000_000;
const FAR_POWERS: usize = 16;

impl HadamardJost {
    /// Uncalibrated product over the zeros with `|k| ≤ r`; `f0 = 1`, `c = 0`.
    pub fn product(zeros: &ResonanceSet, r: f64, x_i: f64) -> Self {
        Self {
            zeros: zeros.points().into_iter().filter(|k| k.norm() <= r).collect(),
            radius: r,
            x_i,
            f0: C::new(1.0, 0.0),
            exp_coeff: C::new(0.0, 0.0),
            synthetic: Vec::new(),
            far_sums: Vec::new(),
            calibration_report: None,
        }
    }

    /// Builds and calibrates the evaluator.
    pub fn new(zeros: &ResonanceSet, r: f64, x_i: f64, cfg: &CalibrationConfig) -> Result<Self> {
        if !(r > 0.0 && x_i > 0.0) {
            return Err(Error::Domain(format!("need R > 0 and x_I > 0, got R = {r}, x_I = {x_i}")));
        }
        let truncated = zeros.truncated(r);
        if let Some(k) = truncated.unmatched_reflection(cfg.symmetry_tol) {
            return Err(Error::Asymmetric(k));
        }
        let mut hj = Self::product(zeros, r, x_i);
        if hj.zeros.iter().any(|k| k.norm() == 0.0) {
            return Err(Error::ClassViolation("zero at k = 0".into()));
        }
        let lattice = if cfg.extrapolate { hj.extrapolate(cfg) } else { None };
        hj.calibrate(cfg, lattice)?;
        Ok(hj)
    }

    fn extrapolate(&mut self, cfg: &CalibrationConfig) -> Option<LatticeFit> {
        let r = self.radius;
        let mut trend: Vec<C> = self
            .zeros
            .iter()
            .copied()
            .filter(|k| k.re > 0.0 && k.im < 0.0 && k.norm() >= 0.5 * r)
            .collect();
        if trend.len() < cfg.min_trend_zeros {
            return None;
        }
        trend.sort_by(|a, b| a.re.total_cmp(&b.re));
        let spacing = PI / self.x_i;
        let first_index = ((trend[0].re / spacing).round() as usize).max(1);
        let ms: Vec<f64> = (0..trend.len()).map(|j| (first_index + j) as f64).collect();
        let re: Vec<f64> = trend.iter().map(|k| k.re).collect();
        let im: Vec<f64> = trend.iter().map(|k| k.im).collect();
        let re_fit = least_squares(&ms, &re, LatticeFit::re_basis);
        let im_fit = least_squares(&re, &im, LatticeFit::im_basis);
        let mut fit = LatticeFit {
            first_index,
            re: [re_fit[0], re_fit[1], re_fit[2], re_fit[3]],
            im: [im_fit[0], im_fit[1], im_fit[2]],
            residual: 0.0,
            synthetic: 0,
        };
        // a lattice far from the expected density is not extrapolated
        if !(fit.re[1] > 0.5 * spacing && fit.re[1] < 2.0 * spacing) {
            return None;
        }
        fit.residual = trend
            .iter()
            .enumerate()
            .map(|(j, k)| (k - fit.at(first_index + j)).norm())
            .fold(0.0, f64::max);
        let limit = (cfg.extrapolation_factor * r).max(4.0 * cfg.probes[1] / self.x_i);
        let mut j = first_index + trend.len();
        while fit.at(j).re <= limit {
            let k = fit.at(j);
            self.synthetic.push(k);
            self.synthetic.push(-k.conj());
            j += 1;
        }
        let mut sums = vec![C::new(0.0, 0.0); FAR_POWERS + 1];
        for n in j..j + FAR_TERMS {
            let k = fit.at(n);
            let inv = [1.0 / k, -1.0 / k.conj()];
            for z in inv {
                let mut p = z * z;
                for s in sums.iter_mut().skip(2) {
                    *s += p;
                    p *= z;
                }
            }
        }
        // Σ over pairs of 2/x² past the last explicit term
        sums[2] += 2.0 / (fit.re[1] * fit.at(j + FAR_TERMS).re);
        self.far_sums = sums;
        fit.synthetic = self.synthetic.len();
        Some(fit)
    }

    /// `ln ∏(1 − k/k_n)` over input and synthetic zeros with the far correction.
    fn log_product(&self, k: C) -> C {
        let acc: C = self.zeros.iter().chain(&self.synthetic).map(|z| (1.0 - k / z).ln()).sum();
        acc - self.far_series(k)
    }

    /// `Σ_m s_m k^m / m`
    fn far_series(&self, k: C) -> C {
        let mut p = k;
        let mut acc = C::new(0.0, 0.0);
        for (m, s) in self.far_sums.iter().enumerate().skip(2) {
            p *= k;
            acc += s * p / m as f64;
        }
        acc
    }

    fn dlog_product(&self, k: C) -> C {
        let mut acc: C = self.zeros.iter().chain(&self.synthetic).map(|z| 1.0 / (k - z)).sum();
        let mut p = C::new(1.0, 0.0);
        for (m, s) in self.far_sums.iter().enumerate().skip(1) {
            if m >= 2 {
                p *= k;
                acc -= s * p;
            }
        }
        acc
    }

    /// `ln f_h(k)`.
    pub fn log_fh(&self, k: C) -> C {
        self.f0.ln() + self.exp_coeff * k + self.log_product(k)
    }

    fn calibrate(&mut self, cfg: &CalibrationConfig, lattice: Option<LatticeFit>) -> Result<()> {
        let x_i = self.x_i;
        let r = self.radius;
        // exponent: phase of −P(−k)/P(k) ≈ 2βk − a/k modulo 2π on the window
        let (lo, hi) = (cfg.phase_window.0 * r, cfg.phase_window.1 * r);
        let n = 400usize;
        let ks: Vec<f64> = (0..=n).map(|j| lo + (hi - lo) * j as f64 / n as f64).collect();
        let phase: Vec<f64> = ks
            .iter()
            .map(|&k| PI + (self.log_product(C::new(-k, 0.0)) - self.log_product(C::new(k, 0.0))).im)
            .collect();
        let free = least_squares(&ks, &phase, |k| vec![1.0, k, 1.0 / k, k.powi(-3)]);
        let winding = (free[0] / (2.0 * PI)).round();
        let shifted: Vec<f64> = phase.iter().map(|p| p - 2.0 * PI * winding).collect();
        // the e^{±2ikx_I} terms of S bias the slope if left out
        let fit = least_squares(&ks, &shifted, |k| {
            let (s2, c2) = (2.0 * k * x_i).sin_cos();
            vec![k, 1.0 / k, k.powi(-3), c2 / (k * k), s2 / (k * k), c2 / k.powi(3), s2 / k.powi(3)]
        });
        let beta = fit[0] / 2.0;
        let phase_tail = -fit[1];
        self.exp_coeff = C::new(0.0, beta);
        // f0 and b: A e^{−βT} P(iT) = −T + b at both probes
        let q = |t: f64| (-beta * t + self.log_product(C::new(0.0, t))).exp();
        let [t1, t2] = cfg.probes.map(|p| p / x_i);
        let (q1, q2) = (q(t1), q(t2));
        let a = C::new(t2 - t1, 0.0) / (q1 - q2);
        let b = a * q1 + t1;
        let residual_at = |t: f64| ProbeResidual { t, residual: (a * q(t) - (b - t)).norm() / t };
        let validation = residual_at(cfg.validation_probe / x_i);
        let probes = vec![residual_at(t1), residual_at(t2)];
        self.f0 = a;
        self.calibration_report = Some(CalibrationReport {
            probes,
            validation,
            asymptotic_constant: b,
            phase_tail,
            phase_winding: winding as i64,
            f0_imag: a.im,
            lattice,
        });
        if !(validation.residual <= cfg.tol) {
            return Err(Error::Calibration { residual: validation.residual, tol: cfg.tol });
        }
        Ok(())
    }

    pub fn report(&self) -> Option<&CalibrationReport> {
        self.calibration_report.as_ref()
    }

    /// `−e^{−2ck} ∏ (k_n + k)/(k_n − k)` over the input zeros only.
    pub fn explicit_s(&self, k: f64) -> C {
        let k = C::new(k, 0.0);
        let prod: C = self.zeros.iter().map(|z| ((z + k) / (z - k)).ln()).sum();
        -(prod - 2.0 * self.exp_coeff * k).exp()
    }

    /// `(e^{2c k_j}/(2|k_j|)) ∏_{n≠j} (k_n − k_j)/(k_n + k_j)` over the input zeros,
    /// with the `e^{−2|k_j|}` factor rescaled by the calibrated exponent.
    pub fn explicit_norming(&self, kj: C) -> C {
        let prod: C = self
            .zeros
            .iter()
            .filter(|z| (*z - kj).norm() > 1e-12 * kj.norm())
            .map(|z| ((z - kj) / (z + kj)).ln())
            .sum();
        (2.0 * self.exp_coeff * kj + prod).exp() / (2.0 * kj.norm())
    }
}

/// Least squares over a small set of basis functions.
fn least_squares(xs: &[f64], ys: &[f64], basis: impl Fn(f64) -> Vec<f64>) -> Vec<f64> {
    let rows: Vec<Vec<f64>> = xs.iter().map(|x| basis(*x)).collect();
    let p = rows.first().map_or(0, Vec::len);
    let design = nalgebra::DMatrix::from_fn(xs.len(), p, |i, j| rows[i][j]);
    let rhs = nalgebra::DVector::from_column_slice(ys);
    let svd = design.svd(true, true);
    svd.solve(&rhs, 1e-14).map(|c| c.iter().copied().collect()).unwrap_or_else(|_| vec![0.0; p])
}

impl JostEvaluator for HadamardJost {
    fn fh(&self, k: C) -> Result<C> {
        if let Some(z) = self.zeros.iter().find(|z| **z == k) {
            let _ = z;
            return Ok(C::new(0.0, 0.0));
        }
        Ok(self.log_fh(k).exp())
    }

    fn fh_with_dk(&self, k: C) -> Result<(C, C)> {
        let scale = k.norm().max(1.0);
        if let Some(&kj) = self.zeros.iter().find(|z| (*z - k).norm() <= 1e-13 * scale) {
            // ḟ(k_j) = −g(k_j)/k_j with g the product without the factor at k_j
            let mut log_g = self.f0.ln() + self.exp_coeff * kj;
            let mut skipped = false;
            for z in self.zeros.iter().chain(&self.synthetic) {
                if !skipped && *z == kj {
                    skipped = true;
                    continue;
                }
                log_g += (1.0 - kj / z).ln();
            }
            log_g -= self.far_series(kj);
            return Ok((C::new(0.0, 0.0), -log_g.exp() / kj));
        }
        let f = self.log_fh(k).exp();
        Ok((f, f * (self.exp_coeff + self.dlog_product(k))))
    }
}

/// Calibrated Hadamard evaluator with default settings.
pub fn hadamard_jost(zeros: &ResonanceSet, r: f64, x_i: f64) -> Result<HadamardJost> {
    HadamardJost::new(zeros, r, x_i, &CalibrationConfig::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormingCrossCheck {
    pub k: C,
    pub ratio: f64,
    pub explicit: C,
}

/// Eigenvalues must be simple, on iℝ₊ and strictly ordered.
pub fn check_zero_set(zeros: &ResonanceSet, tol: f64) -> Result<()> {
    if let Some(z) = zeros.eigenvalues.iter().find(|z| z.k.re.abs() > tol) {
        return Err(Error::ClassViolation(format!("eigenvalue {} is off the imaginary axis", z.k)));
    }
    if !zeros.eigenvalues_strictly_ordered() {
        return Err(Error::ClassViolation("eigenvalues are not strictly ordered".into()));
    }
    if let Some(z) = zeros.all().find(|z| z.k.im > 0.0 && z.multiplicity != 1) {
        return Err(Error::ClassViolation(format!("eigenvalue {} is not simple", z.k)));
    }
    Ok(())
}

/// `S`, `k_j` and `m_j` from a zero set.
pub fn scattering_from_zeros(
    zeros: &ResonanceSet,
    r: f64,
    x_i: f64,
    cfg: &CalibrationConfig,
) -> Result<(ScatteringData<JostScattering<HadamardJost>>, Vec<LadderEntry>, Vec<NormingCrossCheck>)> {
    check_zero_set(zeros, cfg.symmetry_tol)?;
    let hj = HadamardJost::new(zeros, r, x_i, cfg).map_err(|e| e.at(Stage::Hadamard))?;
    let bound: Vec<C> = zeros.truncated(r).eigenvalues.iter().map(|z| z.k).collect();
    let ladder = sign_ladder(&hj, &bound)?;
    if !ladder_holds(&ladder) {
        return Err(Error::ClassViolation("sign alternation of f_h(−k_j) fails".into()));
    }
    let cross: Vec<NormingCrossCheck> = bound
        .iter()
        .map(|k| {
            Ok(NormingCrossCheck {
                k: *k,
                ratio: crate::scattering::norming_ratio(&hj, *k)?,
                explicit: hj.explicit_norming(*k),
            })
        })
        .collect::<Result<_>>()?;
    let data = ScatteringData::from_jost(hj, bound)?;
    Ok((data, ladder, cross))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionConfig {
    pub radius: f64,
    pub calibration: CalibrationConfig,
    /// Kernel grid steps per `x_I`.
    pub steps_per_unit: usize,
    /// `dk·x_I` of the kernel quadrature.
    pub dk: f64,
    /// Kernel window as a fraction of R; the product is least accurate near R.
    pub window_fraction: f64,
}

impl InversionConfig {
    pub fn new(radius: f64) -> Self {
        Self { radius, calibration: CalibrationConfig::default(), steps_per_unit: 256, dk: 0.01, window_fraction: 0.75 }
    }

    fn kernel(&self, x_i: f64) -> KernelConfig {
        let mut k = KernelConfig::for_interval(x_i).with_window(self.window_fraction * self.radius);
        k.dy = x_i / self.steps_per_unit as f64;
        k.dk = self.dk / x_i;
        k
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversionDiagnostics {
    pub radius: f64,
    pub zero_count: usize,
    pub f0: C,
    pub exp_coeff: C,
    pub calibration: Option<CalibrationReport>,
    pub ladder: Vec<LadderEntry>,
    pub norming: Vec<NormingCrossCheck>,
    pub class_report: ClassReport,
    /// `max |S − S_explicit|` over the sampled window.
    pub explicit_s_deviation: f64,
    pub decay_certificate: f64,
    pub support_ok: bool,
    pub max_condition: f64,
    pub support_residual: f64,
    pub recovered_h: f64,
}

#[derive(Debug, Clone)]
pub struct Inversion {
    pub data: ScatteringData<JostScattering<HadamardJost>>,
    pub potential: PotentialProfile<f64>,
    pub kernel: MarchenkoKernel,
    pub solution: MarchenkoSolution,
    pub diagnostics: InversionDiagnostics,
}

/// Recovers `(V, h)` from eigenvalues and resonances.
pub fn invert(zeros: &ResonanceSet, x_i: f64, cfg: &InversionConfig) -> Result<Inversion> {
    let (data, ladder, norming) =
        scattering_from_zeros(zeros, cfg.radius, x_i, &cfg.calibration).map_err(|e| match e {
            Error::Stage { .. } => e,
            other => other.at(Stage::Hadamard),
        })?;
    let kcfg = cfg.kernel(x_i);
    let vcfg = ValidationConfig { k_max: cfg.radius, dk: 0.05 / x_i, unimodularity_tol: 1e-8 };
    let class_report = validate_scattering_class(&data, &vcfg).map_err(|e| e.at(Stage::Scattering))?;
    let explicit_s_deviation = (0..=200)
        .map(|j| {
            let k = cfg.radius * j as f64 / 200.0;
            Ok((data.s.s(k)? - data.s.jost().explicit_s(k)).norm())
        })
        .collect::<Result<Vec<f64>>>()
        .map_err(|e| e.at(Stage::Scattering))?
        .into_iter()
        .fold(0.0, f64::max);
    let kernel = build_g0(&data, &kcfg).map_err(|e| e.at(Stage::Scattering))?;
    let solution = solve_all(&kernel).map_err(|e| e.at(Stage::Marchenko))?;
    let potential = recover_potential(&solution).map_err(|e| e.at(Stage::Recovery))?;
    let hj = data.s.jost().clone();
    let diagnostics = InversionDiagnostics {
        radius: cfg.radius,
        zero_count: hj.zeros.len(),
        f0: hj.f0,
        exp_coeff: hj.exp_coeff,
        calibration: hj.calibration_report.clone(),
        ladder,
        norming,
        class_report,
        explicit_s_deviation,
        decay_certificate: kernel.decay_certificate,
        support_ok: kernel.support_ok,
        max_condition: solution.condition_numbers.iter().copied().fold(0.0, f64::max),
        support_residual: solution.support_residual,
        recovered_h: potential.h,
    };
    Ok(Inversion { data, potential, kernel, solution, diagnostics })
}

/// `μ̂ = μ_I(ω₁² − ω₂²) / (ω₁² − ω₂² − μ_I(V₁ − V₂))` pointwise.
pub fn recover_shear<T: Real>(
    v1: &PotentialProfile<T>,
    v2: &PotentialProfile<T>,
    omega1: T,
    omega2: T,
    mu_tail: T,
) -> Result<ShearProfile<T>> {
    if omega1 == omega2 {
        return Err(Error::Domain(format!("frequencies must differ, got ω₁ = ω₂ = {omega1}")));
    }
    if !(omega1 > T::zero() && omega2 > T::zero() && mu_tail > T::zero()) {
        return Err(Error::Domain("frequencies and mu_tail must be positive".into()));
    }
    if v1.grid.len() != v2.grid.len() || v1.x_i != v2.x_i {
        return Err(Error::Domain("potentials must share a grid".into()));
    }
    let dw = omega1 * omega1 - omega2 * omega2;
    let tol = T::of(1e-12) * dw.abs();
    let mut mu = Vec::with_capacity(v1.values.len());
    for (i, (a, b)) in v1.values.iter().zip(&v2.values).enumerate() {
        let den = dw - mu_tail * (*a - *b);
        if den.abs() <= tol {
            return Err(Error::SingularRecovery { x: v1.grid[i].to_f64_lossy(), denominator: den.to_f64_lossy() });
        }
        mu.push(mu_tail * dw / den);
    }
    // continue past x_I with the tail so the interpolant sees a closed profile
    let mut depth = v1.grid.clone();
    let dx = v1.dx();
    for j in 1..=8 {
        depth.push(v1.x_i + dx * T::from_usize(j).unwrap());
        mu.push(mu_tail);
    }
    ShearProfile::new(depth, mu, mu_tail, v1.x_i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_eigenvalue_is_free_robin() {
        let set = ResonanceSet::from_points(&[C::new(0.0, 1.0)], 1e-12);
        let hj = hadamard_jost(&set, 50.0, 1.0).unwrap();
        assert_abs_diff_eq!(hj.exp_coeff.im, 0.0, epsilon = 1e-6);
        for t in [2.0, 10.0, 50.0, 100.0] {
            let k = C::new(0.0, t);
            let want = C::i() * k + 1.0;
            assert!((hj.fh(k).unwrap() - want).norm() < 1e-6 * want.norm());
        }
        assert_eq!(hj.fh(C::new(0.0, 1.0)).unwrap(), C::new(0.0, 0.0));
    }

    #[test]
    fn asymmetric_set_rejected() {
        let set = ResonanceSet::from_points(&[C::new(0.0, 1.0), C::new(3.0, -1.0)], 1e-12);
        assert!(matches!(hadamard_jost(&set, 50.0, 1.0), Err(Error::Asymmetric(_))));
    }

    #[test]
    fn shear_recovery_rejects_equal_frequencies() {
        let v = PotentialProfile::zero(1.0, 0.0, 16);
        assert!(matches!(recover_shear(&v, &v, 2.0, 2.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn equal_potentials_give_tail_modulus() {
        let v = PotentialProfile::from_fn(|x: f64| x * (1.0 - x), 1.0, 0.0, 16).unwrap();
        let mu = recover_shear(&v, &v, 1.0, 3.0, 2.5).unwrap();
        assert!(mu.mu().iter().all(|m| *m == 2.5));
    }
}
