//! Zeros of the Jost function: eigenvalues on iℝ₊ and resonances in ℂ₋.

mod checks;
mod winding;

pub use checks::{
    c0_constant, c1_constant, forbidden_domain_xi, levinson_check, levinson_ratio, ForbiddenDomainEntry,
    ForbiddenDomainReport, LevinsonReport,
};
pub use winding::{count_zeros, Rect, WindingConfig};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jost::{ForwardJost, JostEvaluator};
use crate::profile::PotentialProfile;
use winding::{winding_number, WindingError};

type C = Complex64;

/// Fractions tried, in order, when splitting a box.
const SPLIT_FRACTIONS: [f64; 6] = [0.5123, 0.4871, 0.5377, 0.4619, 0.5731, 0.4257];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FinderConfig {
    /// Location tolerance |Δk|.
    pub tol: f64,
    /// Boxes holding one zero are refined below this diameter before Newton.
    pub max_box_diameter: f64,
    /// Boxes are never split below this diameter.
    pub min_box_diameter: f64,
    /// Guard distance around k = 0 and the real axis.
    pub origin_margin: f64,
    pub newton_max_iter: usize,
    pub max_perturbations: usize,
    pub winding: WindingConfig,
}

impl Default for FinderConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_box_diameter: 0.5,
            min_box_diameter: 1e-7,
            origin_margin: 1e-3,
            newton_max_iter: 60,
            max_perturbations: 6,
            winding: WindingConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub k: C,
    pub multiplicity: usize,
    /// |f_h(k)| at the reported location.
    pub residual: f64,
    /// |∂_k f_h(k)| at the reported location.
    pub derivative: f64,
    /// Within the guard margin of the real axis.
    pub near_real: bool,
    /// Unsplittable cluster reported with its total multiplicity.
    pub degenerate: bool,
}

impl Zero {
    pub fn simple(k: C) -> Self {
        Self {
            k,
            multiplicity: 1,
            residual: 0.0,
            derivative: f64::NAN,
            near_real: false,
            degenerate: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSet {
    /// Zeros on iℝ₊, by decreasing |k|.
    pub eigenvalues: Vec<Zero>,
    /// Zeros with Im k ≤ 0, by increasing Re k.
    pub resonances: Vec<Zero>,
    /// Boxes where iteration failed to converge.
    pub unresolved: Vec<Rect>,
    pub search_region: Option<Rect>,
    pub tol: f64,
}

impl ResonanceSet {
    /// Sorts zeros into eigenvalues and resonances.
    pub fn from_zeros(zeros: Vec<Zero>, search_region: Option<Rect>, tol: f64) -> Self {
        let (mut eigenvalues, mut resonances): (Vec<Zero>, Vec<Zero>) =
            zeros.into_iter().partition(|z| z.k.im > 0.0);
        eigenvalues.sort_by(|a, b| b.k.norm().total_cmp(&a.k.norm()));
        resonances.sort_by(|a, b| a.k.re.total_cmp(&b.k.re).then(a.k.im.total_cmp(&b.k.im)));
        Self { eigenvalues, resonances, unresolved: Vec::new(), search_region, tol }
    }

    pub fn from_points(points: &[C], tol: f64) -> Self {
        Self::from_zeros(points.iter().map(|k| Zero::simple(*k)).collect(), None, tol)
    }

    pub fn all(&self) -> impl Iterator<Item = &Zero> {
        self.eigenvalues.iter().chain(&self.resonances)
    }

    /// All zeros, each repeated by multiplicity.
    pub fn points(&self) -> Vec<C> {
        self.all()
            .flat_map(|z| std::iter::repeat(z.k).take(z.multiplicity))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.all().map(|z| z.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn eigenvalue_points(&self) -> Vec<C> {
        self.eigenvalues.iter().map(|z| z.k).collect()
    }

    /// Keeps zeros with |k| ≤ r.
    pub fn truncated(&self, r: f64) -> Self {
        let keep = |v: &Vec<Zero>| v.iter().copied().filter(|z| z.k.norm() <= r).collect();
        Self {
            eigenvalues: keep(&self.eigenvalues),
            resonances: keep(&self.resonances),
            unresolved: self.unresolved.clone(),
            search_region: self.search_region,
            tol: self.tol,
        }
    }

    /// First zero without a partner under k ↦ −conj(k) within `tol`.
    pub fn unmatched_reflection(&self, tol: f64) -> Option<C> {
        let pts = self.points();
        let mut used = vec![false; pts.len()];
        for i in 0..pts.len() {
            if used[i] {
                continue;
            }
            let target = -pts[i].conj();
            if (target - pts[i]).norm() <= tol {
                used[i] = true;
                continue;
            }
            let partner = (0..pts.len())
                .filter(|&j| j != i && !used[j])
                .min_by(|&a, &b| (pts[a] - target).norm().total_cmp(&(pts[b] - target).norm()));
            match partner {
                Some(j) if (pts[j] - target).norm() <= tol => {
                    used[i] = true;
                    used[j] = true;
                }
                _ => return Some(pts[i]),
            }
        }
        None
    }

    /// Largest |Re k| over eigenvalues; zero when all lie on iℝ₊.
    pub fn eigenvalue_axis_deviation(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, z| m.max(z.k.re.abs()))
    }

    /// Strict ordering |k₁| > |k₂| > … of the eigenvalues.
    pub fn eigenvalues_strictly_ordered(&self) -> bool {
        self.eigenvalues.windows(2).all(|w| w[0].k.norm() > w[1].k.norm())
    }
}

fn newton<E: JostEvaluator + ?Sized>(f: &E, start: C, cfg: &FinderConfig) -> Result<Option<C>> {
    let mut z = start;
    for _ in 0..cfg.newton_max_iter {
        let (fz, dz) = f.fh_with_dk(z)?;
        if fz.norm() == 0.0 {
            return Ok(Some(z));
        }
        if dz.norm() == 0.0 || !dz.is_finite() {
            return Ok(None);
        }
        let step = fz / dz;
        z -= step;
        if !z.is_finite() {
            return Ok(None);
        }
        if step.norm() <= 0.01 * cfg.tol || step.norm() <= 4.0 * f64::EPSILON * z.norm() {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

fn muller<E: JostEvaluator + ?Sized>(f: &E, center: C, radius: f64, cfg: &FinderConfig) -> Result<Option<C>> {
    let mut x0 = center - radius;
    let mut x1 = center + radius;
    let mut x2 = center;
    let (mut f0, mut f1, mut f2) = (f.fh(x0)?, f.fh(x1)?, f.fh(x2)?);
    for _ in 0..4 * cfg.newton_max_iter {
        let h1 = x1 - x0;
        let h2 = x2 - x1;
        let d1 = (f1 - f0) / h1;
        let d2 = (f2 - f1) / h2;
        let a = (d2 - d1) / (h2 + h1);
        let b = a * h2 + d2;
        let disc = (b * b - 4.0 * f2 * a).sqrt();
        let den = if (b + disc).norm() > (b - disc).norm() { b + disc } else { b - disc };
        if den.norm() == 0.0 {
            return Ok(None);
        }
        let dx = -2.0 * f2 / den;
        let x3 = x2 + dx;
        if !x3.is_finite() {
            return Ok(None);
        }
        if dx.norm() <= 0.01 * cfg.tol {
            return Ok(Some(x3));
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        x2 = x3;
        f2 = f.fh(x2)?;
    }
    Ok(None)
}

/// Strict count on a box edge layout shared with siblings: no perturbation.
fn strict_count<E: JostEvaluator + ?Sized>(f: &E, rect: &Rect, cfg: &FinderConfig) -> Result<Option<usize>> {
    match winding_number(f, rect, &cfg.winding) {
        Ok(w) if w >= 0 => Ok(Some(w as usize)),
        Ok(_) => Ok(None),
        Err(WindingError::Eval(e)) => Err(e),
        Err(WindingError::OnContour) => Ok(None),
    }
}

#[derive(Debug, Default)]
struct Found {
    zeros: Vec<Zero>,
    unresolved: Vec<Rect>,
}

impl Found {
    fn merge(mut self, other: Found) -> Found {
        self.zeros.extend(other.zeros);
        self.unresolved.extend(other.unresolved);
        self
    }
}

fn describe<E: JostEvaluator + ?Sized>(f: &E, k: C, multiplicity: usize, degenerate: bool, cfg: &FinderConfig) -> Result<Zero> {
    let (fk, dk) = f.fh_with_dk(k)?;
    Ok(Zero {
        k,
        multiplicity,
        residual: fk.norm(),
        derivative: dk.norm(),
        near_real: k.im.abs() < cfg.origin_margin,
        degenerate,
    })
}

fn resolve<E: JostEvaluator + ?Sized>(f: &E, rect: Rect, count: usize, cfg: &FinderConfig) -> Result<Found> {
    if count == 0 {
        return Ok(Found::default());
    }
    let accept = rect.inflate(cfg.tol);
    if count == 1 && rect.diameter() < cfg.max_box_diameter {
        let c = rect.center();
        let mut hit = newton(f, c, cfg)?.filter(|z| accept.contains(*z));
        if hit.is_none() {
            hit = muller(f, c, 0.25 * rect.diameter(), cfg)?.filter(|z| accept.contains(*z));
        }
        if let Some(z) = hit {
            return Ok(Found { zeros: vec![describe(f, z, 1, false, cfg)?], unresolved: vec![] });
        }
    }
    if rect.diameter() < cfg.min_box_diameter {
        let c = rect.center();
        if count == 1 {
            return Ok(Found { zeros: vec![], unresolved: vec![rect] });
        }
        // near-coincident zeros: report the cluster
        let z = newton(f, c, cfg)?.filter(|z| accept.contains(*z)).unwrap_or(c);
        return Ok(Found { zeros: vec![describe(f, z, count, true, cfg)?], unresolved: vec![] });
    }
    for frac in SPLIT_FRACTIONS {
        let (a, b) = rect.split(frac);
        let (ca, cb) = rayon::join(|| strict_count(f, &a, cfg), || strict_count(f, &b, cfg));
        let (Some(ca), Some(cb)) = (ca?, cb?) else { continue };
        if ca + cb != count {
            continue;
        }
        let (fa, fb) = rayon::join(|| resolve(f, a, ca, cfg), || resolve(f, b, cb, cfg));
        return Ok(fa?.merge(fb?));
    }
    Err(Error::Inconsistent(format!(
        "sub-box counts never summed to {count} for box {rect:?}"
    )))
}

/// Locates every zero of `f` in `region`.
///
/// The region is counted by phase winding, then split recursively until each
/// box holds at most one zero and is smaller than the configured diameter;
/// Newton (with a Muller fallback) refines from the box centre. Boxes that
/// still fail are listed as unresolved.
pub fn find_zeros<E: JostEvaluator + ?Sized>(f: &E, region: &Rect, cfg: &FinderConfig) -> Result<ResonanceSet> {
    let total = count_zeros(f, region, &cfg.winding, cfg.max_perturbations)?;
    // count_zeros may inflate the contour; resolve inside what was counted
    let counted = (0..=cfg.max_perturbations)
        .map(|a| {
            let step = 1e-4 * region.diameter().max(1e-3);
            region.inflate(step * a as f64 * (1.0 + 0.37 * a as f64))
        })
        .find(|r| matches!(strict_count(f, r, cfg), Ok(Some(c)) if c == total))
        .unwrap_or(*region);
    let found = resolve(f, counted, total, cfg)?;
    let located: usize = found.zeros.iter().map(|z| z.multiplicity).sum();
    if located + found.unresolved.len() < total {
        return Err(Error::Inconsistent(format!(
            "located {located} zeros but the region holds {total}"
        )));
    }
    let mut set = ResonanceSet::from_zeros(found.zeros, Some(*region), cfg.tol);
    set.unresolved = found.unresolved;
    Ok(set)
}

/// Upper bound on the eigenvalue height: the larger of `‖V‖ + |h| + 1` and
/// the first `t` with `t > (‖V‖ + |h|) e^{‖V‖/max(1,t)}`.
pub fn eigenvalue_height_bound(l1: f64, h: f64) -> f64 {
    let simple = l1 + h.abs() + 1.0;
    let c = l1 + h.abs();
    let mut t = simple;
    while t <= c * (l1 / t.max(1.0)).exp() {
        t *= 1.25;
    }
    t.max(simple)
}

/// Eigenvalues `k_j = i t_j` of a Jost evaluator with `t ∈ (margin, t_max]`,
/// ordered by decreasing |k|. Found by sign changes of the real function
/// `t ↦ f_h(it)` and Newton, with the count confirmed by phase winding.
pub fn eigenvalues_of<E: JostEvaluator + ?Sized>(f: &E, t_max: f64, cfg: &FinderConfig) -> Result<Vec<Zero>> {
    let lo = cfg.origin_margin;
    if t_max <= lo {
        return Ok(Vec::new());
    }
    let strip = Rect::new(-0.5, 0.5, lo, t_max + 0.5)?;
    let expected = count_zeros(f, &strip, &cfg.winding, cfg.max_perturbations)?;
    let g = |t: f64| -> Result<f64> { Ok(f.fh(C::new(0.0, t))?.re) };
    let mut samples = 256usize;
    loop {
        let ts: Vec<f64> = (0..=samples).map(|j| lo + (t_max + 0.5 - lo) * j as f64 / samples as f64).collect();
        let gs = ts.iter().map(|t| g(*t)).collect::<Result<Vec<f64>>>()?;
        let mut roots = Vec::new();
        for j in 0..samples {
            if gs[j] == 0.0 {
                roots.push(ts[j]);
            } else if gs[j] * gs[j + 1] < 0.0 {
                roots.push(refine_on_axis(f, ts[j], ts[j + 1], gs[j], cfg)?);
            }
        }
        if roots.len() == expected {
            let mut zeros = roots
                .into_iter()
                .map(|t| describe(f, C::new(0.0, t), 1, false, cfg))
                .collect::<Result<Vec<_>>>()?;
            zeros.sort_by(|a, b| b.k.im.total_cmp(&a.k.im));
            if let Some(z) = zeros.iter().find(|z| !(z.derivative > 0.0)) {
                return Err(Error::Inconsistent(format!("eigenvalue {} is not simple", z.k)));
            }
            return Ok(zeros);
        }
        if samples > 1 << 18 {
            return Err(Error::Inconsistent(format!(
                "found {} sign changes on iℝ₊ but phase winding counts {expected}",
                roots.len()
            )));
        }
        samples *= 4;
    }
}

fn refine_on_axis<E: JostEvaluator + ?Sized>(f: &E, mut a: f64, mut b: f64, ga: f64, cfg: &FinderConfig) -> Result<f64> {
    let mut sa = ga.signum();
    for _ in 0..60 {
        if b - a < 1e-6 * b.max(1.0) {
            break;
        }
        let m = 0.5 * (a + b);
        let gm = f.fh(C::new(0.0, m))?.re;
        if gm == 0.0 {
            return Ok(m);
        }
        if gm.signum() == sa {
            a = m;
            sa = gm.signum();
        } else {
            b = m;
        }
    }
    // Newton in t: d/dt f_h(it) = i ḟ_h(it)
    let mut t = 0.5 * (a + b);
    for _ in 0..cfg.newton_max_iter {
        let (fz, dz) = f.fh_with_dk(C::new(0.0, t))?;
        let slope = (C::i() * dz).re;
        if slope == 0.0 {
            break;
        }
        let step = fz.re / slope;
        let next = t - step;
        if !(next > a - (b - a) && next < b + (b - a)) {
            break;
        }
        t = next;
        if step.abs() <= 0.01 * cfg.tol || step.abs() <= 4.0 * f64::EPSILON * t {
            break;
        }
    }
    Ok(t)
}

/// Eigenvalues of `(V, h)`.
pub fn eigenvalues(v: &PotentialProfile<f64>, h: f64) -> Result<Vec<C>> {
    let f = ForwardJost::with_h(v, h);
    let t_max = eigenvalue_height_bound(f.l1_norm(), h);
    Ok(eigenvalues_of(&f, t_max, &FinderConfig::default())?
        .into_iter()
        .map(|z| z.k)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jost::Analytic;

    #[test]
    fn free_robin_zero_at_i() {
        let f = Analytic { f: |k: C| C::i() * k + 1.0, df: |_| C::i() };
        let set = find_zeros(&f, &Rect::new(-3.0, 3.0, 0.1, 3.0).unwrap(), &FinderConfig::default()).unwrap();
        assert_eq!(set.eigenvalues.len(), 1);
        assert!((set.eigenvalues[0].k - C::i()).norm() < 1e-12);
        assert!(set.resonances.is_empty());
    }

    #[test]
    fn free_robin_eigenvalues() {
        let v = PotentialProfile::zero(1.0, 1.0, 16);
        let e = eigenvalues(&v, 1.0).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e[0] - C::i()).norm() < 1e-12);
        assert!(eigenvalues(&v, -1.0).unwrap().is_empty());
    }

    #[test]
    fn polynomial_roots_and_double_root() {
        let roots = [C::new(0.3, -0.2), C::new(-1.1, 0.7), C::new(2.0, -1.5)];
        let f = Analytic {
            f: move |k: C| roots.iter().fold(C::new(1.0, 0.0), |p, r| p * (k - r)),
            df: move |k: C| {
                (0..3)
                    .map(|i| roots.iter().enumerate().filter(|(j, _)| *j != i).fold(C::new(1.0, 0.0), |p, (_, r)| p * (k - r)))
                    .sum()
            },
        };
        let set = find_zeros(&f, &Rect::new(-3.0, 3.0, -3.0, 3.0).unwrap(), &FinderConfig::default()).unwrap();
        assert_eq!(set.len(), 3);
        for r in roots {
            assert!(set.points().iter().any(|z| (z - r).norm() < 1e-10));
        }

        let g = Analytic {
            f: |k: C| (k - C::new(0.25, -0.25)).powi(2),
            df: |k: C| 2.0 * (k - C::new(0.25, -0.25)),
        };
        let set = find_zeros(&g, &Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap(), &FinderConfig::default()).unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.resonances.iter().all(|z| z.degenerate || z.multiplicity == 1));
    }

    #[test]
    fn reflection_matching() {
        let s = ResonanceSet::from_points(&[C::new(1.0, -1.0), C::new(-1.0, -1.0), C::new(0.0, 2.0)], 1e-10);
        assert!(s.unmatched_reflection(1e-9).is_none());
        let s = ResonanceSet::from_points(&[C::new(1.0, -1.0), C::new(0.0, 2.0)], 1e-10);
        assert_eq!(s.unmatched_reflection(1e-9), Some(C::new(1.0, -1.0)));
    }

    #[test]
    fn height_bound_covers_exponential_factor() {
        let t = eigenvalue_height_bound(25.0, 0.0);
        assert!(t > 25.0 * (25.0 / t).exp());
    }
}
