//! Counting asymptotics and resonance-free region checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{count_zeros, Rect, ResonanceSet, WindingConfig};
use crate::error::{Error, Result};
use crate::jost::JostEvaluator;
use crate::profile::PotentialProfile;
use crate::sheet::xi_of_k;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevinsonReport {
    pub r: f64,
    /// Zeros with |k| ≤ r, with multiplicity.
    pub count: usize,
    /// `count · π / (2 x_I r)`.
    pub ratio: f64,
    pub delta: f64,
    /// Share of counted zeros farther than δ in angle from the real axis.
    pub outside_sector_fraction: f64,
}

fn angle_to_real_axis(k: C) -> f64 {
    let a = k.arg().abs();
    a.min(PI - a)
}

/// Ratio and sector fraction of a zero set, without a completeness check.
pub fn levinson_ratio(set: &ResonanceSet, r: f64, x_i: f64, delta: f64) -> LevinsonReport {
    let inside: Vec<C> = set.points().into_iter().filter(|k| k.norm() <= r).collect();
    let outside = inside.iter().filter(|k| angle_to_real_axis(**k) >= delta).count();
    LevinsonReport {
        r,
        count: inside.len(),
        ratio: inside.len() as f64 * PI / (2.0 * x_i * r),
        delta,
        outside_sector_fraction: if inside.is_empty() { 0.0 } else { outside as f64 / inside.len() as f64 },
    }
}

/// Counting ratio at radius `r` after confirming that `set` holds every zero of
/// `f` in the square `[-r, r]²`.
pub fn levinson_check<E: JostEvaluator + ?Sized>(
    set: &ResonanceSet,
    f: &E,
    r: f64,
    x_i: f64,
    delta: f64,
) -> Result<LevinsonReport> {
    if !(r > 0.0 && x_i > 0.0) {
        return Err(Error::Domain(format!("need r > 0 and x_I > 0, got r = {r}, x_I = {x_i}")));
    }
    let square = Rect::new(-r, r, -r, r)?;
    let actual = count_zeros(f, &square, &WindingConfig::default(), 6)?;
    let listed = set.points().into_iter().filter(|k| square.contains(*k)).count();
    if listed < actual {
        return Err(Error::Incomplete(format!(
            "set lists {listed} zeros in [-{r}, {r}]² but the contour counts {actual}"
        )));
    }
    Ok(levinson_ratio(set, r, x_i, delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForbiddenDomainEntry {
    pub k: C,
    pub xi: C,
    /// `C₀ e^{2|Im k| x_I} − |k|`.
    pub k_c0_slack: f64,
    /// `C₀ e^{2|Re ξ| x_I} − |ξ|`.
    pub xi_c0_slack: f64,
    /// `C₁ e^{2|Im k| x_I} − |k|²`, when `V′ ∈ L¹`.
    pub k_c1_slack: Option<f64>,
    /// `C₁ e^{2|Re ξ| x_I} − |ξ|²`, when `V′ ∈ L¹`.
    pub xi_c1_slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForbiddenDomainReport {
    pub c0: f64,
    pub c1: Option<f64>,
    pub entries: Vec<ForbiddenDomainEntry>,
    /// Largest `|k + iξ|` over the ten resonances of largest |ξ|.
    pub asymptotic_deviation: Option<f64>,
}

impl ForbiddenDomainReport {
    pub fn min_k_c0_slack(&self) -> f64 {
        self.entries.iter().fold(f64::INFINITY, |m, e| m.min(e.k_c0_slack))
    }

    pub fn min_xi_c0_slack(&self) -> f64 {
        self.entries.iter().fold(f64::INFINITY, |m, e| m.min(e.xi_c0_slack))
    }

    pub fn violations(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| {
                e.k_c0_slack < 0.0
                    || e.xi_c0_slack < 0.0
                    || e.k_c1_slack.is_some_and(|s| s < 0.0)
                    || e.xi_c1_slack.is_some_and(|s| s < 0.0)
            })
            .count()
    }
}

/// `C₀ = ‖V‖ e^{‖V‖}`.
pub fn c0_constant(v: &PotentialProfile<f64>) -> f64 {
    let n = v.l1_norm();
    n * n.exp()
}

/// `C₁ = [‖V‖² + 2|h|‖V‖ + (|V(0)| + ‖V′‖)/4] e^{‖V‖}`; `None` unless V
/// vanishes at `x_I`, so that `V′` has no jump there.
pub fn c1_constant(v: &PotentialProfile<f64>, h: f64) -> Option<f64> {
    let last = *v.values.last()?;
    let scale = v.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if last.abs() > 1e-12 * scale.max(1.0) {
        return None;
    }
    let n = v.l1_norm();
    Some((n * n + 2.0 * h.abs() * n + 0.25 * (v.values[0].abs() + v.derivative_l1_norm())) * n.exp())
}

/// Maps every zero to ξ and evaluates the resonance-free region inequalities
/// in both planes. Zeros on a branch cut are skipped.
pub fn forbidden_domain_xi(
    set: &ResonanceSet,
    omega: f64,
    mu_tail: f64,
    v: &PotentialProfile<f64>,
    h: f64,
) -> Result<ForbiddenDomainReport> {
    let x_i = v.x_i;
    let c0 = c0_constant(v);
    let c1 = c1_constant(v, h);
    let mut entries = Vec::new();
    for z in set.all() {
        let xi = match xi_of_k(z.k, omega, mu_tail) {
            Ok(p) => p.xi,
            Err(Error::OnCut { .. }) => continue,
            Err(e) => return Err(e),
        };
        let gk = (2.0 * z.k.im.abs() * x_i).exp();
        let gxi = (2.0 * xi.re.abs() * x_i).exp();
        entries.push(ForbiddenDomainEntry {
            k: z.k,
            xi,
            k_c0_slack: c0 * gk - z.k.norm(),
            xi_c0_slack: c0 * gxi - xi.norm(),
            k_c1_slack: c1.map(|c| c * gk - z.k.norm_sqr()),
            xi_c1_slack: c1.map(|c| c * gxi - xi.norm_sqr()),
        });
    }
    let mut res: Vec<&ForbiddenDomainEntry> = entries.iter().filter(|e| e.k.im < 0.0).collect();
    res.sort_by(|a, b| b.xi.norm().total_cmp(&a.xi.norm()));
    let asymptotic_deviation = (!res.is_empty()).then(|| {
        res.iter()
            .take(10)
            .map(|e| (e.k + C::i() * e.xi).norm())
            .fold(0.0, f64::max)
    });
    Ok(ForbiddenDomainReport { c0, c1, entries, asymptotic_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_density() {
        let x_i = 1.0;
        let r = 200.0;
        // zeros spaced π/x_I apart on each side, just below the real axis
        let spacing = PI / x_i;
        let pts: Vec<C> = (1..)
            .map(|n| n as f64 * spacing)
            .take_while(|re| *re < r)
            .flat_map(|re| [C::new(re, -1.0), C::new(-re, -1.0)])
            .collect();
        let set = ResonanceSet::from_points(&pts, 1e-10);
        let rep = levinson_ratio(&set, r, x_i, 0.2);
        assert!((rep.ratio - 1.0).abs() <= 2.0 / rep.count as f64, "{rep:?}");
        assert!(rep.outside_sector_fraction < 0.05);
    }

    #[test]
    fn empty_set_empty_report() {
        let v = PotentialProfile::zero(1.0, 1.0, 16);
        let rep = forbidden_domain_xi(&ResonanceSet::from_points(&[], 1e-10), 10.0, 1.0, &v, 1.0).unwrap();
        assert!(rep.entries.is_empty());
        assert!(rep.asymptotic_deviation.is_none());
    }

    #[test]
    fn c1_requires_continuity_at_interface() {
        let bar = PotentialProfile::from_fn(|_| 4.0, 1.0, 0.0, 16).unwrap();
        assert!(c1_constant(&bar, 0.0).is_none());
        let smooth = PotentialProfile::from_fn(|x: f64| (PI * x).sin().powi(2), 1.0, 0.0, 64).unwrap();
        assert!(c1_constant(&smooth, 0.0).is_some());
    }
}
