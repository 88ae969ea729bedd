//! The two-sheeted ξ-surface of the quasi momentum `k_ω(ξ) = i√(ξ² − ω²/μ_I)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sheet {
    /// Im k > 0.
    Physical,
    /// Im k < 0.
    Unphysical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SheetPoint {
    pub xi: Complex64,
    pub sheet: Sheet,
}

/// Which cut a point lies on, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cut {
    ImaginaryAxis,
    Segment,
}

impl SheetPoint {
    pub fn new(xi: Complex64, sheet: Sheet) -> Self {
        Self { xi, sheet }
    }

    pub fn physical(xi: Complex64) -> Self {
        Self::new(xi, Sheet::Physical)
    }

    pub fn unphysical(xi: Complex64) -> Self {
        Self::new(xi, Sheet::Unphysical)
    }

    /// Cut the point sits on for cut speed `c = ω/√μ_I`.
    pub fn cut(&self, c: f64) -> Option<Cut> {
        if self.xi.im == 0.0 && self.xi.re.abs() <= c {
            Some(Cut::Segment)
        } else if self.xi.re == 0.0 {
            Some(Cut::ImaginaryAxis)
        } else {
            None
        }
    }
}

fn cut_speed(omega: f64, mu_tail: f64) -> Result<f64> {
    if !(omega > 0.0) || !(mu_tail > 0.0) {
        return Err(Error::Domain(format!(
            "need omega > 0 and mu_I > 0, got omega = {omega}, mu_I = {mu_tail}"
        )));
    }
    Ok(omega / mu_tail.sqrt())
}

/// `k_ω(ξ)` on the sheet of `point`.
///
/// Points on a cut are assigned deterministically: on the real segment the
/// physical value is `+√(c² − ξ²) ≥ 0`; on the imaginary axis the limit from
/// `Re ξ > 0` is taken. The unphysical sheet carries the opposite sign.
pub fn quasi_momentum(point: SheetPoint, omega: f64, mu_tail: f64) -> Result<Complex64> {
    let c = cut_speed(omega, mu_tail)?;
    let xi = point.xi;
    let physical = match point.cut(c) {
        Some(Cut::Segment) => Complex64::new((c * c - xi.re * xi.re).max(0.0).sqrt(), 0.0),
        Some(Cut::ImaginaryAxis) => {
            let y = xi.im;
            Complex64::new(-y.signum() * (y * y + c * c).sqrt(), 0.0)
        }
        None => Complex64::i() * (xi * xi - c * c).sqrt(),
    };
    Ok(match point.sheet {
        Sheet::Physical => physical,
        Sheet::Unphysical => -physical,
    })
}

/// Inverse of [`quasi_momentum`] with `Re ξ ≥ 0`. Real `k` lies on a cut
/// and is reported as such.
pub fn xi_of_k(k: Complex64, omega: f64, mu_tail: f64) -> Result<SheetPoint> {
    let c = cut_speed(omega, mu_tail)?;
    if k.im == 0.0 {
        return Err(Error::OnCut { xi: (c * c - k * k).sqrt() });
    }
    let xi = (c * c - k * k).sqrt();
    let sheet = if k.im > 0.0 { Sheet::Physical } else { Sheet::Unphysical };
    Ok(SheetPoint { xi, sheet })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    #[test]
    fn origin_maps_to_segment_endpoint() {
        let k = quasi_momentum(SheetPoint::physical(Complex64::new(0.0, 0.0)), 3.0, 4.0).unwrap();
        assert_abs_diff_eq!(k.re, 1.5, epsilon = 1e-15);
        assert_eq!(k.im, 0.0);
    }

    #[test]
    fn unphysical_asymptotics() {
        for xi in [1e3, 1e4, 1e5] {
            let k = quasi_momentum(SheetPoint::unphysical(Complex64::new(xi, 0.0)), 2.0, 1.0).unwrap();
            let d = k - Complex64::new(0.0, -xi);
            assert!(d.norm() * xi < 2.5, "{d}");
        }
        let k = quasi_momentum(SheetPoint::physical(Complex64::new(1e4, 1.0)), 2.0, 1.0).unwrap();
        assert!((k - Complex64::i() * Complex64::new(1e4, 1.0)).norm() < 1e-3);
    }

    #[test]
    fn sheet_sign_of_imaginary_part() {
        let p = SheetPoint::physical(Complex64::new(1.3, 0.4));
        assert!(quasi_momentum(p, 1.0, 1.0).unwrap().im > 0.0);
        let p = SheetPoint::unphysical(Complex64::new(1.3, 0.4));
        assert!(quasi_momentum(p, 1.0, 1.0).unwrap().im < 0.0);
    }

    #[test]
    fn round_trip_random_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let xi = Complex64::new(rng.gen_range(0.01..20.0), rng.gen_range(-20.0..20.0));
            let sheet = if rng.gen_bool(0.5) { Sheet::Physical } else { Sheet::Unphysical };
            let p = SheetPoint::new(xi, sheet);
            let k = quasi_momentum(p, 2.0, 1.5).unwrap();
            let back = xi_of_k(k, 2.0, 1.5).unwrap();
            assert_eq!(back.sheet, sheet);
            assert!((back.xi - xi).norm() <= 1e-12 * xi.norm().max(1.0));
        }
    }

    #[test]
    fn evenness_and_conjugation_symmetry() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let xi = Complex64::new(rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0));
            for sheet in [Sheet::Physical, Sheet::Unphysical] {
                let k = quasi_momentum(SheetPoint::new(xi, sheet), 1.0, 1.0).unwrap();
                let km = quasi_momentum(SheetPoint::new(-xi, sheet), 1.0, 1.0).unwrap();
                assert_eq!(k, km);
                let kc = quasi_momentum(SheetPoint::new(xi.conj(), sheet), 1.0, 1.0).unwrap();
                assert!((k + kc.conj()).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn real_k_is_on_a_cut() {
        assert!(matches!(xi_of_k(Complex64::new(0.5, 0.0), 1.0, 1.0), Err(Error::OnCut { .. })));
        let p = SheetPoint::physical(Complex64::new(0.0, 2.0));
        assert_eq!(p.cut(1.0), Some(Cut::ImaginaryAxis));
    }
}
