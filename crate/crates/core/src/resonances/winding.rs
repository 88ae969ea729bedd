//! Argument-principle zero counting by phase-winding accumulation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jost::JostEvaluator;

type C = Complex64;

/// Axis-aligned rectangle in the complex k-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_min < re_max && im_min < im_max) {
            return Err(Error::Domain(format!(
                "ill-formed rectangle [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self { re_min, re_max, im_min, im_max })
    }

    pub fn centered(center: C, half_width: f64, half_height: f64) -> Self {
        Self {
            re_min: center.re - half_width,
            re_max: center.re + half_width,
            im_min: center.im - half_height,
            im_max: center.im + half_height,
        }
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> C {
        C::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn contains(&self, z: C) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    pub fn inflate(&self, d: f64) -> Self {
        Self {
            re_min: self.re_min - d,
            re_max: self.re_max + d,
            im_min: self.im_min - d,
            im_max: self.im_max + d,
        }
    }

    /// Splits across the longer side at fraction `frac`.
    pub fn split(&self, frac: f64) -> (Rect, Rect) {
        if self.width() >= self.height() {
            let m = self.re_min + frac * self.width();
            (Rect { re_max: m, ..*self }, Rect { re_min: m, ..*self })
        } else {
            let m = self.im_min + frac * self.height();
            (Rect { im_max: m, ..*self }, Rect { im_min: m, ..*self })
        }
    }

    /// Counter-clockwise corners starting at the lower left.
    pub fn corners(&self) -> [C; 4] {
        [
            C::new(self.re_min, self.im_min),
            C::new(self.re_max, self.im_min),
            C::new(self.re_max, self.im_max),
            C::new(self.re_min, self.im_max),
        ]
    }
}

/// Sampling controls for contour winding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingConfig {
    /// Initial spacing of boundary samples.
    pub spacing: f64,
    /// Largest phase change accepted between neighbouring samples (radians).
    pub max_phase_step: f64,
    /// Segments shorter than this that still turn too fast signal a zero on
    /// the contour.
    pub min_segment: f64,
    /// Number of sample doublings tried before the winding must stabilize.
    pub max_doublings: usize,
}

impl Default for WindingConfig {
    fn default() -> Self {
        Self {
            spacing: 0.1,
            max_phase_step: 0.5,
            min_segment: 1e-9,
            max_doublings: 4,
        }
    }
}

/// Outcome of a winding evaluation that saw a zero on the contour.
#[derive(Debug)]
pub(crate) enum WindingError {
    OnContour,
    Eval(Error),
}

impl From<Error> for WindingError {
    fn from(e: Error) -> Self {
        WindingError::Eval(e)
    }
}

fn segment_phase<E: JostEvaluator + ?Sized>(
    f: &E,
    z0: C,
    f0: C,
    z1: C,
    f1: C,
    cfg: &WindingConfig,
    depth: usize,
) -> Result<f64, WindingError> {
    let d = (f1 / f0).arg();
    if d.abs() <= cfg.max_phase_step {
        return Ok(d);
    }
    if (z1 - z0).norm() < cfg.min_segment || depth > 60 {
        return Err(WindingError::OnContour);
    }
    let zm = 0.5 * (z0 + z1);
    let fm = f.fh(zm)?;
    if fm.norm() == 0.0 || !fm.is_finite() {
        return Err(WindingError::OnContour);
    }
    Ok(segment_phase(f, z0, f0, zm, fm, cfg, depth + 1)?
        + segment_phase(f, zm, fm, z1, f1, cfg, depth + 1)?)
}

/// Total phase change of `f` along the closed boundary of `rect`, sampled
/// at initial spacing `spacing`.
fn boundary_phase<E: JostEvaluator + ?Sized>(
    f: &E,
    rect: &Rect,
    spacing: f64,
    cfg: &WindingConfig,
) -> Result<f64, WindingError> {
    let corners = rect.corners();
    let mut total = 0.0;
    for e in 0..4 {
        let a = corners[e];
        let b = corners[(e + 1) % 4];
        let n = (((b - a).norm() / spacing).ceil() as usize).max(4);
        let mut z_prev = a;
        let mut f_prev = f.fh(a)?;
        if f_prev.norm() == 0.0 {
            return Err(WindingError::OnContour);
        }
        for j in 1..=n {
            let z = a + (b - a) * (j as f64 / n as f64);
            let fz = f.fh(z)?;
            if fz.norm() == 0.0 || !fz.is_finite() {
                return Err(WindingError::OnContour);
            }
            total += segment_phase(f, z_prev, f_prev, z, fz, cfg, 0)?;
            z_prev = z;
            f_prev = fz;
        }
    }
    Ok(total)
}

/// Winding number with sample doubling until two consecutive resolutions
/// agree on the same integer.
pub(crate) fn winding_number<E: JostEvaluator + ?Sized>(
    f: &E,
    rect: &Rect,
    cfg: &WindingConfig,
) -> Result<i64, WindingError> {
    let tau = std::f64::consts::TAU;
    let mut spacing = cfg.spacing.min(rect.width().min(rect.height()) / 4.0);
    let mut previous: Option<i64> = None;
    for _ in 0..=cfg.max_doublings {
        let phase = boundary_phase(f, rect, spacing, cfg)?;
        let w = phase / tau;
        let rounded = w.round();
        if (w - rounded).abs() < 0.05 {
            if previous == Some(rounded as i64) {
                return Ok(rounded as i64);
            }
            previous = Some(rounded as i64);
        } else {
            previous = None;
        }
        spacing *= 0.5;
    }
    previous.ok_or(WindingError::OnContour)
}

/// Number of zeros (with multiplicity) of `f` inside `rect`.
///
/// A zero within guard distance of the contour is detected when phase
/// refinement stalls; the rectangle is then inflated by a small, growing
/// amount up to `max_perturbations` times.
pub fn count_zeros<E: JostEvaluator + ?Sized>(
    f: &E,
    rect: &Rect,
    cfg: &WindingConfig,
    max_perturbations: usize,
) -> Result<usize> {
    let step = 1e-4 * rect.diameter().max(1e-3);
    for attempt in 0..=max_perturbations {
        let r = rect.inflate(step * attempt as f64 * (1.0 + 0.37 * attempt as f64));
        match winding_number(f, &r, cfg) {
            Ok(w) if w >= 0 => return Ok(w as usize),
            Ok(w) => {
                return Err(Error::Inconsistent(format!(
                    "negative winding {w} for an entire function"
                )))
            }
            Err(WindingError::Eval(e)) => return Err(e),
            Err(WindingError::OnContour) => continue,
        }
    }
    Err(Error::BoundaryDegeneracy { attempts: max_perturbations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jost::Analytic;

    #[test]
    fn identity_has_one_zero_in_unit_square() {
        let f = Analytic { f: |k: C| k, df: |_| C::new(1.0, 0.0) };
        let r = Rect::centered(C::new(0.0, 0.0), 0.5, 0.5);
        assert_eq!(count_zeros(&f, &r, &WindingConfig::default(), 4).unwrap(), 1);
    }

    #[test]
    fn free_robin_counts() {
        let f = Analytic { f: |k: C| C::i() * k + 1.0, df: |_| C::i() };
        let cfg = WindingConfig::default();
        let at_i = Rect::centered(C::new(0.0, 1.0), 0.5, 0.5);
        let at_2i = Rect::centered(C::new(0.0, 2.0), 0.5, 0.5);
        assert_eq!(count_zeros(&f, &at_i, &cfg, 4).unwrap(), 1);
        assert_eq!(count_zeros(&f, &at_2i, &cfg, 4).unwrap(), 0);
    }

    #[test]
    fn multiplicity_and_zero_on_edge() {
        let f = Analytic {
            f: |k: C| (k - C::new(0.1, 0.0)).powi(3) * (k + 2.0),
            df: |_| C::new(0.0, 0.0),
        };
        let cfg = WindingConfig::default();
        assert_eq!(count_zeros(&f, &Rect::centered(C::new(0.0, 0.0), 1.0, 1.0), &cfg, 4).unwrap(), 3);
        // zero exactly on the left edge: perturbation moves the contour outward
        let r = Rect::new(-2.0, 1.0, -1.0, 1.0).unwrap();
        assert_eq!(count_zeros(&f, &r, &cfg, 6).unwrap(), 4);
    }

    #[test]
    fn split_avoids_center_line() {
        let r = Rect::new(-1.0, 1.0, 0.0, 1.0).unwrap();
        let (a, b) = r.split(0.5 + 0.0123);
        assert!(a.re_max > 0.0);
        assert_eq!(a.re_max, b.re_min);
    }
}
