//! Closed-form oracles shared by the integration tests.
#![allow(dead_code)]

use love_res::{Complex64 as C, PotentialProfile};

/// Step potential `V₀·1_{[0,a]}` with Robin coefficient `h`.
#[derive(Debug, Clone, Copy)]
pub struct Step {
    pub v0: f64,
    pub a: f64,
    pub h: f64,
}

impl Step {
    pub fn barrier() -> Self {
        Self { v0: 4.0, a: 1.0, h: 0.0 }
    }

    pub fn deep_well() -> Self {
        Self { v0: -25.0, a: 1.0, h: 0.0 }
    }

    /// Deepest well of the suite: √49 > 2π gives three Neumann levels.
    pub fn three_level_well() -> Self {
        Self { v0: -49.0, a: 1.0, h: 0.0 }
    }

    pub fn profile(&self, intervals: usize) -> PotentialProfile {
        let v0 = self.v0;
        PotentialProfile::from_fn(move |_| v0, self.a, self.h, intervals).unwrap()
    }

    pub fn l1(&self) -> f64 {
        self.v0.abs() * self.a
    }

    /// Entire functions cos(√z a), sin(√z a)/√z and their z-derivatives.
    fn trig(&self, z: C) -> (C, C, C, C) {
        let a = self.a;
        if z.norm() * a * a < 1e-4 {
            let c = 1.0 - z * a * a / 2.0 + z * z * a.powi(4) / 24.0;
            let s1 = a * (1.0 - z * a * a / 6.0 + z * z * a.powi(4) / 120.0);
            let dc = -a * s1 / 2.0;
            let ds1 = a * (-a * a / 6.0 + z * a.powi(4) / 60.0);
            return (c, s1, dc, ds1);
        }
        let r = z.sqrt();
        let c = (r * a).cos();
        let s1 = (r * a).sin() / r;
        (c, s1, -a * s1 / 2.0, (a * c - s1) / (2.0 * z))
    }

    /// `(f(0), f'(0), ∂_k f(0), ∂_k f'(0))` for the Jost solution.
    pub fn jost(&self, k: C) -> (C, C, C, C) {
        let a = self.a;
        let z = k * k - self.v0;
        let (c, s1, dc, ds1) = self.trig(z);
        let s2 = z * s1;
        let ds2 = s1 / 2.0 + a * c / 2.0;
        let e = (C::i() * k * a).exp();
        let i = C::i();
        let f0 = e * (c - i * k * s1);
        let fp = e * (s2 + i * k * c);
        let dzdk = 2.0 * k;
        let df0 = i * a * f0 + e * (dc * dzdk - i * s1 - i * k * ds1 * dzdk);
        let dfp = i * a * fp + e * (ds2 * dzdk + i * c + i * k * dc * dzdk);
        (f0, fp, df0, dfp)
    }

    pub fn fh(&self, k: C) -> C {
        let (f0, fp, _, _) = self.jost(k);
        self.h * f0 + fp
    }

    pub fn fh_dk(&self, k: C) -> C {
        let (_, _, df0, dfp) = self.jost(k);
        self.h * df0 + dfp
    }

    fn newton(&self, mut k: C) -> Option<C> {
        for _ in 0..100 {
            let d = self.fh_dk(k);
            if d.norm() == 0.0 {
                return None;
            }
            let step = self.fh(k) / d;
            k -= step;
            if !k.is_finite() || k.norm() > 1e6 {
                return None;
            }
            if step.norm() < 1e-15 * k.norm().max(1.0) {
                return Some(k);
            }
        }
        (self.fh(k).norm() < 1e-10 * k.norm().max(1.0)).then_some(k)
    }

    /// Zeros of `f_h` inside the rectangle, from Newton on a dense seed grid.
    pub fn roots(&self, re: (f64, f64), im: (f64, f64), spacing: f64) -> Vec<C> {
        let mut out: Vec<C> = Vec::new();
        let nx = ((re.1 - re.0) / spacing).ceil() as usize + 2;
        let ny = ((im.1 - im.0) / spacing).ceil() as usize + 2;
        for i in 0..=nx {
            for j in 0..=ny {
                let seed = C::new(re.0 - spacing + i as f64 * spacing, im.0 - spacing + j as f64 * spacing);
                if let Some(z) = self.newton(seed) {
                    let inside = z.re >= re.0 && z.re <= re.1 && z.im >= im.0 && z.im <= im.1;
                    if inside && out.iter().all(|w| (w - z).norm() > 1e-7) {
                        out.push(z);
                    }
                }
            }
        }
        out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        out
    }

    /// Eigenvalues `i t`, by sign changes of `f_h(it)` on a fine grid.
    pub fn eigenvalues(&self) -> Vec<C> {
        let t_max = 4.0 * (self.v0.abs().sqrt() + self.h.abs() + 1.0);
        let n = 20000;
        let g = |t: f64| self.fh(C::new(0.0, t)).re;
        let mut out = Vec::new();
        for j in 0..n {
            let (t0, t1) = (1e-6 + t_max * j as f64 / n as f64, 1e-6 + t_max * (j + 1) as f64 / n as f64);
            if g(t0) * g(t1) < 0.0 {
                let (mut lo, mut hi) = (t0, t1);
                for _ in 0..200 {
                    let m = 0.5 * (lo + hi);
                    if g(lo) * g(m) <= 0.0 {
                        hi = m;
                    } else {
                        lo = m;
                    }
                }
                out.push(C::new(0.0, 0.5 * (lo + hi)));
            }
        }
        out.reverse();
        out
    }
}

/// Pairs every point of `a` with its nearest in `b`; returns the largest distance.
pub fn max_pair_distance(a: &[C], b: &[C]) -> f64 {
    a.iter()
        .map(|x| b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}
