//! Quadrature, finite-difference and special-function helpers shared across modules.

use crate::scalar::Real;
use num_complex::Complex64;

/// Composite trapezoid rule on a uniform grid.
pub fn trapezoid<T: Real>(values: &[T], dx: T) -> T {
    match values.len() {
        0 | 1 => T::zero(),
        n => {
            let inner: T = values[1..n - 1].iter().copied().sum();
            dx * (inner + (values[0] + values[n - 1]) * T::of(0.5))
        }
    }
}

/// Composite Simpson rule on a uniform grid. An odd number of intervals is
/// closed with Simpson's 3/8 rule on the last three.
pub fn simpson<T: Real>(values: &[T], dx: T) -> T {
    let n = values.len();
    if n < 3 {
        return trapezoid(values, dx);
    }
    let intervals = n - 1;
    let (even_end, tail) = if intervals % 2 == 0 {
        (n - 1, T::zero())
    } else if intervals >= 3 {
        let m = n - 4;
        let t = T::of(3.0 / 8.0)
            * dx
            * (values[m] + T::of(3.0) * values[m + 1] + T::of(3.0) * values[m + 2] + values[m + 3]);
        (m, t)
    } else {
        return trapezoid(values, dx);
    };
    let mut acc = values[0] + values[even_end];
    for (i, v) in values.iter().enumerate().take(even_end).skip(1) {
        acc = acc + if i % 2 == 1 { T::of(4.0) } else { T::of(2.0) } * *v;
    }
    acc * dx / T::of(3.0) + tail
}

/// Simpson rule for complex samples.
pub fn simpson_c(values: &[Complex64], dx: f64) -> Complex64 {
    let re: Vec<f64> = values.iter().map(|v| v.re).collect();
    let im: Vec<f64> = values.iter().map(|v| v.im).collect();
    Complex64::new(simpson(&re, dx), simpson(&im, dx))
}

/// Finite-difference weights for derivatives 0..=max_order at `x0` from
/// arbitrary nodes (Fornberg's recursion). `w[m][j]` weights node `j` for the
/// m-th derivative.
pub fn fornberg_weights<T: Real>(x0: T, nodes: &[T], max_order: usize) -> Vec<Vec<T>> {
    let n = nodes.len();
    let mut c = vec![vec![T::zero(); n]; max_order + 1];
    c[0][0] = T::one();
    let mut c1 = T::one();
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 = c2 * c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    let kt = T::from_usize(k).unwrap();
                    c[k][i] = c1 * (kt * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                let kt = T::from_usize(k).unwrap();
                c[k][j] = (c4 * c[k][j] - kt * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// First and second derivative estimates at every node of a (possibly
/// non-uniform) grid from a centred stencil of `width` nodes, shifted
/// one-sided near the ends.
pub fn nodal_derivatives<T: Real>(x: &[T], y: &[T], width: usize) -> (Vec<T>, Vec<T>) {
    let n = x.len();
    let width = width.min(n).max(1);
    let half = width / 2;
    let mut d1 = vec![T::zero(); n];
    let mut d2 = vec![T::zero(); n];
    for i in 0..n {
        let start = i.saturating_sub(half).min(n - width);
        let nodes = &x[start..start + width];
        let w = fornberg_weights(x[i], nodes, 2);
        // differences keep constant data exactly flat
        for (j, yj) in y[start..start + width].iter().enumerate() {
            let dy = *yj - y[i];
            d1[i] = d1[i] + w[1][j] * dy;
            d2[i] = d2[i] + w[2][j] * dy;
        }
    }
    (d1, d2)
}

/// Derivative of uniformly sampled data: 4th-order central stencils in the
/// interior, 2nd-order one-sided at the two end nodes and 2nd-order central
/// next to them.
pub fn derivative_uniform<T: Real>(y: &[T], dx: T) -> Vec<T> {
    let n = y.len();
    let mut d = vec![T::zero(); n];
    if n < 2 {
        return d;
    }
    if n == 2 {
        let s = (y[1] - y[0]) / dx;
        return vec![s, s];
    }
    let two = T::of(2.0);
    d[0] = (T::of(-3.0) * y[0] + T::of(4.0) * y[1] - y[2]) / (two * dx);
    d[n - 1] = (T::of(3.0) * y[n - 1] - T::of(4.0) * y[n - 2] + y[n - 3]) / (two * dx);
    for i in 1..n - 1 {
        d[i] = if i >= 2 && i + 2 < n {
            (y[i - 2] - T::of(8.0) * y[i - 1] + T::of(8.0) * y[i + 1] - y[i + 2]) / (T::of(12.0) * dx)
        } else {
            (y[i + 1] - y[i - 1]) / (two * dx)
        };
    }
    d
}

/// Piecewise-linear interpolation on a uniform grid starting at `x0`; zero
/// outside `[x0, x0 + (n-1) dx]`.
pub fn lerp_uniform<T: Real>(values: &[T], x0: T, dx: T, x: T) -> T {
    let n = values.len();
    if n == 0 {
        return T::zero();
    }
    let s = (x - x0) / dx;
    let last = T::from_usize(n - 1).unwrap();
    if s < T::zero() || s > last {
        return T::zero();
    }
    let i = s.floor().to_usize().unwrap_or(0).min(n.saturating_sub(2));
    if n == 1 {
        return values[0];
    }
    let t = s - T::from_usize(i).unwrap();
    values[i] + (values[i + 1] - values[i]) * t
}

/// `E1(ix)` for `x ≥ 4` by modified Lentz on its continued fraction.
fn e1_imaginary(x: f64) -> Complex64 {
    let z = Complex64::new(0.0, x);
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h * (-z).exp()
}

/// `(Ci(x), Si(x))` for `x > 0`.
pub fn cos_sin_integral(x: f64) -> (f64, f64) {
    assert!(x > 0.0, "cos_sin_integral needs x > 0");
    if x < 4.0 {
        let x2 = x * x;
        let mut si = x;
        let mut ci = 0.0;
        let mut term = 1.0; // (−1)^n x^n / n!
        let mut n = 1usize;
        loop {
            term *= x / n as f64;
            let add = match n % 4 {
                1 => term / n as f64,
                2 => -term / n as f64,
                3 => -term / n as f64,
                _ => term / n as f64,
            };
            if n % 2 == 0 {
                ci += add;
            } else if n > 1 {
                si += add;
            }
            n += 1;
            if term.abs() < 1e-18 * x2.max(1.0) || n > 200 {
                break;
            }
        }
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        (EULER_GAMMA + x.ln() + ci, si)
    } else {
        let e1 = e1_imaginary(x);
        // E1(ix) = −Ci(x) + i(Si(x) − π/2)
        (-e1.re, std::f64::consts::FRAC_PI_2 + e1.im)
    }
}

/// Sine integral Si(x) = ∫₀ˣ sin t / t dt.
pub fn sine_integral(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    cos_sin_integral(x.abs()).1.copysign(x)
}

/// `∫_K^∞ e^{ikz}/k dk` for real `z ≠ 0`.
pub fn oscillatory_tail_1(k_max: f64, z: f64) -> Complex64 {
    let (ci, si) = cos_sin_integral(k_max * z.abs());
    Complex64::new(-ci, (std::f64::consts::FRAC_PI_2 - si) * z.signum())
}

/// `∫_K^∞ e^{ikz}/kⁿ dk` for real `z` and `n ≥ 2`, by parts down to `n = 1`.
pub fn oscillatory_tail(n: u32, k_max: f64, z: f64) -> Complex64 {
    assert!(n >= 2, "the n = 1 integral is oscillatory_tail_1");
    let m = f64::from(n - 1);
    let lead = Complex64::new(0.0, k_max * z).exp() / (m * k_max.powi(n as i32 - 1));
    if z == 0.0 {
        return lead;
    }
    let lower = if n == 2 { oscillatory_tail_1(k_max, z) } else { oscillatory_tail(n - 1, k_max, z) };
    lead + Complex64::new(0.0, z / m) * lower
}
