//! Nyström solution of the Marchenko equation
//! `A(x,t) = −G₀(x+t) − ∫ₓ^∞ G₀(t+s) A(x,s) ds` and recovery `V = −2 dA(x,x)/dx`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::derivative_uniform;
use crate::profile::PotentialProfile;
use crate::scattering::MarchenkoKernel;

/// Condition numbers above this reject the data.
pub const MAX_CONDITION: f64 = 1e12;

/// One solved row `t ↦ A(x,t)` on `t = x + i·dy`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarchenkoRow {
    pub x: f64,
    pub t: Vec<f64>,
    pub a: Vec<f64>,
    /// 1-norm condition estimate of the discrete operator.
    pub condition: f64,
    /// `max |discrete equation residual|`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarchenkoSolution {
    pub x_grid: Vec<f64>,
    /// `A(x,x)`
    pub diag: Vec<f64>,
    pub condition_numbers: Vec<f64>,
    #[serde(rename = "V_recovered")]
    pub v_recovered: Vec<f64>,
    pub x_i: f64,
    /// `max |A(x,t)|` over `x + t > 2x_I + dy`.
    pub support_residual: f64,
    /// `b` in `f_h(k) = ik + b + o(1)`, from the kernel tail.
    pub asymptotic_constant: f64,
}

impl MarchenkoSolution {
    pub fn dx(&self) -> f64 {
        self.x_grid[1] - self.x_grid[0]
    }

    /// Robin coefficient implied by `b = h − A(0,0)`.
    pub fn robin_coefficient(&self) -> f64 {
        self.asymptotic_constant + self.diag[0]
    }
}

/// Hager's estimate of `‖M⁻¹‖₁` from an LU factorisation.
fn inverse_norm1_estimate(lu: &nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>) -> f64 {
    let n = lu.l().nrows();
    let l = lu.l();
    let u = lu.u();
    let solve_t = |c: &DVector<f64>| -> Option<DVector<f64>> {
        // Mᵀ = Uᵀ Lᵀ P
        let w = u.tr_solve_upper_triangular(c)?;
        let mut z = l.tr_solve_lower_triangular(&w)?;
        lu.p().inv_permute_rows(&mut z);
        Some(z)
    };
    let mut x = DVector::from_element(n, 1.0 / n as f64);
    let mut est = 0.0;
    for _ in 0..5 {
        let Some(y) = lu.solve(&x) else { return f64::INFINITY };
        est = y.lp_norm(1);
        let xi = y.map(|v| if v >= 0.0 { 1.0 } else { -1.0 });
        let Some(z) = solve_t(&xi) else { return f64::INFINITY };
        let (j, zmax) = z.iter().enumerate().fold((0, 0.0f64), |(bj, bm), (j, v)| if v.abs() > bm { (j, v.abs()) } else { (bj, bm) });
        if zmax <= z.dot(&x) {
            break;
        }
        x = DVector::zeros(n);
        x[j] = 1.0;
    }
    est
}

/// Number of unknowns `t ∈ [x, 2x_I − x + margin]` for grid index `ix`.
fn row_len(kernel: &MarchenkoKernel, ix: usize) -> usize {
    let dy = kernel.dy();
    let upper = 2.0 * kernel.x_i + kernel.margin - ix as f64 * dy;
    let span = upper - ix as f64 * dy;
    if span <= 0.0 {
        1
    } else {
        (span / dy + 1e-9).floor() as usize + 1
    }
}

/// Solves the discrete Marchenko equation at grid point `x = ix·dy`.
pub fn solve_marchenko_at(kernel: &MarchenkoKernel, ix: usize) -> Result<MarchenkoRow> {
    let dy = kernel.dy();
    let n = row_len(kernel, ix);
    let g = |j: usize| kernel.g0_at_index(2 * ix + j);
    let w = |j: usize| if n > 1 && (j == 0 || j == n - 1) { 0.5 * dy } else if n == 1 { 0.0 } else { dy };
    let m = DMatrix::from_fn(n, n, |i, j| f64::from(u8::from(i == j)) + w(j) * g(i + j));
    let rhs = DVector::from_fn(n, |i, _| -g(i));
    let norm1 = (0..n).map(|j| m.column(j).lp_norm(1)).fold(0.0, f64::max);
    let x = ix as f64 * dy;
    let lu = m.clone().lu();
    let Some(a) = lu.solve(&rhs) else {
        return Err(Error::Degenerate { x, cond: f64::INFINITY });
    };
    let condition = norm1 * inverse_norm1_estimate(&lu);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::Degenerate { x, cond: condition });
    }
    let residual = (&m * &a - &rhs).amax();
    Ok(MarchenkoRow {
        x,
        t: (0..n).map(|i| x + i as f64 * dy).collect(),
        a: a.iter().copied().collect(),
        condition,
        residual,
    })
}

/// Solves the Marchenko equation at the grid point nearest `x`.
pub fn solve_marchenko(kernel: &MarchenkoKernel, x: f64) -> Result<MarchenkoRow> {
    let limit = kernel.x_i + kernel.margin;
    if !(x >= 0.0 && x <= limit + 1e-12) {
        return Err(Error::Domain(format!("x = {x} outside [0, {limit}]")));
    }
    solve_marchenko_at(kernel, (x / kernel.dy()).round() as usize)
}

/// Solves on every grid point of `[0, x_I + margin]` and differentiates the diagonal.
pub fn solve_all(kernel: &MarchenkoKernel) -> Result<MarchenkoSolution> {
    let dy = kernel.dy();
    let nx = ((kernel.x_i + kernel.margin) / dy + 1e-9).floor() as usize + 1;
    let rows = (0..nx)
        .into_par_iter()
        .map(|ix| solve_marchenko_at(kernel, ix))
        .collect::<Result<Vec<_>>>()?;
    let diag: Vec<f64> = rows.iter().map(|r| r.a[0]).collect();
    let support_residual = rows
        .iter()
        .flat_map(|r| r.t.iter().zip(&r.a).filter(move |(t, _)| r.x + **t > 2.0 * kernel.x_i + 1.5 * dy))
        .fold(0.0f64, |m, (_, a)| m.max(a.abs()));
    let v_recovered = derivative_uniform(&diag, dy).into_iter().map(|d| -2.0 * d).collect();
    Ok(MarchenkoSolution {
        x_grid: rows.iter().map(|r| r.x).collect(),
        diag,
        condition_numbers: rows.iter().map(|r| r.condition).collect(),
        v_recovered,
        x_i: kernel.x_i,
        support_residual,
        asymptotic_constant: -0.5 * kernel.tail_coefficient,
    })
}

/// `V = −2 dA(x,x)/dx` restricted to `[0, x_I]`.
pub fn recover_potential(solution: &MarchenkoSolution) -> Result<PotentialProfile<f64>> {
    let dx = solution.dx();
    let n = (solution.x_i / dx).round() as usize;
    if n < 2 || solution.v_recovered.len() < n + 1 {
        return Err(Error::Domain("Marchenko grid does not cover [0, x_I]".into()));
    }
    let v = derivative_uniform(&solution.diag, dx)
        .into_iter()
        .take(n + 1)
        .map(|d| -2.0 * d)
        .collect();
    PotentialProfile::new(v, solution.x_i, solution.robin_coefficient())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel_from(g0: impl Fn(f64) -> f64, x_i: f64, per_unit: usize) -> MarchenkoKernel {
        let dy = x_i / per_unit as f64;
        let margin = 0.1 * x_i;
        let n = ((4.0 * x_i + 2.0 * margin) / dy).round() as usize + 1;
        let grid: Vec<f64> = (0..n).map(|j| j as f64 * dy).collect();
        let g0v: Vec<f64> = grid.iter().map(|y| g0(*y)).collect();
        MarchenkoKernel {
            g: g0v.clone(),
            g0: g0v,
            grid,
            decay_certificate: 0.0,
            support_ok: true,
            tail_coefficient: 0.0,
            tail: crate::scattering::TailModel::default(),
            k_max: 0.0,
            x_i,
            margin,
            sign_convention: "robin_plus".into(),
        }
    }

    #[test]
    fn condition_estimate_matches_explicit_inverse() {
        let m = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, -2.0, 0.5, 3.0, 1.0, -1.0, 2.0, 5.0]);
        let inv = m.clone().try_inverse().unwrap();
        let exact = (0..3).map(|j| inv.column(j).lp_norm(1)).fold(0.0, f64::max);
        let est = inverse_norm1_estimate(&m.lu());
        assert!((est - exact).abs() < 1e-12 * exact, "{est} vs {exact}");
    }

    #[test]
    fn zero_kernel_gives_zero() {
        let k = kernel_from(|_| 0.0, 1.0, 64);
        let sol = solve_all(&k).unwrap();
        assert!(sol.diag.iter().all(|a| *a == 0.0));
        let v = recover_potential(&sol).unwrap();
        assert!(v.values.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn rank_one_kernel() {
        let c = 0.7;
        let k = kernel_from(|y| c * (-y).exp(), 1.0, 128);
        let dy = k.dy();
        for ix in [0usize, 10, 64, 120] {
            let row = solve_marchenko_at(&k, ix).unwrap();
            let n = row.t.len();
            let x = row.x;
            // A(x,t) = α e^{−t} with α(1 + c Σ w_j e^{−2 s_j}) = −c e^{−x}
            let sum: f64 = row
                .t
                .iter()
                .enumerate()
                .map(|(j, s)| if n > 1 && (j == 0 || j == n - 1) { 0.5 * dy } else if n == 1 { 0.0 } else { dy } * (-2.0 * s).exp())
                .sum();
            let alpha = -c * (-x).exp() / (1.0 + c * sum);
            for (t, a) in row.t.iter().zip(&row.a) {
                assert!((a - alpha * (-t).exp()).abs() < 1e-12);
            }
            // continuum closed form, trapezoid accuracy
            let upper = row.t[n - 1];
            let cont = -c * (-x).exp() / (1.0 + c * ((-2.0 * x).exp() - (-2.0 * upper).exp()) / 2.0);
            assert!((row.a[0] - cont * (-x).exp()).abs() < 1e-4);
            assert!(row.residual < 1e-12);
        }
    }

    #[test]
    fn born_linearity() {
        let eps = 1e-4;
        let shape = |y: f64| (-(y - 1.0).powi(2)).exp() * if y < 2.0 { 1.0 } else { 0.0 };
        let k = kernel_from(|y| eps * shape(y), 1.0, 64);
        let row = solve_marchenko_at(&k, 8).unwrap();
        for (t, a) in row.t.iter().zip(&row.a) {
            assert!((a + eps * shape(row.x + t)).abs() < 10.0 * eps * eps);
        }
    }

    #[test]
    fn synthetic_diagonal_differentiation() {
        let dx = 1.0 / 200.0;
        let x_grid: Vec<f64> = (0..=220).map(|j| j as f64 * dx).collect();
        let diag: Vec<f64> = x_grid.iter().map(|x| (-x).exp()).collect();
        let sol = MarchenkoSolution {
            v_recovered: vec![0.0; diag.len()],
            condition_numbers: vec![1.0; diag.len()],
            x_grid,
            diag,
            x_i: 1.0,
            support_residual: 0.0,
            asymptotic_constant: 0.0,
        };
        let v = recover_potential(&sol).unwrap();
        for (x, val) in v.grid.iter().zip(&v.values) {
            assert!((val - 2.0 * (-x).exp()).abs() < 1e-4);
        }
    }
}
