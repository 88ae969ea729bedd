//! File formats: profile and potential JSON, zero-set CSV, kernel and
//! solution dumps, and JSON manifests.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marchenko::MarchenkoSolution;
use crate::profile::{PotentialProfile, ShearProfile};
use crate::resonances::{ResonanceSet, Zero};
use crate::scattering::{ClassReport, MarchenkoKernel, ScatteringData};
use crate::sheet::xi_of_k;

type C = Complex64;

/// Shear profile input document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShearProfileDoc {
    pub depth_grid: Vec<f64>,
    pub mu: Vec<f64>,
    pub mu_tail: f64,
    #[serde(rename = "x_I")]
    pub x_i: f64,
}

impl ShearProfileDoc {
    pub fn into_profile(self) -> Result<ShearProfile<f64>> {
        ShearProfile::new(self.depth_grid, self.mu, self.mu_tail, self.x_i)
    }

    pub fn from_profile(p: &ShearProfile<f64>) -> Self {
        Self { depth_grid: p.depth().to_vec(), mu: p.mu().to_vec(), mu_tail: p.mu_tail(), x_i: p.x_i() }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(r: impl Read) -> Result<T> {
    Ok(serde_json::from_reader(r)?)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(mut w: impl Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn read_shear_profile(r: impl Read) -> Result<ShearProfile<f64>> {
    read_json::<ShearProfileDoc>(r)?.into_profile()
}

pub fn read_potential(r: impl Read) -> Result<PotentialProfile<f64>> {
    let p: PotentialProfile<f64> = read_json(r)?;
    // rebuild to validate and to regenerate the grid
    let mut out = PotentialProfile::new(p.values, p.x_i, p.h)?;
    out.omega = p.omega;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroKind {
    Eigenvalue,
    Resonance,
}

/// One row of the zero-set CSV. The ξ columns are empty when no frequency is known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRow {
    pub re_k: f64,
    pub im_k: f64,
    pub re_xi: Option<f64>,
    pub im_xi: Option<f64>,
    pub kind: ZeroKind,
    pub residual: f64,
    pub multiplicity: usize,
}

/// Frequency and tail modulus for the ξ columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dispersion {
    pub omega: f64,
    pub mu_tail: f64,
}

pub fn zero_rows(set: &ResonanceSet, dispersion: Option<Dispersion>) -> Vec<ZeroRow> {
    set.all()
        .map(|z| {
            let xi = dispersion.and_then(|d| xi_of_k(z.k, d.omega, d.mu_tail).ok()).map(|p| p.xi);
            ZeroRow {
                re_k: z.k.re,
                im_k: z.k.im,
                re_xi: xi.map(|x| x.re),
                im_xi: xi.map(|x| x.im),
                kind: if z.k.im > 0.0 { ZeroKind::Eigenvalue } else { ZeroKind::Resonance },
                residual: z.residual,
                multiplicity: z.multiplicity,
            }
        })
        .collect()
}

pub fn write_zeros(w: impl Write, set: &ResonanceSet, dispersion: Option<Dispersion>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in zero_rows(set, dispersion) {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a zero-set CSV; rows are classified by `Im k`, the `kind` column is checked.
pub fn read_zeros(r: impl Read, tol: f64) -> Result<ResonanceSet> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut zeros = Vec::new();
    for row in rdr.deserialize() {
        let row: ZeroRow = row?;
        let k = C::new(row.re_k, row.im_k);
        let kind = if k.im > 0.0 { ZeroKind::Eigenvalue } else { ZeroKind::Resonance };
        if kind != row.kind {
            return Err(Error::Domain(format!("zero {k} is labelled {:?}", row.kind)));
        }
        if row.multiplicity == 0 {
            return Err(Error::Domain(format!("zero {k} has multiplicity 0")));
        }
        for _ in 0..row.multiplicity {
            zeros.push(Zero { residual: row.residual, ..Zero::simple(k) });
        }
    }
    Ok(ResonanceSet::from_zeros(zeros, None, tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelRow {
    pub y: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "G0")]
    pub g0: f64,
}

pub fn write_kernel(w: impl Write, kernel: &MarchenkoKernel) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for ((y, g), g0) in kernel.grid.iter().zip(&kernel.g).zip(&kernel.g0) {
        out.serialize(KernelRow { y: *y, g: *g, g0: *g0 })?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionRow {
    pub x: f64,
    #[serde(rename = "A_diag")]
    pub a_diag: f64,
    #[serde(rename = "V_recovered")]
    pub v_recovered: f64,
    pub cond: f64,
}

pub fn write_solution(w: impl Write, sol: &MarchenkoSolution) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for i in 0..sol.x_grid.len() {
        out.serialize(SolutionRow {
            x: sol.x_grid[i],
            a_diag: sol.diag[i],
            v_recovered: sol.v_recovered[i],
            cond: sol.condition_numbers[i],
        })?;
    }
    out.flush()?;
    Ok(())
}

/// Scattering data summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatteringManifest<'a> {
    pub k_j: &'a [C],
    pub m_j: &'a [f64],
    #[serde(rename = "N")]
    pub n: usize,
    pub class_report: Option<&'a ClassReport>,
    pub sign_convention: &'a str,
}

impl<'a> ScatteringManifest<'a> {
    pub fn new<S>(data: &'a ScatteringData<S>, report: Option<&'a ClassReport>, kernel: Option<&'a MarchenkoKernel>) -> Self {
        Self {
            k_j: &data.k_bound,
            m_j: &data.m,
            n: data.k_bound.len(),
            class_report: report,
            sign_convention: kernel.map_or("robin_plus", |k| k.sign_convention.as_str()),
        }
    }
}
