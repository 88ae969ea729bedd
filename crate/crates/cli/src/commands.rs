use std::path::{Path, PathBuf};

use love_res::inversion::{invert, recover_shear, InversionConfig};
use love_res::io::{self, Dispersion, ScatteringManifest, ShearProfileDoc};
use love_res::profile::calibrate;
use love_res::resonances::{
    c0_constant, eigenvalues, find_zeros, forbidden_domain_xi, levinson_ratio, FinderConfig, LevinsonReport,
};
use love_res::scattering::{
    build_g0, ladder_holds, sign_ladder, validate_scattering_class, ClassReport, KernelConfig, LadderEntry,
    ScatteringData, ValidationConfig,
};
use love_res::{Complex64 as C, ForwardJost, PotentialProfile, Rect, ResonanceSet, Stage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{Command, Region};
use crate::output::Artifacts;
use crate::{CliError, Manifest, RunConfig};

pub fn dispatch(cfg: &RunConfig, base: &Path) -> Result<Manifest, CliError> {
    let out = cfg.out.as_ref().expect("validated");
    let mut art = Artifacts::new(out)?;
    let verdict = match cfg.command() {
        Command::Forward => forward(cfg, base, &mut art, true),
        Command::Resonances => forward(cfg, base, &mut art, false),
        Command::Invert => inverse(cfg, base, &mut art),
        Command::RecoverMu => recover_mu(cfg, base, &mut art),
        Command::Check => check(cfg, base, &mut art),
    };
    // a failed check still leaves its report and manifest behind
    match verdict {
        Ok(()) => art.finish(cfg),
        Err(e @ CliError::Class(_)) => {
            art.finish(cfg)?;
            Err(e)
        }
        Err(e) => Err(e),
    }
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn open(base: &Path, p: &Path) -> Result<std::fs::File, CliError> {
    let path = resolve(base, p);
    std::fs::File::open(&path).map_err(|e| CliError::Config(format!("cannot open {}: {e}", path.display())))
}

fn need<T: Copy>(v: Option<T>, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Config(format!("{what} is required for this command")))
}

/// Potential from `inputs.profile` (calibrated at `omega`) or `inputs.potential`,
/// plus the dispersion data for ξ when known.
fn load_potential(
    cfg: &RunConfig,
    base: &Path,
    art: &mut Artifacts,
) -> Result<(PotentialProfile, Option<Dispersion>), CliError> {
    if let Some(p) = &cfg.inputs.profile {
        let profile = io::read_shear_profile(open(base, p)?)?;
        let omega = need(cfg.omega, "omega")?;
        let v = calibrate(&profile, omega, cfg.quadrature.intervals).map_err(|e| e.at(Stage::Profile))?;
        art.json("potential.json", &v)?;
        return Ok((v, Some(Dispersion { omega, mu_tail: profile.mu_tail() })));
    }
    if let Some(p) = &cfg.inputs.potential {
        let v = io::read_potential(open(base, p)?)?;
        let omega = cfg.omega.or(v.omega);
        let dispersion = omega.zip(cfg.mu_tail).map(|(omega, mu_tail)| Dispersion { omega, mu_tail });
        return Ok((v, dispersion));
    }
    Err(CliError::Config("inputs.profile or inputs.potential is required".into()))
}

fn rect(r: Region) -> Result<Rect, CliError> {
    Ok(Rect::new(r.re_min, r.re_max, r.im_min, r.im_max)?)
}

/// Half-width of the largest origin-centred square inside the region.
fn inner_square(r: Region) -> Option<f64> {
    let s = r.re_max.min(-r.re_min).min(r.im_max).min(-r.im_min);
    (s > 0.0).then_some(s)
}

#[derive(Serialize)]
struct SlackSummary {
    c0: f64,
    c1: Option<f64>,
    min_k_c0_slack: f64,
    min_xi_c0_slack: Option<f64>,
    violations: usize,
    asymptotic_deviation: Option<f64>,
}

#[derive(Serialize)]
struct ResonanceManifest<'a> {
    search_region: Rect,
    tol: f64,
    eigenvalues: usize,
    resonances: usize,
    unresolved: &'a [Rect],
    unmatched_reflection: Option<C>,
    slack: SlackSummary,
    counting: Option<LevinsonReport>,
}

fn slack_summary(set: &ResonanceSet, v: &PotentialProfile, dispersion: Option<Dispersion>) -> Result<SlackSummary, CliError> {
    if let Some(d) = dispersion {
        let rep = forbidden_domain_xi(set, d.omega, d.mu_tail, v, v.h)?;
        return Ok(SlackSummary {
            c0: rep.c0,
            c1: rep.c1,
            min_k_c0_slack: rep.min_k_c0_slack(),
            min_xi_c0_slack: Some(rep.min_xi_c0_slack()),
            violations: rep.violations(),
            asymptotic_deviation: rep.asymptotic_deviation,
        });
    }
    let c0 = c0_constant(v);
    let slacks: Vec<f64> =
        set.points().iter().map(|k| c0 * (2.0 * k.im.abs() * v.x_i).exp() - k.norm()).collect();
    Ok(SlackSummary {
        c0,
        c1: None,
        min_k_c0_slack: slacks.iter().copied().fold(f64::INFINITY, f64::min),
        min_xi_c0_slack: None,
        violations: slacks.iter().filter(|s| **s < 0.0).count(),
        asymptotic_deviation: None,
    })
}

fn zeros_of(cfg: &RunConfig, f: &ForwardJost) -> Result<(ResonanceSet, Rect), CliError> {
    let region = rect(cfg.region())?;
    let finder = FinderConfig { tol: cfg.tol, ..FinderConfig::default() };
    let set = find_zeros(f, &region, &finder).map_err(|e| e.at(Stage::Resonances))?;
    Ok((set, region))
}

fn forward(cfg: &RunConfig, base: &Path, art: &mut Artifacts, scattering: bool) -> Result<(), CliError> {
    let (v, dispersion) = load_potential(cfg, base, art)?;
    let f = ForwardJost::new(&v);
    let (set, region) = zeros_of(cfg, &f)?;
    let mut csv = Vec::new();
    io::write_zeros(&mut csv, &set, dispersion)?;
    art.write("resonances.csv", csv)?;
    let manifest = ResonanceManifest {
        search_region: region,
        tol: cfg.tol,
        eigenvalues: set.eigenvalues.len(),
        resonances: set.resonances.len(),
        unresolved: &set.unresolved,
        unmatched_reflection: set.unmatched_reflection(cfg.tol.sqrt()),
        slack: slack_summary(&set, &v, dispersion)?,
        counting: inner_square(cfg.region()).map(|r| levinson_ratio(&set, r, v.x_i, cfg.sector_delta)),
    };
    art.json("resonances_manifest.json", &manifest)?;
    if !scattering {
        return Ok(());
    }
    let ev = eigenvalues(&v, v.h).map_err(|e| e.at(Stage::Resonances))?;
    let data = ScatteringData::from_jost(&f, ev).map_err(|e| e.at(Stage::Scattering))?;
    let report = validate_scattering_class(&data, &ValidationConfig::for_interval(v.x_i))
        .map_err(|e| e.at(Stage::Scattering))?;
    let mut kcfg = KernelConfig::for_interval(v.x_i);
    kcfg.dy = v.x_i / cfg.quadrature.steps_per_unit as f64;
    kcfg.dk = cfg.quadrature.dk / v.x_i;
    let kernel = build_g0(&data, &kcfg).map_err(|e| e.at(Stage::Scattering))?;
    let mut csv = Vec::new();
    io::write_kernel(&mut csv, &kernel)?;
    art.write("kernel.csv", csv)?;
    art.json("scattering.json", &ScatteringManifest::new(&data, Some(&report), Some(&kernel)))?;
    Ok(())
}

fn inverse(cfg: &RunConfig, base: &Path, art: &mut Artifacts) -> Result<(), CliError> {
    let zeros_path = cfg.inputs.zeros.as_ref().ok_or_else(|| CliError::Config("inputs.zeros is required".into()))?;
    let set = io::read_zeros(open(base, zeros_path)?, cfg.tol)?;
    let x_i = need(cfg.x_i, "x_i")?;
    let mut icfg = InversionConfig::new(cfg.radius);
    icfg.steps_per_unit = cfg.quadrature.steps_per_unit;
    icfg.dk = cfg.quadrature.dk;
    let inv = invert(&set, x_i, &icfg)?;
    art.json("potential.json", &inv.potential)?;
    art.json("diagnostics.json", &inv.diagnostics)?;
    art.json(
        "scattering.json",
        &ScatteringManifest::new(&inv.data, Some(&inv.diagnostics.class_report), Some(&inv.kernel)),
    )?;
    let mut csv = Vec::new();
    io::write_kernel(&mut csv, &inv.kernel)?;
    art.write("kernel.csv", csv)?;
    let mut csv = Vec::new();
    io::write_solution(&mut csv, &inv.solution)?;
    art.write("solution.csv", csv)?;
    Ok(())
}

fn recover_mu(cfg: &RunConfig, base: &Path, art: &mut Artifacts) -> Result<(), CliError> {
    let p1 = cfg.inputs.potential.as_ref().ok_or_else(|| CliError::Config("inputs.potential is required".into()))?;
    let p2 = cfg.inputs.potential2.as_ref().ok_or_else(|| CliError::Config("inputs.potential2 is required".into()))?;
    let v1 = io::read_potential(open(base, p1)?)?;
    let v2 = io::read_potential(open(base, p2)?)?;
    let omega1 = need(cfg.omega.or(v1.omega), "omega")?;
    let omega2 = need(cfg.omega2.or(v2.omega), "omega2")?;
    let mu_tail = need(cfg.mu_tail, "mu_tail")?;
    let mu = recover_shear(&v1, &v2, omega1, omega2, mu_tail).map_err(|e| e.at(Stage::Recovery))?;
    art.json("shear_profile.json", &ShearProfileDoc::from_profile(&mu))?;
    Ok(())
}

#[derive(Serialize)]
struct CheckReport {
    seed: u64,
    probes: usize,
    /// Largest `|W(f(·,k), f(·,−k)) + 2ik|` at `x = 0` and the middle node.
    wronskian_residual: f64,
    zero_count: usize,
    unmatched_reflection: Option<C>,
    eigenvalue_axis_deviation: f64,
    eigenvalues: Vec<C>,
    ladder: Vec<LadderEntry>,
    ladder_holds: bool,
    class_report: ClassReport,
    slack: SlackSummary,
    passed: bool,
}

fn check(cfg: &RunConfig, base: &Path, art: &mut Artifacts) -> Result<(), CliError> {
    let (v, dispersion) = load_potential(cfg, base, art)?;
    let f = ForwardJost::new(&v);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let kmax = 20.0 / v.x_i;
    let mid = v.intervals() / 2;
    let mut wronskian_residual = 0.0f64;
    for _ in 0..cfg.probes {
        let k: f64 = rng.gen_range(-kmax..kmax);
        let want = C::new(0.0, -2.0 * k);
        for node in [0, mid] {
            let w = f.wronskian_at(C::new(k, 0.0), node).map_err(|e| e.at(Stage::Jost))?;
            wronskian_residual = wronskian_residual.max((w - want).norm());
        }
    }
    let (set, _) = zeros_of(cfg, &f)?;
    let ev = eigenvalues(&v, v.h).map_err(|e| e.at(Stage::Resonances))?;
    let ladder = sign_ladder(&f, &ev)?;
    let data = ScatteringData::from_jost(&f, ev.clone()).map_err(|e| e.at(Stage::Scattering))?;
    let class_report = validate_scattering_class(&data, &ValidationConfig::for_interval(v.x_i))
        .map_err(|e| e.at(Stage::Scattering))?;
    let unmatched_reflection = set.unmatched_reflection(cfg.tol.sqrt());
    let holds = ladder_holds(&ladder);
    let passed = class_report.passes() && holds && unmatched_reflection.is_none() && wronskian_residual < 1e-9;
    let report = CheckReport {
        seed: cfg.seed,
        probes: cfg.probes,
        wronskian_residual,
        zero_count: set.len(),
        unmatched_reflection,
        eigenvalue_axis_deviation: set.eigenvalue_axis_deviation(),
        eigenvalues: ev,
        ladder,
        ladder_holds: holds,
        class_report,
        slack: slack_summary(&set, &v, dispersion)?,
        passed,
    };
    art.json("check.json", &report)?;
    if !passed {
        return Err(CliError::Class("one or more checks failed, see check.json".into()));
    }
    Ok(())
}
