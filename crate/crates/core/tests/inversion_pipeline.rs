mod common;

use common::Step;
use love_res::inversion::{invert, scattering_from_zeros, CalibrationConfig, InversionConfig};
use love_res::resonances::{find_zeros, FinderConfig};
use love_res::scattering::ScatteringFunction;
use love_res::{Complex64 as C, Error, ForwardJost, Rect, ResonanceSet};

fn barrier_zeros(r: f64) -> ResonanceSet {
    let f = ForwardJost::new(&Step::barrier().profile(16));
    find_zeros(&f, &Rect::new(-r, r, -r, r).unwrap(), &FinderConfig::default()).unwrap()
}

fn relative_l1(v: &love_res::PotentialProfile, exact: impl Fn(f64) -> f64) -> f64 {
    let num: f64 = v.grid.iter().zip(&v.values).map(|(x, y)| (y - exact(*x)).abs()).sum();
    let den: f64 = v.grid.iter().map(|x| exact(*x).abs()).sum();
    num / den
}

#[test]
fn free_robin_zero_set_gives_zero_potential() {
    let set = ResonanceSet::from_points(&[C::new(0.0, 1.0)], 1e-12);
    // a single zero has nothing to truncate, so the window can be wide
    let inv = invert(&set, 1.0, &InversionConfig::new(200.0)).unwrap();
    let sup = inv.potential.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    eprintln!("sup {sup} h {} m {:?}", inv.potential.h, inv.data.m);
    assert!(sup < 1e-4, "sup |V| = {sup}");
    assert!((inv.potential.h - 1.0).abs() < 1e-3, "h = {}", inv.potential.h);
    assert!((inv.data.m[0] - 0.5).abs() < 1e-8);
}

#[test]
fn inconsistent_eigenvalues_rejected() {
    let set = ResonanceSet::from_points(&[C::new(0.0, 2.0), C::new(0.0, 1.0)], 1e-12);
    let err = scattering_from_zeros(&set, 50.0, 1.0, &CalibrationConfig::default()).unwrap_err();
    eprintln!("{err}");
    assert!(!matches!(err, Error::Asymmetric(_)));
}

#[test]
fn barrier_reconstruction_improves_with_radius() {
    let step = Step::barrier();
    let exact = |x: f64| if x <= 1.0 { step.v0 } else { 0.0 };
    let mut errors = Vec::new();
    for r in [50.0, 100.0] {
        let inv = invert(&barrier_zeros(r), 1.0, &InversionConfig::new(r)).unwrap();
        let s_err = (0..=400)
            .map(|j| {
                let k = r * j as f64 / 400.0 + 1e-3;
                let want = -step.fh(C::new(-k, 0.0)) / step.fh(C::new(k, 0.0));
                (inv.data.s.s(k).unwrap() - want).norm()
            })
            .fold(0.0, f64::max);
        let e = relative_l1(&inv.potential, exact);
        eprintln!("R {r} S {s_err:.2e} V {e:.4} h {:.2e} expl {}", inv.potential.h, inv.diagnostics.explicit_s_deviation);
        assert!(s_err < 1e-3, "R = {r}: S error {s_err}");
        errors.push(e);
    }
    assert!(errors[1] < errors[0], "{errors:?}");
}
