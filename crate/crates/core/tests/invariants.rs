use love_res::inversion::recover_shear;
use love_res::io::{read_potential, read_zeros, write_json, write_zeros};
use love_res::jost::JostEvaluator;
use love_res::profile::{calibrate, smooth_bump, ShearProfile};
use love_res::resonances::eigenvalues;
use love_res::scattering::{ladder_holds, norming_constants_checked, scattering_function, sign_ladder, ScatteringFunction};
use love_res::sheet::{quasi_momentum, xi_of_k};
use love_res::{Complex64 as C, ForwardJost, PotentialProfile, ResonanceSet};
use proptest::prelude::*;

fn potential() -> impl Strategy<Value = PotentialProfile> {
    (prop::collection::vec(-20.0..20.0f64, 9), 0.5..2.0f64, -2.0..2.0f64)
        .prop_map(|(v, x_i, h)| PotentialProfile::new(v, x_i, h).unwrap())
}

fn well() -> impl Strategy<Value = PotentialProfile> {
    (prop::collection::vec(-60.0..0.0f64, 9), 0.5..1.5f64, -1.0..3.0f64)
        .prop_map(|(v, x_i, h)| PotentialProfile::new(v, x_i, h).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jost_is_reflection_symmetric(v in potential(), re in -20.0..20.0f64, im in -3.0..3.0f64) {
        let f = ForwardJost::new(&v);
        let k = C::new(re, im);
        let a = f.fh(k).unwrap();
        let b = f.fh(-k.conj()).unwrap();
        prop_assert!((b - a.conj()).norm() <= 1e-10 * a.norm().max(1.0));
    }

    #[test]
    fn wronskian_is_conserved(v in potential(), k in -40.0..40.0f64) {
        let f = ForwardJost::new(&v);
        let k = C::new(k, 0.0);
        for node in [0, 4, 8] {
            let w = f.wronskian_at(k, node).unwrap();
            prop_assert!((w + 2.0 * C::i() * k).norm() < 1e-9 * k.norm().max(1.0));
        }
    }

    #[test]
    fn scattering_is_unimodular(v in potential(), k in 0.05..40.0f64) {
        let s = scattering_function(ForwardJost::new(&v)).unwrap();
        let a = s.s(k).unwrap();
        let b = s.s(-k).unwrap();
        prop_assert!((a.norm() - 1.0).abs() < 1e-10);
        prop_assert!((a * b - 1.0).norm() < 1e-10);
        prop_assert!((b - a.conj()).norm() < 1e-10);
    }

    #[test]
    fn eigenvalues_are_simple_with_consistent_norming(v in well()) {
        let mut ev = eigenvalues(&v, v.h).unwrap();
        for k in &ev {
            prop_assert!(k.re == 0.0 && k.im > 0.0);
        }
        let m = norming_constants_checked(&v, v.h, &ev).unwrap();
        for c in &m {
            prop_assert!(c.ratio > 0.0);
            prop_assert!((c.ratio - c.integral).abs() < 1e-8 * c.ratio);
        }
        ev.sort_by(|a, b| b.im.total_cmp(&a.im));
        let ladder = sign_ladder(&ForwardJost::new(&v), &ev).unwrap();
        prop_assert!(ladder_holds(&ladder));
    }

    #[test]
    fn shear_round_trip(
        amp in -0.6..1.5f64,
        mu_tail in 0.2..5.0f64,
        x_i in 0.5..3.0f64,
        w1 in 0.1..5.0f64,
        dw in 0.1..3.0f64,
    ) {
        let mu = move |x: f64| mu_tail * (1.0 + amp * smooth_bump(x, x_i));
        let profile = ShearProfile::from_fn(mu, mu_tail, x_i, 0.1 * x_i, 220).unwrap();
        let w2 = w1 + dw;
        let v1 = calibrate(&profile, w1, 64).unwrap();
        let v2 = calibrate(&profile, w2, 64).unwrap();
        let rec = recover_shear(&v1, &v2, w1, w2, mu_tail).unwrap();
        for (x, m) in rec.depth().iter().zip(rec.mu()) {
            if *x <= x_i {
                prop_assert!((m - mu(*x)).abs() < 1e-10 * mu_tail, "x = {x}: {m} vs {}", mu(*x));
            }
        }
    }

    #[test]
    fn sheet_map_round_trips(re in -10.0..10.0f64, im in -10.0..10.0f64, omega in 0.1..5.0f64, mu_tail in 0.2..5.0f64) {
        prop_assume!(im.abs() > 1e-3);
        let k = C::new(re, im);
        let p = xi_of_k(k, omega, mu_tail).unwrap();
        prop_assert!(p.xi.re >= 0.0);
        let back = quasi_momentum(p, omega, mu_tail).unwrap();
        prop_assert!((back - k).norm() < 1e-9 * k.norm().max(1.0), "{k} -> {} -> {back}", p.xi);
    }

    #[test]
    fn zero_csv_round_trips(pts in prop::collection::vec((0.1..50.0f64, -8.0..-0.01f64), 0..20), eig in prop::collection::vec(0.1..10.0f64, 0..4)) {
        let mut points: Vec<C> = pts.iter().flat_map(|&(a, b)| [C::new(a, b), C::new(-a, b)]).collect();
        points.extend(eig.iter().map(|&t| C::new(0.0, t)));
        let set = ResonanceSet::from_points(&points, 1e-12);
        let mut buf = Vec::new();
        write_zeros(&mut buf, &set, None).unwrap();
        let back = read_zeros(buf.as_slice(), 1e-12).unwrap();
        prop_assert_eq!(set.points(), back.points());
    }

    #[test]
    fn potential_json_round_trips(v in potential()) {
        let mut buf = Vec::new();
        write_json(&mut buf, &v).unwrap();
        let back = read_potential(buf.as_slice()).unwrap();
        prop_assert_eq!(&v.values, &back.values);
        prop_assert_eq!(v.h, back.h);
        prop_assert_eq!(v.x_i, back.x_i);
    }
}
