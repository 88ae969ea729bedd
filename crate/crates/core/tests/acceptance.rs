//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{max_pair_distance, Step};
use love_res::inversion::{invert, InversionConfig};
use love_res::jost::JostEvaluator;
use love_res::profile::{calibrate, smooth_bump, ShearProfile};
use love_res::resonances::{eigenvalues, find_zeros, forbidden_domain_xi, levinson_check, FinderConfig};
use love_res::scattering::{
    ladder_holds, norming_constants_checked, sign_ladder, validate_scattering_class, ScatteringData, ValidationConfig,
};
use love_res::{inversion::recover_shear, Complex64 as C, ForwardJost, PotentialProfile, Rect, ResonanceSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn free_robin() -> PotentialProfile {
    PotentialProfile::zero(1.0, 1.0, 16)
}

fn barrier_zeros(r: f64) -> ResonanceSet {
    let f = ForwardJost::new(&Step::barrier().profile(16));
    find_zeros(&f, &Rect::new(-r, r, -r, r).unwrap(), &FinderConfig::default()).unwrap()
}

fn free_robin_exactness() -> Outcome {
    let v = free_robin();
    let f = ForwardJost::new(&v);
    let mut worst = 0.0f64;
    for i in 0..20 {
        for j in 0..20 {
            let k = C::new(-10.0 + 20.0 * i as f64 / 19.0, -10.0 + 20.0 * j as f64 / 19.0);
            let got = f.fh(k).map_err(|e| e.to_string())?;
            worst = worst.max((got - (C::i() * k + 1.0)).norm());
        }
    }
    ensure(worst < 1e-10, format!("max |f - (ik+1)| = {worst:.2e}"))?;
    let ev = eigenvalues(&v, 1.0).map_err(|e| e.to_string())?;
    ensure(ev.len() == 1, format!("{} eigenvalues", ev.len()))?;
    let ev_err = (ev[0] - C::i()).norm();
    ensure(ev_err < 1e-12, format!("eigenvalue error {ev_err:.2e}"))?;
    let m = norming_constants_checked(&v, 1.0, &ev).map_err(|e| e.to_string())?;
    let m_err = (m[0].ratio - 0.5).abs().max((m[0].integral - 0.5).abs());
    ensure(m_err < 1e-10, format!("norming error {m_err:.2e}"))?;
    Ok(format!("grid err {worst:.1e}, eigenvalue err {ev_err:.1e}, m err {m_err:.1e}"))
}

fn barrier_oracle() -> Outcome {
    let step = Step::barrier();
    let f = ForwardJost::new(&step.profile(16));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let k = C::new(rng.gen_range(-30.0..30.0), rng.gen_range(-8.0..8.0));
        let want = step.fh(k);
        let got = f.fh(k).map_err(|e| e.to_string())?;
        worst = worst.max((got - want).norm() / want.norm());
    }
    ensure(worst < 1e-9, format!("relative probe error {worst:.2e}"))?;
    let rect = Rect::new(-30.0, 30.0, -8.0, 0.0).unwrap();
    let found = find_zeros(&f, &rect, &FinderConfig::default()).map_err(|e| e.to_string())?.points();
    let oracle = step.roots((-30.0, 30.0), (-8.0, 0.0), 0.25);
    ensure(found.len() == oracle.len(), format!("{} zeros vs {} oracle roots", found.len(), oracle.len()))?;
    let d = max_pair_distance(&found, &oracle).max(max_pair_distance(&oracle, &found));
    ensure(d < 1e-8, format!("zero mismatch {d:.2e}"))?;
    Ok(format!("probe err {worst:.1e}, {} zeros within {d:.1e}", found.len()))
}

fn wronskian_conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for (step, intervals) in [(Step::barrier(), 16), (Step::three_level_well(), 16)] {
        let f = ForwardJost::new(&step.profile(intervals));
        for _ in 0..100 {
            let k = C::new(rng.gen_range(-50.0..50.0), 0.0);
            for node in [0, intervals / 2] {
                let w = f.wronskian_at(k, node).map_err(|e| e.to_string())?;
                worst = worst.max((w + 2.0 * C::i() * k).norm());
            }
        }
    }
    ensure(worst < 1e-9, format!("max |W + 2ik| = {worst:.2e}"))?;
    Ok(format!("max |W + 2ik| = {worst:.1e}"))
}

fn resonance_free_region(set: &ResonanceSet) -> Outcome {
    let v = Step::barrier().profile(16);
    let mut least = (f64::INFINITY, f64::INFINITY);
    for (omega, mu_tail) in [(1.0, 1.0), (2.0, 0.5)] {
        let rep = forbidden_domain_xi(set, omega, mu_tail, &v, 0.0).map_err(|e| e.to_string())?;
        ensure(!rep.entries.is_empty(), "no zeros mapped")?;
        ensure(rep.violations() == 0, format!("{} violations", rep.violations()))?;
        least = (least.0.min(rep.min_k_c0_slack()), least.1.min(rep.min_xi_c0_slack()));
    }
    Ok(format!("{} zeros, min slack k {:.3}, xi {:.3}", set.len(), least.0, least.1))
}

fn levinson_counting(set: &ResonanceSet) -> Outcome {
    let f = ForwardJost::new(&Step::barrier().profile(16));
    let rep = levinson_check(set, &f, 100.0, 1.0, 0.2).map_err(|e| e.to_string())?;
    ensure((0.9..=1.1).contains(&rep.ratio), format!("ratio {:.4}", rep.ratio))?;
    ensure(rep.outside_sector_fraction < 0.1, format!("sector fraction {:.4}", rep.outside_sector_fraction))?;
    Ok(format!("{} zeros, ratio {:.4}, sector fraction {:.4}", rep.count, rep.ratio, rep.outside_sector_fraction))
}

fn scattering_class() -> Outcome {
    let mut parts = Vec::new();
    for (name, v) in [
        ("free", free_robin()),
        ("barrier", Step::barrier().profile(16)),
        ("well", Step::deep_well().profile(16)),
        ("deep well", Step::three_level_well().profile(16)),
    ] {
        let ev = eigenvalues(&v, v.h).map_err(|e| e.to_string())?;
        let data = ScatteringData::from_jost(ForwardJost::new(&v), ev).map_err(|e| e.to_string())?;
        let rep = validate_scattering_class(&data, &ValidationConfig::for_interval(v.x_i)).map_err(|e| e.to_string())?;
        ensure(rep.condition1 && rep.condition3, format!("{name}: {rep:?}"))?;
        ensure(rep.unimodularity_residual < 1e-8, format!("{name}: unimodularity {:.2e}", rep.unimodularity_residual))?;
        ensure(
            rep.implied_n.round() as i64 == rep.n as i64,
            format!("{name}: implied N {:.4} vs N = {}", rep.implied_n, rep.n),
        )?;
        parts.push(format!("{name} N={} ({:.3})", rep.n, rep.implied_n));
    }
    Ok(parts.join(", "))
}

fn inverse_round_trip(set: &ResonanceSet) -> Outcome {
    let step = Step::barrier();
    let exact = |x: f64| if x <= 1.0 { step.v0 } else { 0.0 };
    let mut errors = Vec::new();
    for r in [50.0, 100.0] {
        let inv = invert(&set.truncated(r), 1.0, &InversionConfig::new(r)).map_err(|e| e.to_string())?;
        let v = &inv.potential;
        let num: f64 = v.grid.iter().zip(&v.values).map(|(x, y)| (y - exact(*x)).abs()).sum();
        let den: f64 = v.grid.iter().map(|x| exact(*x).abs()).sum();
        errors.push(num / den);
    }
    ensure(errors[1] < errors[0], format!("relative L1 {:.4} (R=50) vs {:.4} (R=100)", errors[0], errors[1]))?;
    let single = ResonanceSet::from_points(&[C::i()], 1e-12);
    let inv = invert(&single, 1.0, &InversionConfig::new(200.0)).map_err(|e| e.to_string())?;
    let sup = inv.potential.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    ensure(sup < 1e-4, format!("free Robin sup |V| = {sup:.2e}"))?;
    Ok(format!("L1 {:.4} -> {:.4}, free sup |V| {sup:.1e}", errors[0], errors[1]))
}

fn shear_recovery() -> Outcome {
    let (x_i, mu_tail) = (1.0, 1.0);
    let mu = move |x: f64| mu_tail * (1.0 + 0.5 * smooth_bump(x, x_i));
    let profile = ShearProfile::from_fn(mu, mu_tail, x_i, 0.25, 250).map_err(|e| e.to_string())?;
    let v1 = calibrate(&profile, 1.0, 200).map_err(|e| e.to_string())?;
    let v2 = calibrate(&profile, 2.0, 200).map_err(|e| e.to_string())?;
    let rec = recover_shear(&v1, &v2, 1.0, 2.0, mu_tail).map_err(|e| e.to_string())?;
    let worst = rec
        .depth()
        .iter()
        .zip(rec.mu())
        .filter(|(x, _)| **x <= x_i)
        .map(|(x, m)| (m - mu(*x)).abs())
        .fold(0.0, f64::max);
    ensure(worst < 1e-10, format!("max pointwise error {worst:.2e}"))?;
    Ok(format!("max pointwise error {worst:.1e}"))
}

fn symmetry_and_simplicity(barrier: &ResonanceSet) -> Outcome {
    ensure(barrier.unmatched_reflection(1e-9).is_none(), "barrier set not reflection closed")?;
    let v = Step::three_level_well().profile(16);
    let f = ForwardJost::new(&v);
    let set = find_zeros(&f, &Rect::new(-20.0, 20.0, -8.0, 10.0).unwrap(), &FinderConfig::default())
        .map_err(|e| e.to_string())?;
    ensure(set.unmatched_reflection(1e-9).is_none(), "well set not reflection closed")?;
    let mut ev = set.eigenvalue_points();
    ensure(ev.len() == 3, format!("{} eigenvalues", ev.len()))?;
    let off_axis = set.points().iter().filter(|k| k.im > 0.0).map(|k| k.re.abs()).fold(0.0, f64::max);
    ensure(off_axis < 1e-10, format!("upper zero off axis by {off_axis:.2e}"))?;
    let min_dk = set
        .points()
        .iter()
        .map(|k| f.fh_with_dk(*k).map(|(_, d)| d.norm()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    ensure(min_dk > 1e-3, format!("min |f'| = {min_dk:.2e}"))?;
    ev.sort_by(|a, b| b.im.total_cmp(&a.im));
    let ladder = sign_ladder(&f, &ev).map_err(|e| e.to_string())?;
    ensure(ladder_holds(&ladder), format!("ladder fails: {ladder:?}"))?;
    Ok(format!("{} zeros, 3 eigenvalues, min |f'| {min_dk:.2}, ladder holds", set.len()))
}

fn run(id: usize, name: &str, budget: Duration, check: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let elapsed = start.elapsed();
    let outcome = outcome.and_then(|msg| {
        if elapsed <= budget {
            Ok(msg)
        } else {
            Err(format!("{msg}; over budget {:.0?}", budget))
        }
    });
    let (tag, msg) = match &outcome {
        Ok(m) => ("PASS", m),
        Err(m) => ("FAIL", m),
    };
    println!("criterion {id} {name}: {tag} ({:.2?}) {msg}", elapsed);
    outcome.is_ok()
}

fn main() {
    let hour = Duration::from_secs(3600);
    let mut ok = Vec::new();
    ok.push(run(1, "free Robin exactness", Duration::from_secs(1), free_robin_exactness));
    ok.push(run(2, "barrier oracle", Duration::from_secs(30), barrier_oracle));
    ok.push(run(3, "Wronskian conservation", hour, wronskian_conservation));

    let start = Instant::now();
    let zeros = catch_unwind(|| barrier_zeros(100.0)).ok();
    let search = start.elapsed();
    let with_zeros = |id, name, budget: Duration, f: &dyn Fn(&ResonanceSet) -> Outcome| match &zeros {
        Some(z) => run(id, name, budget.saturating_sub(search), || f(z)),
        None => run(id, name, budget, || Err("barrier zero search failed".into())),
    };
    ok.push(with_zeros(4, "resonance-free region", hour, &resonance_free_region));
    ok.push(with_zeros(5, "Levinson counting", Duration::from_secs(300), &levinson_counting));
    ok.push(run(6, "scattering class", hour, scattering_class));
    ok.push(with_zeros(7, "inverse round trip", Duration::from_secs(600), &inverse_round_trip));
    ok.push(run(8, "shear recovery", Duration::from_secs(1), shear_recovery));
    ok.push(with_zeros(9, "symmetry and simplicity", hour, &symmetry_and_simplicity));

    let passed = ok.iter().filter(|b| **b).count();
    println!("acceptance: {passed}/{} criteria passed", ok.len());
    if passed != ok.len() {
        std::process::exit(1);
    }
}
