mod common;

use common::{max_pair_distance, Step};
use love_res::jost::JostEvaluator;
use love_res::resonances::{count_zeros, eigenvalues, find_zeros, FinderConfig, WindingConfig};
use love_res::{Complex64 as C, ForwardJost, Rect};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn barrier_matches_closed_form_at_random_probes() {
    let step = Step::barrier();
    let v = step.profile(16);
    let f = ForwardJost::new(&v);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let k = C::new(rng.gen_range(-30.0..30.0), rng.gen_range(-8.0..8.0));
        let (fh, dk) = f.fh_with_dk(k).unwrap();
        let (want, want_dk) = (step.fh(k), step.fh_dk(k));
        assert!((fh - want).norm() <= 1e-9 * want.norm(), "k = {k}: {fh} vs {want}");
        assert!((dk - want_dk).norm() <= 1e-8 * want_dk.norm().max(1.0), "k = {k}: {dk} vs {want_dk}");
    }
}

#[test]
fn barrier_count_in_rectangle() {
    let step = Step::barrier();
    let f = ForwardJost::new(&step.profile(16));
    let rect = Rect::new(0.0, 20.0, -6.0, 0.0).unwrap();
    let oracle = step.roots((0.0, 20.0), (-6.0, 0.0), 0.25);
    assert!(!oracle.is_empty());
    assert_eq!(count_zeros(&f, &rect, &WindingConfig::default(), 6).unwrap(), oracle.len());
}

#[test]
fn barrier_zeros_match_oracle() {
    let step = Step::barrier();
    let f = ForwardJost::new(&step.profile(16));
    let rect = Rect::new(-30.0, 30.0, -8.0, 0.0).unwrap();
    let set = find_zeros(&f, &rect, &FinderConfig::default()).unwrap();
    let oracle = step.roots((-30.0, 30.0), (-8.0, 0.0), 0.25);
    let found = set.points();
    assert_eq!(found.len(), oracle.len());
    assert!(max_pair_distance(&found, &oracle) < 1e-8);
    assert!(max_pair_distance(&oracle, &found) < 1e-8);
    assert!(set.unmatched_reflection(1e-9).is_none());
}

#[test]
fn deep_well_eigenvalue_count() {
    let step = Step::deep_well();
    let e = eigenvalues(&step.profile(16), 0.0).unwrap();
    let oracle = step.eigenvalues();
    assert_eq!(e.len(), oracle.len());
    assert_eq!(e.len(), 2);
    assert!(max_pair_distance(&e, &oracle) < 1e-9);

    let deeper = Step::three_level_well();
    let e = eigenvalues(&deeper.profile(16), 0.0).unwrap();
    assert_eq!(e.len(), 3);
    assert!(max_pair_distance(&e, &deeper.eigenvalues()) < 1e-9);
}

