mod common;

use acbm::classes::ClassSet;
use acbm::conformal::*;
use acbm::connection::{q0_phib, q_canonical, t_canonical};
use acbm::fundamental::FTensor;
use acbm::nijenhuis::{nijenhuis_from_f, nijenhuis_phiphi};
use common::*;

const TOL: f64 = 1e-10;

fn cases() -> Vec<(acbm::structure::Structure, FTensor, ConformalPointData)> {
    let mut out = Vec::new();
    for n in 1..=2 {
        for seed in 0..6 {
            let (s, spaces) = setup(n, 100 + seed);
            let mut r = rng(seed);
            let f = spaces.random_admissible(&mut r);
            let c = if seed % 2 == 0 {
                ConformalPointData::random(s.d(), &mut r)
            } else {
                g0_random(&s, &mut r)
            };
            out.push((s, f, c));
        }
    }
    out
}

#[test]
fn nijenhuis_matches_definition() {
    for (s, f, _) in cases() {
        assert!(rel(&nijenhuis_from_f(&f, &s), &nijenhuis_oracle(&f, &s)) < TOL);
    }
}

#[test]
fn levi_civita_law_matches_koszul() {
    for (s, f, c) in cases() {
        let oracle = lower(&koszul_difference(&f, &s, &c), &s);
        let r = rel(&levi_civita_difference(&f, &s, &c), &oracle);
        assert!(r < TOL, "n={} residual {r:e}", s.n());
    }
}

#[test]
fn fbar_law_matches_oracle() {
    for (s, f, c) in cases() {
        let fbar = transform_f(&f, &s, &c).unwrap();
        assert!(rel(fbar.tensor(), &fbar_oracle(&f, &s, &c)) < TOL);
    }
}

#[test]
fn n_phiphi_law_matches_oracle() {
    for (s, f, c) in cases() {
        let sbar = transform_structure(&s, &c).unwrap();
        let fbar = FTensor::new(fbar_oracle(&f, &s, &c), &sbar, 1e-8).unwrap();
        let oracle = nijenhuis_phiphi(&nijenhuis_oracle(&fbar, &sbar), &sbar);
        assert!(rel(&transform_n_phiphi(&f, &s, &c), &oracle) < TOL);
    }
}

#[test]
fn phib_law_matches_oracle() {
    for (s, f, c) in cases() {
        let oracle = connection_difference_oracle(&f, &s, &c, q0_phib);
        let r = rel(&phib_difference(&f, &s, &c).raise_last(s.g()), &oracle);
        assert!(r < TOL, "residual {r:e}");
    }
}

#[test]
fn canonical_law_matches_oracle() {
    for (s, f, c) in cases() {
        let oracle = connection_difference_oracle(&f, &s, &c, q_canonical);
        assert!(rel(&canonical_difference(&s, &c), &oracle) < TOL);
    }
}

#[test]
fn short_canonical_law_on_g0() {
    for (s, f, _) in cases() {
        let c = g0_generator(&s, 11);
        let oracle = connection_difference_oracle(&f, &s, &c, q_canonical);
        assert!(rel(&canonical_difference_g0(&s, &c), &oracle) < TOL);
        assert!(
            rel(
                &canonical_difference_g0(&s, &c),
                &canonical_difference(&s, &c)
            ) < TOL
        );
    }
}

#[test]
fn torsion_law_matches_oracle() {
    for (s, f, c) in cases() {
        let sbar = transform_structure(&s, &c).unwrap();
        let fbar = FTensor::new(fbar_oracle(&f, &s, &c), &sbar, 1e-8).unwrap();
        let oracle = t_canonical(&fbar, &sbar).raise_last(sbar.g());
        assert!(rel(&transform_torsion(&t_canonical(&f, &s), &s, &c), &oracle) < TOL);
    }
}

#[test]
fn identity_element_changes_nothing() {
    for (s, f, _) in cases() {
        let c = ConformalPointData::identity(s.d());
        let image = transform(&f, &s, &c).unwrap();
        assert!(rel(image.f.tensor(), f.tensor()) < 1e-14);
        assert!(levi_civita_difference(&f, &s, &c).max_abs() < 1e-14);
        assert!(canonical_difference(&s, &c).max_abs() < 1e-14);
    }
}

#[test]
fn group_law_is_pointwise_addition() {
    for (s, f, _) in cases() {
        let mut r = rng(5);
        let c1 = ConformalPointData::random(s.d(), &mut r);
        let c2 = ConformalPointData::random(s.d(), &mut r);
        let s1 = transform_structure(&s, &c1).unwrap();
        let f1 = transform_f(&f, &s, &c1).unwrap();
        let f12 = transform_f(&f1, &s1, &c2).unwrap();
        let direct = transform_f(&f, &s, &c1.compose(&c2)).unwrap();
        assert!(rel(f12.tensor(), direct.tensor()) < TOL);

        let back = transform_f(&f1, &s1, &c1.inverse()).unwrap();
        assert!(rel(back.tensor(), f.tensor()) < TOL);
        let s_back = transform_structure(&s1, &c1.inverse()).unwrap();
        assert!((s_back.g().matrix() - s.g().matrix()).amax() < TOL);
    }
}

#[test]
fn f0_is_preserved_by_g0_but_not_by_g() {
    let (s, _) = setup(2, 3);
    let f = FTensor::zero(&s);
    let c0 = g0_generator(&s, 1);
    let t = invariance_trial(&f, &s, &c0, 1e-8).unwrap();
    assert_eq!(t.class_after, ClassSet::F0);
    assert!(t.ok());
    let c = ConformalPointData::random(s.d(), &mut rng(2));
    let t = invariance_trial(&f, &s, &c, 1e-8).unwrap();
    assert!(!t.in_g0);
    assert!(!t.class_after.is_f0());
}

#[test]
fn generator_lands_in_g0_and_eta_shift_does_not() {
    let (s, _) = setup(2, 4);
    for seed in 0..10 {
        assert!(g0_predicate(&g0_generator(&s, seed), &s, 1e-12).is_ok());
    }
    let mut c = ConformalPointData::identity(s.d());
    c.du = s.eta().clone();
    assert!(!g0_predicate(&c, &s, 1e-3).is_ok());
}
