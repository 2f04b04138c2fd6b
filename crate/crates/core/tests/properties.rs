mod common;

use acbm::classes::{ClassSet, MEMBER_THRESHOLD, REASSEMBLY_TOL};
use acbm::conformal::{g0_random, invariance_trial, ConformalPointData};
use acbm::connection::{
    hayden_q_from_t, natural_connection_check, phi_canonical_identity_check, q_canonical,
    t_canonical,
};
use acbm::fundamental::{associated_forms, check_admissible};
use acbm::nijenhuis::{nijenhuis_from_f, nijenhuis_identities};
use acbm::structure::{random_basis_change, Structure};
use acbm::tensor::DEFAULT_TOL;
use common::*;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 24,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn random_structures_satisfy_axioms(n in 1usize..=3, seed in any::<u64>()) {
        let s = Structure::random(n, seed).unwrap();
        let r = s.validate(DEFAULT_TOL);
        prop_assert!(r.is_ok(), "{r}");
    }

    #[test]
    fn basis_change_keeps_axioms(n in 1usize..=2, seed in any::<u64>()) {
        let s = Structure::canonical(n).unwrap();
        let p = random_basis_change(s.d(), &mut rng(seed));
        prop_assert!(s.change_basis(&p).unwrap().validate(DEFAULT_TOL).is_ok());
    }

    #[test]
    fn random_admissible_is_admissible_and_reassembles(n in 1usize..=2, seed in any::<u64>()) {
        let (s, spaces) = setup(n, seed);
        let f = spaces.random_admissible(&mut rng(seed ^ 1));
        prop_assert!(check_admissible(f.tensor(), &s, 1e-9).is_ok());
        let report = spaces.classify(&f, MEMBER_THRESHOLD).unwrap();
        prop_assert!(report.reassembly_residual < REASSEMBLY_TOL);
    }

    #[test]
    fn decomposition_is_linear(n in 1usize..=2, seed in any::<u64>(), k in -3.0f64..3.0) {
        let (_, spaces) = setup(n, seed);
        let mut r = rng(seed);
        let a = spaces.random_admissible(&mut r);
        let b = spaces.random_admissible(&mut r);
        let pa = spaces.decompose(&a).unwrap();
        let pb = spaces.decompose(&b).unwrap();
        let pab = spaces.decompose(&a.add(&b.scale(k))).unwrap();
        for i in 0..11 {
            let expect = pa[i].add(&pb[i].scale(k));
            prop_assert!(rel(pab[i].tensor(), expect.tensor()) < 1e-9);
        }
    }

    #[test]
    fn nijenhuis_identities_hold(n in 1usize..=2, seed in any::<u64>()) {
        let (s, spaces) = setup(n, seed);
        let f = spaces.random_admissible(&mut rng(seed));
        let nij = nijenhuis_from_f(&f, &s);
        prop_assert!(nijenhuis_identities(&nij, &s, 1e-8).is_ok());
        prop_assert!(rel(&nij, &nijenhuis_oracle(&f, &s)) < 1e-10);
    }

    #[test]
    fn canonical_connection_is_natural(n in 1usize..=2, seed in any::<u64>()) {
        let (s, spaces) = setup(n, seed);
        let f = spaces.random_admissible(&mut rng(seed));
        let q = q_canonical(&f, &s);
        let t = t_canonical(&f, &s);
        prop_assert!(natural_connection_check(&q, &f, &s, DEFAULT_TOL).is_ok());
        prop_assert!(phi_canonical_identity_check(&t, &s) < DEFAULT_TOL);
        prop_assert!(rel(&hayden_q_from_t(&t), &q) < 1e-10);
    }

    #[test]
    fn associated_form_identities(n in 1usize..=2, seed in any::<u64>()) {
        let (s, spaces) = setup(n, seed);
        let f = spaces.random_admissible(&mut rng(seed));
        prop_assert!(associated_forms(&f, &s).check(&s, 1e-9).is_ok());
    }

    #[test]
    fn n_phiphi_is_invariant_under_g(n in 1usize..=2, seed in any::<u64>()) {
        let (s, spaces) = setup(n, seed);
        let mut r = rng(seed);
        let f = spaces.random_admissible(&mut r);
        let c = ConformalPointData::random(s.d(), &mut r);
        let trial = invariance_trial(&f, &s, &c, 1e-8).unwrap();
        prop_assert!(trial.structure_residual < 1e-8);
        prop_assert!(trial.n_residual < 1e-8);
    }

    #[test]
    fn torsion_and_forms_are_invariant_under_g0(n in 1usize..=2, seed in any::<u64>()) {
        let (s, spaces) = setup(n, seed);
        let mut r = rng(seed);
        let f = spaces.random_admissible(&mut r);
        let c = g0_random(&s, &mut r);
        let trial = invariance_trial(&f, &s, &c, 1e-8).unwrap();
        prop_assert!(trial.in_g0);
        prop_assert!(trial.t_residual < 1e-8);
        prop_assert!(trial.forms_residual < 1e-8);
    }

    #[test]
    fn u0_classes_stay_in_u0_under_g(n in 1usize..=2, seed in any::<u64>()) {
        let (s, spaces) = setup(n, seed);
        let mut r = rng(seed);
        let f = spaces.random_in(ClassSet::u0(), &mut r);
        let c = ConformalPointData::random(s.d(), &mut r);
        let image = acbm::conformal::transform(&f, &s, &c).unwrap();
        let v = acbm::nijenhuis::u0_predicate(&image.f, &image.structure, 1e-8);
        prop_assert!(v.in_u0, "{}", v.residual);
    }
}
