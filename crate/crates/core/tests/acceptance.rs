//! One line per acceptance criterion. Run with `--nocapture` to see them.

mod common;

use std::f64::consts::PI;

use acbm::classes::{f4_formula, f5_formula, BasicClass, ClassSet, ClassSpaces, MEMBER_THRESHOLD};
use acbm::conformal::{g0_random, invariance_trial, transform_f, ConformalPointData};
use acbm::connection::{
    natural_connection_check, phi_canonical_identity_check, q0_phib, q_canonical, t_canonical,
    torsion_forms,
};
use acbm::fundamental::{associated_forms, FTensor};
use acbm::nijenhuis::{nijenhuis_from_f, nijenhuis_identities, u0_predicate};
use acbm::structure::Structure;
use acbm::tensor::{Tensor3, DEFAULT_TOL};
use acbm::torsion_class::{
    characterization_residual, correspondence_check, matching_torsion_classes, TorsionClass,
};
use common::*;
use nalgebra::DVector;

struct Line {
    id: &'static str,
    passed: bool,
}

fn report(id: &'static str, title: &str, passed: bool, detail: String) -> Line {
    println!(
        "[{}] {id:>3} {title}: {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    Line { id, passed }
}

fn vmax(v: &DVector<f64>) -> f64 {
    v.amax()
}

fn criterion_1() -> Line {
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        for seed in 0..100 {
            worst = worst.max(
                Structure::random(n, 1000 * n as u64 + seed)
                    .unwrap()
                    .validate(1e-9)
                    .max_residual(),
            );
        }
    }
    report(
        "1",
        "structure axioms, 300 structures n=1..3",
        worst < 1e-9,
        format!("max residual {worst:.2e} (tol 1e-9)"),
    )
}

fn criterion_2() -> Line {
    let (mut lemma, mut forms): (f64, f64) = (0.0, 0.0);
    for n in 1..=2 {
        for seed in 0..50 {
            let (s, spaces) = setup(n, 2000 + seed);
            let f = spaces.random_admissible(&mut rng(seed));
            lemma =
                lemma.max(nijenhuis_identities(&nijenhuis_from_f(&f, &s), &s, 1e-8).max_residual());
            forms = forms.max(associated_forms(&f, &s).check(&s, 1e-8).max_residual());
        }
    }
    report(
        "2",
        "Nijenhuis identities and theta*/theta relation, 100 F",
        lemma < 1e-8 && forms < 1e-8,
        format!("identities {lemma:.2e}, forms {forms:.2e} (tol 1e-8)"),
    )
}

fn criterion_3() -> Line {
    let (s, spaces) = setup(2, 3000);
    let mut r = rng(3);
    let mut inside: f64 = 0.0;
    let mut outside = f64::INFINITY;
    for c in BasicClass::ALL {
        for _ in 0..10 {
            let f = spaces.random_member(c, &mut r);
            let f = f.scale(1.0 / f.tensor().max_abs());
            let v = u0_predicate(&f, &s, 1e-8).residual;
            if ClassSet::u0().contains(c) {
                inside = inside.max(v);
            } else {
                outside = outside.min(v);
            }
        }
    }
    report(
        "3",
        "U0 membership by class",
        inside < 1e-8 && outside > 1e-3,
        format!(
            "max |N(phi.,phi.)| in U0 {inside:.2e} (tol 1e-8), min on F3/F7 {outside:.2e} (> 1e-3)"
        ),
    )
}

fn criterion_4() -> Line {
    let (mut natural, mut ident): (f64, f64) = (0.0, 0.0);
    for n in 1..=2 {
        for seed in 0..50 {
            let (s, spaces) = setup(n, 4000 + seed);
            let f = spaces.random_admissible(&mut rng(seed));
            natural = natural.max(
                natural_connection_check(&q_canonical(&f, &s), &f, &s, DEFAULT_TOL).max_residual(),
            );
            ident = ident.max(phi_canonical_identity_check(&t_canonical(&f, &s), &s));
        }
    }
    let (s, spaces) = setup(2, 4100);
    let mut r = rng(4);
    let mut equal: f64 = 0.0;
    for c in ClassSet::u0().iter() {
        let f = spaces.random_member(c, &mut r);
        equal = equal.max(rel(&q_canonical(&f, &s), &q0_phib(&f, &s)));
    }
    let f3 = spaces.random_member(BasicClass::F3, &mut r);
    let apart = rel(&q_canonical(&f3, &s), &q0_phib(&f3, &s));
    report(
        "4",
        "phi-canonical connection, coincidence with phiB on U0",
        natural < 1e-9 && ident < 1e-9 && equal < 1e-12 && apart > 1e-3,
        format!("natural {natural:.2e}, identity {ident:.2e} (tol 1e-9); Q'-Q0 on U0 {equal:.2e}, on F3 {apart:.2e}"),
    )
}

fn criterion_5() -> Line {
    let mut worst: f64 = 0.0;
    for n in 1..=2 {
        for seed in 0..50 {
            let (s, spaces) = setup(n, 5000 + seed);
            let f = spaces.random_admissible(&mut rng(seed));
            let a = associated_forms(&f, &s);
            let tf = torsion_forms(&t_canonical(&f, &s), &s);
            let t = (&a.theta_star + s.eta() * a.theta_star_xi(&s)) * 0.5;
            let ts = -(&a.theta + s.eta() * a.theta_xi(&s)) * 0.5;
            let th = -(s.phi().transpose() * &a.omega);
            let scale = vmax(&a.theta)
                .max(vmax(&a.theta_star))
                .max(vmax(&a.omega))
                .max(1.0);
            worst = worst.max(
                (vmax(&(&tf.t - t))
                    .max(vmax(&(&tf.t_star - ts)))
                    .max(vmax(&(&tf.t_hat - th))))
                    / scale,
            );
        }
    }
    report(
        "5",
        "torsion forms of T' from theta, theta*, omega",
        worst < 1e-8,
        format!("max residual {worst:.2e} (tol 1e-8)"),
    )
}

fn criterion_6() -> Line {
    let (mut n_res, mut t_res): (f64, f64) = (0.0, 0.0);
    for seed in 0..50 {
        let (s, spaces) = setup(1 + (seed as usize % 2), 6000 + seed);
        let mut r = rng(seed);
        let f = spaces.random_admissible(&mut r);
        let c = ConformalPointData::random(s.d(), &mut r);
        n_res = n_res.max(invariance_trial(&f, &s, &c, 1e-8).unwrap().n_residual);
        let c0 = g0_random(&s, &mut r);
        t_res = t_res.max(invariance_trial(&f, &s, &c0, 1e-8).unwrap().t_residual);
    }
    let (s, spaces) = setup(2, 6100);
    let f = spaces.random_admissible(&mut rng(6));
    let mut c = ConformalPointData::identity(s.d());
    c.du = s.eta().clone();
    let witness = invariance_trial(&f, &s, &c, 1e-8).unwrap();
    let ok = n_res < 1e-8 && t_res < 1e-8 && !witness.in_g0 && witness.t_residual > 1e-3;
    report(
        "6",
        "N(phi.,phi.) invariant under G, T' invariant under G0",
        ok,
        format!(
            "N over 50 G pairs {n_res:.2e}, T' over 50 G0 pairs {t_res:.2e} (tol 1e-8); non-G0 witness T' {:.2e} (> 1e-3)",
            witness.t_residual
        ),
    )
}

/// Largest foreign fraction of the image of each class under G0.
fn g0_closure() -> Vec<(BasicClass, f64)> {
    let (s, spaces) = setup(2, 7000);
    let mut r = rng(7);
    let elements: Vec<_> = (0..5).map(|_| g0_random(&s, &mut r)).collect();
    let targets: Vec<_> = elements
        .iter()
        .map(|c| {
            let sbar = acbm::conformal::transform_structure(&s, c).unwrap();
            ClassSpaces::new(&sbar).unwrap()
        })
        .collect();
    BasicClass::ALL
        .iter()
        .map(|&class| {
            let mut worst: f64 = 0.0;
            for _ in 0..10 {
                let f = spaces.random_member(class, &mut r);
                for (c, sp) in elements.iter().zip(&targets) {
                    let fbar = transform_f(&f, &s, c).unwrap();
                    let rep = sp.classify(&fbar, MEMBER_THRESHOLD).unwrap();
                    worst = worst.max(rep.foreign_fraction(ClassSet::single(class)));
                }
            }
            (class, worst)
        })
        .collect()
}

fn criterion_7() -> Line {
    let closure = g0_closure();
    let leaking: Vec<String> = closure
        .iter()
        .filter(|(_, w)| *w >= 1e-7)
        .map(|(c, w)| format!("{c} {w:.2e}"))
        .collect();
    let closed = closure
        .iter()
        .filter(|(_, w)| *w < 1e-7)
        .map(|(c, _)| c.to_string())
        .collect::<Vec<_>>();
    report(
        "7",
        "G0 class closure, 10 members x 5 elements per class",
        leaking.is_empty(),
        format!(
            "closed: {} (tol 1e-7); leaking: [{}]",
            closed.join(" "),
            leaking.join(", ")
        ),
    )
}

fn criterion_8() -> (Line, Line) {
    let (s, spaces) = setup(2, 8000);
    let mut r = rng(8);
    let mut table_fail = Vec::new();
    let mut closed_fail = Vec::new();
    let mut worst_table: f64 = 0.0;
    for c in BasicClass::ALL {
        for _ in 0..5 {
            let f = spaces.random_member(c, &mut r);
            let rep = correspondence_check(&spaces, &f, 1e-8).unwrap();
            let table = rep
                .expected_residuals
                .iter()
                .fold(0.0_f64, |a, b| a.max(*b));
            worst_table = worst_table.max(table);
            if table >= 1e-8 || !rep.forms_ok {
                table_fail.push(c.to_string());
            }
            let ch = characterization_residual(c, &t_canonical(&f, &s), &s);
            if ch >= 1e-8 {
                closed_fail.push(format!("{c} {ch:.2e}"));
            }
        }
    }
    table_fail.dedup();
    closed_fail.dedup_by(|a, b| a.split(' ').next() == b.split(' ').next());
    (
        report(
            "8a",
            "torsion class of T' per basic class matches the table, n=2",
            table_fail.is_empty(),
            format!(
                "max residual {worst_table:.2e} (tol 1e-8); mismatches: [{}]",
                table_fail.join(", ")
            ),
        ),
        report(
            "8b",
            "closed-form torsion characterization per basic class, n=2",
            closed_fail.is_empty(),
            format!("failing: [{}] (tol 1e-8)", closed_fail.join(", ")),
        ),
    )
}

fn golden() -> (f64, f64, f64, f64, Vec<TorsionClass>) {
    let n = 2;
    let psi = PI / 6.0;
    let s = Structure::canonical(n).unwrap();
    let k = 2.0 * n as f64;
    let f = &f4_formula(k * psi.cos(), &s) + &f5_formula(k * psi.sin(), &s);
    let f = FTensor::new(f, &s, DEFAULT_TOL).unwrap();
    let t = t_canonical(&f, &s);
    let (gp, gpp, eta) = (s.g_phi(), s.g_phiphi(), s.eta());
    let closed = Tensor3::from_fn(s.d(), |x, y, z| {
        eta[x] * (psi.cos() * gp[(y, z)] - psi.sin() * gpp[(y, z)])
    })
    .antisym_first_pair();
    let forms = torsion_forms(&t, &s);
    let t_err = vmax(&(&forms.t - s.eta() * (k * psi.sin())));
    let ts_err = vmax(&(&forms.t_star + s.eta() * (k * psi.cos())));
    (
        t.residual(&closed),
        forms.t.dot(s.xi()),
        forms.t_star.dot(s.xi()),
        vmax(&forms.t_hat).max(t_err).max(ts_err),
        matching_torsion_classes(&t, &s, 1e-10),
    )
}

fn criterion_9() -> Line {
    let (closed, t_xi, ts_xi, rest, classes) = golden();
    let ok = closed < 1e-10
        && (t_xi - 2.0).abs() < 1e-10
        && (ts_xi + 2.0 * 3f64.sqrt()).abs() < 1e-10
        && rest < 1e-10
        && classes == vec![TorsionClass::T31];
    report(
        "9",
        "golden F4+F5 case, n=2, psi=pi/6",
        ok,
        format!("T' closed form {closed:.2e}, t'(xi) = {t_xi:.12}, t'*(xi) = {ts_xi:.12}, t^' and form shape {rest:.2e}, classes {classes:?}"),
    )
}

fn criterion_10() -> Line {
    let mut reassembly: f64 = 0.0;
    let mut roundtrip: f64 = 0.0;
    let mut audits = true;
    for n in 1..=2 {
        let (_, spaces) = setup(n, 10_000 + n as u64);
        audits &= spaces.dimension_audit().is_direct_sum();
        let mut r = rng(10);
        for _ in 0..20 {
            let f = spaces.random_admissible(&mut r);
            reassembly = reassembly.max(
                spaces
                    .classify(&f, MEMBER_THRESHOLD)
                    .unwrap()
                    .reassembly_residual,
            );
        }
        let present: Vec<_> = BasicClass::ALL
            .into_iter()
            .filter(|c| spaces.class_dim(*c) > 0)
            .collect();
        for (i, &a) in present.iter().enumerate() {
            for &b in &present[i + 1..] {
                let fa = spaces.random_member(a, &mut r);
                let fb = spaces.random_member(b, &mut r);
                let parts = spaces.decompose(&fa.add(&fb)).unwrap();
                roundtrip = roundtrip
                    .max(rel(parts[a.index()].tensor(), fa.tensor()))
                    .max(rel(parts[b.index()].tensor(), fb.tensor()));
            }
        }
    }
    report(
        "10",
        "decomposition soundness, n=1,2",
        reassembly < 1e-8 && roundtrip < 1e-8 && audits,
        format!("reassembly {reassembly:.2e}, pair round trip {roundtrip:.2e} (tol 1e-8), direct sum audit {audits}"),
    )
}

/// Criteria 7 and 8b are contradicted by the theory's own formulas (see the
/// guard tests below); every other line must pass.
const KNOWN_FAILURES: [&str; 2] = ["7", "8b"];

#[test]
fn acceptance() {
    let mut lines = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
    ];
    let (l8a, l8b) = criterion_8();
    lines.extend([l8a, l8b, criterion_9(), criterion_10()]);
    let passed = lines.iter().filter(|l| l.passed).count();
    println!("{passed}/{} criteria pass", lines.len());
    for l in &lines {
        if !KNOWN_FAILURES.contains(&l.id) {
            assert!(l.passed, "criterion {} failed", l.id);
        }
    }
}

#[test]
fn g0_closure_holds_outside_f8_f9_f10() {
    use BasicClass::*;
    for (c, worst) in g0_closure() {
        if ![F8, F9, F10].contains(&c) {
            assert!(worst < 1e-7, "{c}: {worst:e}");
        }
    }
}

#[test]
fn f8_leaves_its_class_by_the_predicted_amount() {
    // constant u: alpha = e^{2u}, beta = 0, gamma = 1, all differentials zero
    let (s, spaces) = setup(2, 7100);
    let f = spaces.random_member(BasicClass::F8, &mut rng(71));
    let mut c = ConformalPointData::identity(s.d());
    c.u = 0.3;
    let fbar = transform_f(&f, &s, &c).unwrap();
    let a = f.tensor().contract(2, s.xi());
    let k = 2.0 * (c.gamma() - c.alpha());
    let lhs = fbar.tensor().contract(0, s.xi());
    assert!((lhs - a * k).amax() < 1e-12);
    assert!(f.tensor().contract(0, s.xi()).amax() < 1e-12);
}

#[test]
fn f7_torsion_has_no_xi_slot_component() {
    let (s, spaces) = setup(2, 8100);
    let f = spaces.random_member(BasicClass::F7, &mut rng(81));
    let t = t_canonical(&f, &s);
    let a = f.tensor().pull_slot(1, s.phi()).contract(2, s.xi());
    let expect = Tensor3::from_fn(s.d(), |x, y, z| 2.0 * a[(x, y)] * s.eta()[z]);
    assert!(t.residual(&expect) < 1e-12);
    assert!(t.contract(0, s.xi()).amax() < 1e-12);
    assert!(t.contract(2, s.xi()).amax() > 1e-3);
    for c in BasicClass::ALL {
        if c != BasicClass::F7 {
            let f = spaces.random_member(c, &mut rng(82));
            assert!(
                characterization_residual(c, &t_canonical(&f, &s), &s) < 1e-8,
                "{c}"
            );
        }
    }
}
