//! The four batch commands over a [`Scene`] and their reports.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classes::{BasicClass, ClassSpaces, MEMBER_THRESHOLD};
use crate::conformal::{g0_random, invariance_trial, ConformalPointData, InvarianceTrial};
use crate::connection::{
    natural_connection_check, phi_canonical_identity_check, q0_phib, q_canonical, t_canonical,
    torsion_forms, TorsionForms,
};
use crate::error::{Error, Result};
use crate::fundamental::{associated_forms, check_admissible, AssociatedForms, FTensor};
use crate::nijenhuis::u0_predicate;
use crate::scene::{FSource, Scene};
use crate::tensor::scaled;
use crate::torsion_class::{matching_torsion_classes, TorsionClass};
use crate::validation::ValidationReport;

/// Residual budget for the invariance statements, relative to the base tolerance.
pub const INVARIANCE_FACTOR: f64 = 10.0;

fn names<T: fmt::Display>(items: &[T]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn validation_error(r: &ValidationReport) -> Error {
    let failed: Vec<String> = r
        .failures()
        .map(|c| format!("{} (residual {:.3e})", c.name, c.residual))
        .collect();
    Error::Validation(failed.join("; "))
}

/// Validate the structure and materialize `F`, failing with the names of
/// violated identities.
pub fn load(scene: &Scene, tol: f64) -> Result<FTensor> {
    let r = scene.structure.validate(tol);
    if !r.is_ok() {
        return Err(validation_error(&r));
    }
    scene.fundamental(tol)
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidateReport {
    pub n: usize,
    pub structure: ValidationReport,
    pub admissibility: Option<ValidationReport>,
}

impl ValidateReport {
    pub fn is_ok(&self) -> bool {
        self.structure.is_ok() && self.admissibility.as_ref().is_none_or(|a| a.is_ok())
    }
}

impl fmt::Display for ValidateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "structure (n = {}):", self.n)?;
        write!(f, "{}", self.structure)?;
        if let Some(a) = &self.admissibility {
            writeln!(f, "fundamental tensor:")?;
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Structure axioms plus, when the scene carries `F`, its admissibility.
/// Fails with [`Error::Validation`] naming every violated identity.
pub fn cmd_validate(scene: &Scene, tol: f64) -> Result<ValidateReport> {
    let s = &scene.structure;
    let structure = s.validate(tol);
    if !structure.is_ok() {
        return Err(validation_error(&structure));
    }
    let admissibility = match &scene.f {
        None => None,
        Some(FSource::Tensor(t)) => Some(check_admissible(t, s, tol)),
        Some(_) => Some(check_admissible(scene.fundamental(tol)?.tensor(), s, tol)),
    };
    if let Some(a) = &admissibility {
        if !a.is_ok() {
            return Err(validation_error(a));
        }
    }
    Ok(ValidateReport {
        n: s.n(),
        structure,
        admissibility,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentEntry {
    pub class: BasicClass,
    pub norm: f64,
    pub condition_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub detected: String,
    pub norm: f64,
    pub reassembly_residual: f64,
    pub components: Vec<ComponentEntry>,
    pub forms: AssociatedForms,
    pub theta_xi: f64,
    pub theta_star_xi: f64,
    pub in_u0: bool,
    pub u0_residual: f64,
}

impl fmt::Display for ClassifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "class: {}", self.detected)?;
        writeln!(
            f,
            "  |F| = {:.6e}, reassembly residual {:.3e}",
            self.norm, self.reassembly_residual
        )?;
        for c in &self.components {
            writeln!(
                f,
                "  {:<4} component {:.6e}   condition residual {:.3e}",
                c.class.to_string(),
                c.norm,
                c.condition_residual
            )?;
        }
        writeln!(
            f,
            "theta(xi) = {:.6e}, theta*(xi) = {:.6e}",
            self.theta_xi, self.theta_star_xi
        )?;
        writeln!(f, "theta  = {}", fmt_vec(self.forms.theta.as_slice()))?;
        writeln!(f, "theta* = {}", fmt_vec(self.forms.theta_star.as_slice()))?;
        writeln!(f, "omega  = {}", fmt_vec(self.forms.omega.as_slice()))?;
        writeln!(
            f,
            "U0: {} (N(phi.,phi.) residual {:.3e})",
            self.in_u0, self.u0_residual
        )
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6e}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn cmd_classify(scene: &Scene, tol: f64) -> Result<ClassifyReport> {
    let f = load(scene, tol)?;
    let s = &scene.structure;
    let spaces = ClassSpaces::new(s)?;
    let r = spaces.classify(&f, MEMBER_THRESHOLD)?;
    let forms = associated_forms(&f, s);
    let u0 = u0_predicate(&f, s, tol);
    Ok(ClassifyReport {
        detected: r.detected.to_string(),
        norm: r.norm,
        reassembly_residual: r.reassembly_residual,
        components: BasicClass::ALL
            .iter()
            .map(|&c| ComponentEntry {
                class: c,
                norm: r.component_norm(c),
                condition_residual: r.membership_residuals[c.index()],
            })
            .collect(),
        theta_xi: forms.theta_xi(s),
        theta_star_xi: forms.theta_star_xi(s),
        forms,
        in_u0: u0.in_u0,
        u0_residual: u0.residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectionReport {
    pub class: String,
    pub torsion_max_abs: f64,
    pub torsion_norm: f64,
    pub forms: TorsionForms,
    pub t_xi: f64,
    pub t_star_xi: f64,
    pub t_hat_max_abs: f64,
    pub torsion_classes: Vec<TorsionClass>,
    pub natural: ValidationReport,
    pub phi_canonical_residual: f64,
    /// `max|Q' - Q⁰|` relative to `max|F|`.
    pub phib_gap: f64,
    /// The φ-canonical and φB-connections coincide.
    pub coincide: bool,
}

impl fmt::Display for ConnectionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "class of F: {}", self.class)?;
        writeln!(
            f,
            "phi-canonical torsion: max|T'| = {:.6e}, |T'| = {:.6e}",
            self.torsion_max_abs, self.torsion_norm
        )?;
        writeln!(f, "  t'(xi) = {:.10}", self.t_xi)?;
        writeln!(f, "  t'*(xi) = {:.10}", self.t_star_xi)?;
        writeln!(f, "  max|t^'| = {:.3e}", self.t_hat_max_abs)?;
        writeln!(f, "  t'   = {}", fmt_vec(self.forms.t.as_slice()))?;
        writeln!(f, "  t'*  = {}", fmt_vec(self.forms.t_star.as_slice()))?;
        writeln!(f, "  torsion classes: {}", names(&self.torsion_classes))?;
        writeln!(f, "natural connection:")?;
        write!(f, "{}", self.natural)?;
        writeln!(
            f,
            "phi-canonical identity residual {:.3e}",
            self.phi_canonical_residual
        )?;
        writeln!(
            f,
            "phi-canonical = phiB: {} (gap {:.3e})",
            self.coincide, self.phib_gap
        )
    }
}

pub fn cmd_connection(scene: &Scene, tol: f64) -> Result<ConnectionReport> {
    let f = load(scene, tol)?;
    let s = &scene.structure;
    let class = ClassSpaces::new(s)?
        .classify(&f, MEMBER_THRESHOLD)?
        .detected;
    let q = q_canonical(&f, s);
    let t = t_canonical(&f, s);
    let forms = torsion_forms(&t, s);
    let gap = scaled((&q - &q0_phib(&f, s)).max_abs(), f.tensor().max_abs());
    Ok(ConnectionReport {
        class: class.to_string(),
        torsion_max_abs: t.max_abs(),
        torsion_norm: t.norm(),
        t_xi: forms.t.dot(s.xi()),
        t_star_xi: forms.t_star.dot(s.xi()),
        t_hat_max_abs: forms.t_hat.amax(),
        forms,
        torsion_classes: matching_torsion_classes(&t, s, tol * INVARIANCE_FACTOR),
        natural: natural_connection_check(&q, &f, s, tol),
        phi_canonical_residual: phi_canonical_identity_check(&t, s),
        phib_gap: gap,
        coincide: gap <= tol,
    })
}

/// Flags of the `conformal` command.
#[derive(Clone, Debug, Default)]
pub struct ConformalOptions {
    pub check_invariance: bool,
    pub g0_only: bool,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialEntry {
    pub label: String,
    pub element: ConformalPointData,
    pub result: InvarianceTrial,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConformalReport {
    pub tolerance: f64,
    pub check_invariance: bool,
    pub trials: Vec<TrialEntry>,
    pub max_n_residual: f64,
    pub max_t_residual_g0: f64,
    pub max_t_residual_outside_g0: f64,
    pub violations: usize,
}

impl ConformalReport {
    /// Whether an invariance asserted by the theory failed.
    pub fn has_violation(&self) -> bool {
        self.check_invariance && self.violations > 0
    }
}

impl fmt::Display for ConformalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} trial(s), tolerance {:.1e}",
            self.trials.len(),
            self.tolerance
        )?;
        for t in &self.trials {
            let r = &t.result;
            writeln!(
                f,
                "  {:<10} G0={:<5} structure {:.2e}  N {:.2e}  T' {:.2e}  forms {:.2e}  class {} -> {}{}",
                t.label,
                r.in_g0,
                r.structure_residual,
                r.n_residual,
                r.t_residual,
                r.forms_residual,
                r.class_before,
                r.class_after,
                if r.ok() { String::new() } else { format!("  VIOLATION: {}", r.violations.join("; ")) }
            )?;
        }
        writeln!(f, "max N(phi.,phi.) residual: {:.3e}", self.max_n_residual)?;
        writeln!(f, "max T' residual on G0: {:.3e}", self.max_t_residual_g0)?;
        writeln!(
            f,
            "max T' residual off G0: {:.3e}",
            self.max_t_residual_outside_g0
        )?;
        writeln!(f, "violations: {}", self.violations)
    }
}

/// Transform the scene's `F` by its conformal block and/or by seeded random
/// elements, reporting every invariance statement. Scenes without `F` use a
/// fresh random admissible tensor per trial.
pub fn cmd_conformal(scene: &Scene, opts: &ConformalOptions, tol: f64) -> Result<ConformalReport> {
    let s = &scene.structure;
    let r = s.validate(tol);
    if !r.is_ok() {
        return Err(validation_error(&r));
    }
    if scene.conformal.is_none() && opts.trials == 0 {
        return Err(Error::Validation(
            "scene has no conformal block and no random trials were requested".into(),
        ));
    }
    let fixed = match scene.f {
        Some(_) => Some(scene.fundamental(tol)?),
        None => None,
    };
    let spaces = ClassSpaces::new(s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let inv_tol = tol * INVARIANCE_FACTOR;

    let mut elements: Vec<(String, ConformalPointData)> = Vec::new();
    if let Some(c) = &scene.conformal {
        if c.dim() != s.d() {
            return Err(Error::ShapeMismatch {
                what: "conformal block".into(),
                expected: s.d().to_string(),
                found: c.dim().to_string(),
            });
        }
        elements.push(("scene".into(), c.clone()));
    }
    for k in 0..opts.trials {
        let c = if opts.g0_only || k % 2 == 1 {
            g0_random(s, &mut rng)
        } else {
            ConformalPointData::random(s.d(), &mut rng)
        };
        elements.push((format!("trial {k}"), c));
    }

    let mut trials = Vec::with_capacity(elements.len());
    for (label, c) in elements {
        let f = match &fixed {
            Some(f) => f.clone(),
            None => spaces.random_admissible(&mut rng),
        };
        let mut result = invariance_trial(&f, s, &c, inv_tol)?;
        if !opts.check_invariance {
            result
                .violations
                .retain(|v| v.starts_with("transformed structure"));
        }
        trials.push(TrialEntry {
            label,
            element: c,
            result,
        });
    }
    let fold = |pred: &dyn Fn(&InvarianceTrial) -> Option<f64>| {
        trials
            .iter()
            .filter_map(|t| pred(&t.result))
            .fold(0.0, f64::max)
    };
    Ok(ConformalReport {
        tolerance: inv_tol,
        check_invariance: opts.check_invariance,
        max_n_residual: fold(&|r| Some(r.n_residual)),
        max_t_residual_g0: fold(&|r| r.in_g0.then_some(r.t_residual)),
        max_t_residual_outside_g0: fold(&|r| (!r.in_g0).then_some(r.t_residual)),
        violations: trials.iter().filter(|t| !t.result.ok()).count(),
        trials,
    })
}
