//! Torsion classes `T₁₁ … T₄₁` and the correspondence between the basic
//! classes of `F` and the class of the φ-canonical torsion.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::classes::{BasicClass, ClassSpaces, MEMBER_THRESHOLD};
use crate::connection::{t_canonical, torsion_forms, TorsionForms};
use crate::error::{Error, Result};
use crate::fundamental::FTensor;
use crate::structure::Structure;
use crate::tensor::{scaled, Tensor3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TorsionClass {
    T11,
    T12,
    T13,
    T14,
    T21,
    T22,
    T31,
    T32,
    T33,
    T34,
    T41,
}

impl TorsionClass {
    pub const ALL: [TorsionClass; 11] = [
        Self::T11,
        Self::T12,
        Self::T13,
        Self::T14,
        Self::T21,
        Self::T22,
        Self::T31,
        Self::T32,
        Self::T33,
        Self::T34,
        Self::T41,
    ];
}

impl fmt::Display for TorsionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for TorsionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParams(format!("unknown torsion class {s:?}")))
    }
}

fn push_tensor(out: &mut Vec<f64>, t: &Tensor3) {
    out.extend_from_slice(t.as_slice());
}

fn push_matrix(out: &mut Vec<f64>, m: &DMatrix<f64>) {
    out.extend(m.iter().copied());
}

/// Components of the characteristic conditions of `c`.
pub fn torsion_class_defects(c: TorsionClass, t: &Tensor3, s: &Structure) -> Vec<f64> {
    use TorsionClass::*;
    let phi = s.phi();
    let xi = s.xi();
    let eta = s.eta();
    let mut out = Vec::new();
    match c {
        T11 | T12 | T13 | T14 => {
            push_matrix(&mut out, &t.contract(0, xi));
            push_matrix(&mut out, &t.contract(2, xi));
            let t_pp_first = t.pull_slot(0, phi).pull_slot(1, phi);
            match c {
                T11 | T12 => {
                    push_tensor(&mut out, &(t + &t_pp_first));
                    let t_pp_last = t.pull_slot(1, phi).pull_slot(2, phi);
                    let rule = if c == T11 {
                        t + &t_pp_last
                    } else {
                        t - &t_pp_last
                    };
                    push_tensor(&mut out, &rule);
                }
                T13 => {
                    push_tensor(&mut out, &(t - &t_pp_first));
                    push_tensor(&mut out, &t.cyclic_sum());
                }
                _ => {
                    push_tensor(&mut out, &(t - &t_pp_first));
                    push_tensor(&mut out, &t.pull_slot(0, phi).cyclic_sum());
                }
            }
        }
        T21 | T22 => {
            let p2 = s.phi2();
            let m = t.contract(2, xi);
            let m_h = p2.transpose() * &m * p2;
            push_tensor(&mut out, &(t - &Tensor3::outer_last(&m_h, eta)));
            let rotated = phi.transpose() * &m * phi;
            push_matrix(
                &mut out,
                &if c == T21 { &m + rotated } else { &m - rotated },
            );
        }
        T31 | T32 | T33 | T34 => {
            push_tensor(&mut out, &(t - &vertical_part(t, s)));
            let b = t.contract(0, xi);
            let symmetric = matches!(c, T31 | T33);
            push_matrix(
                &mut out,
                &if symmetric {
                    &b - b.transpose()
                } else {
                    &b + b.transpose()
                },
            );
            let rotated = phi.transpose() * &b * phi;
            let anti = matches!(c, T31 | T32);
            push_matrix(&mut out, &if anti { &b + rotated } else { &b - rotated });
        }
        T41 => {
            let t_hat = t.contract(1, xi) * xi;
            let closed = Tensor3::from_fn(s.d(), |x, y, z| {
                eta[z] * (eta[y] * t_hat[x] - eta[x] * t_hat[y])
            });
            push_tensor(&mut out, &(t - &closed));
        }
    }
    out
}

/// `η(x)T(ξ,φ²y,φ²z) - η(y)T(ξ,φ²x,φ²z)`.
fn vertical_part(t: &Tensor3, s: &Structure) -> Tensor3 {
    let p2 = s.phi2();
    let b = p2.transpose() * t.contract(0, s.xi()) * p2;
    let eta = s.eta();
    Tensor3::from_fn(s.d(), |x, y, z| eta[x] * b[(y, z)] - eta[y] * b[(x, z)])
}

/// `η(z)T(φ²x,φ²y,ξ)`, the part of a torsion valued along `ξ`.
pub fn xi_valued_part(t: &Tensor3, s: &Structure) -> Tensor3 {
    let p2 = s.phi2();
    let m = p2.transpose() * t.contract(2, s.xi()) * p2;
    Tensor3::outer_last(&m, s.eta())
}

/// Max violation of the conditions of `c`, relative to `max(1, max|T|)`.
pub fn torsion_membership_residual(t: &Tensor3, s: &Structure, c: TorsionClass) -> f64 {
    let worst = torsion_class_defects(c, t, s)
        .iter()
        .fold(0.0_f64, |a, v| a.max(v.abs()));
    scaled(worst, t.max_abs())
}

/// Residuals of the torsion characterisation of the basic class `c`
/// satisfied by the φ-canonical torsion of every member of `c`.
pub fn characterization_residual(c: BasicClass, t: &Tensor3, s: &Structure) -> f64 {
    use BasicClass::*;
    let phi = s.phi();
    let p2 = s.phi2();
    let xi = s.xi();
    let eta = s.eta();
    let g = s.g();
    let d = s.d();
    let n2 = (2 * s.n()) as f64;
    let forms = torsion_forms(t, s);
    let mut out: Vec<f64> = Vec::new();
    let t_first_xi = t.contract(0, xi);
    let t_last_xi = t.contract(2, xi);
    // T(x,y) = η(x)T(ξ,y) - η(y)T(ξ,x), lowered
    let split = Tensor3::from_fn(d, |x, y, z| {
        eta[x] * t_first_xi[(y, z)] - eta[y] * t_first_xi[(x, z)]
    });
    match c {
        F1 => {
            let tp = phi.transpose() * &forms.t;
            let tp2 = p2.transpose() * &forms.t;
            let g_p2 = g.matrix() * p2;
            let g_p = g.matrix() * phi;
            let closed = Tensor3::from_fn(d, |x, y, z| {
                (tp2[x] * g_p2[(z, y)] - tp2[y] * g_p2[(z, x)] + tp[x] * g_p[(z, y)]
                    - tp[y] * g_p[(z, x)])
                    / n2
            });
            push_tensor(&mut out, &(t - &closed));
        }
        F2 | F3 => {
            push_matrix(&mut out, &t_first_xi);
            push_matrix(&mut out, &t_last_xi);
            if c == F2 {
                push_tensor(&mut out, &(t - &t.pull_slot(0, phi).pull_slot(1, phi)));
                out.extend(forms.t.iter().copied());
            } else {
                push_tensor(&mut out, &(t - &t.pull_slot(1, phi).pull_slot(2, phi)));
            }
        }
        F4 => {
            let k = forms.t_star.dot(xi) / n2;
            let g_p = g.matrix() * phi;
            let closed = Tensor3::from_fn(d, |x, y, z| {
                k * (eta[y] * g_p[(z, x)] - eta[x] * g_p[(z, y)])
            });
            push_tensor(&mut out, &(t - &closed));
        }
        F5 => {
            let k = forms.t.dot(xi) / n2;
            let g_p2 = g.matrix() * p2;
            let closed = Tensor3::from_fn(d, |x, y, z| {
                k * (eta[y] * g_p2[(z, x)] - eta[x] * g_p2[(z, y)])
            });
            push_tensor(&mut out, &(t - &closed));
        }
        F6 | F9 | F10 => {
            push_tensor(&mut out, &(t - &split));
            let b = &t_first_xi;
            let swap = if c == F10 {
                b + b.transpose()
            } else {
                b - b.transpose()
            };
            push_matrix(&mut out, &swap);
            let rotated = phi.transpose() * b * phi;
            push_matrix(&mut out, &if c == F6 { b + rotated } else { b - rotated });
        }
        F7 | F8 => {
            let along_xi = Tensor3::outer_last(&t_last_xi, eta);
            push_tensor(&mut out, &(t - &(&split + &along_xi)));
            let b = &t_first_xi;
            push_matrix(&mut out, &(b + b.transpose()));
            let rotated = phi.transpose() * b * phi;
            let sign = if c == F7 { -1.0 } else { 1.0 };
            push_matrix(&mut out, &(b - &rotated * sign));
            push_matrix(&mut out, &(b - &t_last_xi * 0.5));
            let rotated_last = phi.transpose() * &t_last_xi * phi;
            push_matrix(&mut out, &(b - &rotated_last * (0.5 * sign)));
        }
        F11 => {
            let closed = Tensor3::from_fn(d, |x, y, z| {
                (forms.t_hat[x] * eta[y] - forms.t_hat[y] * eta[x]) * eta[z]
            });
            push_tensor(&mut out, &(t - &closed));
        }
    }
    let worst = out.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    scaled(worst, t.max_abs())
}

/// What the φ-canonical torsion of a pure class member must look like.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpectedTorsion {
    Single(TorsionClass),
    /// `ξ`-valued part in the first class, the rest in the second.
    Split(TorsionClass, TorsionClass),
}

/// Side conditions on `t` and `t*`: `Some(true)` nonzero, `Some(false)` zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormConditions {
    pub t_nonzero: Option<bool>,
    pub t_star_nonzero: Option<bool>,
}

/// The row of the correspondence table for a basic class.
pub fn expected_row(c: BasicClass) -> (ExpectedTorsion, FormConditions) {
    use BasicClass::*;
    use ExpectedTorsion::*;
    use TorsionClass::*;
    let none = FormConditions {
        t_nonzero: None,
        t_star_nonzero: None,
    };
    let forms = |t, ts| FormConditions {
        t_nonzero: t,
        t_star_nonzero: ts,
    };
    match c {
        F1 => (Single(T13), forms(Some(true), None)),
        F2 => (Single(T13), forms(Some(false), None)),
        F3 => (Single(T12), none),
        F4 => (Single(T31), forms(Some(false), Some(true))),
        F5 => (Single(T31), forms(Some(true), Some(false))),
        F6 => (Single(T31), forms(Some(false), Some(false))),
        F7 => (Split(T21, T32), none),
        F8 => (Split(T22, T34), none),
        F9 => (Single(T33), none),
        F10 => (Single(T34), none),
        F11 => (Single(T41), none),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    /// The basic class of `F`, `None` for `F₀`.
    pub class: Option<BasicClass>,
    pub expected: Option<ExpectedTorsion>,
    pub torsion_residuals: Vec<(TorsionClass, f64)>,
    /// Residuals of the expected torsion class (two entries for split rows).
    pub expected_residuals: Vec<f64>,
    pub forms: TorsionForms,
    pub t_norm_ratio: f64,
    pub t_star_norm_ratio: f64,
    pub forms_ok: bool,
    pub characterization_residual: f64,
    /// A pure `F₁₀` member whose torsion also carries `ξ`-valued content.
    pub f10_t22_overlap: bool,
    pub passed: bool,
}

/// Check a pure basic-class member against its row of the correspondence table.
pub fn correspondence_check(
    spaces: &ClassSpaces,
    f: &FTensor,
    tol: f64,
) -> Result<CorrespondenceReport> {
    let s = spaces.structure();
    let report = spaces.classify(f, MEMBER_THRESHOLD)?;
    if report.detected.len() > 1 {
        return Err(Error::AmbiguousClass(report.detected.to_string()));
    }
    let class = report.detected.as_single();
    let t = t_canonical(f, s);
    let forms = torsion_forms(&t, s);
    let torsion_residuals: Vec<(TorsionClass, f64)> = TorsionClass::ALL
        .iter()
        .map(|&c| (c, torsion_membership_residual(&t, s, c)))
        .collect();
    let t_norm = t.norm();
    let ratio = |v: &nalgebra::DVector<f64>| if t_norm > 0.0 { v.norm() / t_norm } else { 0.0 };
    let t_norm_ratio = ratio(&forms.t);
    let t_star_norm_ratio = ratio(&forms.t_star);

    let Some(class) = class else {
        let zero = t.max_abs() <= tol;
        return Ok(CorrespondenceReport {
            class: None,
            expected: None,
            torsion_residuals,
            expected_residuals: vec![],
            forms,
            t_norm_ratio,
            t_star_norm_ratio,
            forms_ok: zero,
            characterization_residual: scaled(t.max_abs(), 1.0),
            f10_t22_overlap: false,
            passed: zero,
        });
    };

    let (expected, conds) = expected_row(class);
    let expected_residuals = match expected {
        ExpectedTorsion::Single(c) => vec![torsion_membership_residual(&t, s, c)],
        ExpectedTorsion::Split(a, b) => {
            let along = xi_valued_part(&t, s);
            let rest = &t - &along;
            vec![
                torsion_membership_residual(&along, s, a),
                torsion_membership_residual(&rest, s, b),
            ]
        }
    };
    let check = |want: Option<bool>, r: f64| match want {
        None => true,
        Some(true) => r > MEMBER_THRESHOLD,
        Some(false) => r <= MEMBER_THRESHOLD,
    };
    let forms_ok =
        check(conds.t_nonzero, t_norm_ratio) && check(conds.t_star_nonzero, t_star_norm_ratio);
    let characterization = characterization_residual(class, &t, s);
    let f10_t22_overlap = class == BasicClass::F10
        && xi_valued_part(&t, s).norm() > MEMBER_THRESHOLD * t_norm.max(f64::MIN_POSITIVE);
    let passed =
        forms_ok && characterization <= tol && expected_residuals.iter().all(|&r| r <= tol);
    Ok(CorrespondenceReport {
        class: Some(class),
        expected: Some(expected),
        torsion_residuals,
        expected_residuals,
        forms,
        t_norm_ratio,
        t_star_norm_ratio,
        forms_ok,
        characterization_residual: characterization,
        f10_t22_overlap,
        passed,
    })
}

/// Smallest set of torsion classes whose conditions `T` meets within `tol`.
pub fn matching_torsion_classes(t: &Tensor3, s: &Structure, tol: f64) -> Vec<TorsionClass> {
    TorsionClass::ALL
        .into_iter()
        .filter(|&c| torsion_membership_residual(t, s, c) <= tol)
        .collect()
}
