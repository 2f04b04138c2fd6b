//! The fundamental tensor `F(x,y,z) = g((∇_x φ)y, z)` and its traces.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::Structure;
use crate::tensor::{max_abs_vector, scaled, Tensor3};
use crate::validation::ValidationReport;

pub const SYMMETRY: &str = "F(x,y,z) = F(x,z,y)";
pub const PHI_COMPATIBILITY: &str = "F(x,y,z) = F(x,phi y,phi z) + eta terms";

/// A 3-tensor known to satisfy the admissibility identities for some structure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FTensor(Tensor3);

impl FTensor {
    /// Accept `t` only if it is admissible for `s` within `tol`.
    pub fn new(t: Tensor3, s: &Structure, tol: f64) -> Result<Self> {
        if t.dim() != s.d() {
            return Err(Error::ShapeMismatch {
                what: "fundamental tensor".into(),
                expected: s.d().to_string(),
                found: t.dim().to_string(),
            });
        }
        let report = check_admissible(&t, s, tol);
        if !report.is_ok() {
            return Err(Error::InadmissibleF {
                residual: report.max_residual(),
            });
        }
        Ok(Self(t))
    }

    /// Wrap a tensor that is admissible by construction.
    pub(crate) fn trusted(t: Tensor3) -> Self {
        Self(t)
    }

    pub fn zero(s: &Structure) -> Self {
        Self(Tensor3::zeros(s.d()))
    }

    #[inline]
    pub fn tensor(&self) -> &Tensor3 {
        &self.0
    }

    pub fn into_tensor(self) -> Tensor3 {
        self.0
    }

    pub fn add(&self, other: &FTensor) -> FTensor {
        FTensor(&self.0 + &other.0)
    }

    pub fn scale(&self, c: f64) -> FTensor {
        FTensor(self.0.scale(c))
    }
}

impl AsRef<Tensor3> for FTensor {
    fn as_ref(&self) -> &Tensor3 {
        &self.0
    }
}

/// The two defect tensors of the admissibility law; both vanish iff `f` is admissible.
pub fn admissibility_defects(f: &Tensor3, s: &Structure) -> [Tensor3; 2] {
    let sym = f - &f.permuted([0, 2, 1]);
    let rhs = &(&f.pull_slot(1, s.phi()).pull_slot(2, s.phi())
        + &Tensor3::from_fn(s.d(), {
            let fxi_mid = f.contract(1, s.xi());
            let eta = s.eta();
            move |x, y, z| eta[y] * fxi_mid[(x, z)]
        }))
        + &Tensor3::outer_last(&f.contract(2, s.xi()), s.eta());
    [sym, f - &rhs]
}

/// Residuals of both admissibility identities over all basis triples.
pub fn check_admissible(f: &Tensor3, s: &Structure, tol: f64) -> ValidationReport {
    let mut r = ValidationReport::new(tol);
    if f.dim() != s.d() {
        r.push_flag("shape", f64::INFINITY, false);
        return r;
    }
    let scale = f.max_abs();
    let [sym, compat] = admissibility_defects(f, s);
    r.push(SYMMETRY, scaled(sym.max_abs(), scale));
    r.push(PHI_COMPATIBILITY, scaled(compat.max_abs(), scale));
    r
}

/// `v(z) = g^{ij} T(e_i, e_j, z)` for a given inverse metric.
pub fn trace_first_pair(t: &Tensor3, ginv: &DMatrix<f64>) -> DVector<f64> {
    let d = t.dim();
    DVector::from_fn(d, |z, _| {
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                let c = ginv[(i, j)];
                if c != 0.0 {
                    s += c * t.get(i, j, z);
                }
            }
        }
        s
    })
}

/// `v(x) = g^{ij} T(x, e_i, e_j)` for a given inverse metric.
pub fn trace_last_pair(t: &Tensor3, ginv: &DMatrix<f64>) -> DVector<f64> {
    trace_first_pair(&t.permuted([2, 0, 1]), ginv)
}

/// The 1-forms `θ`, `θ*`, `ω` attached to `F`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssociatedForms {
    pub theta: DVector<f64>,
    pub theta_star: DVector<f64>,
    pub omega: DVector<f64>,
}

impl AssociatedForms {
    /// `θ(ξ)`.
    pub fn theta_xi(&self, s: &Structure) -> f64 {
        self.theta.dot(s.xi())
    }

    /// `θ*(ξ)`.
    pub fn theta_star_xi(&self, s: &Structure) -> f64 {
        self.theta_star.dot(s.xi())
    }

    /// Residuals of `ω(ξ) = 0` and `θ* ∘ φ = -θ ∘ φ²`.
    pub fn check(&self, s: &Structure, tol: f64) -> ValidationReport {
        let mut r = ValidationReport::new(tol);
        let scale = max_abs_vector(&self.theta).max(max_abs_vector(&self.theta_star));
        r.push(
            "omega(xi) = 0",
            scaled(self.omega.dot(s.xi()).abs(), max_abs_vector(&self.omega)),
        );
        let lhs = s.phi().transpose() * &self.theta_star;
        let rhs = -(s.phi2().transpose() * &self.theta);
        r.push(
            "theta* o phi = -theta o phi^2",
            scaled(max_abs_vector(&(lhs - rhs)), scale),
        );
        r
    }
}

/// Metric traces of `F` over the horizontal part of an adapted basis
/// `{e_1..e_2n; ξ}`.
pub fn associated_forms(f: &FTensor, s: &Structure) -> AssociatedForms {
    forms_of(f.tensor(), s)
}

pub(crate) fn forms_of(f: &Tensor3, s: &Structure) -> AssociatedForms {
    let ginv = s.horizontal_inverse();
    let theta = trace_first_pair(f, &ginv);
    let theta_star = trace_first_pair(&f.pull_slot(1, s.phi()), &ginv);
    let fxi = f.contract(0, s.xi());
    let omega = fxi.transpose() * s.xi();
    AssociatedForms {
        theta,
        theta_star,
        omega,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::DEFAULT_TOL;

    #[test]
    fn zero_is_admissible_with_zero_forms() {
        let s = Structure::canonical(1).unwrap();
        let z = FTensor::zero(&s);
        let r = check_admissible(z.tensor(), &s, DEFAULT_TOL);
        assert!(r.is_ok());
        assert_eq!(r.max_residual(), 0.0);
        let forms = associated_forms(&z, &s);
        assert_eq!(max_abs_vector(&forms.theta), 0.0);
        assert_eq!(max_abs_vector(&forms.theta_star), 0.0);
        assert_eq!(max_abs_vector(&forms.omega), 0.0);
    }

    #[test]
    fn asymmetric_perturbation_is_rejected() {
        let s = Structure::canonical(1).unwrap();
        let mut t = Tensor3::zeros(3);
        t.set(0, 0, 2, 1.0);
        let r = check_admissible(&t, &s, DEFAULT_TOL);
        assert!(!r.is_ok());
        assert!(!r.get(SYMMETRY).unwrap().passed);
        assert!(matches!(
            FTensor::new(t, &s, DEFAULT_TOL),
            Err(Error::InadmissibleF { .. })
        ));
    }

    #[test]
    fn wrong_dimension() {
        let s = Structure::canonical(1).unwrap();
        assert!(matches!(
            FTensor::new(Tensor3::zeros(5), &s, DEFAULT_TOL),
            Err(Error::ShapeMismatch { .. })
        ));
    }
}
