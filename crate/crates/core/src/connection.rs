//! Natural connections as difference tensors from the Levi-Civita connection.
//!
//! A connection `D` is stored as `Q(x,y,z) = g(D_x y - ∇_x y, z)`; the
//! Levi-Civita connection itself is the zero tensor. Torsions are stored as
//! `T(x,y,z) = g(T(x,y), z)`.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::fundamental::{trace_last_pair, FTensor};
use crate::nijenhuis::nijenhuis_of;
use crate::structure::Structure;
use crate::tensor::{max_abs_vector, scaled, Tensor3};
use crate::validation::ValidationReport;

pub const NATURAL_PHI: &str = "Q(x,y,phi z) - Q(x,phi y,z) = F(x,y,z)";
pub const NATURAL_METRIC: &str = "Q(x,y,z) = -Q(x,z,y)";

/// Residuals of the two conditions making `∇ + Q` a natural connection.
pub fn natural_connection_check(
    q: &Tensor3,
    f: &FTensor,
    s: &Structure,
    tol: f64,
) -> ValidationReport {
    let f = f.tensor();
    let lhs = &q.pull_slot(2, s.phi()) - &q.pull_slot(1, s.phi());
    let scale = q.max_abs().max(f.max_abs());
    let mut r = ValidationReport::new(tol);
    r.push(NATURAL_PHI, scaled((&lhs - f).max_abs(), scale));
    r.push(
        NATURAL_METRIC,
        scaled((q + &q.permuted([0, 2, 1])).max_abs(), scale),
    );
    r
}

/// `Q⁰(x,y,z) = ½{F(x,φy,z) + η(z)F(x,φy,ξ) - 2η(y)F(x,φz,ξ)}`.
pub fn q0_phib(f: &FTensor, s: &Structure) -> Tensor3 {
    let f_phi = f.tensor().pull_slot(1, s.phi());
    let m = f_phi.contract(2, s.xi());
    let eta = s.eta();
    Tensor3::from_fn(s.d(), |x, y, z| {
        0.5 * (f_phi.get(x, y, z) + eta[z] * m[(x, y)] - 2.0 * eta[y] * m[(x, z)])
    })
}

/// `T⁰(x,y,z) = ½{F(x,φy,z) + η(z)F(x,φy,ξ) + 2η(x)F(y,φz,ξ)}_[x↔y]`.
pub fn t0_phib(f: &FTensor, s: &Structure) -> Tensor3 {
    let f_phi = f.tensor().pull_slot(1, s.phi());
    let m = f_phi.contract(2, s.xi());
    let eta = s.eta();
    Tensor3::from_fn(s.d(), |x, y, z| {
        0.5 * (f_phi.get(x, y, z) + eta[z] * m[(x, y)] + 2.0 * eta[x] * m[(y, z)])
    })
    .antisym_first_pair()
}

/// `N(φ²z,φ²y,φ²x) + 2N(φz,φy,ξ)η(x)`, the Nijenhuis correction separating
/// the φ-canonical connection from the φB-connection.
fn nijenhuis_correction(f: &FTensor, s: &Structure) -> Tensor3 {
    let n = nijenhuis_of(f.tensor(), s);
    let p2 = s.phi2();
    let n2 = n.pull_slot(0, p2).pull_slot(1, p2).pull_slot(2, p2);
    let npp_xi = n
        .pull_slot(0, s.phi())
        .pull_slot(1, s.phi())
        .contract(2, s.xi());
    let eta = s.eta();
    Tensor3::from_fn(s.d(), |x, y, z| {
        n2.get(z, y, x) + 2.0 * npp_xi[(z, y)] * eta[x]
    })
}

/// `Q'(x,y,z) = Q⁰(x,y,z) - ⅛{N(φ²z,φ²y,φ²x) + 2N(φz,φy,ξ)η(x)}`.
pub fn q_canonical(f: &FTensor, s: &Structure) -> Tensor3 {
    &q0_phib(f, s) - &nijenhuis_correction(f, s).scale(0.125)
}

/// `T'(x,y,z) = T⁰(x,y,z) - ⅛{N(φ²z,φ²y,φ²x) + 2N(φz,φy,ξ)η(x)}_[x↔y]`.
pub fn t_canonical(f: &FTensor, s: &Structure) -> Tensor3 {
    &t0_phib(f, s) - &nijenhuis_correction(f, s).antisym_first_pair().scale(0.125)
}

/// The defining identity of a φ-canonical torsion, evaluated on all basis
/// triples; it vanishes exactly for φ-canonical torsions.
pub fn phi_canonical_defect(t: &Tensor3, s: &Structure) -> Tensor3 {
    let xi = s.xi();
    let eta = s.eta();
    let a = t - &t.pull_slot(1, s.phi()).pull_slot(2, s.phi());
    let a_xi = a.contract(0, xi);
    let t_xi_mid = t.contract(1, xi);
    let t_xi_last = t.contract(2, xi);
    let t_hat = &t_xi_mid * xi;
    let e = Tensor3::from_fn(s.d(), |x, y, z| {
        a.get(x, y, z)
            - eta[x] * a_xi[(y, z)]
            - eta[y] * (t_xi_mid[(x, z)] - t_xi_last[(x, z)] - eta[x] * t_hat[z])
    });
    e.antisym_last_pair()
}

pub fn phi_canonical_identity_check(t: &Tensor3, s: &Structure) -> f64 {
    scaled(phi_canonical_defect(t, s).max_abs(), t.max_abs())
}

/// `Q(x,y,z) = ½{T(x,y,z) - T(y,z,x) + T(z,x,y)}`, the connection of a
/// natural connection recovered from its torsion.
pub fn hayden_q_from_t(t: &Tensor3) -> Tensor3 {
    (&(t - &t.permuted([1, 2, 0])) + &t.permuted([2, 0, 1])).scale(0.5)
}

/// Torsion forms `t`, `t*`, `t̂`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorsionForms {
    pub t: DVector<f64>,
    pub t_star: DVector<f64>,
    pub t_hat: DVector<f64>,
}

impl TorsionForms {
    pub fn max_abs(&self) -> f64 {
        max_abs_vector(&self.t)
            .max(max_abs_vector(&self.t_star))
            .max(max_abs_vector(&self.t_hat))
    }
}

/// `t(x) = g^{ij}T(x,e_i,e_j)`, `t*(x) = g^{ij}T(x,e_i,φe_j)`, `t̂(x) = T(x,ξ,ξ)`,
/// with `i, j` running over the horizontal part of an adapted basis.
pub fn torsion_forms(t: &Tensor3, s: &Structure) -> TorsionForms {
    let ginv = s.horizontal_inverse();
    TorsionForms {
        t: trace_last_pair(t, &ginv),
        t_star: trace_last_pair(&t.pull_slot(2, s.phi()), &ginv),
        t_hat: t.contract(1, s.xi()) * s.xi(),
    }
}

/// Natural connections of interest, by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConnectionKind {
    PhiB,
    PhiCanonical,
}

impl ConnectionKind {
    pub fn delta(self, f: &FTensor, s: &Structure) -> Tensor3 {
        match self {
            Self::PhiB => q0_phib(f, s),
            Self::PhiCanonical => q_canonical(f, s),
        }
    }

    pub fn torsion(self, f: &FTensor, s: &Structure) -> Tensor3 {
        match self {
            Self::PhiB => t0_phib(f, s),
            Self::PhiCanonical => t_canonical(f, s),
        }
    }
}
