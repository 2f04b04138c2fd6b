//! The Nijenhuis tensor `N = [φ, φ] + dη ⊗ ξ`, written through `F`.

use crate::fundamental::FTensor;
use crate::structure::Structure;
use crate::tensor::{scaled, Tensor3};
use crate::validation::ValidationReport;

/// `N(x,y,z) = {F(φx,y,z) - F(x,y,φz) + F(x,φy,ξ)η(z)}_[x↔y]`.
pub fn nijenhuis_from_f(f: &FTensor, s: &Structure) -> Tensor3 {
    nijenhuis_of(f.tensor(), s)
}

pub(crate) fn nijenhuis_of(f: &Tensor3, s: &Structure) -> Tensor3 {
    let phi = s.phi();
    let a = &f.pull_slot(0, phi) - &f.pull_slot(2, phi);
    let b = Tensor3::outer_last(&f.pull_slot(1, phi).contract(2, s.xi()), s.eta());
    (&a + &b).antisym_first_pair()
}

/// `N(φx, φy, z)`.
pub fn nijenhuis_phiphi(n: &Tensor3, s: &Structure) -> Tensor3 {
    n.pull_slot(0, s.phi()).pull_slot(1, s.phi())
}

/// Whether `N(φ·,φ·)` vanishes, i.e. whether `F` lies in `U₀`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct U0Verdict {
    pub in_u0: bool,
    /// `max|N(φx,φy,z)|` relative to `max(1, max|F|)`.
    pub residual: f64,
}

pub fn u0_predicate(f: &FTensor, s: &Structure, tol: f64) -> U0Verdict {
    let n = nijenhuis_from_f(f, s);
    let residual = scaled(nijenhuis_phiphi(&n, s).max_abs(), f.tensor().max_abs());
    U0Verdict {
        in_u0: residual < tol,
        residual,
    }
}

/// The five algebraic identities every Nijenhuis tensor of an admissible `F` obeys:
///
/// `N(φx,φy,φz) = -N(φ²x,φ²y,φz) = N(φx,φ²y,φ²z)` and
/// `N(φ²x,φy,φz) = N(φx,φ²y,φz) = -N(φx,φy,φ²z)`.
pub fn nijenhuis_identities(n: &Tensor3, s: &Structure, tol: f64) -> ValidationReport {
    let p = s.phi();
    let p2 = s.phi2();
    let with =
        |a: &nalgebra::DMatrix<f64>, b: &nalgebra::DMatrix<f64>, c: &nalgebra::DMatrix<f64>| {
            n.pull_slot(0, a).pull_slot(1, b).pull_slot(2, c)
        };
    let ppp = with(p, p, p);
    let qqp = with(p2, p2, p);
    let pqq = with(p, p2, p2);
    let qpp = with(p2, p, p);
    let pqp = with(p, p2, p);
    let ppq = with(p, p, p2);
    let scale = n.max_abs();
    let mut r = ValidationReport::new(tol);
    let mut push = |name: &str, t: Tensor3| r.push(name, scaled(t.max_abs(), scale));
    push("N(px,py,pz) = -N(p2x,p2y,pz)", &ppp + &qqp);
    push("N(px,py,pz) = N(px,p2y,p2z)", &ppp - &pqq);
    push("N(p2x,py,pz) = N(px,p2y,pz)", &qpp - &pqp);
    push("N(p2x,py,pz) = -N(px,py,p2z)", &qpp + &ppq);
    push("N(x,y,z) = -N(y,x,z)", n + &n.permuted([1, 0, 2]));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::DEFAULT_TOL;

    #[test]
    fn zero_f_gives_zero_n() {
        let s = Structure::canonical(2).unwrap();
        let n = nijenhuis_from_f(&FTensor::zero(&s), &s);
        assert_eq!(n.max_abs(), 0.0);
        assert_eq!(nijenhuis_phiphi(&n, &s).max_abs(), 0.0);
        let v = u0_predicate(&FTensor::zero(&s), &s, DEFAULT_TOL);
        assert!(v.in_u0);
    }
}
