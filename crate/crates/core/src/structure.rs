//! The almost contact B-metric structure `(φ, ξ, η, g)` at a point.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tensor::{max_abs_matrix, max_abs_vector, scaled, Dim, Metric, Tensor3, DEFAULT_TOL};
use crate::validation::ValidationReport;

/// Names of the identities checked by [`Structure::validate`].
pub mod identity {
    pub const PHI_XI: &str = "phi(xi) = 0";
    pub const PHI_SQUARED: &str = "phi^2 = -Id + eta(x)xi";
    pub const ETA_PHI: &str = "eta o phi = 0";
    pub const ETA_XI: &str = "eta(xi) = 1";
    pub const B_METRIC: &str = "g(phi x, phi y) = -g(x,y) + eta(x)eta(y)";
    pub const SIGNATURE: &str = "signature (n, n+1)";
}

#[derive(Clone, Debug, PartialEq)]
pub struct Structure {
    dim: Dim,
    phi: DMatrix<f64>,
    phi2: DMatrix<f64>,
    xi: DVector<f64>,
    eta: DVector<f64>,
    g: Metric,
}

impl Structure {
    /// Assemble a structure, checking shapes only. Use [`Structure::validate`]
    /// or [`Structure::validated`] for the structural identities.
    pub fn new(phi: DMatrix<f64>, xi: DVector<f64>, eta: DVector<f64>, g: Metric) -> Result<Self> {
        let d = xi.len();
        let dim = Dim::from_full(d)?;
        let shape = |what: &str, ok: bool, found: String| {
            if ok {
                Ok(())
            } else {
                Err(Error::ShapeMismatch {
                    what: what.into(),
                    expected: format!("dimension {d}"),
                    found,
                })
            }
        };
        shape(
            "phi",
            phi.nrows() == d && phi.ncols() == d,
            format!("{}x{}", phi.nrows(), phi.ncols()),
        )?;
        shape("eta", eta.len() == d, eta.len().to_string())?;
        shape("g", g.dim() == d, g.dim().to_string())?;
        let finite = phi
            .iter()
            .chain(xi.iter())
            .chain(eta.iter())
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Validation("non-finite structure component".into()));
        }
        let phi2 = &phi * &phi;
        Ok(Self {
            dim,
            phi,
            phi2,
            xi,
            eta,
            g,
        })
    }

    /// Like [`Structure::new`] but also rejects structures failing validation.
    pub fn validated(
        phi: DMatrix<f64>,
        xi: DVector<f64>,
        eta: DVector<f64>,
        g: Metric,
        tol: f64,
    ) -> Result<Self> {
        let s = Self::new(phi, xi, eta, g)?;
        let report = s.validate(tol);
        let failed: Vec<String> = report
            .failures()
            .map(|c| format!("{} (residual {:e})", c.name, c.residual))
            .collect();
        if !failed.is_empty() {
            return Err(Error::Validation(failed.join("; ")));
        }
        Ok(s)
    }

    /// The adapted basis `{e_1..e_n, e_{n+1}..e_{2n}, ξ}` with
    /// `φ e_i = e_{n+i}`, `φ e_{n+i} = -e_i` and `g = diag(+1 (n), -1 (n), +1)`.
    pub fn canonical(n: usize) -> Result<Self> {
        let dim = Dim::new(n)?;
        let d = dim.full();
        let mut phi = DMatrix::zeros(d, d);
        for i in 0..n {
            phi[(n + i, i)] = 1.0;
            phi[(i, n + i)] = -1.0;
        }
        let mut xi = DVector::zeros(d);
        xi[2 * n] = 1.0;
        let eta = xi.clone();
        let diag = DVector::from_fn(d, |i, _| if i >= n && i < 2 * n { -1.0 } else { 1.0 });
        let g = Metric::new(DMatrix::from_diagonal(&diag))?;
        Self::new(phi, xi, eta, g)
    }

    /// The canonical structure expressed in a random basis. The change of
    /// basis has singular values in `[0.5, 2]`, so its condition number is
    /// at most 4.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        let d = Dim::new(n)?.full();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_basis_change(d, &mut rng);
        Self::canonical(n)?.change_basis(&p)
    }

    /// Express the structure in the basis whose vectors are the columns of
    /// `p` (old components).
    pub fn change_basis(&self, p: &DMatrix<f64>) -> Result<Self> {
        let d = self.dim.full();
        if p.nrows() != d || p.ncols() != d {
            return Err(Error::ShapeMismatch {
                what: "basis change".into(),
                expected: format!("{d}x{d}"),
                found: format!("{}x{}", p.nrows(), p.ncols()),
            });
        }
        let pinv = p
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidParams("basis change is singular".into()))?;
        let phi = &pinv * &self.phi * p;
        let xi = &pinv * &self.xi;
        let eta = p.transpose() * &self.eta;
        let g = Metric::new(p.transpose() * self.g.matrix() * p)?;
        Self::new(phi, xi, eta, g)
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.dim.n()
    }

    /// Full dimension `2n+1`.
    #[inline]
    pub fn d(&self) -> usize {
        self.dim.full()
    }

    #[inline]
    pub fn phi(&self) -> &DMatrix<f64> {
        &self.phi
    }

    #[inline]
    pub fn phi2(&self) -> &DMatrix<f64> {
        &self.phi2
    }

    #[inline]
    pub fn xi(&self) -> &DVector<f64> {
        &self.xi
    }

    #[inline]
    pub fn eta(&self) -> &DVector<f64> {
        &self.eta
    }

    #[inline]
    pub fn g(&self) -> &Metric {
        &self.g
    }

    /// Basis vector `e_a`.
    pub fn e(&self, a: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.d());
        v[a] = 1.0;
        v
    }

    /// `φ e_a`.
    pub fn phi_e(&self, a: usize) -> DVector<f64> {
        self.phi.column(a).into_owned()
    }

    /// `φ² e_a`.
    pub fn phi2_e(&self, a: usize) -> DVector<f64> {
        self.phi2.column(a).into_owned()
    }

    /// Components of the bilinear form `g(x, φy)`.
    pub fn g_phi(&self) -> DMatrix<f64> {
        self.g.matrix() * &self.phi
    }

    /// Components of `g(φx, φy)`.
    pub fn g_phiphi(&self) -> DMatrix<f64> {
        self.phi.transpose() * self.g.matrix() * &self.phi
    }

    /// `g^{ij}` restricted to the horizontal space `H = ker η`, i.e.
    /// `g⁻¹ - ξ ⊗ ξ`. Traces over a basis `{e_1..e_2n; ξ}` with `i, j ≤ 2n`
    /// use this matrix.
    pub fn horizontal_inverse(&self) -> DMatrix<f64> {
        self.g.inverse() - &self.xi * self.xi.transpose()
    }

    /// Components of `η ⊗ η`.
    pub fn eta_eta(&self) -> DMatrix<f64> {
        &self.eta * self.eta.transpose()
    }

    /// Residuals of the five structural identities plus the signature check.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let d = self.d();
        let n = self.n();
        let mut r = ValidationReport::new(tol);
        let phi_scale = max_abs_matrix(&self.phi);

        let phi_xi = &self.phi * &self.xi;
        r.push(
            identity::PHI_XI,
            scaled(
                max_abs_vector(&phi_xi),
                phi_scale * max_abs_vector(&self.xi),
            ),
        );

        let expect = -DMatrix::<f64>::identity(d, d) + &self.xi * self.eta.transpose();
        r.push(
            identity::PHI_SQUARED,
            scaled(
                max_abs_matrix(&(&self.phi2 - &expect)),
                max_abs_matrix(&self.phi2).max(max_abs_matrix(&expect)),
            ),
        );

        let eta_phi = self.phi.transpose() * &self.eta;
        r.push(
            identity::ETA_PHI,
            scaled(
                max_abs_vector(&eta_phi),
                phi_scale * max_abs_vector(&self.eta),
            ),
        );

        r.push(identity::ETA_XI, (self.eta.dot(&self.xi) - 1.0).abs());

        let lhs = self.g_phiphi();
        let rhs = -self.g.matrix() + self.eta_eta();
        r.push(
            identity::B_METRIC,
            scaled(
                max_abs_matrix(&(&lhs - &rhs)),
                max_abs_matrix(&lhs).max(max_abs_matrix(&rhs)),
            ),
        );

        let (neg, pos) = self.g.signature();
        let off = neg.abs_diff(n) + pos.abs_diff(n + 1);
        r.push_flag(identity::SIGNATURE, off as f64, off == 0);
        r
    }

    pub fn is_valid(&self) -> bool {
        self.validate(DEFAULT_TOL).is_ok()
    }

    /// The associated metric `g̃(x,y) = g(x, φy) + η(x)η(y)`.
    pub fn associated_metric(&self) -> Result<Metric> {
        Metric::new(self.g_phi() + self.eta_eta())
    }

    /// `(φ, ξ, η, g̃)`, itself an almost contact B-metric structure.
    pub fn with_associated_metric(&self) -> Result<Self> {
        let gt = self.associated_metric()?;
        Self::new(self.phi.clone(), self.xi.clone(), self.eta.clone(), gt)
    }

    /// Replace `ξ`, `η`, `g`, keeping `φ`.
    pub fn with_contact_data(
        &self,
        xi: DVector<f64>,
        eta: DVector<f64>,
        g: Metric,
    ) -> Result<Self> {
        Self::new(self.phi.clone(), xi, eta, g)
    }
}

/// Express a covariant 3-tensor in the basis given by the columns of `p`.
pub fn pull_back_tensor(t: &Tensor3, p: &DMatrix<f64>) -> Tensor3 {
    t.pull_slot(0, p).pull_slot(1, p).pull_slot(2, p)
}

/// `U diag(s) V` with `U`, `V` orthogonal and `s ∈ [0.5, 2]`.
pub fn random_basis_change(d: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let mut orth = || {
        let a = DMatrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
        a.qr().q()
    };
    let u = orth();
    let v = orth();
    let s = DVector::from_fn(d, |_, _| rng.gen_range(0.5..2.0));
    u * DMatrix::from_diagonal(&s) * v
}
