//! The general contactly conformal group `G` acting at a point.
//!
//! A group element is the jet `(u, v, w; du, dv, dw)` of three functions at
//! the point. It acts by
//!
//! ```text
//! ξ̄ = e^{-w} ξ,   η̄ = e^{w} η,
//! ḡ(x,y) = α g(x,y) + β g(x,φy) + (γ - α) η(x)η(y),
//! α = e^{2u} cos 2v,   β = e^{2u} sin 2v,   γ = e^{2w},
//! ```
//!
//! leaving `φ` unchanged. The subgroup `G₀` is cut out by conditions on
//! `du, dv, dw` only.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classes::{ClassSet, ClassSpaces, MEMBER_THRESHOLD};
use crate::connection::{q0_phib, q_canonical, t_canonical};
use crate::error::{Error, Result};
use crate::fundamental::{associated_forms, FTensor};
use crate::nijenhuis::{nijenhuis_of, nijenhuis_phiphi};
use crate::structure::Structure;
use crate::tensor::{lower_with_g, max_abs_vector, scaled, Metric, Tensor3};
use crate::validation::ValidationReport;

/// Admissibility tolerance applied to `F̄`.
pub const IMAGE_TOL: f64 = 1e-8;

/// Pointwise data of an element of `G`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConformalPointData {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub du: DVector<f64>,
    pub dv: DVector<f64>,
    pub dw: DVector<f64>,
}

impl ConformalPointData {
    pub fn new(
        u: f64,
        v: f64,
        w: f64,
        du: DVector<f64>,
        dv: DVector<f64>,
        dw: DVector<f64>,
    ) -> Result<Self> {
        let d = du.len();
        if dv.len() != d || dw.len() != d {
            return Err(Error::ShapeMismatch {
                what: "conformal differentials".into(),
                expected: d.to_string(),
                found: format!("{}/{}", dv.len(), dw.len()),
            });
        }
        let finite = [u, v, w].iter().all(|x| x.is_finite())
            && du
                .iter()
                .chain(dv.iter())
                .chain(dw.iter())
                .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("non-finite conformal data".into()));
        }
        Ok(Self {
            u,
            v,
            w,
            du,
            dv,
            dw,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            u: 0.0,
            v: 0.0,
            w: 0.0,
            du: DVector::zeros(d),
            dv: DVector::zeros(d),
            dw: DVector::zeros(d),
        }
    }

    pub fn dim(&self) -> usize {
        self.du.len()
    }

    pub fn alpha(&self) -> f64 {
        (2.0 * self.u).exp() * (2.0 * self.v).cos()
    }

    pub fn beta(&self) -> f64 {
        (2.0 * self.u).exp() * (2.0 * self.v).sin()
    }

    pub fn gamma(&self) -> f64 {
        (2.0 * self.w).exp()
    }

    /// `dα = 2e^{2u}(cos 2v du - sin 2v dv)`.
    pub fn d_alpha(&self) -> DVector<f64> {
        let k = 2.0 * (2.0 * self.u).exp();
        (&self.du * (2.0 * self.v).cos() - &self.dv * (2.0 * self.v).sin()) * k
    }

    /// `dβ = 2e^{2u}(sin 2v du + cos 2v dv)`.
    pub fn d_beta(&self) -> DVector<f64> {
        let k = 2.0 * (2.0 * self.u).exp();
        (&self.du * (2.0 * self.v).sin() + &self.dv * (2.0 * self.v).cos()) * k
    }

    /// `dγ = 2e^{2w} dw`.
    pub fn d_gamma(&self) -> DVector<f64> {
        &self.dw * (2.0 * self.gamma())
    }

    /// Pointwise composition: exponents and differentials add.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            u: self.u + other.u,
            v: self.v + other.v,
            w: self.w + other.w,
            du: &self.du + &other.du,
            dv: &self.dv + &other.dv,
            dw: &self.dw + &other.dw,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            u: -self.u,
            v: -self.v,
            w: -self.w,
            du: -&self.du,
            dv: -&self.dv,
            dw: -&self.dw,
        }
    }

    /// A random element of `G` with `|u|, |v|, |w| < 0.5` and differentials in `(-1, 1)`.
    pub fn random(d: usize, rng: &mut impl Rng) -> Self {
        let mut cov = || DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
        let (du, dv, dw) = (cov(), cov(), cov());
        Self {
            u: rng.gen_range(-0.5..0.5),
            v: rng.gen_range(-0.5..0.5),
            w: rng.gen_range(-0.5..0.5),
            du,
            dv,
            dw,
        }
    }
}

/// The image `(φ, ξ̄, η̄, ḡ)` of a structure.
pub fn transform_structure(s: &Structure, c: &ConformalPointData) -> Result<Structure> {
    let (alpha, beta, gamma) = (c.alpha(), c.beta(), c.gamma());
    let gbar = s.g().matrix() * alpha + s.g_phi() * beta + s.eta_eta() * (gamma - alpha);
    let gbar = Metric::new(gbar)?;
    s.with_contact_data(s.xi() * (-c.w).exp(), s.eta() * c.w.exp(), gbar)
}

/// Names of the five `G₀` conditions.
pub const G0_CONDITIONS: [&str; 5] = [
    "du o phi^2 + dv o phi = 0",
    "du o phi - dv o phi^2 = 0",
    "du(xi) = 0",
    "dv(xi) = 0",
    "dw o phi = 0",
];

/// Residuals of the conditions defining `G₀`.
pub fn g0_residuals(c: &ConformalPointData, s: &Structure) -> [f64; 5] {
    let pt = s.phi().transpose();
    let p2t = s.phi2().transpose();
    let scale = max_abs_vector(&c.du)
        .max(max_abs_vector(&c.dv))
        .max(max_abs_vector(&c.dw));
    let r = |v: DVector<f64>| scaled(max_abs_vector(&v), scale);
    [
        r(&p2t * &c.du + &pt * &c.dv),
        r(&pt * &c.du - &p2t * &c.dv),
        scaled(c.du.dot(s.xi()).abs(), scale),
        scaled(c.dv.dot(s.xi()).abs(), scale),
        r(&pt * &c.dw),
    ]
}

pub fn g0_predicate(c: &ConformalPointData, s: &Structure, tol: f64) -> ValidationReport {
    let mut r = ValidationReport::new(tol);
    for (name, res) in G0_CONDITIONS.iter().zip(g0_residuals(c, s)) {
        r.push(*name, res);
    }
    r
}

/// A random element of `G₀`: `dv` horizontal, `du = dv∘φ`, `dw = k η`.
pub fn g0_generator(s: &Structure, seed: u64) -> ConformalPointData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    g0_random(s, &mut rng)
}

pub fn g0_random(s: &Structure, rng: &mut impl Rng) -> ConformalPointData {
    let d = s.d();
    let raw = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
    let dv = -(s.phi2().transpose() * raw);
    let du = s.phi().transpose() * &dv;
    let dw = s.eta() * rng.gen_range(-1.0..1.0);
    ConformalPointData {
        u: rng.gen_range(-0.5..0.5),
        v: rng.gen_range(-0.5..0.5),
        w: rng.gen_range(-0.5..0.5),
        du,
        dv,
        dw,
    }
}

/// `F(a x, b y, c z)` for optional endomorphisms in each slot.
fn pulled(
    f: &Tensor3,
    a: Option<&DMatrix<f64>>,
    b: Option<&DMatrix<f64>>,
    c: Option<&DMatrix<f64>>,
) -> Tensor3 {
    let mut t = f.clone();
    for (slot, m) in [a, b, c].into_iter().enumerate() {
        if let Some(m) = m {
            t = t.pull_slot(slot, m);
        }
    }
    t
}

/// The right-hand side of the Levi-Civita transformation law divided by
/// `2(α²+β²)`, i.e. `g(∇̄_x y - ∇_x y, z)` as a covariant tensor.
pub fn levi_civita_difference(f: &FTensor, s: &Structure, c: &ConformalPointData) -> Tensor3 {
    let d = s.d();
    let (a, b, gm) = (c.alpha(), c.beta(), c.gamma());
    let sq = a * a + b * b;
    let (da, db, dg) = (c.d_alpha(), c.d_beta(), c.d_gamma());
    let (phi, phi2, xi, eta) = (s.phi(), s.phi2(), s.xi(), s.eta());
    let pt = phi.transpose();
    let p2t = phi2.transpose();
    let (da_p, da_p2) = (&pt * &da, &p2t * &da);
    let (db_p, db_p2) = (&pt * &db, &p2t * &db);
    let (dg_p, dg_p2) = (&pt * &dg, &p2t * &dg);
    let (da_xi, db_xi, dg_xi) = (da.dot(xi), db.dot(xi), dg.dot(xi));

    let t = f.tensor();
    let f_xy_p2z = pulled(t, None, None, Some(phi2));
    let f_xy_pz = pulled(t, None, None, Some(phi));
    let f_p2z = pulled(t, Some(phi2), None, None);
    let f_pz = pulled(t, Some(phi), None, None);
    let f_xy_xi = t.contract(2, xi);
    let f_xi_xy = t.contract(0, xi);
    let f_p2_p_xi = pulled(t, Some(phi2), Some(phi), None).contract(2, xi);
    let f_x_p_xi = pulled(t, None, Some(phi), None).contract(2, xi);
    let f_x_p2_xi = pulled(t, None, Some(phi2), None).contract(2, xi);
    let f_p_p_xi = pulled(t, Some(phi), Some(phi), None).contract(2, xi);

    let g_phi = s.g_phi();
    let g_pp = s.g_phiphi();

    let inner = Tensor3::from_fn(d, |x, y, z| {
        let mut r = -a * b * (2.0 * f_xy_p2z.get(x, y, z) - f_p2z.get(z, x, y));
        r -= b * b * (2.0 * f_xy_pz.get(x, y, z) - f_pz.get(z, x, y));
        r += b / gm * sq * (2.0 * f_xy_xi[(x, y)] - f_xi_xy[(x, y)]) * eta[z];
        r += 2.0 * (a / gm - 1.0) * sq * f_p2_p_xi[(x, y)] * eta[z];
        r += 2.0 * a * (gm - a) * (f_x_p_xi[(x, z)] + f_p2_p_xi[(z, x)]) * eta[y];
        r -= 2.0 * b * (gm - a) * (f_x_p2_xi[(x, z)] - f_p_p_xi[(z, x)]) * eta[y];
        r += -2.0 * (a * da[x] + b * db[x]) * g_pp[(y, z)]
            + 2.0 * (a * db[x] - b * da[x]) * g_phi[(y, z)];
        r += -(a * da_p2[z] + b * da_p[z]) * g_pp[(x, y)]
            + (a * db_p2[z] + b * db_p[z]) * g_phi[(x, y)];
        r += (a * dg_p2[z] + b * dg_p[z]) * eta[x] * eta[y];
        r += sq / gm * (da_xi * g_pp[(x, y)] - db_xi * g_phi[(x, y)]) * eta[z];
        r += sq / gm * (2.0 * dg[x] * eta[y] - dg_xi * eta[x] * eta[y]) * eta[z];
        r
    });
    inner.sym_first_pair().scale(0.25 / sq)
}

/// `F̄`, the fundamental tensor of the transformed structure.
pub fn transform_f(f: &FTensor, s: &Structure, c: &ConformalPointData) -> Result<FTensor> {
    let d = s.d();
    let (a, b, gm) = (c.alpha(), c.beta(), c.gamma());
    let (da, db, dg) = (c.d_alpha(), c.d_beta(), c.d_gamma());
    let (phi, xi, eta) = (s.phi(), s.xi(), s.eta());
    let pt = phi.transpose();
    let (da_p, db_p, dg_p) = (&pt * &da, &pt * &db, &pt * &dg);

    let t = f.tensor();
    let f_py = pulled(t, Some(phi), None, None);
    let f_pz = pulled(t, None, Some(phi), None);
    let f_xy_xi = t.contract(2, xi);
    let f_x_py_xi = pulled(t, None, Some(phi), None).contract(2, xi);
    let f_pp_xi = pulled(t, Some(phi), Some(phi), None).contract(2, xi);
    let g_phi = s.g_phi();
    let g_pp = s.g_phiphi();

    let bracket = Tensor3::from_fn(d, |x, y, z| {
        let mut r = b * (f_py.get(y, z, x) - f_pz.get(y, z, x) + f_x_py_xi[(x, y)] * eta[z]);
        r += (gm - a)
            * ((f_xy_xi[(x, y)] + f_pp_xi[(y, x)]) * eta[z]
                + (f_xy_xi[(y, z)] + f_pp_xi[(z, y)]) * eta[x]);
        r -= (da_p[y] + db[y]) * g_pp[(x, z)];
        r -= (da[y] - db_p[y]) * g_phi[(x, z)];
        r += eta[x] * eta[y] * dg_p[z];
        r
    });
    let fbar = &t.scale(a) + &bracket.sym_last_pair().scale(0.5);
    let sbar = transform_structure(s, c)?;
    FTensor::new(fbar, &sbar, IMAGE_TOL)
}

/// `N̄(φx,φy,z) = αN(φx,φy,z) + βN(φx,φy,φz) + (γ-α)N(φx,φy,ξ)η(z)`.
pub fn transform_n_phiphi(f: &FTensor, s: &Structure, c: &ConformalPointData) -> Tensor3 {
    let npp = nijenhuis_phiphi(&nijenhuis_of(f.tensor(), s), s);
    let (a, b, gm) = (c.alpha(), c.beta(), c.gamma());
    let xi_part = Tensor3::outer_last(&npp.contract(2, s.xi()), s.eta());
    &(&npp.scale(a) + &npp.pull_slot(2, s.phi()).scale(b)) + &xi_part.scale(gm - a)
}

/// `g(∇̄⁰_x y - ∇⁰_x y, z)` for the φB-connections of the two structures.
pub fn phib_difference(f: &FTensor, s: &Structure, c: &ConformalPointData) -> Tensor3 {
    let d = s.d();
    let n = nijenhuis_of(f.tensor(), s);
    let (phi, phi2, xi, eta) = (s.phi(), s.phi2(), s.xi(), s.eta());
    let n_ppp = pulled(&n, Some(phi), Some(phi), Some(phi));
    let n_qqq = pulled(&n, Some(phi2), Some(phi2), Some(phi2));
    let n_qp_xi = pulled(&n, Some(phi2), Some(phi), None).contract(2, xi);
    let n_pp_xi = pulled(&n, Some(phi), Some(phi), None).contract(2, xi);
    let (v, e) = (c.v, (2.0 * (c.w - c.u)).exp());
    let k1 = (4.0 * v).sin() / 8.0;
    let k2 = -(2.0 * v).sin().powi(2) / 4.0;
    let k3 = -e * (2.0 * v).sin() / 4.0;
    let k4 = -(1.0 - e * (2.0 * v).cos()) / 4.0;
    let n_part = Tensor3::from_fn(d, |x, y, z| {
        k1 * n_ppp.get(z, y, x)
            + k2 * n_qqq.get(z, y, x)
            + k3 * n_qp_xi[(z, y)] * eta[x]
            + k4 * n_pp_xi[(z, y)] * eta[x]
    });
    &n_part + &differential_part(s, c)
}

/// The `du, dv, dw` terms shared by the φB and φ-canonical transformation laws,
/// lowered with `g`.
fn differential_part(s: &Structure, c: &ConformalPointData) -> Tensor3 {
    let (phi, phi2, eta) = (s.phi(), s.phi2(), s.eta());
    let pt = phi.transpose();
    let p2t = phi2.transpose();
    let (du_p, du_p2) = (&pt * &c.du, &p2t * &c.du);
    let (dv_p, dv_p2) = (&pt * &c.dv, &p2t * &c.dv);
    let g_phi = s.g_phi();
    let g_pp = s.g_phiphi();
    let (du, dv, dw) = (&c.du, &c.dv, &c.dw);
    Tensor3::from_fn(s.d(), |x, y, z| {
        -du[x] * g_pp[(y, z)]
            + dv[x] * g_phi[(y, z)]
            + dw[x] * eta[y] * eta[z]
            + 0.5 * (du_p2[y] - dv_p[y]) * g_pp[(x, z)]
            - 0.5 * (du_p[y] + dv_p2[y]) * g_phi[(x, z)]
            - 0.5 * (du_p2[z] - dv_p[z]) * g_pp[(x, y)]
            + 0.5 * (du_p[z] + dv_p2[z]) * g_phi[(x, y)]
    })
}

/// Components of `∇̄'_x y - ∇'_x y` for the φ-canonical connections.
///
/// The result is vector-valued: `result(x, y, k)` is the `k`-th component of
/// the difference applied to `(e_x, e_y)`.
pub fn canonical_difference(s: &Structure, c: &ConformalPointData) -> Tensor3 {
    let (phi, phi2, xi, eta) = (s.phi(), s.phi2(), s.xi(), s.eta());
    let pt = phi.transpose();
    let p2t = phi2.transpose();
    let (du_p, du_p2) = (&pt * &c.du, &p2t * &c.du);
    let (dv_p, dv_p2) = (&pt * &c.dv, &p2t * &c.dv);
    let p = s.g().sharp(&c.du);
    let q = s.g().sharp(&c.dv);
    let w1 = phi2 * &p - phi * &q;
    let w2 = phi * &p + phi2 * &q;
    let g_phi = s.g_phi();
    let g_pp = s.g_phiphi();
    let (du, dv, dw) = (&c.du, &c.dv, &c.dw);
    Tensor3::from_fn(s.d(), |x, y, k| {
        -du[x] * phi2[(k, y)]
            + dv[x] * phi[(k, y)]
            + dw[x] * eta[y] * xi[k]
            + 0.5
                * ((du_p2[y] - dv_p[y]) * phi2[(k, x)]
                    - (du_p[y] + dv_p2[y]) * phi[(k, x)]
                    - g_pp[(x, y)] * w1[k]
                    + g_phi[(x, y)] * w2[k])
    })
}

/// The shortened form of [`canonical_difference`] valid on `G₀`.
pub fn canonical_difference_g0(s: &Structure, c: &ConformalPointData) -> Tensor3 {
    let (phi, phi2, xi, eta) = (s.phi(), s.phi2(), s.xi(), s.eta());
    let p = s.g().sharp(&c.du);
    let q = s.g().sharp(&c.dv);
    let dw_xi = c.dw.dot(xi);
    let g_phi = s.g_phi();
    let g_pp = s.g_phiphi();
    let (du, dv) = (&c.du, &c.dv);
    Tensor3::from_fn(s.d(), |x, y, k| {
        -du[x] * phi2[(k, y)] + dv[x] * phi[(k, y)] + dw_xi * eta[x] * eta[y] * xi[k]
            - du[y] * phi2[(k, x)]
            + dv[y] * phi[(k, x)]
            + g_pp[(x, y)] * p[k]
            - g_phi[(x, y)] * q[k]
    })
}

/// Components of `T̄'(x, y)` given the φ-canonical torsion `T'` (lowered with `g`).
///
/// The result is vector-valued like [`canonical_difference`].
pub fn transform_torsion(t: &Tensor3, s: &Structure, c: &ConformalPointData) -> Tensor3 {
    let (phi, phi2, xi, eta) = (s.phi(), s.phi2(), s.xi(), s.eta());
    let pt = phi.transpose();
    let p2t = phi2.transpose();
    let (du_p, du_p2) = (&pt * &c.du, &p2t * &c.du);
    let (dv_p, dv_p2) = (&pt * &c.dv, &p2t * &c.dv);
    let (du_xi, dv_xi) = (c.du.dot(xi), c.dv.dot(xi));
    let dw = &c.dw;
    let half = Tensor3::from_fn(s.d(), |x, y, k| {
        2.0 * dw[x] * eta[y] * xi[k]
            + (du_p2[x] + dv_p[x] - 2.0 * du_xi * eta[x]) * phi2[(k, y)]
            + (du_p[x] - dv_p2[x] + 2.0 * dv_xi * eta[x]) * phi[(k, y)]
    });
    &t.raise_last(s.g()) + &half.antisym_first_pair().scale(0.5)
}

/// A transformed structure together with the image of `F`.
#[derive(Clone, Debug)]
pub struct ConformalImage {
    pub structure: Structure,
    pub f: FTensor,
}

pub fn transform(f: &FTensor, s: &Structure, c: &ConformalPointData) -> Result<ConformalImage> {
    Ok(ConformalImage {
        structure: transform_structure(s, c)?,
        f: transform_f(f, s, c)?,
    })
}

/// `N(φ·,φ·)` as a vector-valued map, raised with the metric of `s`.
pub fn n_phiphi_vector(f: &FTensor, s: &Structure) -> Tensor3 {
    nijenhuis_phiphi(&nijenhuis_of(f.tensor(), s), s).raise_last(s.g())
}

/// The φ-canonical torsion as a vector-valued map.
pub fn canonical_torsion_vector(f: &FTensor, s: &Structure) -> Tensor3 {
    t_canonical(f, s).raise_last(s.g())
}

/// The φ-canonical connection minus Levi-Civita as a vector-valued map.
pub fn canonical_delta_vector(f: &FTensor, s: &Structure) -> Tensor3 {
    q_canonical(f, s).raise_last(s.g())
}

/// The φB-connection minus Levi-Civita as a vector-valued map.
pub fn phib_delta_vector(f: &FTensor, s: &Structure) -> Tensor3 {
    q0_phib(f, s).raise_last(s.g())
}

/// Lower a vector-valued map with `g`.
pub fn lower(map: &Tensor3, s: &Structure) -> Tensor3 {
    lower_with_g(map, s.g())
}

/// Outcome of transforming one `F` by one group element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceTrial {
    pub in_g0: bool,
    pub g0_residual: f64,
    /// Worst structural identity of the transformed structure.
    pub structure_residual: f64,
    /// `N̄(φ·,φ·)` against `N(φ·,φ·)` as vector-valued maps.
    pub n_residual: f64,
    /// `T̄'` against `T'` as vector-valued maps.
    pub t_residual: f64,
    /// Largest change of `θ`, `θ*`, `ω`.
    pub forms_residual: f64,
    pub class_before: ClassSet,
    pub class_after: ClassSet,
    /// Invariance statements that apply to this element and fail.
    pub violations: Vec<String>,
}

impl InvarianceTrial {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Transform `f` by `c` and measure every invariant the theory asserts:
/// `N(φ·,φ·)` for all of `G`; `T'`, the forms and the class for `G₀`.
pub fn invariance_trial(
    f: &FTensor,
    s: &Structure,
    c: &ConformalPointData,
    tol: f64,
) -> Result<InvarianceTrial> {
    let g0 = g0_residuals(c, s).into_iter().fold(0.0, f64::max);
    let in_g0 = g0 <= tol;
    let image = transform(f, s, c)?;
    let sbar = &image.structure;
    let structure_residual = sbar.validate(tol).max_residual();

    let rel = |a: &Tensor3, b: &Tensor3| scaled((a - b).max_abs(), a.max_abs().max(b.max_abs()));
    let n_residual = rel(&n_phiphi_vector(&image.f, sbar), &n_phiphi_vector(f, s));
    let t_residual = rel(
        &canonical_torsion_vector(&image.f, sbar),
        &canonical_torsion_vector(f, s),
    );

    let a = associated_forms(f, s);
    let b = associated_forms(&image.f, sbar);
    let forms_residual = [
        (&a.theta, &b.theta),
        (&a.theta_star, &b.theta_star),
        (&a.omega, &b.omega),
    ]
    .iter()
    .map(|(x, y)| scaled(max_abs_vector(&(*x - *y)), max_abs_vector(x)))
    .fold(0.0, f64::max);

    let class_before = ClassSpaces::new(s)?.classify(f, MEMBER_THRESHOLD)?.detected;
    let class_after = ClassSpaces::new(sbar)?
        .classify(&image.f, MEMBER_THRESHOLD)?
        .detected;

    let mut violations = Vec::new();
    if structure_residual > tol {
        violations.push(format!(
            "transformed structure invalid ({structure_residual:.3e})"
        ));
    }
    if n_residual > tol {
        violations.push(format!("N(phi.,phi.) not invariant ({n_residual:.3e})"));
    }
    if in_g0 {
        if t_residual > tol {
            violations.push(format!("T' not invariant under G0 ({t_residual:.3e})"));
        }
        if forms_residual > tol {
            violations.push(format!(
                "theta, theta*, omega not preserved under G0 ({forms_residual:.3e})"
            ));
        }
        if !class_after.is_subset_of(class_before) {
            violations.push(format!(
                "class not preserved under G0: {class_before} -> {class_after}"
            ));
        }
    }
    Ok(InvarianceTrial {
        in_g0,
        g0_residual: g0,
        structure_residual,
        n_residual,
        t_residual,
        forms_residual,
        class_before,
        class_after,
        violations,
    })
}
