//! The eleven basic classes `F₁ … F₁₁` of fundamental tensors.
//!
//! Every class is cut out of the admissible space by linear conditions. For
//! the classes given by an explicit formula (`F₁, F₄, F₅, F₁₀, F₁₁`) the
//! condition is `F = formula(parameters recomputed from F)`; the others are
//! given directly by constraints. [`ClassSpaces`] turns these conditions into
//! orthonormal bases and decomposes arbitrary admissible tensors.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fundamental::{admissibility_defects, forms_of, FTensor};
use crate::linalg::{null_space, operator_matrix, rank};
use crate::structure::Structure;
use crate::tensor::{max_abs_matrix, max_abs_vector, scaled, Tensor3, DEFAULT_TOL};

/// A component counts as present when its norm exceeds this fraction of `‖F‖`.
pub const MEMBER_THRESHOLD: f64 = 1e-7;

/// Reassembly of a decomposition must reproduce `F` to this relative accuracy.
pub const REASSEMBLY_TOL: f64 = 1e-8;

/// Tensors with Frobenius norm at or below this classify as `F₀`.
pub const ZERO_NORM: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasicClass {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
    F10,
    F11,
}

impl BasicClass {
    pub const ALL: [BasicClass; 11] = [
        Self::F1,
        Self::F2,
        Self::F3,
        Self::F4,
        Self::F5,
        Self::F6,
        Self::F7,
        Self::F8,
        Self::F9,
        Self::F10,
        Self::F11,
    ];

    /// Zero-based position in [`BasicClass::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    /// The subscript `i` of `F_i`.
    pub fn number(self) -> usize {
        self.index() + 1
    }

    /// Whether the class is the image of an explicit parameterisation.
    pub fn is_formula_class(self) -> bool {
        matches!(self, Self::F1 | Self::F4 | Self::F5 | Self::F10 | Self::F11)
    }
}

impl fmt::Display for BasicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.number())
    }
}

impl FromStr for BasicClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = s
            .trim()
            .strip_prefix(['F', 'f'])
            .and_then(|r| r.parse::<usize>().ok())
            .filter(|k| (1..=11).contains(k))
            .ok_or_else(|| Error::InvalidParams(format!("unknown basic class {s:?}")))?;
        Ok(Self::ALL[num - 1])
    }
}

/// A direct sum of basic classes. The empty set is the special class `F₀`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassSet(u16);

impl ClassSet {
    pub const F0: ClassSet = ClassSet(0);

    pub fn all() -> Self {
        Self((1 << 11) - 1)
    }

    pub fn single(c: BasicClass) -> Self {
        Self(1 << c.index())
    }

    pub fn of(classes: &[BasicClass]) -> Self {
        classes.iter().fold(Self::F0, |acc, &c| acc.with(c))
    }

    /// `U₀ = F₁⊕F₂⊕F₄⊕F₅⊕F₆⊕F₈⊕F₉⊕F₁₀⊕F₁₁`, where `N(φ·,φ·)` vanishes.
    pub fn u0() -> Self {
        use BasicClass::*;
        Self::of(&[F1, F2, F4, F5, F6, F8, F9, F10, F11])
    }

    pub fn with(self, c: BasicClass) -> Self {
        Self(self.0 | (1 << c.index()))
    }

    pub fn contains(self, c: BasicClass) -> bool {
        self.0 & (1 << c.index()) != 0
    }

    pub fn is_subset_of(self, other: ClassSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_f0(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = BasicClass> {
        BasicClass::ALL
            .into_iter()
            .filter(move |&c| self.contains(c))
    }

    /// The single class, if exactly one.
    pub fn as_single(self) -> Option<BasicClass> {
        let mut it = self.iter();
        match (it.next(), it.next()) {
            (Some(c), None) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for ClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_f0() {
            return write!(f, "F0");
        }
        let parts: Vec<String> = self.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for ClassSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("F0") {
            return Ok(Self::F0);
        }
        s.split(['+', ','])
            .try_fold(Self::F0, |acc, part| Ok(acc.with(part.parse()?)))
    }
}

// ---------------------------------------------------------------------------
// Closed-form class members

/// `F₁`: `(1/2n){g(x,φy)θ(φz) + g(φx,φy)θ(φ²z)}_(y↔z)`.
pub fn f1_formula(theta: &DVector<f64>, s: &Structure) -> Tensor3 {
    let theta_phi = s.phi().transpose() * theta;
    let theta_phi2 = s.phi2().transpose() * theta;
    let t = &Tensor3::outer_last(&s.g_phi(), &theta_phi)
        + &Tensor3::outer_last(&s.g_phiphi(), &theta_phi2);
    t.sym_last_pair().scale(1.0 / (2 * s.n()) as f64)
}

/// `F₄`: `-(θ(ξ)/2n){g(φx,φy)η(z) + g(φx,φz)η(y)}`.
pub fn f4_formula(theta_xi: f64, s: &Structure) -> Tensor3 {
    Tensor3::outer_last(&s.g_phiphi(), s.eta())
        .sym_last_pair()
        .scale(-theta_xi / (2 * s.n()) as f64)
}

/// `F₅`: `-(θ*(ξ)/2n){g(x,φy)η(z) + g(x,φz)η(y)}`.
pub fn f5_formula(theta_star_xi: f64, s: &Structure) -> Tensor3 {
    Tensor3::outer_last(&s.g_phi(), s.eta())
        .sym_last_pair()
        .scale(-theta_star_xi / (2 * s.n()) as f64)
}

/// `F₁₀`: `η(x) b(y,z)` for a horizontal, symmetric, `φ`-invariant `b`.
pub fn f10_formula(b: &DMatrix<f64>, s: &Structure) -> Tensor3 {
    Tensor3::outer_first(s.eta(), b)
}

/// `F₁₁`: `η(x){η(y)ω(z) + η(z)ω(y)}`.
pub fn f11_formula(omega: &DVector<f64>, s: &Structure) -> Tensor3 {
    let eta = s.eta();
    let b = eta * omega.transpose() + omega * eta.transpose();
    Tensor3::outer_first(eta, &b)
}

/// The symmetric, horizontal, `φ`-invariant part of a bilinear form.
pub fn f10_projection(b: &DMatrix<f64>, s: &Structure) -> DMatrix<f64> {
    let sym = (b + b.transpose()) * 0.5;
    let p2 = s.phi2();
    let horizontal = p2.transpose() * &sym * p2;
    (&horizontal + s.phi().transpose() * &horizontal * s.phi()) * 0.5
}

// ---------------------------------------------------------------------------
// Defining conditions

fn push_tensor(out: &mut Vec<f64>, t: &Tensor3) {
    out.extend_from_slice(t.as_slice());
}

fn push_matrix(out: &mut Vec<f64>, m: &DMatrix<f64>) {
    out.extend(m.iter().copied());
}

/// `F(x,y,z) - F(x,y,ξ)η(z) - F(x,z,ξ)η(y)`, shared by `F₆ … F₉`.
fn vertical_split_defect(f: &Tensor3, s: &Structure) -> Tensor3 {
    let m = f.contract(2, s.xi());
    let eta = s.eta();
    f - &Tensor3::from_fn(s.d(), |x, y, z| m[(x, y)] * eta[z] + m[(x, z)] * eta[y])
}

/// The components of the defining condition of `c`; all vanish iff an
/// admissible `f` lies in `c`.
pub fn class_defects(c: BasicClass, f: &Tensor3, s: &Structure) -> Vec<f64> {
    use BasicClass::*;
    let mut out = Vec::new();
    match c {
        F1 => {
            let theta = forms_of(f, s).theta;
            push_tensor(&mut out, &(f - &f1_formula(&theta, s)));
        }
        F2 | F3 => {
            push_matrix(&mut out, &f.contract(0, s.xi()));
            push_matrix(&mut out, &f.contract(1, s.xi()));
            if c == F2 {
                push_tensor(&mut out, &f.pull_slot(2, s.phi()).cyclic_sum());
                out.extend(forms_of(f, s).theta.iter().copied());
            } else {
                push_tensor(&mut out, &f.cyclic_sum());
            }
        }
        F4 => {
            let p = forms_of(f, s).theta.dot(s.xi());
            push_tensor(&mut out, &(f - &f4_formula(p, s)));
        }
        F5 => {
            let q = forms_of(f, s).theta_star.dot(s.xi());
            push_tensor(&mut out, &(f - &f5_formula(q, s)));
        }
        F6 | F7 | F8 | F9 => {
            push_tensor(&mut out, &vertical_split_defect(f, s));
            let m = f.contract(2, s.xi());
            let symmetric = matches!(c, F6 | F8);
            let swap = if symmetric {
                &m - m.transpose()
            } else {
                &m + m.transpose()
            };
            push_matrix(&mut out, &swap);
            let rotated = s.phi().transpose() * &m * s.phi();
            let phi_rule = if matches!(c, F6 | F7) {
                &m + rotated
            } else {
                &m - rotated
            };
            push_matrix(&mut out, &phi_rule);
            if matches!(c, F6 | F7) {
                let forms = forms_of(f, s);
                out.extend(forms.theta.iter().copied());
                out.extend(forms.theta_star.iter().copied());
            }
        }
        F10 => {
            let b = f.contract(0, s.xi());
            let bphi = s.phi().transpose() * b * s.phi();
            push_tensor(&mut out, &(f - &f10_formula(&bphi, s)));
        }
        F11 => {
            let omega = forms_of(f, s).omega;
            push_tensor(&mut out, &(f - &f11_formula(&omega, s)));
        }
    }
    out
}

/// Max violation of the defining condition of `c`, relative to `max(1, max|F|)`.
pub fn membership_residual(f: &FTensor, s: &Structure, c: BasicClass) -> f64 {
    raw_membership_residual(f.tensor(), s, c)
}

fn raw_membership_residual(f: &Tensor3, s: &Structure, c: BasicClass) -> f64 {
    let worst = class_defects(c, f, s)
        .iter()
        .fold(0.0_f64, |a, v| a.max(v.abs()));
    scaled(worst, f.max_abs())
}

/// Membership residual for a direct sum: the reassembly error after removing
/// every component outside `set`.
pub fn union_membership_residual(spaces: &ClassSpaces, f: &FTensor, set: ClassSet) -> Result<f64> {
    let parts = spaces.decompose(f)?;
    let inside = BasicClass::ALL
        .iter()
        .filter(|c| set.contains(**c))
        .fold(Tensor3::zeros(f.tensor().dim()), |acc, c| {
            &acc + parts[c.index()].tensor()
        });
    Ok(inside.residual(f.tensor()))
}

// ---------------------------------------------------------------------------
// Constructors

/// Parameters for [`ClassSpaces::construct`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ClassParams {
    /// `θ₀` for `F₁`, `ω₀` for `F₁₁`; must vanish on `ξ`.
    Covector(DVector<f64>),
    /// `θ(ξ)` for `F₄`, `θ*(ξ)` for `F₅`.
    Scalar(f64),
    /// `F(ξ,φ·,φ·)` for `F₁₀`: symmetric, horizontal and `φ`-invariant.
    Bilinear(DMatrix<f64>),
    /// Coordinates in the numerically computed basis of the class.
    Coefficients(Vec<f64>),
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParams(msg()))
    }
}

/// Build a member of a formula class from its parameters.
pub fn construct_formula_class(
    c: BasicClass,
    params: &ClassParams,
    s: &Structure,
) -> Result<FTensor> {
    use BasicClass::*;
    let d = s.d();
    let t = match (c, params) {
        (F1 | F11, ClassParams::Covector(w)) => {
            require(w.len() == d, || {
                format!("{c} covector needs {d} components")
            })?;
            let on_xi = w.dot(s.xi());
            require(
                scaled(on_xi.abs(), max_abs_vector(w)) <= DEFAULT_TOL,
                || format!("{c} covector must vanish on xi (got {on_xi:e})"),
            )?;
            if c == F1 {
                f1_formula(w, s)
            } else {
                f11_formula(w, s)
            }
        }
        (F4, ClassParams::Scalar(p)) => f4_formula(*p, s),
        (F5, ClassParams::Scalar(q)) => f5_formula(*q, s),
        (F10, ClassParams::Bilinear(b)) => {
            require(b.nrows() == d && b.ncols() == d, || {
                format!("F10 datum must be {d}x{d}")
            })?;
            let proj = f10_projection(b, s);
            let off = max_abs_matrix(&(&proj - b));
            require(scaled(off, max_abs_matrix(b)) <= DEFAULT_TOL, || {
                format!(
                    "F10 datum must be symmetric, horizontal and phi-invariant (defect {off:e})"
                )
            })?;
            f10_formula(b, s)
        }
        _ => {
            return Err(Error::InvalidParams(format!(
                "{c} cannot be built from {params:?}"
            )))
        }
    };
    Ok(FTensor::trusted(t))
}

/// Preconditions on a Weingarten map `A`: `φA = Aφ`, `Aξ = 0`, `η∘A = 0`, `g(Ax,y) = g(x,Ay)`.
pub fn weingarten_defects(a: &DMatrix<f64>, s: &Structure) -> Result<Vec<(&'static str, f64)>> {
    let d = s.d();
    if a.nrows() != d || a.ncols() != d {
        return Err(Error::ShapeMismatch {
            what: "Weingarten map".into(),
            expected: format!("{d}x{d}"),
            found: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    let scale = max_abs_matrix(a);
    let ga = s.g().matrix() * a;
    Ok(vec![
        (
            "phi A = A phi",
            scaled(max_abs_matrix(&(s.phi() * a - a * s.phi())), scale),
        ),
        ("A xi = 0", scaled(max_abs_vector(&(a * s.xi())), scale)),
        (
            "eta o A = 0",
            scaled(max_abs_vector(&(a.transpose() * s.eta())), scale),
        ),
        (
            "A g-symmetric",
            scaled(max_abs_matrix(&(&ga - ga.transpose())), scale),
        ),
    ])
}

/// `F(x,y,z) = η(y)g(Ax,z) + η(z)g(Ax,y)`, the fundamental tensor of a
/// hypersurface in a Kähler–Norden manifold with Weingarten map `A`.
pub fn construct_from_weingarten(a: &DMatrix<f64>, s: &Structure, tol: f64) -> Result<FTensor> {
    for (condition, residual) in weingarten_defects(a, s)? {
        if residual.is_nan() || residual > tol {
            return Err(Error::InvalidWeingarten {
                condition: condition.into(),
                residual,
            });
        }
    }
    let gax = a.transpose() * s.g().matrix();
    let t = Tensor3::outer_last(&gax, s.eta()).sym_last_pair();
    FTensor::new(t, s, tol)
}

// ---------------------------------------------------------------------------
// Subspaces, decomposition, classification

/// Orthonormal bases of the admissible space and of each basic class for one
/// structure. Built once; all queries borrow it immutably.
#[derive(Clone, Debug)]
pub struct ClassSpaces {
    structure: Structure,
    admissible: DMatrix<f64>,
    bases: Vec<DMatrix<f64>>,
    offsets: Vec<usize>,
    combined_rank: usize,
    pseudo_inverse: DMatrix<f64>,
}

impl ClassSpaces {
    pub fn new(s: &Structure) -> Result<Self> {
        let d = s.d();
        let total = d * d * d;
        let adm_op = operator_matrix(&DMatrix::identity(total, total), |col| {
            let t = Tensor3::from_vec(d, col.to_vec()).expect("length d^3");
            let [a, b] = admissibility_defects(&t, s);
            let mut v = a.into_vec();
            v.extend(b.into_vec());
            v
        });
        let admissible = null_space(&adm_op);

        let mut bases = Vec::with_capacity(11);
        for c in BasicClass::ALL {
            let op = operator_matrix(&admissible, |col| {
                let t = Tensor3::from_vec(d, col.to_vec()).expect("length d^3");
                class_defects(c, &t, s)
            });
            let inner = null_space(&op);
            bases.push(&admissible * inner);
        }

        let mut offsets = Vec::with_capacity(12);
        let mut acc = 0;
        for b in &bases {
            offsets.push(acc);
            acc += b.ncols();
        }
        offsets.push(acc);
        let mut combined = DMatrix::zeros(total, acc);
        for (b, &off) in bases.iter().zip(&offsets) {
            combined.view_mut((0, off), (total, b.ncols())).copy_from(b);
        }
        let combined_rank = rank(&combined);
        let pseudo_inverse = if acc == 0 {
            DMatrix::zeros(0, total)
        } else {
            combined
                .clone()
                .pseudo_inverse(1e-10)
                .map_err(|e| Error::Validation(format!("pseudo-inverse failed: {e}")))?
        };
        Ok(Self {
            structure: s.clone(),
            admissible,
            bases,
            offsets,
            combined_rank,
            pseudo_inverse,
        })
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    /// Dimension of the space of admissible tensors.
    pub fn admissible_dim(&self) -> usize {
        self.admissible.ncols()
    }

    pub fn class_dim(&self, c: BasicClass) -> usize {
        self.bases[c.index()].ncols()
    }

    /// Orthonormal basis of the class (columns are flattened tensors).
    pub fn basis(&self, c: BasicClass) -> &DMatrix<f64> {
        &self.bases[c.index()]
    }

    pub fn admissible_basis(&self) -> &DMatrix<f64> {
        &self.admissible
    }

    /// Dimension bookkeeping for the direct sum.
    pub fn dimension_audit(&self) -> DimensionAudit {
        let class_dims: Vec<usize> = BasicClass::ALL.iter().map(|&c| self.class_dim(c)).collect();
        DimensionAudit {
            n: self.structure.n(),
            admissible_dim: self.admissible_dim(),
            sum_of_class_dims: class_dims.iter().sum(),
            combined_rank: self.combined_rank,
            class_dims,
        }
    }

    /// Split `F` into its eleven class components.
    pub fn decompose(&self, f: &FTensor) -> Result<Vec<FTensor>> {
        let t = f.tensor();
        let d = self.structure.d();
        if t.dim() != d {
            return Err(Error::ShapeMismatch {
                what: "fundamental tensor".into(),
                expected: d.to_string(),
                found: t.dim().to_string(),
            });
        }
        let rhs = DVector::from_column_slice(t.as_slice());
        let coeffs = &self.pseudo_inverse * &rhs;
        let mut parts = Vec::with_capacity(11);
        let mut sum = Tensor3::zeros(d);
        for (i, b) in self.bases.iter().enumerate() {
            let k = b.ncols();
            let c = coeffs.rows(self.offsets[i], k);
            let comp = if k == 0 {
                Tensor3::zeros(d)
            } else {
                Tensor3::from_vec(d, (b * c).as_slice().to_vec())?
            };
            sum = &sum + &comp;
            parts.push(FTensor::trusted(comp));
        }
        let residual = sum.residual(t);
        if residual.is_nan() || residual > REASSEMBLY_TOL {
            return Err(Error::DecompositionFailure { residual });
        }
        Ok(parts)
    }

    /// Decompose and report which classes carry a component above
    /// `threshold · ‖F‖`. Roundoff-sized tensors report `F₀`.
    pub fn classify(&self, f: &FTensor, threshold: f64) -> Result<ClassificationReport> {
        let parts = self.decompose(f)?;
        let total = f.tensor().norm();
        let norms: Vec<f64> = parts.iter().map(|p| p.tensor().norm()).collect();
        let residuals: Vec<f64> = BasicClass::ALL
            .iter()
            .map(|&c| membership_residual(f, &self.structure, c))
            .collect();
        let detected = BasicClass::ALL
            .iter()
            .filter(|c| total > ZERO_NORM && norms[c.index()] > threshold * total)
            .fold(ClassSet::F0, |acc, &c| acc.with(c));
        let sum = parts
            .iter()
            .fold(Tensor3::zeros(f.tensor().dim()), |acc, p| &acc + p.tensor());
        Ok(ClassificationReport {
            norm: total,
            component_norms: norms,
            membership_residuals: residuals,
            detected,
            reassembly_residual: sum.residual(f.tensor()),
        })
    }

    /// Build a class member. Formula classes take their natural parameters;
    /// every class also accepts basis coefficients.
    pub fn construct(&self, c: BasicClass, params: &ClassParams) -> Result<FTensor> {
        match params {
            ClassParams::Coefficients(coeffs) => {
                let b = self.basis(c);
                require(coeffs.len() == b.ncols(), || {
                    format!(
                        "{c} has dimension {}, got {} coefficients",
                        b.ncols(),
                        coeffs.len()
                    )
                })?;
                let d = self.structure.d();
                if b.ncols() == 0 {
                    return Ok(FTensor::zero(&self.structure));
                }
                let v = b * DVector::from_column_slice(coeffs);
                Ok(FTensor::trusted(Tensor3::from_vec(
                    d,
                    v.as_slice().to_vec(),
                )?))
            }
            _ => construct_formula_class(c, params, &self.structure),
        }
    }

    /// A random member with entries of order one; zero if the class is
    /// trivial in this dimension.
    pub fn random_member(&self, c: BasicClass, rng: &mut impl Rng) -> FTensor {
        let k = self.class_dim(c);
        let coeffs: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = self
            .construct(c, &ClassParams::Coefficients(coeffs))
            .expect("coefficient count matches basis");
        let m = f.tensor().max_abs();
        if m > 0.0 {
            f.scale(1.0 / m)
        } else {
            f
        }
    }

    /// Sum of random members of every class in `set`.
    pub fn random_in(&self, set: ClassSet, rng: &mut impl Rng) -> FTensor {
        set.iter().fold(FTensor::zero(&self.structure), |acc, c| {
            acc.add(&self.random_member(c, rng))
        })
    }

    /// A random admissible tensor with no class bias.
    pub fn random_admissible(&self, rng: &mut impl Rng) -> FTensor {
        let d = self.structure.d();
        let k = self.admissible_dim();
        let c = DVector::from_fn(k, |_, _| rng.gen_range(-1.0..1.0));
        let v = &self.admissible * c;
        let t = Tensor3::from_vec(d, v.as_slice().to_vec()).expect("length d^3");
        let m = t.max_abs().max(f64::MIN_POSITIVE);
        FTensor::trusted(t.scale(1.0 / m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionAudit {
    pub n: usize,
    pub admissible_dim: usize,
    pub class_dims: Vec<usize>,
    pub sum_of_class_dims: usize,
    pub combined_rank: usize,
}

impl DimensionAudit {
    /// The classes span the admissible space and intersect trivially.
    pub fn is_direct_sum(&self) -> bool {
        self.sum_of_class_dims == self.admissible_dim && self.combined_rank == self.admissible_dim
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    /// Frobenius norm of `F` in the working basis.
    pub norm: f64,
    /// Frobenius norm of each class component, indexed like [`BasicClass::ALL`].
    pub component_norms: Vec<f64>,
    /// Violation of each class's own defining condition by the whole of `F`.
    pub membership_residuals: Vec<f64>,
    pub detected: ClassSet,
    pub reassembly_residual: f64,
}

impl ClassificationReport {
    pub fn component_norm(&self, c: BasicClass) -> f64 {
        self.component_norms[c.index()]
    }

    /// Largest component outside `set`, relative to `‖F‖`.
    pub fn foreign_fraction(&self, set: ClassSet) -> f64 {
        if self.norm == 0.0 {
            return 0.0;
        }
        BasicClass::ALL
            .iter()
            .filter(|c| !set.contains(**c))
            .map(|c| self.component_norms[c.index()] / self.norm)
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "class: {}", self.detected)?;
        writeln!(
            f,
            "  |F| = {:.6e}, reassembly residual {:.3e}",
            self.norm, self.reassembly_residual
        )?;
        for c in BasicClass::ALL {
            writeln!(
                f,
                "  {:<4} component {:.6e}   condition residual {:.3e}",
                c.to_string(),
                self.component_norms[c.index()],
                self.membership_residuals[c.index()]
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_ids_round_trip_text() {
        for c in BasicClass::ALL {
            assert_eq!(c.to_string().parse::<BasicClass>().unwrap(), c);
        }
        let set: ClassSet = "F4+F5+F6".parse().unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(set.to_string(), "F4+F5+F6");
        assert_eq!("F0".parse::<ClassSet>().unwrap(), ClassSet::F0);
        assert!("F12".parse::<BasicClass>().is_err());
    }

    #[test]
    fn u0_excludes_f3_and_f7() {
        let u0 = ClassSet::u0();
        assert_eq!(u0.len(), 9);
        assert!(!u0.contains(BasicClass::F3));
        assert!(!u0.contains(BasicClass::F7));
    }

    #[test]
    fn zero_has_zero_residual_everywhere() {
        let s = Structure::canonical(1).unwrap();
        let z = FTensor::zero(&s);
        for c in BasicClass::ALL {
            assert_eq!(membership_residual(&z, &s, c), 0.0);
        }
    }

    #[test]
    fn f5_hand_values() {
        let s = Structure::canonical(1).unwrap();
        let f = construct_formula_class(BasicClass::F5, &ClassParams::Scalar(2.0), &s).unwrap();
        let t = f.tensor();
        assert_eq!(t.get(0, 1, 2), 1.0);
        assert_eq!(t.get(0, 2, 1), 1.0);
        // brute-force evaluation of the formula
        let brute = Tensor3::from_fn(3, |x, y, z| {
            let g = s.g();
            -(2.0 / 2.0)
                * (g.eval(&s.e(x), &s.phi_e(y)) * s.eta()[z]
                    + g.eval(&s.e(x), &s.phi_e(z)) * s.eta()[y])
        });
        assert_eq!(t, &brute);
    }

    #[test]
    fn f11_hand_values() {
        let s = Structure::canonical(1).unwrap();
        let (a, b) = (0.7, -1.3);
        let w = DVector::from_vec(vec![a, b, 0.0]);
        let f = construct_formula_class(BasicClass::F11, &ClassParams::Covector(w), &s).unwrap();
        let t = f.tensor();
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    let expect = match (x, y, z) {
                        (2, 2, 0) | (2, 0, 2) => a,
                        (2, 2, 1) | (2, 1, 2) => b,
                        _ => 0.0,
                    };
                    assert_eq!(t.get(x, y, z), expect, "({x},{y},{z})");
                }
            }
        }
    }

    #[test]
    fn zero_params_give_zero() {
        let s = Structure::canonical(2).unwrap();
        let d = s.d();
        let cases = [
            (BasicClass::F1, ClassParams::Covector(DVector::zeros(d))),
            (BasicClass::F4, ClassParams::Scalar(0.0)),
            (BasicClass::F5, ClassParams::Scalar(0.0)),
            (BasicClass::F10, ClassParams::Bilinear(DMatrix::zeros(d, d))),
            (BasicClass::F11, ClassParams::Covector(DVector::zeros(d))),
        ];
        for (c, p) in cases {
            assert_eq!(
                construct_formula_class(c, &p, &s)
                    .unwrap()
                    .tensor()
                    .max_abs(),
                0.0
            );
        }
    }

    #[test]
    fn covector_must_vanish_on_xi() {
        let s = Structure::canonical(1).unwrap();
        let w = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        let err = construct_formula_class(BasicClass::F11, &ClassParams::Covector(w), &s);
        assert!(matches!(err, Err(Error::InvalidParams(_))));
        let err = construct_formula_class(BasicClass::F3, &ClassParams::Scalar(1.0), &s);
        assert!(matches!(err, Err(Error::InvalidParams(_))));
    }

    #[test]
    fn weingarten_rejects_non_commuting() {
        let s = Structure::canonical(1).unwrap();
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 0.0]));
        assert!(matches!(
            construct_from_weingarten(&a, &s, DEFAULT_TOL),
            Err(Error::InvalidWeingarten { .. })
        ));
        let z = construct_from_weingarten(&DMatrix::zeros(3, 3), &s, DEFAULT_TOL).unwrap();
        assert_eq!(z.tensor().max_abs(), 0.0);
    }
}
