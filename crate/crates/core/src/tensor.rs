//! Dense multilinear algebra on a single tangent space of odd dimension `2n+1`.
//!
//! Everything is expressed in a fixed working basis. Vectors and covectors are
//! plain [`DVector`]s, endomorphisms are [`DMatrix`]es acting on column
//! vectors (column `j` is the image of `e_j`), and every covariant 3-tensor
//! lives in [`Tensor3`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Comparison tolerance used when nothing else is configured.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Metrics with `|det g|` below this are rejected.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Half-dimension `n` of a `(2n+1)`-dimensional space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dim {
    n: usize,
}

impl Dim {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n
    }

    /// Full dimension `2n+1`.
    #[inline]
    pub fn full(self) -> usize {
        2 * self.n + 1
    }

    /// Recover `n` from a full dimension, if it is odd and at least 3.
    pub fn from_full(d: usize) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::ShapeMismatch {
                what: "dimension".into(),
                expected: "odd and >= 3".into(),
                found: d.to_string(),
            });
        }
        Self::new((d - 1) / 2)
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2*{}+1", self.n)
    }
}

/// Max-abs difference divided by `max(1, scale)`.
///
/// Small tensors are compared absolutely, large ones relatively.
#[inline]
pub fn scaled(diff: f64, scale: f64) -> f64 {
    diff / scale.max(1.0)
}

/// Evaluate a bilinear form `b(u, v) = u^T B v`.
#[inline]
pub fn bilinear(b: &DMatrix<f64>, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    u.dot(&(b * v))
}

pub fn max_abs_matrix(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn max_abs_vector(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// A nondegenerate symmetric bilinear form together with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
}

impl Metric {
    /// Build a metric from a square matrix. The matrix is symmetrised; an
    /// asymmetry larger than the default tolerance is an error.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::ShapeMismatch {
                what: "metric".into(),
                expected: "square matrix".into(),
                found: format!("{}x{}", matrix.nrows(), matrix.ncols()),
            });
        }
        let asym = max_abs_matrix(&(&matrix - matrix.transpose()));
        if scaled(asym, max_abs_matrix(&matrix)) > DEFAULT_TOL {
            return Err(Error::Validation(format!(
                "metric is not symmetric (residual {asym:e})"
            )));
        }
        let matrix = (&matrix + matrix.transpose()) * 0.5;
        let inverse = metric_inverse(&matrix)?;
        Ok(Self { matrix, inverse })
    }

    #[inline]
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `g^{ij}`.
    #[inline]
    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    #[inline]
    pub fn eval(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        bilinear(&self.matrix, u, v)
    }

    /// Covector `g(v, ·)`.
    pub fn flat(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.matrix * v
    }

    /// Vector `g^{-1}(w)`, the metric dual of a covector.
    pub fn sharp(&self, w: &DVector<f64>) -> DVector<f64> {
        &self.inverse * w
    }

    /// Numbers of (negative, positive) eigenvalues. Zero eigenvalues are
    /// counted in neither.
    pub fn signature(&self) -> (usize, usize) {
        let eig = self.matrix.clone().symmetric_eigen();
        let scale = max_abs_vector(&eig.eigenvalues).max(1.0);
        let cut = 1e-12 * scale;
        let neg = eig.eigenvalues.iter().filter(|&&l| l < -cut).count();
        let pos = eig.eigenvalues.iter().filter(|&&l| l > cut).count();
        (neg, pos)
    }
}

/// Inverse of a symmetric matrix, rejecting `|det| < DEGENERACY_THRESHOLD`.
pub fn metric_inverse(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let det = g.determinant();
    if !det.is_finite() || det.abs() < DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateMetric { det });
    }
    let inv = g
        .clone()
        .try_inverse()
        .ok_or(Error::DegenerateMetric { det })?;
    Ok((&inv + inv.transpose()) * 0.5)
}

/// A covariant 3-tensor `A(x, y, z)` stored densely, `z` fastest.
///
/// The same storage is used for vector-valued bilinear maps `A(x, y)`, in
/// which case the last slot holds the contravariant components.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor3 {
    dim: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Tensor3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tensor3")
            .field("dim", &self.dim)
            .field("max_abs", &self.max_abs())
            .finish()
    }
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim * dim);
        for x in 0..dim {
            for y in 0..dim {
                for z in 0..dim {
                    data.push(f(x, y, z));
                }
            }
        }
        Self { dim, data }
    }

    pub fn from_vec(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim * dim {
            return Err(Error::ShapeMismatch {
                what: "3-tensor components".into(),
                expected: (dim * dim * dim).to_string(),
                found: data.len().to_string(),
            });
        }
        Ok(Self { dim, data })
    }

    /// The tensor whose only nonzero component is 1 at flat position `k`.
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut t = Self::zeros(dim);
        t.data[k] = 1.0;
        t
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    fn idx(&self, x: usize, y: usize, z: usize) -> usize {
        (x * self.dim + y) * self.dim + z
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        self.data[self.idx(x, y, z)]
    }

    pub fn set(&mut self, x: usize, y: usize, z: usize, value: f64) {
        let i = self.idx(x, y, z);
        self.data[i] = value;
    }

    /// Multilinear evaluation on arbitrary vectors.
    pub fn eval(&self, u: &DVector<f64>, v: &DVector<f64>, w: &DVector<f64>) -> f64 {
        let d = self.dim;
        let mut acc = 0.0;
        for i in 0..d {
            if u[i] == 0.0 {
                continue;
            }
            let mut row = 0.0;
            for j in 0..d {
                if v[j] == 0.0 {
                    continue;
                }
                let base = (i * d + j) * d;
                let mut s = 0.0;
                for k in 0..d {
                    s += self.data[base + k] * w[k];
                }
                row += v[j] * s;
            }
            acc += u[i] * row;
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// `max|self - other|` scaled by the larger operand, see [`scaled`].
    pub fn residual(&self, other: &Self) -> f64 {
        let diff = (self - other).max_abs();
        scaled(diff, self.max_abs().max(other.max_abs()))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && self.residual(other) <= tol
    }

    /// Reorder arguments: `result(a0, a1, a2) = self(a[perm[0]], a[perm[1]], a[perm[2]])`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        Self::from_fn(self.dim, |x, y, z| {
            let a = [x, y, z];
            self.get(a[perm[0]], a[perm[1]], a[perm[2]])
        })
    }

    /// Feed `E e_a` into `slot` instead of `e_a`: e.g. slot 0 yields `A(E x, y, z)`.
    pub fn pull_slot(&self, slot: usize, e: &DMatrix<f64>) -> Self {
        let d = self.dim;
        Self::from_fn(d, |x, y, z| {
            let a = [x, y, z];
            let mut s = 0.0;
            for i in 0..d {
                let c = e[(i, a[slot])];
                if c == 0.0 {
                    continue;
                }
                let mut b = a;
                b[slot] = i;
                s += c * self.get(b[0], b[1], b[2]);
            }
            s
        })
    }

    /// Fix one argument to `v`, leaving a bilinear form in the remaining
    /// slots (in their original order).
    pub fn contract(&self, slot: usize, v: &DVector<f64>) -> DMatrix<f64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |r, c| {
            let mut s = 0.0;
            for i in 0..d {
                let args = match slot {
                    0 => (i, r, c),
                    1 => (r, i, c),
                    _ => (r, c, i),
                };
                s += v[i] * self.get(args.0, args.1, args.2);
            }
            s
        })
    }

    /// `b(x, y) * w(z)`.
    pub fn outer_last(b: &DMatrix<f64>, w: &DVector<f64>) -> Self {
        let d = w.len();
        Self::from_fn(d, |x, y, z| b[(x, y)] * w[z])
    }

    /// `w(x) * b(y, z)`.
    pub fn outer_first(w: &DVector<f64>, b: &DMatrix<f64>) -> Self {
        let d = w.len();
        Self::from_fn(d, |x, y, z| w[x] * b[(y, z)])
    }

    /// `{A}_[x↔y] = A(x,y,z) - A(y,x,z)`.
    pub fn antisym_first_pair(&self) -> Self {
        self - &self.permuted([1, 0, 2])
    }

    /// `{A}_(x↔y) = A(x,y,z) + A(y,x,z)`.
    pub fn sym_first_pair(&self) -> Self {
        self + &self.permuted([1, 0, 2])
    }

    /// `{A}_(y↔z) = A(x,y,z) + A(x,z,y)`.
    pub fn sym_last_pair(&self) -> Self {
        self + &self.permuted([0, 2, 1])
    }

    /// `{A}_[y↔z] = A(x,y,z) - A(x,z,y)`.
    pub fn antisym_last_pair(&self) -> Self {
        self - &self.permuted([0, 2, 1])
    }

    /// Cyclic sum `A(x,y,z) + A(y,z,x) + A(z,x,y)`.
    pub fn cyclic_sum(&self) -> Self {
        &(self + &self.permuted([1, 2, 0])) + &self.permuted([2, 0, 1])
    }

    /// Raise the last index: `result(x, y, ·) = g^{-1} A(x, y, ·)`, giving
    /// the components of the vector-valued map `A(x, y)`.
    pub fn raise_last(&self, g: &Metric) -> Self {
        self.contract_last_with(g.inverse())
    }

    fn contract_last_with(&self, m: &DMatrix<f64>) -> Self {
        let d = self.dim;
        Self::from_fn(d, |x, y, k| {
            let mut s = 0.0;
            for l in 0..d {
                s += m[(k, l)] * self.get(x, y, l);
            }
            s
        })
    }

    /// Apply an endomorphism to the vector values: `result(x, y) = E A(x, y)`.
    pub fn map_values(&self, e: &DMatrix<f64>) -> Self {
        self.contract_last_with(e)
    }
}

/// `result(x, y, z) = g(map(x, y), z)` for a vector-valued bilinear map whose
/// components sit in the last slot of `map`.
pub fn lower_with_g(map: &Tensor3, g: &Metric) -> Tensor3 {
    let d = map.dim();
    let m = g.matrix();
    Tensor3::from_fn(d, |x, y, z| {
        let mut s = 0.0;
        for k in 0..d {
            s += map.get(x, y, k) * m[(k, z)];
        }
        s
    })
}

impl Add for &Tensor3 {
    type Output = Tensor3;
    fn add(self, rhs: &Tensor3) -> Tensor3 {
        assert_eq!(self.dim, rhs.dim, "tensor dimension mismatch");
        Tensor3 {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Tensor3 {
    type Output = Tensor3;
    fn sub(self, rhs: &Tensor3) -> Tensor3 {
        assert_eq!(self.dim, rhs.dim, "tensor dimension mismatch");
        Tensor3 {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Add for Tensor3 {
    type Output = Tensor3;
    fn add(self, rhs: Tensor3) -> Tensor3 {
        &self + &rhs
    }
}

impl Sub for Tensor3 {
    type Output = Tensor3;
    fn sub(self, rhs: Tensor3) -> Tensor3 {
        &self - &rhs
    }
}

impl Neg for &Tensor3 {
    type Output = Tensor3;
    fn neg(self) -> Tensor3 {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &Tensor3 {
    type Output = Tensor3;
    fn mul(self, rhs: f64) -> Tensor3 {
        self.scale(rhs)
    }
}

impl Mul<f64> for Tensor3 {
    type Output = Tensor3;
    fn mul(self, rhs: f64) -> Tensor3 {
        self.scale(rhs)
    }
}
