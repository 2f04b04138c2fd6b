#![allow(dead_code)]

use acbm::classes::ClassSpaces;
use acbm::conformal::{transform_structure, ConformalPointData};
use acbm::fundamental::FTensor;
use acbm::structure::Structure;
use acbm::tensor::{lower_with_g, Metric, Tensor3};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn setup(n: usize, seed: u64) -> (Structure, ClassSpaces) {
    let s = Structure::random(n, seed).unwrap();
    let spaces = ClassSpaces::new(&s).unwrap();
    (s, spaces)
}

/// Relative max-norm distance.
pub fn rel(a: &Tensor3, b: &Tensor3) -> f64 {
    (a - b).max_abs() / a.max_abs().max(b.max_abs()).max(1.0)
}

/// `(∇_x φ) y` as a vector-valued map.
pub fn nabla_phi(f: &FTensor, s: &Structure) -> Tensor3 {
    f.tensor().raise_last(s.g())
}

/// `g([φ,φ](x,y) + dη(x,y)ξ, z)` written out with the Levi-Civita connection.
pub fn nijenhuis_oracle(f: &FTensor, s: &Structure) -> Tensor3 {
    let t = f.tensor();
    let phi = s.phi();
    let nphi = nabla_phi(f, s);
    let bracket = Tensor3::from_fn(s.d(), |x, y, k| {
        let mut r = 0.0;
        for a in 0..s.d() {
            r += phi[(a, x)] * nphi.get(a, y, k) - phi[(a, y)] * nphi.get(a, x, k);
        }
        for a in 0..s.d() {
            r -= phi[(k, a)] * (nphi.get(x, y, a) - nphi.get(y, x, a));
        }
        r
    });
    // (∇_x η)(y) = g(∇_x ξ, y) = F(x, φy, ξ)
    let nabla_eta = t.pull_slot(1, phi).contract(2, s.xi());
    let d_eta = &nabla_eta - &nabla_eta.transpose();
    let xi_part = Tensor3::from_fn(s.d(), |x, y, k| d_eta[(x, y)] * s.xi()[k]);
    lower_with_g(&(&bracket + &xi_part), s.g())
}

/// `(∇_x ḡ)(y, z)` for the Levi-Civita connection of `g`.
pub fn nabla_gbar(f: &FTensor, s: &Structure, c: &ConformalPointData) -> Tensor3 {
    let t = f.tensor();
    let (a, b, gm) = (c.alpha(), c.beta(), c.gamma());
    let (da, db, dg) = (c.d_alpha(), c.d_beta(), c.d_gamma());
    let g = s.g().matrix();
    let gp = s.g_phi();
    let eta = s.eta();
    let nabla_eta = t.pull_slot(1, s.phi()).contract(2, s.xi());
    Tensor3::from_fn(s.d(), |x, y, z| {
        da[x] * g[(y, z)]
            + db[x] * gp[(y, z)]
            + b * t.get(x, z, y)
            + (dg[x] - da[x]) * eta[y] * eta[z]
            + (gm - a) * (nabla_eta[(x, y)] * eta[z] + eta[y] * nabla_eta[(x, z)])
    })
}

/// `∇̄ - ∇` from the Koszul formula, vector-valued.
pub fn koszul_difference(f: &FTensor, s: &Structure, c: &ConformalPointData) -> Tensor3 {
    let sbar = transform_structure(s, c).unwrap();
    let ng = nabla_gbar(f, s, c);
    let lowered = Tensor3::from_fn(s.d(), |x, y, z| {
        0.5 * (ng.get(x, y, z) + ng.get(y, x, z) - ng.get(z, x, y))
    });
    lowered.raise_last(sbar.g())
}

pub fn gbar(s: &Structure, c: &ConformalPointData) -> Metric {
    transform_structure(s, c).unwrap().g().clone()
}

/// `F̄(x,y,z) = ḡ((∇̄_x φ) y, z)` with `∇̄ = ∇ + P`.
pub fn fbar_oracle(f: &FTensor, s: &Structure, c: &ConformalPointData) -> Tensor3 {
    let p = koszul_difference(f, s, c);
    let phi: &DMatrix<f64> = s.phi();
    let v = &(&nabla_phi(f, s) + &p.pull_slot(1, phi)) - &p.map_values(phi);
    lower_with_g(&v, &gbar(s, c))
}

/// `∇̄_K - ∇_K` for a natural connection given as a function of `(F, structure)`,
/// assembled from the connection on each side and the Levi-Civita difference.
pub fn connection_difference_oracle(
    f: &FTensor,
    s: &Structure,
    c: &ConformalPointData,
    q: impl Fn(&FTensor, &Structure) -> Tensor3,
) -> Tensor3 {
    let sbar = transform_structure(s, c).unwrap();
    let fbar = FTensor::new(fbar_oracle(f, s, c), &sbar, 1e-8).unwrap();
    let after = q(&fbar, &sbar).raise_last(sbar.g());
    let before = q(f, s).raise_last(s.g());
    &(&after + &koszul_difference(f, s, c)) - &before
}
