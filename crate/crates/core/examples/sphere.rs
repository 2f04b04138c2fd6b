use std::f64::consts::PI;

use acbm::classes::{f4_formula, f5_formula};
use acbm::connection::{t_canonical, torsion_forms};
use acbm::fundamental::FTensor;
use acbm::structure::Structure;
use acbm::tensor::{Tensor3, DEFAULT_TOL};
use acbm::torsion_class::matching_torsion_classes;

fn main() {
    let n = 2;
    let psi = PI / 6.0;
    let s = Structure::canonical(n).unwrap();
    let k = 2.0 * n as f64;
    let f = &f4_formula(k * psi.cos(), &s) + &f5_formula(k * psi.sin(), &s);
    let f = FTensor::new(f, &s, DEFAULT_TOL).unwrap();

    let t = t_canonical(&f, &s);
    let (gp, gpp, eta) = (s.g_phi(), s.g_phiphi(), s.eta());
    let closed = Tensor3::from_fn(s.d(), |x, y, z| {
        eta[x] * (psi.cos() * gp[(y, z)] - psi.sin() * gpp[(y, z)])
    })
    .antisym_first_pair();
    let forms = torsion_forms(&t, &s);

    println!("T' against closed form: {:.3e}", t.residual(&closed));
    println!("t'(xi)  = {:.12}", forms.t.dot(s.xi()));
    println!("t'*(xi) = {:.12}", forms.t_star.dot(s.xi()));
    println!("max|t^'| = {:.3e}", forms.t_hat.amax());
    println!(
        "torsion classes {:?}",
        matching_torsion_classes(&t, &s, 1e-10)
    );
}
