use acbm::classes::ClassSpaces;
use acbm::connection::{
    hayden_q_from_t, natural_connection_check, phi_canonical_identity_check, q0_phib, q_canonical,
    t_canonical, torsion_forms,
};
use acbm::fundamental::associated_forms;
use acbm::structure::Structure;
use acbm::tensor::DEFAULT_TOL;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let s = Structure::random(2, 5).unwrap();
    let spaces = ClassSpaces::new(&s).unwrap();
    let f = spaces.random_admissible(&mut ChaCha8Rng::seed_from_u64(2));

    let q = q_canonical(&f, &s);
    let t = t_canonical(&f, &s);
    print!("{}", natural_connection_check(&q, &f, &s, DEFAULT_TOL));
    println!(
        "phi-canonical identity {:.3e}",
        phi_canonical_identity_check(&t, &s)
    );
    println!(
        "torsion recovers connection {:.3e}",
        hayden_q_from_t(&t).residual(&q)
    );
    println!("phi-canonical vs phiB {:.3e}", q.residual(&q0_phib(&f, &s)));

    let a = associated_forms(&f, &s);
    let tf = torsion_forms(&t, &s);
    let t_pred = (&a.theta_star + s.eta() * a.theta_star_xi(&s)) * 0.5;
    let ts_pred = -(&a.theta + s.eta() * a.theta_xi(&s)) * 0.5;
    let th_pred = -(s.phi().transpose() * &a.omega);
    println!("t'  vs forms of F {:.3e}", (&tf.t - t_pred).amax());
    println!("t'* vs forms of F {:.3e}", (&tf.t_star - ts_pred).amax());
    println!("t^' vs forms of F {:.3e}", (&tf.t_hat - th_pred).amax());
}
