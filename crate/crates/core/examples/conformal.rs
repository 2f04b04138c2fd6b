use acbm::classes::ClassSpaces;
use acbm::conformal::{
    g0_generator, g0_predicate, invariance_trial, transform_structure, ConformalPointData,
};
use acbm::structure::Structure;
use acbm::tensor::DEFAULT_TOL;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let s = Structure::random(2, 1).unwrap();
    let spaces = ClassSpaces::new(&s).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    let c = ConformalPointData::random(s.d(), &mut rng);
    let sbar = transform_structure(&s, &c).unwrap();
    print!("{}", sbar.validate(DEFAULT_TOL));

    let f = spaces.random_admissible(&mut rng);
    let general = invariance_trial(&f, &s, &c, 1e-8).unwrap();
    println!(
        "G:  in G0 {}, N residual {:.2e}, T' residual {:.2e}",
        general.in_g0, general.n_residual, general.t_residual
    );

    let c0 = g0_generator(&s, 3);
    print!("{}", g0_predicate(&c0, &s, 1e-12));
    let sub = invariance_trial(&f, &s, &c0, 1e-8).unwrap();
    println!(
        "G0: N residual {:.2e}, T' residual {:.2e}, forms {:.2e}, class {} -> {}",
        sub.n_residual, sub.t_residual, sub.forms_residual, sub.class_before, sub.class_after
    );
}
