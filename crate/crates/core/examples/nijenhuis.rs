use acbm::classes::{BasicClass, ClassSpaces};
use acbm::nijenhuis::{nijenhuis_from_f, nijenhuis_identities, u0_predicate};
use acbm::structure::Structure;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let s = Structure::random(2, 3).unwrap();
    let spaces = ClassSpaces::new(&s).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    let f = spaces.random_admissible(&mut rng);
    print!(
        "{}",
        nijenhuis_identities(&nijenhuis_from_f(&f, &s), &s, 1e-8)
    );

    for c in BasicClass::ALL {
        let f = spaces.random_member(c, &mut rng);
        let v = u0_predicate(&f, &s, 1e-8);
        println!(
            "{:<4} in U0: {:<5} |N(phi.,phi.)| = {:.3e}",
            c.to_string(),
            v.in_u0,
            v.residual
        );
    }
}
