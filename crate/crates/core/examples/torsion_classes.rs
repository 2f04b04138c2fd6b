use acbm::classes::{BasicClass, ClassSpaces};
use acbm::connection::t_canonical;
use acbm::structure::Structure;
use acbm::torsion_class::{correspondence_check, expected_row, matching_torsion_classes};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let s = Structure::random(2, 13).unwrap();
    let spaces = ClassSpaces::new(&s).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for c in BasicClass::ALL {
        let f = spaces.random_member(c, &mut rng);
        let r = correspondence_check(&spaces, &f, 1e-8).unwrap();
        let found = matching_torsion_classes(&t_canonical(&f, &s), &s, 1e-8);
        println!(
            "{:<4} expected {:?}  found {:?}  table {:.1e}  characterization {:.1e}",
            c.to_string(),
            expected_row(c).0,
            found,
            r.expected_residuals.iter().fold(0.0_f64, |a, b| a.max(*b)),
            r.characterization_residual
        );
    }
}
