use acbm::classes::{BasicClass, ClassParams, ClassSet, ClassSpaces, MEMBER_THRESHOLD};
use acbm::structure::Structure;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let s = Structure::random(2, 7).unwrap();
    let spaces = ClassSpaces::new(&s).unwrap();
    let audit = spaces.dimension_audit();
    println!(
        "admissible dim {}, class dims {:?}, direct sum: {}",
        audit.admissible_dim,
        audit.class_dims,
        audit.is_direct_sum()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f5 = spaces
        .construct(BasicClass::F5, &ClassParams::Scalar(3.0))
        .unwrap();
    let mixed = f5.add(&spaces.random_member(BasicClass::F3, &mut rng));
    let report = spaces.classify(&mixed, MEMBER_THRESHOLD).unwrap();
    print!("{report}");

    let parts = spaces.decompose(&mixed).unwrap();
    let err = parts[BasicClass::F5.index()].tensor().residual(f5.tensor());
    println!("F5 part recovered to {err:.2e}");

    let any = spaces.random_in(ClassSet::all(), &mut rng);
    println!(
        "random admissible: {}",
        spaces.classify(&any, MEMBER_THRESHOLD).unwrap().detected
    );
}
