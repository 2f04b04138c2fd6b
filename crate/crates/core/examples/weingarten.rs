use acbm::classes::{
    construct_from_weingarten, BasicClass, ClassSet, ClassSpaces, MEMBER_THRESHOLD,
};
use acbm::structure::Structure;
use acbm::tensor::DEFAULT_TOL;
use nalgebra::DMatrix;

fn main() {
    let s = Structure::canonical(1).unwrap();
    let a = DMatrix::from_row_slice(3, 3, &[1.5, -0.25, 0.0, 0.25, 1.5, 0.0, 0.0, 0.0, 0.0]);
    let f = construct_from_weingarten(&a, &s, DEFAULT_TOL).unwrap();
    let report = ClassSpaces::new(&s)
        .unwrap()
        .classify(&f, MEMBER_THRESHOLD)
        .unwrap();
    print!("{report}");
    let sasakian = ClassSet::of(&[BasicClass::F4, BasicClass::F5, BasicClass::F6]);
    println!(
        "inside F4+F5+F6: {}",
        report.detected.is_subset_of(sasakian)
    );

    let bad = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0]);
    match construct_from_weingarten(&bad, &s, DEFAULT_TOL) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
}
