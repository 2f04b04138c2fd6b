use acbm::structure::Structure;
use acbm::tensor::DEFAULT_TOL;

fn main() {
    for n in 1..=3 {
        let s = Structure::canonical(n).unwrap();
        println!(
            "canonical n={n}, d={}, signature {:?}",
            s.d(),
            s.g().signature()
        );
        print!("{}", s.validate(DEFAULT_TOL));
    }

    let s = Structure::random(2, 42).unwrap();
    println!("random basis n=2, seed 42");
    print!("{}", s.validate(DEFAULT_TOL));

    let gt = s.with_associated_metric().unwrap();
    println!("associated metric signature {:?}", gt.g().signature());
    print!("{}", gt.validate(DEFAULT_TOL));
}
