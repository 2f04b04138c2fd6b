use acbm::classes::BasicClass;
use acbm::conformal::g0_generator;
use acbm::report::{cmd_classify, cmd_conformal, ConformalOptions};
use acbm::scene::{FSource, Generator, GeneratorTerm, Scene, TermParams};
use acbm::structure::Structure;
use acbm::tensor::DEFAULT_TOL;

fn main() {
    let s = Structure::random(1, 2).unwrap();
    let scene = Scene::new(s.clone())
        .with_f(FSource::Generator(Generator {
            seed: 1,
            terms: vec![
                GeneratorTerm {
                    class: BasicClass::F4,
                    params: TermParams::Scalar(1.0),
                },
                GeneratorTerm {
                    class: BasicClass::F11,
                    params: TermParams::Random(0.5),
                },
            ],
        }))
        .with_conformal(g0_generator(&s, 5));

    let text = scene.to_text();
    print!("{text}");
    let back = Scene::parse(&text).unwrap();
    println!("round trip identical: {}", back.to_text() == text);

    print!("{}", cmd_classify(&back, DEFAULT_TOL).unwrap());
    let opts = ConformalOptions {
        check_invariance: true,
        ..Default::default()
    };
    print!("{}", cmd_conformal(&back, &opts, DEFAULT_TOL).unwrap());
}
