//! Line-oriented scene files: a structure, optionally an `F` source and a
//! group element.
//!
//! ```text
//! acbm-scene 1
//! n 1
//! phi
//! <d rows of d numbers>
//! xi
//! <d numbers>
//! eta
//! <d numbers>
//! g
//! <d rows of d numbers>
//! F                      optional: d² rows, row (x, y) lists F(x, y, ·)
//! weingarten             optional: d rows
//! generator              optional
//! seed <u64>
//! term <class> <kind> <numbers...>
//! conformal              optional
//! u <num>
//! v <num>
//! w <num>
//! du <d numbers>
//! dv <d numbers>
//! dw <d numbers>
//! ```
//!
//! Blank lines and `#` comments are ignored. Numbers are written with 17
//! significant digits so that a written scene reads back bit-for-bit.

use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classes::{construct_from_weingarten, BasicClass, ClassParams, ClassSpaces};
use crate::conformal::ConformalPointData;
use crate::error::{Error, Result};
use crate::fundamental::FTensor;
use crate::structure::Structure;
use crate::tensor::{Dim, Metric, Tensor3};

pub const VERSION_TAG: &str = "acbm-scene 1";

/// Parameters of one generator term.
#[derive(Clone, Debug, PartialEq)]
pub enum TermParams {
    Scalar(f64),
    Covector(DVector<f64>),
    Bilinear(DMatrix<f64>),
    Coefficients(Vec<f64>),
    /// A seeded random member of the class, scaled by the factor.
    Random(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorTerm {
    pub class: BasicClass,
    pub params: TermParams,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub seed: u64,
    pub terms: Vec<GeneratorTerm>,
}

/// Where the fundamental tensor of a scene comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum FSource {
    Tensor(Tensor3),
    Weingarten(DMatrix<f64>),
    Generator(Generator),
}

#[derive(Clone, Debug)]
pub struct Scene {
    pub structure: Structure,
    pub f: Option<FSource>,
    pub conformal: Option<ConformalPointData>,
}

impl Scene {
    pub fn new(structure: Structure) -> Self {
        Self {
            structure,
            f: None,
            conformal: None,
        }
    }

    pub fn with_f(mut self, f: FSource) -> Self {
        self.f = Some(f);
        self
    }

    pub fn with_conformal(mut self, c: ConformalPointData) -> Self {
        self.conformal = Some(c);
        self
    }

    /// Parse a scene. The structure is only shape-checked here; call
    /// [`Structure::validate`] to check the axioms.
    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).scene()
    }

    pub fn to_text(&self) -> String {
        let s = &self.structure;
        let mut out = String::new();
        out.push_str(VERSION_TAG);
        out.push('\n');
        let _ = writeln!(out, "n {}", s.n());
        out.push_str("phi\n");
        write_matrix(&mut out, s.phi());
        out.push_str("xi\n");
        write_row(&mut out, s.xi().iter());
        out.push_str("eta\n");
        write_row(&mut out, s.eta().iter());
        out.push_str("g\n");
        write_matrix(&mut out, s.g().matrix());
        match &self.f {
            None => {}
            Some(FSource::Tensor(t)) => {
                out.push_str("F\n");
                let d = t.dim();
                for x in 0..d {
                    for y in 0..d {
                        write_row(
                            &mut out,
                            (0..d).map(|z| t.get(x, y, z)).collect::<Vec<_>>().iter(),
                        );
                    }
                }
            }
            Some(FSource::Weingarten(a)) => {
                out.push_str("weingarten\n");
                write_matrix(&mut out, a);
            }
            Some(FSource::Generator(gen)) => {
                out.push_str("generator\n");
                let _ = writeln!(out, "seed {}", gen.seed);
                for term in &gen.terms {
                    let _ = write!(out, "term {} ", term.class);
                    match &term.params {
                        TermParams::Scalar(v) => {
                            out.push_str("scalar ");
                            write_row(&mut out, [*v].iter());
                        }
                        TermParams::Covector(v) => {
                            out.push_str("covector ");
                            write_row(&mut out, v.iter());
                        }
                        TermParams::Bilinear(b) => {
                            out.push_str("bilinear ");
                            write_row(&mut out, b.transpose().iter());
                        }
                        TermParams::Coefficients(c) => {
                            out.push_str("coefficients");
                            if !c.is_empty() {
                                out.push(' ');
                            }
                            write_row(&mut out, c.iter());
                        }
                        TermParams::Random(k) => {
                            out.push_str("random ");
                            write_row(&mut out, [*k].iter());
                        }
                    }
                }
            }
        }
        if let Some(c) = &self.conformal {
            out.push_str("conformal\n");
            for (name, v) in [("u", c.u), ("v", c.v), ("w", c.w)] {
                let _ = writeln!(out, "{name} {}", num(v));
            }
            for (name, v) in [("du", &c.du), ("dv", &c.dv), ("dw", &c.dw)] {
                let _ = write!(out, "{name} ");
                write_row(&mut out, v.iter());
            }
        }
        out
    }

    /// Materialize `F` for the scene's structure.
    pub fn fundamental(&self, tol: f64) -> Result<FTensor> {
        let s = &self.structure;
        match &self.f {
            None => Err(Error::Validation("scene supplies no F".into())),
            Some(FSource::Tensor(t)) => FTensor::new(t.clone(), s, tol),
            Some(FSource::Weingarten(a)) => construct_from_weingarten(a, s, tol),
            Some(FSource::Generator(gen)) => {
                let spaces = ClassSpaces::new(s)?;
                let mut rng = ChaCha8Rng::seed_from_u64(gen.seed);
                let mut f = FTensor::zero(s);
                for term in &gen.terms {
                    let part = match &term.params {
                        TermParams::Scalar(v) => {
                            spaces.construct(term.class, &ClassParams::Scalar(*v))?
                        }
                        TermParams::Covector(v) => {
                            spaces.construct(term.class, &ClassParams::Covector(v.clone()))?
                        }
                        TermParams::Bilinear(b) => {
                            spaces.construct(term.class, &ClassParams::Bilinear(b.clone()))?
                        }
                        TermParams::Coefficients(c) => {
                            spaces.construct(term.class, &ClassParams::Coefficients(c.clone()))?
                        }
                        TermParams::Random(k) => {
                            spaces.random_member(term.class, &mut rng).scale(*k)
                        }
                    };
                    f = f.add(&part);
                }
                Ok(f)
            }
        }
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_row<'a>(out: &mut String, values: impl Iterator<Item = &'a f64>) {
    let row: Vec<String> = values.map(|v| num(*v)).collect();
    out.push_str(&row.join(" "));
    out.push('\n');
}

fn write_matrix(out: &mut String, m: &DMatrix<f64>) {
    for r in 0..m.nrows() {
        write_row(out, m.row(r).transpose().iter());
    }
}

struct Parser<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

const BLOCKS: [&str; 4] = ["F", "weingarten", "generator", "conformal"];

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Self { lines, pos: 0 }
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(1, |l| l.0)
    }

    fn err(line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let l = self.lines.get(self.pos).copied().ok_or_else(|| {
            Self::err(
                self.last_line(),
                format!("unexpected end of file, expected {what}"),
            )
        })?;
        self.pos += 1;
        Ok(l)
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn keyword(&mut self, kw: &str) -> Result<usize> {
        let (line, text) = self.next(kw)?;
        if text != kw {
            return Err(Self::err(line, format!("expected `{kw}`, found `{text}`")));
        }
        Ok(line)
    }

    fn numbers(line: usize, fields: &[&str], count: usize) -> Result<Vec<f64>> {
        if fields.len() != count {
            return Err(Self::err(
                line,
                format!("expected {count} numbers, found {}", fields.len()),
            ));
        }
        fields
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let v = f64::from_str(f).map_err(|_| {
                    Self::err(line, format!("field {}: malformed number `{f}`", i + 1))
                })?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Self::err(
                        line,
                        format!("field {}: non-finite number `{f}`", i + 1),
                    ))
                }
            })
            .collect()
    }

    fn row(&mut self, count: usize, what: &str) -> Result<Vec<f64>> {
        let (line, text) = self.next(what)?;
        let fields: Vec<&str> = text.split_whitespace().collect();
        Self::numbers(line, &fields, count)
    }

    fn matrix(&mut self, d: usize, what: &str) -> Result<DMatrix<f64>> {
        let mut data = Vec::with_capacity(d * d);
        for _ in 0..d {
            data.extend(self.row(d, what)?);
        }
        Ok(DMatrix::from_row_slice(d, d, &data))
    }

    /// `name v1 v2 ...` with exactly `count` numbers.
    fn named_row(&mut self, name: &str, count: usize) -> Result<Vec<f64>> {
        let (line, text) = self.next(name)?;
        let mut fields = text.split_whitespace();
        let head = fields.next().unwrap_or("");
        if head != name {
            return Err(Self::err(
                line,
                format!("expected `{name}`, found `{head}`"),
            ));
        }
        Self::numbers(line, &fields.collect::<Vec<_>>(), count)
    }

    fn scene(mut self) -> Result<Scene> {
        let (line, tag) = self.next("version tag")?;
        if tag != VERSION_TAG {
            return Err(Self::err(
                line,
                format!("expected version tag `{VERSION_TAG}`, found `{tag}`"),
            ));
        }
        let (line, text) = self.next("n")?;
        let n = match text.split_whitespace().collect::<Vec<_>>()[..] {
            ["n", v] => v
                .parse::<usize>()
                .map_err(|_| Self::err(line, format!("malformed dimension `{v}`")))?,
            _ => {
                return Err(Self::err(
                    line,
                    format!("expected `n <integer>`, found `{text}`"),
                ))
            }
        };
        let d = Dim::new(n)
            .map_err(|e| Self::err(line, e.to_string()))?
            .full();

        let phi_line = self.keyword("phi")?;
        let phi = self.matrix(d, "phi row")?;
        self.keyword("xi")?;
        let xi = DVector::from_vec(self.row(d, "xi")?);
        self.keyword("eta")?;
        let eta = DVector::from_vec(self.row(d, "eta")?);
        let g_line = self.keyword("g")?;
        let g = self.matrix(d, "g row")?;
        let g = Metric::new(g).map_err(|e| Self::err(g_line, e.to_string()))?;
        let structure =
            Structure::new(phi, xi, eta, g).map_err(|e| Self::err(phi_line, e.to_string()))?;

        let mut scene = Scene::new(structure);
        while let Some((line, text)) = self.peek() {
            self.pos += 1;
            match text {
                "F" | "weingarten" | "generator" => {
                    if scene.f.is_some() {
                        return Err(Self::err(
                            line,
                            "more than one F source (F, weingarten, generator)",
                        ));
                    }
                    scene.f = Some(match text {
                        "F" => {
                            let mut data = Vec::with_capacity(d * d * d);
                            for _ in 0..d * d {
                                data.extend(self.row(d, "F row")?);
                            }
                            FSource::Tensor(Tensor3::from_vec(d, data)?)
                        }
                        "weingarten" => FSource::Weingarten(self.matrix(d, "weingarten row")?),
                        _ => FSource::Generator(self.generator(d)?),
                    });
                }
                "conformal" => {
                    if scene.conformal.is_some() {
                        return Err(Self::err(line, "duplicate conformal block"));
                    }
                    let u = self.named_row("u", 1)?[0];
                    let v = self.named_row("v", 1)?[0];
                    let w = self.named_row("w", 1)?[0];
                    let du = DVector::from_vec(self.named_row("du", d)?);
                    let dv = DVector::from_vec(self.named_row("dv", d)?);
                    let dw = DVector::from_vec(self.named_row("dw", d)?);
                    scene.conformal = Some(ConformalPointData {
                        u,
                        v,
                        w,
                        du,
                        dv,
                        dw,
                    });
                }
                other => return Err(Self::err(line, format!("unknown block `{other}`"))),
            }
        }
        Ok(scene)
    }

    fn generator(&mut self, d: usize) -> Result<Generator> {
        let (line, text) = self.next("seed")?;
        let seed = match text.split_whitespace().collect::<Vec<_>>()[..] {
            ["seed", v] => v
                .parse::<u64>()
                .map_err(|_| Self::err(line, format!("malformed seed `{v}`")))?,
            _ => {
                return Err(Self::err(
                    line,
                    format!("expected `seed <integer>`, found `{text}`"),
                ))
            }
        };
        let mut terms = Vec::new();
        while let Some((line, text)) = self.peek() {
            if BLOCKS.contains(&text) {
                break;
            }
            self.pos += 1;
            let fields: Vec<&str> = text.split_whitespace().collect();
            if fields.len() < 3 || fields[0] != "term" {
                return Err(Self::err(
                    line,
                    format!("expected `term <class> <kind> ...`, found `{text}`"),
                ));
            }
            let class =
                BasicClass::from_str(fields[1]).map_err(|e| Self::err(line, e.to_string()))?;
            let rest = &fields[3..];
            let params = match fields[2] {
                "scalar" => TermParams::Scalar(Self::numbers(line, rest, 1)?[0]),
                "random" => TermParams::Random(Self::numbers(line, rest, 1)?[0]),
                "covector" => {
                    TermParams::Covector(DVector::from_vec(Self::numbers(line, rest, d)?))
                }
                "bilinear" => TermParams::Bilinear(DMatrix::from_row_slice(
                    d,
                    d,
                    &Self::numbers(line, rest, d * d)?,
                )),
                "coefficients" => TermParams::Coefficients(Self::numbers(line, rest, rest.len())?),
                other => return Err(Self::err(line, format!("unknown term kind `{other}`"))),
            };
            terms.push(GeneratorTerm { class, params });
        }
        Ok(Generator { seed, terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip() {
        let s = Structure::random(1, 3).unwrap();
        let scene = Scene::new(s).with_f(FSource::Generator(Generator {
            seed: 9,
            terms: vec![
                GeneratorTerm {
                    class: BasicClass::F4,
                    params: TermParams::Scalar(0.1),
                },
                GeneratorTerm {
                    class: BasicClass::F11,
                    params: TermParams::Random(2.0),
                },
            ],
        }));
        let text = scene.to_text();
        let back = Scene::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.structure.phi(), scene.structure.phi());
    }

    #[test]
    fn malformed_number_reports_line() {
        let text = Scene::new(Structure::canonical(1).unwrap()).to_text();
        let bad = text.replacen("1.0000000000000000e0", "1.0x", 1);
        match Scene::parse(&bad) {
            Err(Error::Parse { line, message }) => {
                assert!(message.contains("malformed"), "{message}");
                let expected = bad.lines().position(|l| l.contains("1.0x")).unwrap() + 1;
                assert_eq!(line, expected);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn two_f_sources_rejected() {
        let mut text = Scene::new(Structure::canonical(1).unwrap())
            .with_f(FSource::Tensor(Tensor3::zeros(3)))
            .to_text();
        text.push_str("weingarten\n0 0 0\n0 0 0\n0 0 0\n");
        assert!(matches!(Scene::parse(&text), Err(Error::Parse { .. })));
    }
}
