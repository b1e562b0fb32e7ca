//! The `cospan` command-line tool.
//!
//! Every verb reads JSON documents (a path, or `-` for standard input) and
//! writes one pretty-printed JSON document with sorted keys to standard
//! output. Exit status is 0 on success, 1 on a domain error and 2 when an
//! input cannot be read or does not match its schema.

use std::io::Read;
use std::path::Path;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use cospan_core::formats::{
    GeneratorDoc, LumpDoc, MarkovMorphismDoc, NetSquareDoc, OpenMarkovDoc, OpenNetDoc, FORMAT_VERSION,
};
use cospan_core::laws::{run_suite, section_weights, LawReport, Suite};
use cospan_core::openmarkov::{
    black_box, compose_open, is_lumpable, lump, stochastic_section, tensor_open, FiberWeights, OpenMarkov,
};
use cospan_core::opennet::{are_isomorphic, compose_open_net, tensor_open_net, OpenNet};
use cospan_core::{Error, Rational};

#[derive(Debug, Parser)]
#[command(name = "cospan", version, about = "Compose, coarse-grain and black-box open networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a document against its schema and domain invariants.
    Validate { input: String },
    /// Compose two open Markov processes or two open nets along their shared boundary.
    Compose { first: String, second: String },
    /// Place two open Markov processes or two open nets side by side.
    Tensor { first: String, second: String },
    /// Black-box an open Markov process into a linear relation.
    Blackbox { input: String },
    /// Coarse-grain a generator along its lumping map `p`.
    Lump {
        input: String,
        /// Section weights as `state=weight` pairs; fibers left out are uniform.
        #[arg(long, value_parser = parse_weights)]
        fiber_weights: Option<FiberWeights>,
    },
    /// Report whether a generator is lumpable along its lumping map `p`.
    CheckLumpable { input: String },
    /// Report whether a triple of maps is a morphism of open Markov processes.
    CheckMorphism { input: String },
    /// Search for an isomorphism of open nets that fixes both feet.
    Iso { first: String, second: String },
    /// Run a law suite, or every suite with `all`.
    Laws {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 6)]
        size_bound: usize,
    },
}

fn parse_weights(s: &str) -> Result<FiberWeights, String> {
    s.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            let (label, weight) = part
                .split_once('=')
                .ok_or_else(|| format!("`{part}` is not of the form state=weight"))?;
            let weight: Rational = weight.trim().parse().map_err(|e| format!("`{weight}`: {e}"))?;
            Ok((label.trim().to_string(), weight))
        })
        .collect()
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable input or a document that does not match its schema.
    Parse(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Parse(_) => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, message) = match self {
            Failure::Parse(m) => ("ParseError", m.clone()),
            Failure::Domain(e) => (e.kind(), e.to_string()),
        };
        json!({ "format_version": FORMAT_VERSION, "error": { "kind": kind, "message": message } })
    }
}

/// The result of one invocation: a JSON document and an exit status.
#[derive(Debug)]
pub struct Outcome {
    pub code: u8,
    pub document: Value,
}

impl Outcome {
    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.document).expect("values always serialize")
    }
}

pub fn run(cli: Cli) -> Outcome {
    let mut stdin = Stdin::default();
    match dispatch(cli.command, &mut stdin) {
        Ok((code, document)) => Outcome { code, document },
        Err(f) => Outcome {
            code: f.exit_code(),
            document: f.to_json(),
        },
    }
}

/// Standard input, read at most once.
#[derive(Default)]
struct Stdin {
    taken: bool,
}

struct Input {
    name: String,
    text: String,
    value: Value,
}

impl Stdin {
    fn read(&mut self, path: &str) -> Result<Input, Failure> {
        let text = if path == "-" {
            if self.taken {
                return Err(Failure::Parse("standard input can be used only once".into()));
            }
            self.taken = true;
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::Parse(format!("<stdin>: {e}")))?;
            buf
        } else {
            std::fs::read_to_string(Path::new(path)).map_err(|e| Failure::Parse(format!("{path}: {e}")))?
        };
        let name = if path == "-" { "<stdin>".to_string() } else { path.to_string() };
        let value: Value = serde_json::from_str(&text).map_err(|e| located(&name, &e))?;
        if let Some(version) = value.get("format_version") {
            if version != FORMAT_VERSION {
                return Err(Failure::Parse(format!(
                    "{name}: unsupported format_version {version}, expected \"{FORMAT_VERSION}\""
                )));
            }
        }
        Ok(Input { name, text, value })
    }
}

fn located(name: &str, e: &serde_json::Error) -> Failure {
    Failure::Parse(format!("{name}: {e}"))
}

/// The document shapes an input can take, told apart by their keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Generator,
    OpenMarkov,
    Lump,
    MarkovMorphism,
    OpenNet,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Generator => "generator",
            Kind::OpenMarkov => "open_markov",
            Kind::Lump => "lump",
            Kind::MarkovMorphism => "markov_morphism",
            Kind::OpenNet => "open_net",
        }
    }
}

impl Input {
    fn kind(&self) -> Result<Kind, Failure> {
        let has = |k: &str| self.value.get(k).is_some();
        Ok(if has("source") && has("target") {
            Kind::MarkovMorphism
        } else if has("left_foot") {
            Kind::OpenNet
        } else if has("H") && has("p") {
            Kind::Lump
        } else if has("H") && has("inputs") {
            Kind::OpenMarkov
        } else if has("H") {
            Kind::Generator
        } else {
            return Err(Failure::Parse(format!("{}: unrecognized document", self.name)));
        })
    }

    fn parse<T: serde::de::DeserializeOwned>(&self) -> Result<T, Failure> {
        serde_json::from_str(&self.text).map_err(|e| located(&self.name, &e))
    }

    fn open_markov(&self) -> Result<OpenMarkov, Failure> {
        Ok(self.parse::<OpenMarkovDoc>()?.into_model()?)
    }

    fn open_net(&self) -> Result<OpenNet, Failure> {
        Ok(self.parse::<OpenNetDoc>()?.into_model()?)
    }
}

fn emit<T: Serialize>(value: &T) -> Value {
    let mut v = serde_json::to_value(value).expect("values always serialize");
    if let Value::Object(map) = &mut v {
        map.insert("format_version".into(), Value::String(FORMAT_VERSION.into()));
    }
    v
}

fn object(entries: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
    let mut map: Map<String, Value> = entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    map.insert("format_version".into(), Value::String(FORMAT_VERSION.into()));
    Value::Object(map)
}

enum Pair {
    Markov(OpenMarkov, OpenMarkov),
    Net(OpenNet, OpenNet),
}

fn read_pair(stdin: &mut Stdin, first: &str, second: &str) -> Result<Pair, Failure> {
    let (a, b) = (stdin.read(first)?, stdin.read(second)?);
    match (a.kind()?, b.kind()?) {
        (Kind::OpenMarkov, Kind::OpenMarkov) => Ok(Pair::Markov(a.open_markov()?, b.open_markov()?)),
        (Kind::OpenNet, Kind::OpenNet) => Ok(Pair::Net(a.open_net()?, b.open_net()?)),
        (x, y) => Err(Error::KindMismatch(format!(
            "expected two open Markov processes or two open nets, got {} and {}",
            x.name(),
            y.name()
        ))
        .into()),
    }
}

fn expect_kind(input: &Input, wanted: &[Kind]) -> Result<Kind, Failure> {
    let kind = input.kind()?;
    if wanted.contains(&kind) {
        Ok(kind)
    } else {
        let names: Vec<&str> = wanted.iter().map(|k| k.name()).collect();
        Err(Error::KindMismatch(format!("{}: expected {}, got {}", input.name, names.join(" or "), kind.name())).into())
    }
}

fn dispatch(command: Command, stdin: &mut Stdin) -> Result<(u8, Value), Failure> {
    let ok = |v: Value| Ok((0, v));
    match command {
        Command::Validate { input } => {
            let input = stdin.read(&input)?;
            let kind = input.kind()?;
            match kind {
                Kind::Generator => drop(input.parse::<GeneratorDoc>()?.into_model()?),
                Kind::OpenMarkov => drop(input.open_markov()?),
                Kind::Lump => {
                    let (_, p, weights) = input.parse::<LumpDoc>()?.into_model()?;
                    stochastic_section(&p, weights.as_ref())?;
                }
                Kind::MarkovMorphism => input.parse::<MarkovMorphismDoc>()?.into_model()?.validate()?,
                Kind::OpenNet => drop(input.open_net()?),
            }
            ok(object([("kind", json!(kind.name())), ("valid", json!(true))]))
        }
        Command::Compose { first, second } => match read_pair(stdin, &first, &second)? {
            Pair::Markov(m, n) => ok(emit(&compose_open(&m, &n)?)),
            Pair::Net(m, n) => ok(emit(&compose_open_net(&m, &n)?)),
        },
        Command::Tensor { first, second } => match read_pair(stdin, &first, &second)? {
            Pair::Markov(m, n) => ok(emit(&tensor_open(&m, &n))),
            Pair::Net(m, n) => ok(emit(&tensor_open_net(&m, &n)?)),
        },
        Command::Blackbox { input } => {
            let input = stdin.read(&input)?;
            expect_kind(&input, &[Kind::OpenMarkov, Kind::Lump])?;
            ok(emit(&black_box(&input.open_markov()?)))
        }
        Command::Lump { input, fiber_weights } => {
            let input = stdin.read(&input)?;
            expect_kind(&input, &[Kind::Lump])?;
            let (generator, p, doc_weights) = input.parse::<LumpDoc>()?.into_model()?;
            let weights = fiber_weights.or(doc_weights);
            let section = stochastic_section(&p, weights.as_ref())?;
            let lumped = lump(&generator, &p, &section)?;
            ok(object([
                ("generator", serde_json::to_value(GeneratorDoc::from_model(&lumped)).expect("serializes")),
                ("section", json!(section.to_rows())),
                ("weights", json!(section_weights(&p, &section))),
                ("lumpable", json!(is_lumpable(&generator, &p)?)),
            ]))
        }
        Command::CheckLumpable { input } => {
            let input = stdin.read(&input)?;
            expect_kind(&input, &[Kind::Lump])?;
            let (generator, p, _) = input.parse::<LumpDoc>()?.into_model()?;
            ok(object([("lumpable", json!(is_lumpable(&generator, &p)?))]))
        }
        Command::CheckMorphism { input } => {
            let input = stdin.read(&input)?;
            expect_kind(&input, &[Kind::MarkovMorphism])?;
            let morphism = input.parse::<MarkovMorphismDoc>()?.into_model()?;
            ok(match morphism.validate() {
                Ok(()) => object([("valid", json!(true))]),
                Err(e) => object([("valid", json!(false)), ("reason", json!(e.to_string()))]),
            })
        }
        Command::Iso { first, second } => {
            let (a, b) = (stdin.read(&first)?, stdin.read(&second)?);
            expect_kind(&a, &[Kind::OpenNet])?;
            expect_kind(&b, &[Kind::OpenNet])?;
            ok(match are_isomorphic(&a.open_net()?, &b.open_net()?)? {
                Some(square) => object([
                    ("isomorphic", json!(true)),
                    ("square", serde_json::to_value(NetSquareDoc::from_model(&square)).expect("serializes")),
                ]),
                None => object([("isomorphic", json!(false))]),
            })
        }
        Command::Laws {
            suite,
            seed,
            cases,
            size_bound,
        } => {
            if suite == "all" {
                let reports: Vec<LawReport> = Suite::ALL
                    .iter()
                    .map(|s| run_suite(s.name(), seed, size_bound, cases))
                    .collect::<Result<_, _>>()?;
                let passed = reports.iter().all(LawReport::passed);
                Ok((u8::from(!passed), object([("reports", json!(reports)), ("passed", json!(passed))])))
            } else {
                let report = run_suite(&suite, seed, size_bound, cases)?;
                Ok((u8::from(!report.passed()), emit(&report)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_parse() {
        let w = parse_weights("b1=1/3, b2=2/3").unwrap();
        assert_eq!(w["b1"], Rational::new(1, 3));
        assert_eq!(w["b2"], Rational::new(2, 3));
        assert!(parse_weights("b1").is_err());
        assert!(parse_weights("b1=x").is_err());
    }

    #[test]
    fn failures_map_to_exit_codes() {
        assert_eq!(Failure::Parse("x".into()).exit_code(), 2);
        let domain = Failure::Domain(Error::NotTotal("a".into()));
        assert_eq!(domain.exit_code(), 1);
        assert_eq!(domain.to_json()["error"]["kind"], "NotTotal");
    }

    #[test]
    fn unknown_suite_is_a_domain_error() {
        let out = run(Cli {
            command: Command::Laws {
                suite: "nope".into(),
                seed: 0,
                cases: 1,
                size_bound: 6,
            },
        });
        assert_eq!(out.code, 1);
        assert_eq!(out.document["error"]["kind"], "UnknownSuite");
    }
}
