//! JSON document shapes for every value that crosses a file boundary.
//!
//! Each `*Doc` type mirrors the on-disk layout and converts to and from the
//! validated model type. Parsing a document never checks domain invariants;
//! `into_model` does, so callers can tell malformed JSON from bad data.
//! The model types implement `Serialize`/`Deserialize` through these
//! documents.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactlin::{Rational, RationalMatrix};
use crate::finset::{FinFunction, FinSet};
use crate::openmarkov::{FiberWeights, Generator, MarkovMorphism, OpenMarkov};
use crate::opennet::{Decoration, Graph, Multiset, NetSquare, OpenNet, PetriRates};

/// Value of the `format_version` field written by the command-line tool.
pub const FORMAT_VERSION: &str = "1";

pub type LabelMap = BTreeMap<String, String>;

fn set_of(labels: Vec<String>) -> Result<FinSet> {
    FinSet::new(labels)
}

fn function(dom: &FinSet, cod: &FinSet, map: &LabelMap) -> Result<FinFunction> {
    if let Some(stray) = map.keys().find(|k| !dom.contains(k)) {
        return Err(Error::UnknownLabel {
            label: stray.clone(),
            context: "domain of a leg map".into(),
        });
    }
    FinFunction::new(dom.clone(), cod.clone(), map)
}

fn label_map(f: &FinFunction) -> LabelMap {
    f.pairs().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn matrix(rows: Vec<Vec<Rational>>, n: usize) -> Result<RationalMatrix> {
    let width = rows.first().map_or(n, Vec::len);
    if rows.len() != n || rows.iter().any(|r| r.len() != width) {
        return Err(Error::ShapeMismatch(format!(
            "expected a {n}×{n} matrix, got {} rows",
            rows.len()
        )));
    }
    RationalMatrix::from_rows(rows, width)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub states: Vec<String>,
    #[serde(rename = "H")]
    pub h: Vec<Vec<Rational>>,
}

impl GeneratorDoc {
    pub fn from_model(g: &Generator) -> Self {
        GeneratorDoc {
            states: g.states().labels().to_vec(),
            h: g.h().to_rows(),
        }
    }

    pub fn into_model(self) -> Result<Generator> {
        let states = set_of(self.states)?;
        let n = states.len();
        Generator::new(states, matrix(self.h, n)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenMarkovDoc {
    pub states: Vec<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub i: LabelMap,
    pub o: LabelMap,
    #[serde(rename = "H")]
    pub h: Vec<Vec<Rational>>,
}

impl OpenMarkovDoc {
    pub fn from_model(m: &OpenMarkov) -> Self {
        OpenMarkovDoc {
            states: m.states().labels().to_vec(),
            inputs: m.inputs().labels().to_vec(),
            outputs: m.outputs().labels().to_vec(),
            i: label_map(m.i()),
            o: label_map(m.o()),
            h: m.h().to_rows(),
        }
    }

    pub fn into_model(self) -> Result<OpenMarkov> {
        let generator = GeneratorDoc {
            states: self.states,
            h: self.h,
        }
        .into_model()?;
        let states = generator.states().clone();
        let i = function(&set_of(self.inputs)?, &states, &self.i)?;
        let o = function(&set_of(self.outputs)?, &states, &self.o)?;
        OpenMarkov::new(i, generator, o)
    }
}

/// The map `p` of a lumping, given by its codomain and label map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LumpingMapDoc {
    pub cod: Vec<String>,
    pub map: LabelMap,
}

/// A generator together with a lumping map and optional fiber weights.
/// Any other fields (such as the legs of an open process) are ignored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LumpDoc {
    pub states: Vec<String>,
    #[serde(rename = "H")]
    pub h: Vec<Vec<Rational>>,
    pub p: LumpingMapDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<FiberWeights>,
}

impl LumpDoc {
    pub fn into_model(self) -> Result<(Generator, FinFunction, Option<FiberWeights>)> {
        let generator = GeneratorDoc {
            states: self.states,
            h: self.h,
        }
        .into_model()?;
        let p = function(generator.states(), &set_of(self.p.cod)?, &self.p.map)?;
        Ok((generator, p, self.weights))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkovMorphismDoc {
    pub source: OpenMarkovDoc,
    pub target: OpenMarkovDoc,
    pub f: LabelMap,
    pub p: LabelMap,
    pub g: LabelMap,
}

impl MarkovMorphismDoc {
    pub fn from_model(m: &MarkovMorphism) -> Self {
        MarkovMorphismDoc {
            source: OpenMarkovDoc::from_model(&m.source),
            target: OpenMarkovDoc::from_model(&m.target),
            f: label_map(&m.f),
            p: label_map(&m.p),
            g: label_map(&m.g),
        }
    }

    /// Builds the triple of maps; whether it is a morphism is left to
    /// [`MarkovMorphism::validate`].
    pub fn into_model(self) -> Result<MarkovMorphism> {
        let source = self.source.into_model()?;
        let target = self.target.into_model()?;
        Ok(MarkovMorphism {
            f: function(source.inputs(), target.inputs(), &self.f)?,
            p: function(source.states(), target.states(), &self.p)?,
            g: function(source.outputs(), target.outputs(), &self.g)?,
            source,
            target,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub name: String,
    pub src: String,
    pub tgt: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<Rational>,
}

fn is_false(b: &bool) -> bool {
    !b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    /// Marks a graph with edge rates even when it has no edges.
    #[serde(default, skip_serializing_if = "is_false")]
    pub rated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionDoc {
    pub name: String,
    pub src: Multiset,
    pub tgt: Multiset,
    pub rate: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PetriDoc {
    pub species: Vec<String>,
    pub transitions: Vec<TransitionDoc>,
}

/// An open net carries exactly one of `graph` and `petri`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenNetDoc {
    pub left_foot: Vec<String>,
    pub right_foot: Vec<String>,
    pub i: LabelMap,
    pub o: LabelMap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub petri: Option<PetriDoc>,
}

impl GraphDoc {
    fn from_model(g: &Graph) -> Self {
        GraphDoc {
            nodes: g.nodes().labels().to_vec(),
            edges: (0..g.edges().len())
                .map(|e| EdgeDoc {
                    name: g.edges().label(e).to_string(),
                    src: g.nodes().label(g.src().at(e)).to_string(),
                    tgt: g.nodes().label(g.tgt().at(e)).to_string(),
                    rate: g.rate().map(|r| r[e].clone()),
                })
                .collect(),
            rated: g.rate().is_some(),
        }
    }

    fn into_model(self) -> Result<Graph> {
        let nodes = set_of(self.nodes)?;
        let edges = set_of(self.edges.iter().map(|e| e.name.clone()).collect())?;
        let rated = self.rated || self.edges.iter().any(|e| e.rate.is_some());
        let rate = if rated {
            let rates = self
                .edges
                .iter()
                .map(|e| {
                    e.rate
                        .clone()
                        .ok_or_else(|| Error::InvalidDecoration(format!("edge `{}` has no rate", e.name)))
                })
                .collect::<Result<Vec<_>>>()?;
            Some(rates)
        } else {
            None
        };
        let src = FinFunction::new(edges.clone(), nodes.clone(), self.edges.iter().map(|e| (&e.name, &e.src)))?;
        let tgt = FinFunction::new(edges, nodes, self.edges.iter().map(|e| (&e.name, &e.tgt)))?;
        Graph::new(src, tgt, rate)
    }
}

impl PetriDoc {
    fn from_model(p: &PetriRates) -> Self {
        PetriDoc {
            species: p.species().labels().to_vec(),
            transitions: (0..p.transitions().len())
                .map(|t| TransitionDoc {
                    name: p.transitions().label(t).to_string(),
                    src: p.inputs()[t].clone(),
                    tgt: p.outputs()[t].clone(),
                    rate: p.rate()[t].clone(),
                })
                .collect(),
        }
    }

    fn into_model(self) -> Result<PetriRates> {
        let species = set_of(self.species)?;
        let transitions = set_of(self.transitions.iter().map(|t| t.name.clone()).collect())?;
        let (mut inputs, mut outputs, mut rate) = (Vec::new(), Vec::new(), Vec::new());
        for t in self.transitions {
            inputs.push(t.src);
            outputs.push(t.tgt);
            rate.push(t.rate);
        }
        PetriRates::new(species, transitions, inputs, outputs, rate)
    }
}

impl OpenNetDoc {
    pub fn from_model(n: &OpenNet) -> Self {
        let (graph, petri) = match n.decoration() {
            Decoration::Graph(g) => (Some(GraphDoc::from_model(g)), None),
            Decoration::Petri(p) => (None, Some(PetriDoc::from_model(p))),
        };
        OpenNetDoc {
            left_foot: n.left_foot().labels().to_vec(),
            right_foot: n.right_foot().labels().to_vec(),
            i: label_map(n.i()),
            o: label_map(n.o()),
            graph,
            petri,
        }
    }

    pub fn into_model(self) -> Result<OpenNet> {
        let decoration = match (self.graph, self.petri) {
            (Some(g), None) => Decoration::Graph(g.into_model()?),
            (None, Some(p)) => Decoration::Petri(p.into_model()?),
            _ => {
                return Err(Error::InvalidDecoration(
                    "an open net needs exactly one of `graph` and `petri`".into(),
                ))
            }
        };
        let vertices = decoration.vertices().clone();
        let i = function(&set_of(self.left_foot)?, &vertices, &self.i)?;
        let o = function(&set_of(self.right_foot)?, &vertices, &self.o)?;
        OpenNet::new(i, decoration, o)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetSquareDoc {
    pub source: OpenNetDoc,
    pub target: OpenNetDoc,
    pub f: LabelMap,
    pub vertex: LabelMap,
    pub edge: LabelMap,
    pub g: LabelMap,
}

impl NetSquareDoc {
    pub fn from_model(s: &NetSquare) -> Self {
        NetSquareDoc {
            source: OpenNetDoc::from_model(&s.source),
            target: OpenNetDoc::from_model(&s.target),
            f: label_map(&s.f),
            vertex: label_map(&s.vertex),
            edge: label_map(&s.edge),
            g: label_map(&s.g),
        }
    }

    pub fn into_model(self) -> Result<NetSquare> {
        let source = self.source.into_model()?;
        let target = self.target.into_model()?;
        Ok(NetSquare {
            f: function(source.left_foot(), target.left_foot(), &self.f)?,
            vertex: function(source.vertices(), target.vertices(), &self.vertex)?,
            edge: function(source.arrows(), target.arrows(), &self.edge)?,
            g: function(source.right_foot(), target.right_foot(), &self.g)?,
            source,
            target,
        })
    }
}

macro_rules! serde_via_doc {
    ($model:ty, $doc:ty) => {
        impl Serialize for $model {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                <$doc>::from_model(self).serialize(serializer)
            }
        }

        impl<'de> Deserialize<'de> for $model {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
                <$doc>::deserialize(deserializer)?.into_model().map_err(D::Error::custom)
            }
        }
    };
}

serde_via_doc!(Generator, GeneratorDoc);
serde_via_doc!(OpenMarkov, OpenMarkovDoc);
serde_via_doc!(MarkovMorphism, MarkovMorphismDoc);
serde_via_doc!(OpenNet, OpenNetDoc);
serde_via_doc!(NetSquare, NetSquareDoc);
