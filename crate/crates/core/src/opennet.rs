//! Open graphs, open graphs with edge rates, and open Petri nets with
//! rates, as structured cospans over discrete feet.
//!
//! Vertices of a graph and species of a Petri net play the same role and
//! are called vertices here; edges and transitions are called arrows.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::Rational;
use crate::finset::{coproduct, mediating_map, pushout, sum_map, FinFunction, FinSet, Pushout};

/// Largest vertex count [`are_isomorphic`] accepts.
pub const ISO_VERTEX_LIMIT: usize = 9;

/// A finite multiset of species: nonzero coefficients keyed by label.
pub type Multiset = BTreeMap<String, u64>;

/// `ℕ[f]`: pushes multiset coefficients along `f`.
pub fn apply_monoid_map(f: &FinFunction, m: &Multiset) -> Result<Multiset> {
    let mut out = Multiset::new();
    for (label, &count) in m {
        let image = f.apply(label).ok_or_else(|| Error::UnknownLabel {
            label: label.clone(),
            context: "domain of the species map".into(),
        })?;
        if count > 0 {
            *out.entry(image.to_string()).or_insert(0) += count;
        }
    }
    Ok(out)
}

/// A directed multigraph, optionally with a positive rate on every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    src: FinFunction,
    tgt: FinFunction,
    rate: Option<Vec<Rational>>,
}

impl Graph {
    pub fn new(src: FinFunction, tgt: FinFunction, rate: Option<Vec<Rational>>) -> Result<Self> {
        if src.dom() != tgt.dom() || src.cod() != tgt.cod() {
            return Err(Error::InvalidDecoration("source and target maps disagree on edges or nodes".into()));
        }
        if let Some(rates) = &rate {
            if rates.len() != src.dom().len() {
                return Err(Error::InvalidDecoration(format!(
                    "{} rates for {} edges",
                    rates.len(),
                    src.dom().len()
                )));
            }
            if let Some(pos) = rates.iter().position(|r| !r.is_positive()) {
                return Err(Error::InvalidDecoration(format!(
                    "edge `{}` has nonpositive rate {}",
                    src.dom().label(pos),
                    rates[pos]
                )));
            }
        }
        Ok(Graph { src, tgt, rate })
    }

    /// No edges.
    pub fn discrete(nodes: &FinSet, rated: bool) -> Self {
        Graph {
            src: FinFunction::from_empty(nodes),
            tgt: FinFunction::from_empty(nodes),
            rate: rated.then(Vec::new),
        }
    }

    pub fn nodes(&self) -> &FinSet {
        self.src.cod()
    }

    pub fn edges(&self) -> &FinSet {
        self.src.dom()
    }

    pub fn src(&self) -> &FinFunction {
        &self.src
    }

    pub fn tgt(&self) -> &FinFunction {
        &self.tgt
    }

    pub fn rate(&self) -> Option<&[Rational]> {
        self.rate.as_deref()
    }
}

/// A Petri net whose transitions carry nonnegative rates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PetriRates {
    species: FinSet,
    transitions: FinSet,
    inputs: Vec<Multiset>,
    outputs: Vec<Multiset>,
    rate: Vec<Rational>,
}

impl PetriRates {
    pub fn new(
        species: FinSet,
        transitions: FinSet,
        inputs: Vec<Multiset>,
        outputs: Vec<Multiset>,
        rate: Vec<Rational>,
    ) -> Result<Self> {
        let n = transitions.len();
        if inputs.len() != n || outputs.len() != n || rate.len() != n {
            return Err(Error::InvalidDecoration(format!(
                "{n} transitions but {} inputs, {} outputs and {} rates",
                inputs.len(),
                outputs.len(),
                rate.len()
            )));
        }
        let clean = |ms: Vec<Multiset>| -> Result<Vec<Multiset>> {
            ms.into_iter()
                .map(|m| {
                    if let Some(bad) = m.keys().find(|k| !species.contains(k)) {
                        return Err(Error::UnknownLabel {
                            label: bad.clone(),
                            context: "species".into(),
                        });
                    }
                    Ok(m.into_iter().filter(|&(_, c)| c > 0).collect())
                })
                .collect()
        };
        let inputs = clean(inputs)?;
        let outputs = clean(outputs)?;
        if let Some(pos) = rate.iter().position(Rational::is_negative) {
            return Err(Error::InvalidDecoration(format!(
                "transition `{}` has negative rate {}",
                transitions.label(pos),
                rate[pos]
            )));
        }
        Ok(PetriRates {
            species,
            transitions,
            inputs,
            outputs,
            rate,
        })
    }

    /// No transitions.
    pub fn discrete(species: &FinSet) -> Self {
        PetriRates {
            species: species.clone(),
            transitions: FinSet::empty(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            rate: Vec::new(),
        }
    }

    pub fn species(&self) -> &FinSet {
        &self.species
    }

    pub fn transitions(&self) -> &FinSet {
        &self.transitions
    }

    pub fn inputs(&self) -> &[Multiset] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Multiset] {
        &self.outputs
    }

    pub fn rate(&self) -> &[Rational] {
        &self.rate
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetKind {
    Graph,
    KGraph,
    Petri,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decoration {
    Graph(Graph),
    Petri(PetriRates),
}

impl Decoration {
    pub fn kind(&self) -> NetKind {
        match self {
            Decoration::Graph(g) if g.rate.is_some() => NetKind::KGraph,
            Decoration::Graph(_) => NetKind::Graph,
            Decoration::Petri(_) => NetKind::Petri,
        }
    }

    pub fn discrete(vertices: &FinSet, kind: NetKind) -> Self {
        match kind {
            NetKind::Graph => Decoration::Graph(Graph::discrete(vertices, false)),
            NetKind::KGraph => Decoration::Graph(Graph::discrete(vertices, true)),
            NetKind::Petri => Decoration::Petri(PetriRates::discrete(vertices)),
        }
    }

    /// Nodes or species.
    pub fn vertices(&self) -> &FinSet {
        match self {
            Decoration::Graph(g) => g.nodes(),
            Decoration::Petri(p) => &p.species,
        }
    }

    /// Edges or transitions.
    pub fn arrows(&self) -> &FinSet {
        match self {
            Decoration::Graph(g) => g.edges(),
            Decoration::Petri(p) => &p.transitions,
        }
    }

    /// The same arrows with their ends pushed along `f`.
    pub fn push_vertices(&self, f: &FinFunction) -> Result<Decoration> {
        if f.dom() != self.vertices() {
            return Err(Error::Mismatch("vertex map is not defined on the vertices".into()));
        }
        Ok(match self {
            Decoration::Graph(g) => Decoration::Graph(Graph {
                src: g.src.then(f)?,
                tgt: g.tgt.then(f)?,
                rate: g.rate.clone(),
            }),
            Decoration::Petri(p) => Decoration::Petri(PetriRates {
                species: f.cod().clone(),
                transitions: p.transitions.clone(),
                inputs: p.inputs.iter().map(|m| apply_monoid_map(f, m)).collect::<Result<_>>()?,
                outputs: p.outputs.iter().map(|m| apply_monoid_map(f, m)).collect::<Result<_>>()?,
                rate: p.rate.clone(),
            }),
        })
    }

    /// Disjoint union of the arrows of `self` and `other`, with vertices sent
    /// into a common set by `j` and `k`.
    fn glue(&self, other: &Decoration, j: &FinFunction, k: &FinFunction) -> Result<Decoration> {
        if self.kind() != other.kind() {
            return Err(Error::KindMismatch(format!("{:?} and {:?}", self.kind(), other.kind())));
        }
        let arrows = coproduct(self.arrows(), other.arrows());
        Ok(match (self.push_vertices(j)?, other.push_vertices(k)?) {
            (Decoration::Graph(a), Decoration::Graph(b)) => Decoration::Graph(Graph {
                src: arrows.copair(&a.src, &b.src)?,
                tgt: arrows.copair(&a.tgt, &b.tgt)?,
                rate: a.rate.map(|ra| ra.into_iter().chain(b.rate.unwrap_or_default()).collect()),
            }),
            (Decoration::Petri(a), Decoration::Petri(b)) => Decoration::Petri(PetriRates {
                species: j.cod().clone(),
                transitions: arrows.set,
                inputs: a.inputs.into_iter().chain(b.inputs).collect(),
                outputs: a.outputs.into_iter().chain(b.outputs).collect(),
                rate: a.rate.into_iter().chain(b.rate).collect(),
            }),
            _ => unreachable!("kinds were compared"),
        })
    }
}

/// A structured cospan `L(A) → x ← L(B)` whose apex `x` is a graph or Petri
/// net; the legs are maps from the feet into its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenNet {
    decoration: Decoration,
    i: FinFunction,
    o: FinFunction,
}

impl OpenNet {
    pub fn new(i: FinFunction, decoration: Decoration, o: FinFunction) -> Result<Self> {
        if i.cod() != decoration.vertices() || o.cod() != decoration.vertices() {
            return Err(Error::Mismatch("feet do not map into the vertices".into()));
        }
        Ok(OpenNet { decoration, i, o })
    }

    pub fn left_foot(&self) -> &FinSet {
        self.i.dom()
    }

    pub fn right_foot(&self) -> &FinSet {
        self.o.dom()
    }

    pub fn decoration(&self) -> &Decoration {
        &self.decoration
    }

    pub fn kind(&self) -> NetKind {
        self.decoration.kind()
    }

    pub fn vertices(&self) -> &FinSet {
        self.decoration.vertices()
    }

    pub fn arrows(&self) -> &FinSet {
        self.decoration.arrows()
    }

    pub fn i(&self) -> &FinFunction {
        &self.i
    }

    pub fn o(&self) -> &FinFunction {
        &self.o
    }
}

/// `A → A ← A` over a discrete apex.
pub fn identity_open_net(a: &FinSet, kind: NetKind) -> OpenNet {
    OpenNet {
        decoration: Decoration::discrete(a, kind),
        i: FinFunction::identity(a),
        o: FinFunction::identity(a),
    }
}

pub fn empty_open_net(kind: NetKind) -> OpenNet {
    identity_open_net(&FinSet::empty(), kind)
}

/// `M ⊙ N` along with the pushout of vertices it was built on.
pub fn compose_open_net_legs(m: &OpenNet, n: &OpenNet) -> Result<(OpenNet, Pushout)> {
    if m.right_foot() != n.left_foot() {
        return Err(Error::BoundaryMismatch(format!(
            "right foot {:?} is not the left foot {:?}",
            m.right_foot(),
            n.left_foot()
        )));
    }
    if m.kind() != n.kind() {
        return Err(Error::KindMismatch(format!("{:?} and {:?}", m.kind(), n.kind())));
    }
    let po = pushout(&m.o, &n.i)?;
    let decoration = m.decoration.glue(&n.decoration, &po.left, &po.right)?;
    let net = OpenNet {
        decoration,
        i: m.i.then(&po.left)?,
        o: n.o.then(&po.right)?,
    };
    Ok((net, po))
}

/// Glues `M` and `N` along their shared foot.
pub fn compose_open_net(m: &OpenNet, n: &OpenNet) -> Result<OpenNet> {
    compose_open_net_legs(m, n).map(|(net, _)| net)
}

/// Places `M` and `N` side by side.
pub fn tensor_open_net(m: &OpenNet, n: &OpenNet) -> Result<OpenNet> {
    let vertices = coproduct(m.vertices(), n.vertices());
    let decoration = m
        .decoration
        .glue(&n.decoration, &vertices.inj_left, &vertices.inj_right)?;
    Ok(OpenNet {
        decoration,
        i: sum_map(&m.i, &n.i),
        o: sum_map(&m.o, &n.o),
    })
}

/// A map of open nets:
///
/// ```text
///   A  --i-->  x  <--o--  B
///   f       (vertex,      g
///            edge)
///   A' --i'--> x' <--o'-- B'
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetSquare {
    pub source: OpenNet,
    pub target: OpenNet,
    pub f: FinFunction,
    pub vertex: FinFunction,
    pub edge: FinFunction,
    pub g: FinFunction,
}

fn preserves_structure(a: &Decoration, b: &Decoration, vertex: &FinFunction, edge: &FinFunction) -> Result<bool> {
    Ok(match (a, b) {
        (Decoration::Graph(x), Decoration::Graph(y)) => {
            let rates_ok = match (&x.rate, &y.rate) {
                (None, None) => true,
                (Some(rx), Some(ry)) => (0..rx.len()).all(|e| rx[e] == ry[edge.at(e)]),
                _ => false,
            };
            rates_ok && x.src.then(vertex)? == edge.then(&y.src)? && x.tgt.then(vertex)? == edge.then(&y.tgt)?
        }
        (Decoration::Petri(x), Decoration::Petri(y)) => (0..x.transitions.len()).all(|t| {
            let u = edge.at(t);
            x.rate[t] == y.rate[u]
                && apply_monoid_map(vertex, &x.inputs[t]).ok().as_ref() == Some(&y.inputs[u])
                && apply_monoid_map(vertex, &x.outputs[t]).ok().as_ref() == Some(&y.outputs[u])
        }),
        _ => false,
    })
}

impl NetSquare {
    pub fn identity(m: &OpenNet) -> Self {
        NetSquare {
            source: m.clone(),
            target: m.clone(),
            f: FinFunction::identity(m.left_foot()),
            vertex: FinFunction::identity(m.vertices()),
            edge: FinFunction::identity(m.arrows()),
            g: FinFunction::identity(m.right_foot()),
        }
    }

    /// Reports the first violated condition as `InvalidMorphism`.
    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidMorphism(why.to_string()));
        let (s, t) = (&self.source, &self.target);
        let shaped = self.f.dom() == s.left_foot()
            && self.f.cod() == t.left_foot()
            && self.g.dom() == s.right_foot()
            && self.g.cod() == t.right_foot()
            && self.vertex.dom() == s.vertices()
            && self.vertex.cod() == t.vertices()
            && self.edge.dom() == s.arrows()
            && self.edge.cod() == t.arrows();
        if !shaped {
            return bad("maps do not go between the corresponding sets");
        }
        if s.i.then(&self.vertex)? != self.f.then(&t.i)? {
            return bad("left square does not commute");
        }
        if s.o.then(&self.vertex)? != self.g.then(&t.o)? {
            return bad("right square does not commute");
        }
        if !preserves_structure(&s.decoration, &t.decoration, &self.vertex, &self.edge)? {
            return bad("decoration map does not preserve structure");
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// `self` followed by `below`.
    pub fn vertical_compose(&self, below: &NetSquare) -> Result<NetSquare> {
        if self.target != below.source {
            return Err(Error::Mismatch("target of the first square is not the source of the second".into()));
        }
        Ok(NetSquare {
            source: self.source.clone(),
            target: below.target.clone(),
            f: self.f.then(&below.f)?,
            vertex: self.vertex.then(&below.vertex)?,
            edge: self.edge.then(&below.edge)?,
            g: self.g.then(&below.g)?,
        })
    }

    /// `self ⊙ right`; the vertex map is the one induced on the pushouts.
    pub fn horizontal_compose(&self, right: &NetSquare) -> Result<NetSquare> {
        if self.g != right.f {
            return Err(Error::Mismatch("squares disagree on the shared foot".into()));
        }
        let (source, po) = compose_open_net_legs(&self.source, &right.source)?;
        let (target, po2) = compose_open_net_legs(&self.target, &right.target)?;
        let vertex = mediating_map(
            &[&po.left, &po.right],
            &[&self.vertex.then(&po2.left)?, &right.vertex.then(&po2.right)?],
        )?;
        Ok(NetSquare {
            source,
            target,
            f: self.f.clone(),
            vertex,
            edge: sum_map(&self.edge, &right.edge),
            g: right.g.clone(),
        })
    }
}

/// Everything an isomorphism must preserve about how arrows touch a vertex.
fn vertex_signatures(d: &Decoration) -> Vec<Vec<(u8, u64, Rational)>> {
    let mut sig = vec![Vec::new(); d.vertices().len()];
    match d {
        Decoration::Graph(g) => {
            for e in 0..g.edges().len() {
                let r = g.rate.as_ref().map_or_else(Rational::zero, |rs| rs[e].clone());
                let (s, t) = (g.src.at(e), g.tgt.at(e));
                if s == t {
                    sig[s].push((2, 1, r));
                } else {
                    sig[s].push((0, 1, r.clone()));
                    sig[t].push((1, 1, r));
                }
            }
        }
        Decoration::Petri(p) => {
            for t in 0..p.transitions.len() {
                for (tag, ms) in [(0u8, &p.inputs[t]), (1, &p.outputs[t])] {
                    for (label, &c) in ms {
                        let v = p.species.index_of(label).expect("validated species");
                        sig[v].push((tag, c, p.rate[t].clone()));
                    }
                }
            }
        }
    }
    for s in &mut sig {
        s.sort();
    }
    sig
}

/// An arrow's image under a vertex map, used to match arrows up.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum ArrowKey {
    Edge(usize, usize, Option<Rational>),
    Transition(Vec<(usize, u64)>, Vec<(usize, u64)>, Rational),
}

fn arrow_keys(d: &Decoration, vertex_map: &[usize]) -> Vec<ArrowKey> {
    match d {
        Decoration::Graph(g) => (0..g.edges().len())
            .map(|e| {
                ArrowKey::Edge(
                    vertex_map[g.src.at(e)],
                    vertex_map[g.tgt.at(e)],
                    g.rate.as_ref().map(|r| r[e].clone()),
                )
            })
            .collect(),
        Decoration::Petri(p) => {
            let image = |ms: &Multiset| {
                let mut v: Vec<(usize, u64)> = ms
                    .iter()
                    .map(|(l, &c)| (vertex_map[p.species.index_of(l).expect("validated species")], c))
                    .collect();
                v.sort_unstable();
                v
            };
            (0..p.transitions.len())
                .map(|t| ArrowKey::Transition(image(&p.inputs[t]), image(&p.outputs[t]), p.rate[t].clone()))
                .collect()
        }
    }
}

/// Pairs arrows of `a` (ends renamed by `phi`) with arrows of `b`.
fn match_arrows(a: &Decoration, b: &Decoration, phi: &[usize]) -> Option<Vec<usize>> {
    let identity: Vec<usize> = (0..b.vertices().len()).collect();
    let mut pool: HashMap<ArrowKey, VecDeque<usize>> = HashMap::new();
    for (idx, key) in arrow_keys(b, &identity).into_iter().enumerate() {
        pool.entry(key).or_default().push_back(idx);
    }
    arrow_keys(a, phi)
        .into_iter()
        .map(|key| pool.get_mut(&key).and_then(VecDeque::pop_front))
        .collect()
}

type Adjacency = HashMap<(usize, usize), Vec<Option<Rational>>>;

/// Edge multiplicities between ordered vertex pairs, by rate.
fn adjacency(d: &Decoration) -> Option<Adjacency> {
    let Decoration::Graph(g) = d else { return None };
    let mut adj: Adjacency = HashMap::new();
    for e in 0..g.edges().len() {
        adj.entry((g.src.at(e), g.tgt.at(e)))
            .or_default()
            .push(g.rate.as_ref().map(|r| r[e].clone()));
    }
    for v in adj.values_mut() {
        v.sort();
    }
    Some(adj)
}

struct IsoSearch<'a> {
    a: &'a Decoration,
    b: &'a Decoration,
    sig_a: Vec<Vec<(u8, u64, Rational)>>,
    sig_b: Vec<Vec<(u8, u64, Rational)>>,
    adj_a: Option<Adjacency>,
    adj_b: Option<Adjacency>,
    phi: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl IsoSearch<'_> {
    fn consistent(&self, v: usize, w: usize) -> bool {
        if self.sig_a[v] != self.sig_b[w] {
            return false;
        }
        let (Some(aa), Some(ab)) = (&self.adj_a, &self.adj_b) else {
            return true;
        };
        let empty = Vec::new();
        let get = |m: &HashMap<(usize, usize), Vec<Option<Rational>>>, k| m.get(&k).unwrap_or(&empty).clone();
        (0..self.phi.len()).all(|u| {
            let Some(x) = (if u == v { Some(w) } else { self.phi[u] }) else {
                return true;
            };
            get(aa, (u, v)) == get(ab, (x, w)) && get(aa, (v, u)) == get(ab, (w, x))
        })
    }

    fn search(&mut self, v: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        if v == self.phi.len() {
            let phi: Vec<usize> = self.phi.iter().map(|x| x.expect("all assigned")).collect();
            return match_arrows(self.a, self.b, &phi).map(|arrows| (phi, arrows));
        }
        if let Some(w) = self.phi[v] {
            return if self.consistent(v, w) { self.search(v + 1) } else { None };
        }
        for w in 0..self.used.len() {
            if self.used[w] || !self.consistent(v, w) {
                continue;
            }
            self.phi[v] = Some(w);
            self.used[w] = true;
            if let Some(found) = self.search(v + 1) {
                return Some(found);
            }
            self.phi[v] = None;
            self.used[w] = false;
        }
        None
    }
}

/// Searches for a structure-preserving bijection between `m` and `n` that is
/// the identity on both feet.
pub fn are_isomorphic(m: &OpenNet, n: &OpenNet) -> Result<Option<NetSquare>> {
    if m.left_foot() != n.left_foot() || m.right_foot() != n.right_foot() {
        return Err(Error::BoundaryMismatch("open nets have different feet".into()));
    }
    let size = m.vertices().len().max(n.vertices().len());
    if size > ISO_VERTEX_LIMIT {
        return Err(Error::SizeLimitExceeded {
            size,
            limit: ISO_VERTEX_LIMIT,
        });
    }
    if m.kind() != n.kind() || m.vertices().len() != n.vertices().len() || m.arrows().len() != n.arrows().len() {
        return Ok(None);
    }

    let nv = m.vertices().len();
    let mut phi: Vec<Option<usize>> = vec![None; nv];
    let mut used = vec![false; nv];
    for (leg_m, leg_n) in [(&m.i, &n.i), (&m.o, &n.o)] {
        for s in 0..leg_m.dom().len() {
            let (v, w) = (leg_m.at(s), leg_n.at(s));
            match phi[v] {
                Some(prev) if prev != w => return Ok(None),
                Some(_) => {}
                None => {
                    if used[w] {
                        return Ok(None);
                    }
                    phi[v] = Some(w);
                    used[w] = true;
                }
            }
        }
    }

    let mut search = IsoSearch {
        a: &m.decoration,
        b: &n.decoration,
        sig_a: vertex_signatures(&m.decoration),
        sig_b: vertex_signatures(&n.decoration),
        adj_a: adjacency(&m.decoration),
        adj_b: adjacency(&n.decoration),
        phi,
        used,
    };
    let Some((phi, arrows)) = search.search(0) else {
        return Ok(None);
    };
    let square = NetSquare {
        source: m.clone(),
        target: n.clone(),
        f: FinFunction::identity(m.left_foot()),
        vertex: FinFunction::from_indices(m.vertices().clone(), n.vertices().clone(), phi)?,
        edge: FinFunction::from_indices(m.arrows().clone(), n.arrows().clone(), arrows)?,
        g: FinFunction::identity(m.right_foot()),
    };
    debug_assert!(square.is_valid());
    Ok(Some(square))
}
