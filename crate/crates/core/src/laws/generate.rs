//! Random instances for the law suites.
//!
//! Every generator takes an explicit RNG so a `(seed, case)` pair fixes the
//! instance. Structured instances (lumpings, morphisms, net squares) are
//! built so that they satisfy their defining conditions by construction.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactlin::{Rational, RationalMatrix, RationalSubspace};
use crate::finset::{pushout, FinFunction, FinSet, SquareFS};
use crate::linrel::LinearRelation;
use crate::openmarkov::{Generator, MarkovMorphism, OpenMarkov};
use crate::opennet::{Decoration, Graph, Multiset, NetKind, NetSquare, OpenNet, PetriRates};

pub type Rng64 = ChaCha8Rng;

/// Size and magnitude limits for generated instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub set: usize,
    pub numer: i64,
    pub denom: i64,
}

impl Bounds {
    pub fn new(set: usize) -> Self {
        Bounds {
            set,
            numer: 20,
            denom: 10,
        }
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::new(6)
    }
}

/// A nonnegative rate `a/b` with `a ≤ numer`, `1 ≤ b ≤ denom`.
pub fn rate(rng: &mut Rng64, b: &Bounds) -> Rational {
    Rational::new(rng.random_range(0..=b.numer), rng.random_range(1..=b.denom))
}

pub fn positive_rate(rng: &mut Rng64, b: &Bounds) -> Rational {
    Rational::new(rng.random_range(1..=b.numer.max(1)), rng.random_range(1..=b.denom))
}

/// A rate that is zero about half the time, so matrices come out sparse.
fn sparse_rate(rng: &mut Rng64, b: &Bounds) -> Rational {
    if rng.random_bool(0.5) {
        Rational::zero()
    } else {
        positive_rate(rng, b)
    }
}

pub fn random_set(rng: &mut Rng64, prefix: &str, lo: usize, hi: usize) -> FinSet {
    FinSet::numbered(prefix, rng.random_range(lo..=hi.max(lo)))
}

/// Any function `dom → cod`; `cod` must be nonempty unless `dom` is empty.
pub fn random_function(rng: &mut Rng64, dom: &FinSet, cod: &FinSet) -> FinFunction {
    let map = (0..dom.len()).map(|_| rng.random_range(0..cod.len())).collect();
    FinFunction::from_indices(dom.clone(), cod.clone(), map).expect("indices are in range")
}

/// A surjection `dom → cod`; needs `|cod| ≤ |dom|`.
pub fn random_surjection(rng: &mut Rng64, dom: &FinSet, cod: &FinSet) -> FinFunction {
    assert!(cod.len() <= dom.len(), "no surjection onto a larger set");
    let mut order: Vec<usize> = (0..dom.len()).collect();
    order.shuffle(rng);
    let mut map = vec![0; dom.len()];
    for (k, &x) in order.iter().enumerate() {
        map[x] = if k < cod.len() { k } else { rng.random_range(0..cod.len()) };
    }
    FinFunction::from_indices(dom.clone(), cod.clone(), map).expect("indices are in range")
}

/// An injection `dom → cod`; needs `|dom| ≤ |cod|`.
pub fn random_injection(rng: &mut Rng64, dom: &FinSet, cod: &FinSet) -> FinFunction {
    assert!(dom.len() <= cod.len(), "no injection into a smaller set");
    let mut targets: Vec<usize> = (0..cod.len()).collect();
    targets.shuffle(rng);
    targets.truncate(dom.len());
    FinFunction::from_indices(dom.clone(), cod.clone(), targets).expect("indices are in range")
}

/// A bijection from `s0, s1, ...` onto a shuffled copy labeled `u0, u1, ...`.
pub fn random_bijection(rng: &mut Rng64, n: usize) -> FinFunction {
    let dom = FinSet::numbered("s", n);
    let mut labels = FinSet::numbered("u", n).labels().to_vec();
    labels.shuffle(rng);
    let cod = FinSet::new(labels).expect("labels are distinct");
    let map = (0..n).map(|k| cod.index_of(&format!("u{k}")).expect("label exists")).collect();
    FinFunction::from_indices(dom, cod, map).expect("indices are in range")
}

/// An infinitesimal stochastic matrix on `states`.
pub fn random_generator(rng: &mut Rng64, states: &FinSet, b: &Bounds) -> Generator {
    let n = states.len();
    let mut h = RationalMatrix::zeros(n, n);
    for col in 0..n {
        let mut out = Rational::zero();
        for row in (0..n).filter(|&r| r != col) {
            let x = sparse_rate(rng, b);
            out += &x;
            h.set(row, col, x);
        }
        h.set(col, col, -out);
    }
    Generator::new(states.clone(), h).expect("columns sum to zero by construction")
}

/// An open Markov process `inputs → outputs` on fresh states
/// `{prefix}0, ...`, with enough states for both legs to be injective.
pub fn random_open_markov(
    rng: &mut Rng64,
    b: &Bounds,
    prefix: &str,
    inputs: &FinSet,
    outputs: &FinSet,
) -> OpenMarkov {
    let least = inputs.len().max(outputs.len()).max(1);
    let states = random_set(rng, prefix, least, b.set);
    let generator = random_generator(rng, &states, b);
    let i = random_injection(rng, inputs, &states);
    let o = random_injection(rng, outputs, &states);
    OpenMarkov::new(i, generator, o).expect("legs land in the states")
}

/// Boundary size for composable instances; at most 3.
fn boundary(rng: &mut Rng64, b: &Bounds, prefix: &str) -> FinSet {
    random_set(rng, prefix, 0, b.set.min(3))
}

/// `M : S → T` and `N : T → U` with disjoint state labels.
pub fn composable_pair(rng: &mut Rng64, b: &Bounds) -> (OpenMarkov, OpenMarkov) {
    let (s, t, u) = (boundary(rng, b, "s"), boundary(rng, b, "t"), boundary(rng, b, "u"));
    let m = random_open_markov(rng, b, "x", &s, &t);
    let n = random_open_markov(rng, b, "y", &t, &u);
    (m, n)
}

/// A chain `M₁ : S₀ → S₁, ..., M_k : S_{k-1} → S_k`.
pub fn composable_chain(rng: &mut Rng64, b: &Bounds, len: usize) -> Vec<OpenMarkov> {
    let feet: Vec<FinSet> = (0..=len).map(|k| boundary(rng, b, &format!("b{k}_"))).collect();
    (0..len)
        .map(|k| random_open_markov(rng, b, &format!("x{k}_"), &feet[k], &feet[k + 1]))
        .collect()
}

/// Splits `total` into positive integer weights and returns the exact
/// shares `total · wᵢ / Σw`.
fn split(rng: &mut Rng64, total: &Rational, parts: usize) -> Vec<Rational> {
    let w: Vec<i64> = (0..parts).map(|_| rng.random_range(1..=3)).collect();
    let sum: i64 = w.iter().sum();
    w.iter().map(|&k| total * &Rational::new(k, sum)).collect()
}

/// A generator on the refinement of `coarse` with the given fibers that
/// lumps exactly onto `coarse` along `p`.
fn lift_generator(rng: &mut Rng64, coarse: &Generator, p: &FinFunction, b: &Bounds) -> Generator {
    let n = p.dom().len();
    let fibers: Vec<Vec<usize>> = (0..coarse.len()).map(|x| p.fiber(x)).collect();
    let mut h = RationalMatrix::zeros(n, n);
    for (bx, fiber) in fibers.iter().enumerate() {
        for &j in fiber {
            for (cx, target) in fibers.iter().enumerate() {
                if cx == bx {
                    continue;
                }
                for (&i, share) in target.iter().zip(split(rng, coarse.h().get(cx, bx), target.len())) {
                    h.set(i, j, share);
                }
            }
            let mut inside = Rational::zero();
            for &i in fiber.iter().filter(|&&i| i != j) {
                let x = sparse_rate(rng, b);
                inside += &x;
                h.set(i, j, x);
            }
            h.set(j, j, coarse.h().get(bx, bx) - &inside);
        }
    }
    Generator::new(p.dom().clone(), h).expect("lift keeps columns summing to zero")
}

/// Refines `labels` by replacing each element `x` with `x.0, ..., x.{k-1}`,
/// returning the finer set and the projection onto `labels`.
fn refine_set(labels: &FinSet, sizes: &[usize]) -> FinFunction {
    let mut fine = Vec::new();
    let mut map = Vec::new();
    for (x, &k) in sizes.iter().enumerate() {
        for j in 0..k {
            fine.push(format!("{}.{j}", labels.label(x)));
            map.push(x);
        }
    }
    let dom = FinSet::new(fine).expect("refined labels are distinct");
    FinFunction::from_indices(dom, labels.clone(), map).expect("indices are in range")
}

/// A generator together with a surjection along which it is lumpable.
pub fn lumpable_pair(rng: &mut Rng64, b: &Bounds) -> (Generator, FinFunction) {
    let coarse_states = random_set(rng, "c", 1, b.set.clamp(1, 3));
    let coarse = random_generator(rng, &coarse_states, b);
    let sizes = fiber_sizes(rng, coarse_states.len(), b.set);
    let p = refine_set(&coarse_states, &sizes);
    (lift_generator(rng, &coarse, &p, b), p)
}

/// Fiber sizes in `1..=2` whose total stays within `limit` where possible.
fn fiber_sizes(rng: &mut Rng64, n: usize, limit: usize) -> Vec<usize> {
    let mut sizes = vec![1; n];
    let mut total = n;
    for s in sizes.iter_mut() {
        if total < limit && rng.random_bool(0.5) {
            *s = 2;
            total += 1;
        }
    }
    sizes
}

/// A morphism `M ⇒ coarse` from a refinement `M` of `coarse`.
///
/// `state_sizes[x]` is the fiber size over state `x`; each boundary element
/// is refined by the fiber size of the state it points to, which makes both
/// boundary squares pullbacks.
pub fn refine(rng: &mut Rng64, coarse: &OpenMarkov, state_sizes: &[usize], b: &Bounds) -> MarkovMorphism {
    let p = refine_set(coarse.states(), state_sizes);
    let generator = lift_generator(rng, coarse.generator(), &p, b);
    let leg = |outer: &FinFunction| -> (FinFunction, FinFunction) {
        let sizes: Vec<usize> = (0..outer.dom().len()).map(|s| state_sizes[outer.at(s)]).collect();
        let f = refine_set(outer.dom(), &sizes);
        let map = (0..f.dom().len())
            .map(|k| {
                let fine = format!("{}.{}", coarse.states().label(outer.at(f.at(k))), suffix(f.dom().label(k)));
                p.dom().index_of(&fine).expect("fine state exists")
            })
            .collect();
        let leg = FinFunction::from_indices(f.dom().clone(), p.dom().clone(), map).expect("indices are in range");
        (leg, f)
    };
    let (i, f) = leg(coarse.i());
    let (o, g) = leg(coarse.o());
    MarkovMorphism {
        source: OpenMarkov::new(i, generator, o).expect("legs land in the states"),
        target: coarse.clone(),
        f,
        p,
        g,
    }
}

fn suffix(label: &str) -> &str {
    label.rsplit_once('.').map_or("", |(_, j)| j)
}

/// A random morphism of open Markov processes.
pub fn markov_morphism(rng: &mut Rng64, b: &Bounds) -> MarkovMorphism {
    let small = Bounds {
        set: b.set.clamp(1, 3),
        ..*b
    };
    let (s, t) = (boundary(rng, &small, "s"), boundary(rng, &small, "t"));
    let coarse = random_open_markov(rng, &small, "x", &s, &t);
    let sizes = fiber_sizes(rng, coarse.states().len(), b.set);
    refine(rng, &coarse, &sizes, b)
}

/// A pullback square built as an explicit fiber product, with the apex
/// listed in random order. Resamples until the apex fits in `b.set`.
pub fn pullback_square(rng: &mut Rng64, b: &Bounds) -> SquareFS {
    loop {
        let d = random_set(rng, "d", 1, b.set.max(1));
        let c = random_set(rng, "c", 0, b.set);
        let bb = random_set(rng, "b", 0, b.set);
        let bottom = random_function(rng, &c, &d);
        let right = random_function(rng, &bb, &d);
        let mut pairs: Vec<(usize, usize)> = (0..c.len())
            .flat_map(|x| (0..bb.len()).map(move |y| (x, y)))
            .filter(|&(x, y)| bottom.at(x) == right.at(y))
            .collect();
        if pairs.len() > b.set {
            continue;
        }
        pairs.shuffle(rng);
        let apex = FinSet::new(pairs.iter().map(|&(x, y)| format!("{}|{}", c.label(x), bb.label(y))))
            .expect("pairs are distinct");
        let top = FinFunction::from_indices(apex.clone(), bb, pairs.iter().map(|p| p.1).collect())
            .expect("indices are in range");
        let left = FinFunction::from_indices(apex, c, pairs.iter().map(|p| p.0).collect())
            .expect("indices are in range");
        return SquareFS {
            top,
            bottom,
            left,
            right,
        };
    }
}

/// A relation `ℚ^dom ↛ ℚ^cod` spanned by random small integer vectors.
pub fn random_relation(rng: &mut Rng64, dom: usize, cod: usize) -> LinearRelation {
    let n = dom + cod;
    let k = rng.random_range(0..=n);
    let vectors = (0..k)
        .map(|_| (0..n).map(|_| Rational::from(rng.random_range(-3..=3))).collect())
        .collect();
    let graph = RationalSubspace::span_vectors(n, vectors).expect("vectors have the ambient length");
    LinearRelation::new(dom, cod, graph).expect("dimensions add up")
}

fn random_multiset(rng: &mut Rng64, species: &FinSet) -> Multiset {
    let mut m = Multiset::new();
    for _ in 0..rng.random_range(0..=2) {
        let s = species.label(rng.random_range(0..species.len()));
        *m.entry(s.to_string()).or_insert(0) += rng.random_range(1..=2);
    }
    m
}

/// A decoration of the given kind on fresh vertices `{prefix}0, ...`.
pub fn random_decoration(rng: &mut Rng64, kind: NetKind, prefix: &str, vertices: usize, arrows: usize, b: &Bounds) -> Decoration {
    let nodes = FinSet::numbered(prefix, vertices);
    let names = FinSet::numbered(&format!("{prefix}e"), arrows);
    match kind {
        NetKind::Graph | NetKind::KGraph => {
            let src = random_function(rng, &names, &nodes);
            let tgt = random_function(rng, &names, &nodes);
            let rate = (kind == NetKind::KGraph).then(|| (0..arrows).map(|_| positive_rate(rng, b)).collect());
            Decoration::Graph(Graph::new(src, tgt, rate).expect("rates are positive"))
        }
        NetKind::Petri => {
            let inputs = (0..arrows).map(|_| random_multiset(rng, &nodes)).collect();
            let outputs = (0..arrows).map(|_| random_multiset(rng, &nodes)).collect();
            let rate = (0..arrows).map(|_| rate(rng, b)).collect();
            Decoration::Petri(PetriRates::new(nodes, names, inputs, outputs, rate).expect("rates are nonnegative"))
        }
    }
}

/// An open net `left → right` with `1..=max_vertices` vertices.
pub fn random_open_net(
    rng: &mut Rng64,
    kind: NetKind,
    prefix: &str,
    left: &FinSet,
    right: &FinSet,
    max_vertices: usize,
    b: &Bounds,
) -> OpenNet {
    let vertices = rng.random_range(1..=max_vertices.max(1));
    let arrows = rng.random_range(0..=3);
    let decoration = random_decoration(rng, kind, prefix, vertices, arrows, b);
    let i = random_function(rng, left, decoration.vertices());
    let o = random_function(rng, right, decoration.vertices());
    OpenNet::new(i, decoration, o).expect("legs land in the vertices")
}

pub fn random_kind(rng: &mut Rng64) -> NetKind {
    [NetKind::Graph, NetKind::KGraph, NetKind::Petri][rng.random_range(0..3)]
}

/// A chain of composable open nets of one kind, each with at most
/// `max_vertices` vertices and feet of size at most 2.
pub fn net_chain(rng: &mut Rng64, kind: NetKind, len: usize, max_vertices: usize, b: &Bounds) -> Vec<OpenNet> {
    let feet: Vec<FinSet> = (0..=len).map(|k| random_set(rng, &format!("f{k}_"), 0, 2)).collect();
    (0..len)
        .map(|k| random_open_net(rng, kind, &format!("v{k}_"), &feet[k], &feet[k + 1], max_vertices, b))
        .collect()
}

/// A surjection from `foot` onto a fresh set `{prefix}0, ...` that merges
/// at most one pair of elements.
pub fn foot_quotient(rng: &mut Rng64, foot: &FinSet, prefix: &str) -> FinFunction {
    let n = foot.len();
    let k = if n > 1 && rng.random_bool(0.5) { n - 1 } else { n };
    random_surjection(rng, foot, &FinSet::numbered(prefix, k))
}

/// A net square out of `source` whose feet maps are `f` and `g`.
///
/// The target is the pushout of the vertices along `f` and `g`, followed by
/// a random further merge of vertices. Arrows keep their labels.
pub fn net_quotient(rng: &mut Rng64, source: &OpenNet, f: &FinFunction, g: &FinFunction, prefix: &str) -> NetSquare {
    let po1 = pushout(source.i(), f).expect("i and f share a domain");
    let po2 = pushout(&source.o().then(&po1.left).expect("composable"), g).expect("share a domain");
    let merged = po2.apex.len();
    let k = if merged > 1 && rng.random_bool(0.5) { merged - 1 } else { merged };
    let extra = random_surjection(rng, &po2.apex, &FinSet::numbered(prefix, k));
    let vertex = po1.left.then(&po2.left).and_then(|v| v.then(&extra)).expect("composable");
    let i = po1.right.then(&po2.left).and_then(|v| v.then(&extra)).expect("composable");
    let o = po2.right.then(&extra).expect("composable");
    let decoration = source.decoration().push_vertices(&vertex).expect("vertex map starts at the vertices");
    let target = OpenNet::new(i, decoration, o).expect("legs land in the vertices");
    NetSquare {
        f: f.clone(),
        vertex,
        edge: FinFunction::identity(source.arrows()),
        g: g.clone(),
        source: source.clone(),
        target,
    }
}

/// One generated instance, tagged by kind when serialized.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generated {
    ValidGenerator { generator: Generator },
    PullbackSquare { square: SquareFS },
    LumpablePair { generator: Generator, p: FinFunction },
    OpenMarkov { process: OpenMarkov },
    ComposablePair { first: OpenMarkov, second: OpenMarkov },
    MarkovMorphism { morphism: MarkovMorphism },
    OpenNet { net: OpenNet },
    LinearRelation { relation: LinearRelation },
}

pub const GENERATED_KINDS: [&str; 8] = [
    "valid_generator",
    "pullback_square",
    "lumpable_pair",
    "open_markov",
    "composable_pair",
    "markov_morphism",
    "open_net",
    "linear_relation",
];

/// Draws one instance of `kind` from the generator seeded by `seed`.
pub fn generate(kind: &str, seed: u64, size_bound: usize) -> crate::Result<Generated> {
    use rand::SeedableRng;
    let mut rng = Rng64::seed_from_u64(seed);
    let b = Bounds::new(size_bound.max(1));
    let rng = &mut rng;
    Ok(match kind {
        "valid_generator" => {
            let states = random_set(rng, "x", 1, b.set);
            Generated::ValidGenerator {
                generator: random_generator(rng, &states, &b),
            }
        }
        "pullback_square" => Generated::PullbackSquare {
            square: pullback_square(rng, &b),
        },
        "lumpable_pair" => {
            let (generator, p) = lumpable_pair(rng, &b);
            Generated::LumpablePair { generator, p }
        }
        "open_markov" => {
            let (s, t) = (boundary(rng, &b, "s"), boundary(rng, &b, "t"));
            Generated::OpenMarkov {
                process: random_open_markov(rng, &b, "x", &s, &t),
            }
        }
        "composable_pair" => {
            let (first, second) = composable_pair(rng, &b);
            Generated::ComposablePair { first, second }
        }
        "markov_morphism" => Generated::MarkovMorphism {
            morphism: markov_morphism(rng, &b),
        },
        "open_net" => {
            let kind = random_kind(rng);
            let (l, r) = (random_set(rng, "a", 0, 2), random_set(rng, "b", 0, 2));
            Generated::OpenNet {
                net: random_open_net(rng, kind, "v", &l, &r, b.set, &b),
            }
        }
        "linear_relation" => {
            let (m, n) = (rng.random_range(0..=b.set.min(5)), rng.random_range(0..=b.set.min(5)));
            Generated::LinearRelation {
                relation: random_relation(rng, m, n),
            }
        }
        other => return Err(crate::Error::UnknownKind(other.to_string())),
    })
}
