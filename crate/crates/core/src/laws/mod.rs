//! Seeded law suites.
//!
//! Each suite draws `cases` random instances and checks one family of laws
//! on every instance. Case `k` of a run with seed `s` uses a ChaCha8 stream
//! seeded by `s` on stream `k`, so single cases can be replayed and cases
//! run in parallel without changing the report.

pub mod generate;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactlin::{Rational, RationalMatrix};
use crate::finset::{coproduct, FinFunction};
use crate::linrel::{compose_relations, identity_relation, is_rel_2morphism, tensor_relations};
use crate::openmarkov::{
    associator, black_box, black_box_morphism, check_morphism, chi, companion_of, compose_open, conjoint_of,
    empty_open, exp_generator, identity_open, is_lumpable, left_unitor, lump, matrix_exp_stochastic_check,
    odot_via_copairing, push_pull, right_unitor, tensor_black_boxes, tensor_open, FiberWeights,
    Generator, MarkovMorphism, OpenMarkov, EXP_TOLERANCE,
};
use crate::opennet::{are_isomorphic, compose_open_net, identity_open_net, tensor_open_net, OpenNet};
use generate::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    BeckChevalley,
    PushPullClosure,
    OdotEquivalence,
    BlackboxFunctorial,
    BlackboxIdentity,
    LumpabilityEquiv,
    InterchangeMark,
    InterchangeNet,
    UnitorsAssociators,
    ChiMuInstances,
    CompanionEquations,
    SemigroupNumeric,
    LinrelStrictness,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::BeckChevalley,
        Suite::PushPullClosure,
        Suite::OdotEquivalence,
        Suite::BlackboxFunctorial,
        Suite::BlackboxIdentity,
        Suite::LumpabilityEquiv,
        Suite::InterchangeMark,
        Suite::InterchangeNet,
        Suite::UnitorsAssociators,
        Suite::ChiMuInstances,
        Suite::CompanionEquations,
        Suite::SemigroupNumeric,
        Suite::LinrelStrictness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::BeckChevalley => "beck_chevalley",
            Suite::PushPullClosure => "push_pull_closure",
            Suite::OdotEquivalence => "odot_equivalence",
            Suite::BlackboxFunctorial => "blackbox_functorial",
            Suite::BlackboxIdentity => "blackbox_identity",
            Suite::LumpabilityEquiv => "lumpability_equiv",
            Suite::InterchangeMark => "interchange_mark",
            Suite::InterchangeNet => "interchange_net",
            Suite::UnitorsAssociators => "unitors_associators",
            Suite::ChiMuInstances => "chi_mu_instances",
            Suite::CompanionEquations => "companion_equations",
            Suite::SemigroupNumeric => "semigroup_numeric",
            Suite::LinrelStrictness => "linrel_strictness",
        }
    }

    fn check(self, rng: &mut Rng64, b: &Bounds, mutation: Mutation) -> Outcome {
        match self {
            Suite::BeckChevalley => beck_chevalley(rng, b),
            Suite::PushPullClosure => push_pull_closure(rng, b),
            Suite::OdotEquivalence => odot_equivalence(rng, b),
            Suite::BlackboxFunctorial => blackbox_functorial(rng, b),
            Suite::BlackboxIdentity => blackbox_identity(rng, b),
            Suite::LumpabilityEquiv => lumpability_equiv(rng, b, mutation),
            Suite::InterchangeMark => interchange_mark(rng, b),
            Suite::InterchangeNet => interchange_net(rng, b),
            Suite::UnitorsAssociators => unitors_associators(rng, b),
            Suite::ChiMuInstances => chi_mu_instances(rng, b),
            Suite::CompanionEquations => companion_equations(rng, b),
            Suite::SemigroupNumeric => semigroup_numeric(rng, b),
            Suite::LinrelStrictness => linrel_strictness(rng, b),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Deliberate faults used to confirm that a suite can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mutation {
    #[default]
    None,
    /// Sections in `lumpability_equiv` skip normalization, so their columns
    /// no longer sum to one.
    UnnormalizedSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub case: usize,
    pub description: String,
    pub counterexample: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub suite: String,
    pub seed: u64,
    pub size_bound: usize,
    pub cases: usize,
    /// Sorted by case number.
    pub failures: Vec<Failure>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The RNG for case `case` of a run seeded with `seed`.
pub fn case_rng(seed: u64, case: usize) -> Rng64 {
    let mut rng = Rng64::seed_from_u64(seed);
    rng.set_stream(case as u64);
    rng
}

pub fn run_suite(name: &str, seed: u64, size_bound: usize, cases: usize) -> Result<LawReport> {
    Ok(run_suite_with(name.parse()?, seed, size_bound, cases, Mutation::None))
}

pub fn run_suite_with(suite: Suite, seed: u64, size_bound: usize, cases: usize, mutation: Mutation) -> LawReport {
    let b = Bounds::new(size_bound.max(1));
    let mut failures: Vec<Failure> = (0..cases)
        .into_par_iter()
        .filter_map(|case| {
            let mut rng = case_rng(seed, case);
            suite.check(&mut rng, &b, mutation).err().map(|v| Failure {
                case,
                description: v.description,
                counterexample: v.counterexample,
            })
        })
        .collect();
    failures.sort_by_key(|f| f.case);
    LawReport {
        suite: suite.name().to_string(),
        seed,
        size_bound: b.set,
        cases,
        failures,
    }
}

struct Violation {
    description: String,
    counterexample: Value,
}

type Outcome = std::result::Result<(), Violation>;

/// The instance under test, reported verbatim when a check fails.
struct Witness(Value);

impl Witness {
    fn check(&self, ok: bool, description: &str) -> Outcome {
        if ok {
            Ok(())
        } else {
            Err(self.fail(description.to_string()))
        }
    }

    fn ok<T>(&self, r: Result<T>, what: &str) -> std::result::Result<T, Violation> {
        r.map_err(|e| self.fail(format!("{what}: {e}")))
    }

    fn fail(&self, description: String) -> Violation {
        Violation {
            description,
            counterexample: self.0.clone(),
        }
    }
}

fn witness(v: Value) -> Witness {
    Witness(v)
}

fn beck_chevalley(rng: &mut Rng64, b: &Bounds) -> Outcome {
    let sq = pullback_square(rng, b);
    let w = witness(json!({ "square": sq }));
    w.check(w.ok(sq.is_pullback(), "pullback test")?, "generated square is not a pullback")?;
    let lhs = w.ok(sq.left.pushforward_matrix().try_mul(&sq.top.pullback_matrix()), "left⋆ top*")?;
    let rhs = w.ok(sq.bottom.pullback_matrix().try_mul(&sq.right.pushforward_matrix()), "bottom* right⋆")?;
    w.check(lhs == rhs, "left⋆ top* differs from bottom* right⋆")
}

fn push_pull_closure(rng: &mut Rng64, b: &Bounds) -> Outcome {
    let x = random_set(rng, "x", 1, b.set);
    let y = random_set(rng, "y", 1, b.set);
    let generator = random_generator(rng, &x, b);
    let f = random_function(rng, &x, &y);
    let w = witness(json!({ "generator": generator, "f": f }));
    let pushed = w.ok(push_pull(&f, generator.h()), "push-pull")?;
    w.ok(Generator::new(y, pushed), "f⋆ H f* is not infinitesimal stochastic")?;
    Ok(())
}

fn odot_equivalence(rng: &mut Rng64, b: &Bounds) -> Outcome {
    let (m, n) = composable_pair(rng, b);
    let w = witness(json!({ "first": m, "second": n }));
    let composite = w.ok(compose_open(&m, &n), "composition")?;
    let via_copairing = w.ok(odot_via_copairing(&m, &n), "copairing formula")?;
    w.check(composite.h() == &via_copairing, "the two composite generators differ")?;
    w.ok(
        Generator::new(composite.states().clone(), via_copairing),
        "composite generator is not infinitesimal stochastic",
    )?;
    Ok(())
}

fn blackbox_functorial(rng: &mut Rng64, b: &Bounds) -> Outcome {
    let (m, n) = composable_pair(rng, b);
    let alpha = markov_morphism(rng, b);
    let w = witness(json!({ "first": m, "second": n, "morphism": alpha }));
    let (bm, bn) = (black_box(&m), black_box(&n));

    let composite = w.ok(compose_open(&m, &n), "composition")?;
    let relational = w.ok(compose_relations(&bm, &bn), "relation composition")?;
    w.check(black_box(&composite) == relational, "black box does not preserve composition")?;

    let tensored = w.ok(tensor_black_boxes(&bm, &bn), "relation tensor")?;
    w.check(black_box(&tensor_open(&m, &n)) == tensored, "black box does not preserve tensor")?;

    let square = w.ok(black_box_morphism(&alpha), "black box of a morphism")?;
    w.check(w.ok(is_rel_2morphism(&square), "containment test")?, "black-boxed morphism is not a 2-morphism")
}

fn blackbox_identity(rng: &mut Rng64, b: &Bounds) -> Outcome {
    let s = random_set(rng, "s", 0, b.set.min(4));
    let w = witness(json!({ "boundary": s }));
    w.check(
        black_box(&identity_open(&s)) == identity_relation(2 * s.len()),
        "black box of an identity is not an identity",
    )?;
    w.check(black_box(&empty_open()) == identity_relation(0), "black box of the empty process")
}

/// Ten sections with positive integer weights in `1..=10`, normalized per
/// fiber unless `mutation` says otherwise.
fn random_sections(rng: &mut Rng64, p: &FinFunction, mutation: Mutation) -> Vec<RationalMatrix> {
    (0..10)
        .map(|_| {
            let raw: Vec<i64> = (0..p.dom().len()).map(|_| rng.random_range(1..=10)).collect();
            let mut s = RationalMatrix::zeros(p.dom().len(), p.cod().len());
            for (x, &k) in raw.iter().enumerate() {
                let total: i64 = p.fiber(p.at(x)).iter().map(|&y| raw[y]).sum();
                let value = match mutation {
                    Mutation::None => Rational::new(k, total),
                    Mutation::UnnormalizedSection => Rational::from(k),
                };
                s.set(x, p.at(x), value);
            }
            s
        })
        .collect()
}

fn lumpability_equiv(rng: &mut Rng64, b: &Bounds, mutation: Mutation) -> Outcome {
    let (generator, p) = if rng.random_bool(0.5) {
        lumpable_pair(rng, b)
    } else {
        let x = random_set(rng, "x", 1, b.set);
        let y = random_set(rng, "y", 1, x.len());
        let generator = random_generator(rng, &x, b);
        (generator, random_surjection(rng, &x, &y))
    };
    let sections = random_sections(rng, &p, mutation);
    let w = witness(json!({
        "generator": generator,
        "p": p,
        "sections": sections.iter().map(RationalMatrix::to_rows).collect::<Vec<_>>(),
    }));
    let lumpable = w.ok(is_lumpable(&generator, &p), "lumpability test")?;
    let pstar = p.pushforward_matrix();
    let lumped: Vec<RationalMatrix> = sections
        .iter()
        .map(|s| match mutation {
            Mutation::None => lump(&generator, &p, s).map(|g| g.h().clone()),
            Mutation::UnnormalizedSection => pstar.try_mul(generator.h()).and_then(|m| m.try_mul(s)),
        })
        .collect::<Result<_>>()
        .map_err(|e| w.fail(format!("lumping: {e}")))?;
    let agree = lumped.windows(2).all(|pair| pair[0] == pair[1]);
    w.check(
        lumpable == agree,
        if lumpable {
            "lumpable, but sections give different lumped generators"
        } else {
            "not lumpable, yet every section gives the same lumped generator"
        },
    )?;
    if lumpable {
        let left = w.ok(pstar.try_mul(generator.h()), "p⋆ H")?;
        let right = w.ok(lumped[0].try_mul(&pstar), "H' p⋆")?;
        w.check(left == right, "p⋆ H differs from H' p⋆")?;
    }
    Ok(())
}

/// Fiber sizes in `1..=2` for refining `m`, with `(state, size)` pairs in
/// `pinned` overriding the random choice.
fn pinned_sizes(rng: &mut Rng64, m: &OpenMarkov, pinned: &[(usize, usize)]) -> Vec<usize> {
    let mut sizes: Vec<usize> = (0..m.states().len()).map(|_| rng.random_range(1..=2)).collect();
    for &(state, size) in pinned {
        sizes[state] = size;
    }
    sizes
}

/// A horizontally composable pair of refinements `α : M ⇒ coarse_m` and
/// `β : N ⇒ coarse_n` that agree on the shared boundary.
fn refine_pair(
    rng: &mut Rng64,
    coarse_m: &OpenMarkov,
    coarse_n: &OpenMarkov,
    b: &Bounds,
) -> std::result::Result<(MarkovMorphism, MarkovMorphism), String> {
    let m_sizes = pinned_sizes(rng, coarse_m, &[]);
    // a shared boundary element is refined alike on both sides
    let pins: Vec<(usize, usize)> = (0..coarse_n.inputs().len())
        .map(|t| (coarse_n.i().at(t), m_sizes[coarse_m.o().at(t)]))
        .collect();
    let n_sizes = pinned_sizes(rng, coarse_n, &pins);
    let alpha = refine(rng, coarse_m, &m_sizes, b);
    let beta = refine(rng, coarse_n, &n_sizes, b);
    if alpha.g != beta.f {
        return Err("refinements disagree on the shared boundary".into());
    }
    Ok((alpha, beta))
}

fn interchange_mark(rng: &mut Rng64, b: &Bounds) -> Outcome {
    let small = Bounds { set: b.set.clamp(1, 3), ..*b };
    let chain = composable_chain(rng, &small, 2);
    let (m2, n2) = (&chain[0], &chain[1]);
    let w0 = witness(json!({ "coarse": chain }));
    let (alpha2, beta2) = refine_pair(rng, m2, n2, b).map_err(|e| w0.fail(e))?;
    let (alpha, beta) = refine_pair(rng, &alpha2.source, &beta2.source, b).map_err(|e| w0.fail(e))?;
    let w = witness(json!({ "alpha": alpha, "alpha2": alpha2, "beta": beta, "beta2": beta2 }));
    for m in [&alpha, &alpha2, &beta, &beta2] {
        w.ok(m.validate(), "generated morphism")?;
    }
    let lhs = w.ok(
        alpha
            .horizontal_compose(&beta)
            .and_then(|top| top.vertical_compose(&alpha2.horizontal_compose(&beta2)?)),
        "horizontal then vertical",
    )?;
    let rhs = w.ok(
        alpha
            .vertical_compose(&alpha2)
            .and_then(|left| left.horizontal_compose(&beta.vertical_compose(&beta2)?)),
        "vertical then horizontal",
    )?;
    w.check(check_morphism(&lhs), "composite is not a morphism")?;
    w.check(lhs == rhs, "interchange law fails")
}

fn interchange_net(rng: &mut Rng64, _b: &Bounds) -> Outcome {
    let b = &Bounds::default();
    let kind = random_kind(rng);
    let chain = net_chain(rng, kind, 2, 3, b);
    let (m, n) = (&chain[0], &chain[1]);
    let fa = foot_quotient(rng, m.left_foot(), "a");
    let fb = foot_quotient(rng, m.right_foot(), "b");
    let fc = foot_quotient(rng, n.right_foot(), "c");
    let alpha = net_quotient(rng, m, &fa, &fb, "p");
    let beta = net_quotient(rng, n, &fb, &fc, "q");
    let ga = foot_quotient(rng, fa.cod(), "A");
    let gb = foot_quotient(rng, fb.cod(), "B");
    let gc = foot_quotient(rng, fc.cod(), "C");
    let alpha2 = net_quotient(rng, &alpha.target, &ga, &gb, "P");
    let beta2 = net_quotient(rng, &beta.target, &gb, &gc, "Q");
    let w = witness(json!({ "alpha": alpha, "alpha2": alpha2, "beta": beta, "beta2": beta2 }));
    for sq in [&alpha, &alpha2, &beta, &beta2] {
        w.ok(sq.validate(), "generated square")?;
    }
    let lhs = w.ok(
        alpha
            .horizontal_compose(&beta)
            .and_then(|top| top.vertical_compose(&alpha2.horizontal_compose(&beta2)?)),
        "horizontal then vertical",
    )?;
    let rhs = w.ok(
        alpha
            .vertical_compose(&alpha2)
            .and_then(|left| left.horizontal_compose(&beta.vertical_compose(&beta2)?)),
        "vertical then horizontal",
    )?;
    w.check(lhs.is_valid(), "composite is not a square")?;
    w.check(lhs == rhs, "interchange law fails")
}

fn is_invertible(m: &MarkovMorphism) -> bool {
    check_morphism(m) && m.f.is_bijective() && m.p.is_bijective() && m.g.is_bijective()
}

fn net_iso(w: &Witness, a: Result<OpenNet>, b: Result<OpenNet>, what: &str) -> Outcome {
    let (a, b) = (w.ok(a, what)?, w.ok(b, what)?);
    match w.ok(are_isomorphic(&a, &b), what)? {
        Some(sq) => w.check(sq.is_valid(), &format!("{what}: isomorphism is not a valid square")),
        None => Err(w.fail(format!("{what}: no isomorphism found"))),
    }
}

fn unitors_associators(rng: &mut Rng64, b: &Bounds) -> Outcome {
    let chain = composable_chain(rng, b, 3);
    let w = witness(json!({ "chain": chain }));
    let (m, n, p) = (&chain[0], &chain[1], &chain[2]);
    let alpha = w.ok(associator(m, n, p), "associator")?;
    w.check(is_invertible(&alpha), "associator is not an invertible morphism")?;
    for (name, unitor) in [("left unitor", left_unitor(m)), ("right unitor", right_unitor(m))] {
        let unitor = w.ok(unitor, name)?;
        w.check(is_invertible(&unitor), &format!("{name} is not an invertible morphism"))?;
    }

    let kind = random_kind(rng);
    let nets = net_chain(rng, kind, 3, 3, b);
    let w = witness(json!({ "nets": nets }));
    let (x, y, z) = (&nets[0], &nets[1], &nets[2]);
    net_iso(
        &w,
        compose_open_net(x, y).and_then(|xy| compose_open_net(&xy, z)),
        compose_open_net(y, z).and_then(|yz| compose_open_net(x, &yz)),
        "net associator",
    )?;
    let left = identity_open_net(x.left_foot(), kind);
    net_iso(&w, compose_open_net(&left, x), Ok(x.clone()), "net left unitor")?;
    let right = identity_open_net(x.right_foot(), kind);
    net_iso(&w, compose_open_net(x, &right), Ok(x.clone()), "net right unitor")
}

fn chi_mu_instances(rng: &mut Rng64, b: &Bounds) -> Outcome {
    let first = composable_chain(rng, b, 2);
    let second = composable_chain(rng, b, 2);
    let w = witness(json!({ "first": first, "second": second }));
    let x = w.ok(chi(&first[0], &second[0], &first[1], &second[1]), "χ")?;
    w.check(is_invertible(&x), "χ is not an invertible morphism")?;
    let (s, t) = (first[0].inputs(), second[0].inputs());
    w.check(
        identity_open(&coproduct(s, t).set) == tensor_open(&identity_open(s), &identity_open(t)),
        "μ: U_(S+T) differs from U_S ⊗ U_T",
    )?;

    let kind = random_kind(rng);
    let (m, n) = (net_chain(rng, kind, 2, 2, b), net_chain(rng, kind, 2, 2, b));
    let w = witness(json!({ "first": m, "second": n }));
    net_iso(
        &w,
        tensor_open_net(&m[0], &n[0])
            .and_then(|top| compose_open_net(&top, &tensor_open_net(&m[1], &n[1])?)),
        compose_open_net(&m[0], &m[1])
            .and_then(|left| tensor_open_net(&left, &compose_open_net(&n[0], &n[1])?)),
        "net χ",
    )?;
    let (s, t) = (m[0].left_foot(), n[0].left_foot());
    let tensored = w.ok(
        tensor_open_net(&identity_open_net(s, kind), &identity_open_net(t, kind)),
        "net tensor of identities",
    )?;
    w.check(
        identity_open_net(&coproduct(s, t).set, kind) == tensored,
        "net μ: U_(S+T) differs from U_S ⊗ U_T",
    )
}

fn companion_equations(rng: &mut Rng64, b: &Bounds) -> Outcome {
    let n = rng.random_range(0..=b.set);
    let f = random_bijection(rng, n);
    let w = witness(json!({ "f": f }));
    let companion = w.ok(companion_of(&f), "companion")?;
    w.check(w.ok(companion.equations_hold(), "companion")?, "companion equations fail")?;
    let conjoint = w.ok(conjoint_of(&f), "conjoint")?;
    w.check(w.ok(conjoint.equations_hold(), "conjoint")?, "conjoint equations fail")
}

fn semigroup_numeric(rng: &mut Rng64, b: &Bounds) -> Outcome {
    let states = random_set(rng, "x", 1, b.set);
    let generator = random_generator(rng, &states, b);
    let w = witness(json!({ "generator": generator }));
    let h = generator.h();
    for t in [0.1, 1.0, 10.0] {
        w.check(matrix_exp_stochastic_check(h, t), &format!("exp({t}·H) is not stochastic"))?;
    }
    let n = states.len();
    let zero = exp_generator(h, 0.0);
    w.check(
        (&zero - nalgebra::DMatrix::<f64>::identity(n, n)).amax() <= EXP_TOLERANCE,
        "exp(0·H) is not the identity",
    )?;
    let split = exp_generator(h, 0.4) * exp_generator(h, 0.6);
    w.check(
        (split - exp_generator(h, 1.0)).amax() <= EXP_TOLERANCE,
        "exp(0.4·H) exp(0.6·H) differs from exp(H)",
    )
}

fn linrel_strictness(rng: &mut Rng64, b: &Bounds) -> Outcome {
    let cap = b.set.min(5);
    let d: Vec<usize> = (0..4).map(|_| rng.random_range(0..=cap)).collect();
    let r = random_relation(rng, d[0], d[1]);
    let s = random_relation(rng, d[1], d[2]);
    let t = random_relation(rng, d[2], d[3]);
    let w = witness(json!({ "r": r, "s": s, "t": t }));
    let left = w.ok(compose_relations(&r, &s).and_then(|rs| compose_relations(&rs, &t)), "(T∘S)∘R")?;
    let right = w.ok(compose_relations(&s, &t).and_then(|st| compose_relations(&r, &st)), "T∘(S∘R)")?;
    w.check(left == right, "relation composition is not associative")?;
    w.check(
        w.ok(compose_relations(&identity_relation(d[0]), &r), "R∘1")? == r,
        "identity is not a left unit",
    )?;
    w.check(
        w.ok(compose_relations(&r, &identity_relation(d[1])), "1∘R")? == r,
        "identity is not a right unit",
    )?;

    let e: Vec<usize> = (0..3).map(|_| rng.random_range(0..=cap)).collect();
    let r2 = random_relation(rng, e[0], e[1]);
    let s2 = random_relation(rng, e[1], e[2]);
    let w = witness(json!({ "r": r, "s": s, "r2": r2, "s2": s2 }));
    let lhs = w.ok(
        compose_relations(&r, &s).and_then(|a| Ok(tensor_relations(&a, &compose_relations(&r2, &s2)?))),
        "(S∘R) ⊗ (S'∘R')",
    )?;
    let rhs = w.ok(
        compose_relations(&tensor_relations(&r, &r2), &tensor_relations(&s, &s2)),
        "(S⊗S') ∘ (R⊗R')",
    )?;
    w.check(lhs == rhs, "tensor does not commute with composition")
}

/// The fiber weights behind a section, keyed by domain label.
pub fn section_weights(p: &FinFunction, s: &RationalMatrix) -> FiberWeights {
    (0..p.dom().len())
        .map(|x| (p.dom().label(x).to_string(), s.get(x, p.at(x)).clone()))
        .collect()
}

pub fn suite_names() -> Vec<&'static str> {
    Suite::ALL.iter().map(|s| s.name()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::FinSet;
    use crate::openmarkov::stochastic_section;

    #[test]
    fn every_suite_passes_a_short_run() {
        for suite in Suite::ALL {
            let report = run_suite_with(suite, 11, 6, 30, Mutation::None);
            assert!(report.passed(), "{suite}: {:#?}", report.failures.first());
            assert_eq!(report.cases, 30);
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!(matches!(run_suite("nope", 0, 6, 1), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn reports_are_reproducible() {
        let a = run_suite("lumpability_equiv", 3, 6, 40).unwrap();
        let b = run_suite("lumpability_equiv", 3, 6, 40).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unnormalized_sections_are_caught() {
        let report = run_suite_with(Suite::LumpabilityEquiv, 0, 6, 60, Mutation::UnnormalizedSection);
        assert!(!report.passed());
        let cases: Vec<usize> = report.failures.iter().map(|f| f.case).collect();
        let mut sorted = cases.clone();
        sorted.sort_unstable();
        assert_eq!(cases, sorted);
        assert!(report.failures[0].counterexample.get("sections").is_some());
    }

    #[test]
    fn section_weights_read_back_the_section() {
        let p = FinFunction::from_indices(FinSet::numbered("x", 3), FinSet::numbered("y", 2), vec![0, 0, 1]).unwrap();
        let s = stochastic_section(&p, None).unwrap();
        let w = section_weights(&p, &s);
        assert_eq!(w["x0"], Rational::new(1, 2));
        assert_eq!(w["x2"], Rational::one());
    }
}
