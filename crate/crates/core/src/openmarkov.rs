//! Open Markov processes, their morphisms, lumping, and black-boxing.
//!
//! A Markov process is a finite state set `X` with an infinitesimal
//! stochastic generator `H`. An open one is a cospan `S ↣ X ↢ T` of
//! injections marking input and output states. Vectors over `X` use the
//! element order of `X` as their basis order.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exactlin::{kernel, Rational, RationalMatrix};
use crate::finset::{coproduct, mediating_map, pushout, sum_map, FinFunction, FinSet, Pushout, SquareFS};
use crate::linrel::{tensor_relations, LinearRelation, RelSquare};

/// Tolerance used by [`matrix_exp_stochastic_check`].
pub const EXP_TOLERANCE: f64 = 1e-9;

/// A Markov process: states and an infinitesimal stochastic generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    states: FinSet,
    h: RationalMatrix,
}

impl Generator {
    pub fn new(states: FinSet, h: RationalMatrix) -> Result<Self> {
        validate_generator(states, h)
    }

    /// Skips validation. Only useful for probing how invalid matrices behave.
    pub fn new_unchecked(states: FinSet, h: RationalMatrix) -> Self {
        Generator { states, h }
    }

    pub fn zero(states: &FinSet) -> Self {
        Generator {
            states: states.clone(),
            h: RationalMatrix::zeros(states.len(), states.len()),
        }
    }

    pub fn states(&self) -> &FinSet {
        &self.states
    }

    pub fn h(&self) -> &RationalMatrix {
        &self.h
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Checks that `h` is square over `states`, has nonnegative off-diagonal
/// entries, and has columns summing to zero.
pub fn validate_generator(states: FinSet, h: RationalMatrix) -> Result<Generator> {
    let n = states.len();
    if h.rows() != n || h.cols() != n {
        return Err(Error::ShapeMismatch(format!(
            "generator is {}×{} but there are {n} states",
            h.rows(),
            h.cols()
        )));
    }
    for j in 0..n {
        let mut sum = Rational::zero();
        for i in 0..n {
            let x = h.get(i, j);
            if i != j && x.is_negative() {
                return Err(Error::NegativeOffDiagonal {
                    row: states.label(i).to_string(),
                    col: states.label(j).to_string(),
                    value: x.to_string(),
                });
            }
            sum += x;
        }
        if !sum.is_zero() {
            return Err(Error::ColumnSumNonzero {
                col: states.label(j).to_string(),
                sum: sum.to_string(),
            });
        }
    }
    Ok(Generator { states, h })
}

/// `f⋆ H f*` for `f : X → Y` and `H` on `X`.
pub fn push_pull(f: &FinFunction, h: &RationalMatrix) -> Result<RationalMatrix> {
    f.pushforward_matrix().try_mul(h)?.try_mul(&f.pullback_matrix())
}

/// An open Markov process `S ↣ (X, H) ↢ T`. The legs are injective but
/// their images may overlap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenMarkov {
    generator: Generator,
    i: FinFunction,
    o: FinFunction,
}

impl OpenMarkov {
    pub fn new(i: FinFunction, generator: Generator, o: FinFunction) -> Result<Self> {
        for (name, leg) in [("input", &i), ("output", &o)] {
            if leg.cod() != generator.states() {
                return Err(Error::Mismatch(format!("{name} leg does not land in the state set")));
            }
            if !leg.is_injective() {
                return Err(Error::NotInjective(format!("{name} leg {leg:?}")));
            }
        }
        Ok(OpenMarkov { generator, i, o })
    }

    pub fn inputs(&self) -> &FinSet {
        self.i.dom()
    }

    pub fn outputs(&self) -> &FinSet {
        self.o.dom()
    }

    pub fn states(&self) -> &FinSet {
        self.generator.states()
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn h(&self) -> &RationalMatrix {
        self.generator.h()
    }

    pub fn i(&self) -> &FinFunction {
        &self.i
    }

    pub fn o(&self) -> &FinFunction {
        &self.o
    }
}

/// `S ↣ (S, 0) ↢ S` with identity legs.
pub fn identity_open(s: &FinSet) -> OpenMarkov {
    OpenMarkov {
        generator: Generator::zero(s),
        i: FinFunction::identity(s),
        o: FinFunction::identity(s),
    }
}

/// The monoidal unit `∅ ↣ (∅, 0) ↢ ∅`.
pub fn empty_open() -> OpenMarkov {
    identity_open(&FinSet::empty())
}

/// `M ⊙ N` together with the pushout `X +_T Y` it was built on.
pub fn compose_open_legs(m: &OpenMarkov, n: &OpenMarkov) -> Result<(OpenMarkov, Pushout)> {
    if m.outputs() != n.inputs() {
        return Err(Error::BoundaryMismatch(format!(
            "outputs {:?} are not the inputs {:?}",
            m.outputs(),
            n.inputs()
        )));
    }
    let po = pushout(&m.o, &n.i)?;
    let from_left = push_pull(&po.left, m.h())?;
    let from_right = push_pull(&po.right, n.h())?;
    let generator = validate_generator(po.apex.clone(), from_left.try_add(&from_right)?)?;
    let composite = OpenMarkov {
        generator,
        i: m.i.then(&po.left)?,
        o: n.o.then(&po.right)?,
    };
    Ok((composite, po))
}

/// `M ⊙ N`, glued along the shared boundary with `H ⊙ G = j⋆Hj* + k⋆Gk*`.
pub fn compose_open(m: &OpenMarkov, n: &OpenMarkov) -> Result<OpenMarkov> {
    compose_open_legs(m, n).map(|(c, _)| c)
}

/// `H ⊙ G` computed as `ℓ⋆ (H ⊕ G) ℓ*` with `ℓ : X + Y → X +_T Y` the
/// copairing of the pushout legs.
pub fn odot_via_copairing(m: &OpenMarkov, n: &OpenMarkov) -> Result<RationalMatrix> {
    if m.outputs() != n.inputs() {
        return Err(Error::BoundaryMismatch("processes are not composable".into()));
    }
    let po = pushout(&m.o, &n.i)?;
    push_pull(&po.copairing(), &m.h().direct_sum(n.h()))
}

/// `M ⊗ N`: coproducts of every set and a block-diagonal generator.
pub fn tensor_open(m: &OpenMarkov, n: &OpenMarkov) -> OpenMarkov {
    let states = coproduct(m.states(), n.states()).set;
    OpenMarkov {
        generator: Generator {
            states,
            h: m.h().direct_sum(n.h()),
        },
        i: sum_map(&m.i, &n.i),
        o: sum_map(&m.o, &n.o),
    }
}

/// Instantaneous inflows at the inputs and outflows at the outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryData {
    pub inflows: Vec<Rational>,
    pub outflows: Vec<Rational>,
}

/// Right-hand side of the open master equation, `Hv + i⋆I − o⋆O`.
pub fn open_master_rhs(m: &OpenMarkov, v: &[Rational], bd: &BoundaryData) -> Result<Vec<Rational>> {
    if bd.inflows.len() != m.inputs().len() || bd.outflows.len() != m.outputs().len() {
        return Err(Error::ShapeMismatch(format!(
            "{} inflows and {} outflows for {} inputs and {} outputs",
            bd.inflows.len(),
            bd.outflows.len(),
            m.inputs().len(),
            m.outputs().len()
        )));
    }
    let hv = m.h().mul_vec(v)?;
    let inflow = m.i.pushforward_matrix().mul_vec(&bd.inflows)?;
    let outflow = m.o.pushforward_matrix().mul_vec(&bd.outflows)?;
    Ok(hv
        .into_iter()
        .zip(inflow)
        .zip(outflow)
        .map(|((a, b), c)| a + b - c)
        .collect())
}

/// `exp(A)` by scaling and squaring with a diagonal Padé(6) approximant.
pub fn matrix_exp(a: &DMatrix<f64>) -> DMatrix<f64> {
    const Q: usize = 6;
    let n = a.nrows();
    let norm = (0..a.ncols())
        .map(|c| a.column(c).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let x = a / 2f64.powi(squarings as i32);

    let mut num = DMatrix::<f64>::identity(n, n);
    let mut den = DMatrix::<f64>::identity(n, n);
    let mut power = DMatrix::<f64>::identity(n, n);
    let mut c = 1.0;
    for k in 1..=Q {
        c *= (Q - k + 1) as f64 / (k * (2 * Q - k + 1)) as f64;
        power = &power * &x;
        num += &power * c;
        if k % 2 == 0 {
            den += &power * c;
        } else {
            den -= &power * c;
        }
    }
    let mut e = den.lu().solve(&num).expect("Padé denominator is invertible after scaling");
    for _ in 0..squarings {
        e = &e * &e;
    }
    e
}

/// `exp(tH)` in floating point.
pub fn exp_generator(h: &RationalMatrix, t: f64) -> DMatrix<f64> {
    let a = DMatrix::from_fn(h.rows(), h.cols(), |r, c| t * h.get(r, c).to_f64());
    matrix_exp(&a)
}

/// Whether `exp(tH)` is stochastic up to [`EXP_TOLERANCE`]: entries at least
/// `-tol` and column sums within `tol` of 1. Takes a raw matrix so that
/// invalid generators can be examined too.
pub fn matrix_exp_stochastic_check(h: &RationalMatrix, t: f64) -> bool {
    assert!(t >= 0.0, "time must be nonnegative");
    let e = exp_generator(h, t);
    let entries_ok = e.iter().all(|&x| x >= -EXP_TOLERANCE);
    let sums_ok = (0..e.ncols()).all(|c| (e.column(c).sum() - 1.0).abs() <= EXP_TOLERANCE);
    entries_ok && sums_ok
}

/// Weights for [`stochastic_section`], keyed by element of the domain of `p`.
pub type FiberWeights = BTreeMap<String, Rational>;

/// A stochastic section `s` of a surjection `p`, i.e. `p⋆ s = 1`.
///
/// Fibers mentioned in `weights` take the given weights; every element of
/// such a fiber must then be weighted, nonnegatively, with total 1. Other
/// fibers are weighted uniformly.
pub fn stochastic_section(p: &FinFunction, weights: Option<&FiberWeights>) -> Result<RationalMatrix> {
    if !p.is_surjective() {
        return Err(Error::NotSurjective(format!("{p:?}")));
    }
    let empty = FiberWeights::new();
    let weights = weights.unwrap_or(&empty);
    if let Some(stray) = weights.keys().find(|k| !p.dom().contains(k)) {
        return Err(Error::BadWeights(format!("`{stray}` is not a state")));
    }
    let mut s = RationalMatrix::zeros(p.dom().len(), p.cod().len());
    for b in 0..p.cod().len() {
        let fiber = p.fiber(b);
        let given: Vec<Option<&Rational>> = fiber.iter().map(|&x| weights.get(p.dom().label(x))).collect();
        if given.iter().all(Option::is_none) {
            let w = Rational::new(1, fiber.len() as i64);
            for &x in &fiber {
                s.set(x, b, w.clone());
            }
            continue;
        }
        let mut total = Rational::zero();
        for (&x, w) in fiber.iter().zip(&given) {
            let w = w.ok_or_else(|| {
                Error::BadWeights(format!("no weight for `{}` in the fiber over `{}`", p.dom().label(x), p.cod().label(b)))
            })?;
            if w.is_negative() {
                return Err(Error::BadWeights(format!("negative weight {w} on `{}`", p.dom().label(x))));
            }
            total += w;
            s.set(x, b, w.clone());
        }
        if total != Rational::one() {
            return Err(Error::BadWeights(format!(
                "weights over `{}` sum to {total}",
                p.cod().label(b)
            )));
        }
    }
    Ok(s)
}

/// Checks that `s` is a stochastic section of `p`.
pub fn check_section(p: &FinFunction, s: &RationalMatrix) -> Result<()> {
    if s.rows() != p.dom().len() || s.cols() != p.cod().len() {
        return Err(Error::SectionMismatch(format!(
            "section is {}×{}, expected {}×{}",
            s.rows(),
            s.cols(),
            p.dom().len(),
            p.cod().len()
        )));
    }
    if (0..s.rows()).any(|r| s.row(r).iter().any(Rational::is_negative)) {
        return Err(Error::SectionMismatch("section has a negative entry".into()));
    }
    if p.pushforward_matrix().try_mul(s)? != RationalMatrix::identity(p.cod().len()) {
        return Err(Error::SectionMismatch("p⋆ s is not the identity".into()));
    }
    Ok(())
}

fn check_lumping_map(gen: &Generator, p: &FinFunction) -> Result<()> {
    if p.dom() != gen.states() {
        return Err(Error::Mismatch("lumping map is not defined on the states".into()));
    }
    if !p.is_surjective() {
        return Err(Error::NotSurjective(format!("{p:?}")));
    }
    Ok(())
}

/// Whether all columns of `p⋆ H` within each fiber of `p` agree.
pub fn is_lumpable(gen: &Generator, p: &FinFunction) -> Result<bool> {
    check_lumping_map(gen, p)?;
    let pushed = p.pushforward_matrix().try_mul(gen.h())?;
    Ok((0..p.cod().len()).all(|b| {
        let fiber = p.fiber(b);
        fiber.windows(2).all(|w| pushed.column(w[0]) == pushed.column(w[1]))
    }))
}

/// The coarse-grained generator `p⋆ H s` on the codomain of `p`.
pub fn lump(gen: &Generator, p: &FinFunction, s: &RationalMatrix) -> Result<Generator> {
    check_lumping_map(gen, p)?;
    check_section(p, s)?;
    let h = p.pushforward_matrix().try_mul(gen.h())?.try_mul(s)?;
    validate_generator(p.cod().clone(), h)
}

/// A morphism `(f, p, g)` of open Markov processes:
///
/// ```text
///   S  --i-->  X  <--o--  T
///   f          p          g
///   S' --i'--> X' <--o'-- T'
/// ```
///
/// Both squares must be pullbacks and `p⋆ H = H' p⋆`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovMorphism {
    pub source: OpenMarkov,
    pub target: OpenMarkov,
    pub f: FinFunction,
    pub p: FinFunction,
    pub g: FinFunction,
}

impl MarkovMorphism {
    pub fn identity(m: &OpenMarkov) -> Self {
        MarkovMorphism {
            source: m.clone(),
            target: m.clone(),
            f: FinFunction::identity(m.inputs()),
            p: FinFunction::identity(m.states()),
            g: FinFunction::identity(m.outputs()),
        }
    }

    /// Reports the first violated condition as `InvalidMorphism`.
    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidMorphism(why.to_string()));
        let (src, tgt) = (&self.source, &self.target);
        if self.f.dom() != src.inputs() || self.f.cod() != tgt.inputs() {
            return bad("f does not go between the input sets");
        }
        if self.p.dom() != src.states() || self.p.cod() != tgt.states() {
            return bad("p does not go between the state sets");
        }
        if self.g.dom() != src.outputs() || self.g.cod() != tgt.outputs() {
            return bad("g does not go between the output sets");
        }
        for (side, top, left, bottom) in [
            ("input", &src.i, &self.f, &tgt.i),
            ("output", &src.o, &self.g, &tgt.o),
        ] {
            let sq = SquareFS {
                top: top.clone(),
                bottom: bottom.clone(),
                left: left.clone(),
                right: self.p.clone(),
            };
            match sq.is_pullback() {
                Ok(true) => {}
                Ok(false) => return bad(&format!("{side} square is not a pullback")),
                Err(_) => return bad(&format!("{side} square does not commute")),
            }
        }
        let pstar = self.p.pushforward_matrix();
        if pstar.try_mul(src.h())? != tgt.h().try_mul(&pstar)? {
            return bad("p⋆ H differs from H' p⋆");
        }
        Ok(())
    }

    /// `self` followed by `below`.
    pub fn vertical_compose(&self, below: &MarkovMorphism) -> Result<MarkovMorphism> {
        if self.target != below.source {
            return Err(Error::Mismatch("target of the first morphism is not the source of the second".into()));
        }
        Ok(MarkovMorphism {
            source: self.source.clone(),
            target: below.target.clone(),
            f: self.f.then(&below.f)?,
            p: self.p.then(&below.p)?,
            g: self.g.then(&below.g)?,
        })
    }

    /// `self ⊙ right`, with state map `p +_g q` induced on the pushouts.
    pub fn horizontal_compose(&self, right: &MarkovMorphism) -> Result<MarkovMorphism> {
        if self.g != right.f {
            return Err(Error::Mismatch("morphisms disagree on the shared boundary".into()));
        }
        let (source, po) = compose_open_legs(&self.source, &right.source)?;
        let (target, po2) = compose_open_legs(&self.target, &right.target)?;
        let p = mediating_map(
            &[&po.left, &po.right],
            &[&self.p.then(&po2.left)?, &right.p.then(&po2.right)?],
        )?;
        Ok(MarkovMorphism {
            source,
            target,
            f: self.f.clone(),
            p,
            g: right.g.clone(),
        })
    }

    /// Inverse of a morphism whose three maps are bijections.
    pub fn inverse(&self) -> Result<MarkovMorphism> {
        Ok(MarkovMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            f: self.f.inverse()?,
            p: self.p.inverse()?,
            g: self.g.inverse()?,
        })
    }
}

pub fn check_morphism(m: &MarkovMorphism) -> bool {
    m.validate().is_ok()
}

/// Steady-state behaviour as a relation `ℚ^S ⊕ ℚ^S ↛ ℚ^T ⊕ ℚ^T` with
/// coordinates `(i*v, I | o*v, O)`.
pub fn black_box(m: &OpenMarkov) -> LinearRelation {
    let (nx, ns, nt) = (m.states().len(), m.inputs().len(), m.outputs().len());
    let istar = m.i.pushforward_matrix();
    let ostar = m.o.pushforward_matrix();
    let system = m
        .h()
        .hstack(&istar)
        .and_then(|a| a.hstack(&-&ostar))
        .expect("blocks share the state rows");
    let steady = kernel(&system);

    // (v, I, O) ↦ (i*v, I, o*v, O)
    let mut observe = RationalMatrix::zeros(2 * ns + 2 * nt, nx + ns + nt);
    for (s, &x) in m.i.indices().iter().enumerate() {
        observe.set(s, x, Rational::one());
        observe.set(ns + s, nx + s, Rational::one());
    }
    for (t, &x) in m.o.indices().iter().enumerate() {
        observe.set(2 * ns + t, x, Rational::one());
        observe.set(2 * ns + nt + t, nx + ns + t, Rational::one());
    }
    let graph = steady.apply(&observe).expect("observation matches the variable count");
    LinearRelation::new(2 * ns, 2 * nt, graph).expect("graph has the boundary dimension")
}

/// The square `(f⋆ ⊕ f⋆, g⋆ ⊕ g⋆)` from `■M` to `■M'`.
pub fn black_box_morphism(m: &MarkovMorphism) -> Result<RelSquare> {
    m.validate()?;
    let f = m.f.pushforward_matrix();
    let g = m.g.pushforward_matrix();
    Ok(RelSquare {
        f: f.direct_sum(&f),
        g: g.direct_sum(&g),
        top: black_box(&m.source),
        bottom: black_box(&m.target),
    })
}

/// `■M ⊗ ■N` in the coordinates of `■(M ⊗ N)`, which lists all
/// probabilities before all flows on each side.
pub fn tensor_black_boxes(r: &LinearRelation, r2: &LinearRelation) -> Result<LinearRelation> {
    let halves = |rel: &LinearRelation| -> Result<(usize, usize)> {
        if rel.dom_dim() % 2 == 1 || rel.cod_dim() % 2 == 1 {
            return Err(Error::DimensionMismatch(format!(
                "{}↛{} is not a black-box relation",
                rel.dom_dim(),
                rel.cod_dim()
            )));
        }
        Ok((rel.dom_dim() / 2, rel.cod_dim() / 2))
    };
    let (s1, t1) = halves(r)?;
    let (s2, t2) = halves(r2)?;
    let plain = tensor_relations(r, r2);
    // tensor_relations gives (p₁ I₁ p₂ I₂ | q₁ O₁ q₂ O₂)
    let side = |a: usize, b: usize, offset: usize| -> Vec<usize> {
        (0..a)
            .chain(2 * a..2 * a + b)
            .chain(a..2 * a)
            .chain(2 * a + b..2 * a + 2 * b)
            .map(|k| k + offset)
            .collect()
    };
    let mut order = side(s1, s2, 0);
    order.extend(side(t1, t2, 2 * (s1 + s2)));
    let graph = crate::exactlin::RationalSubspace::span(&plain.graph().basis().select_columns(&order));
    LinearRelation::new(plain.dom_dim(), plain.cod_dim(), graph)
}

/// `U_f : U_S ⇒ U_S'`, the identity square on `f`.
pub fn unit_morphism(f: &FinFunction) -> MarkovMorphism {
    MarkovMorphism {
        source: identity_open(f.dom()),
        target: identity_open(f.cod()),
        f: f.clone(),
        p: f.clone(),
        g: f.clone(),
    }
}

/// `λ : U_S ⊙ M ⇒ M`.
pub fn left_unitor(m: &OpenMarkov) -> Result<MarkovMorphism> {
    let (source, po) = compose_open_legs(&identity_open(m.inputs()), m)?;
    let p = mediating_map(&[&po.left, &po.right], &[&m.i, &FinFunction::identity(m.states())])?;
    Ok(MarkovMorphism {
        f: FinFunction::identity(m.inputs()),
        g: FinFunction::identity(m.outputs()),
        source,
        target: m.clone(),
        p,
    })
}

/// `ρ : M ⊙ U_T ⇒ M`.
pub fn right_unitor(m: &OpenMarkov) -> Result<MarkovMorphism> {
    let (source, po) = compose_open_legs(m, &identity_open(m.outputs()))?;
    let p = mediating_map(&[&po.left, &po.right], &[&FinFunction::identity(m.states()), &m.o])?;
    Ok(MarkovMorphism {
        f: FinFunction::identity(m.inputs()),
        g: FinFunction::identity(m.outputs()),
        source,
        target: m.clone(),
        p,
    })
}

/// `α : (M ⊙ N) ⊙ P ⇒ M ⊙ (N ⊙ P)`.
pub fn associator(m: &OpenMarkov, n: &OpenMarkov, p: &OpenMarkov) -> Result<MarkovMorphism> {
    let (mn, po1) = compose_open_legs(m, n)?;
    let (lhs, po2) = compose_open_legs(&mn, p)?;
    let (np, po3) = compose_open_legs(n, p)?;
    let (rhs, po4) = compose_open_legs(m, &np)?;
    let from = [po1.left.then(&po2.left)?, po1.right.then(&po2.left)?, po2.right.clone()];
    let to = [po4.left.clone(), po3.left.then(&po4.right)?, po3.right.then(&po4.right)?];
    let state_map = mediating_map(&from.iter().collect::<Vec<_>>(), &to.iter().collect::<Vec<_>>())?;
    Ok(MarkovMorphism {
        f: FinFunction::identity(m.inputs()),
        g: FinFunction::identity(p.outputs()),
        source: lhs,
        target: rhs,
        p: state_map,
    })
}

/// `χ : (M₁ ⊗ N₁) ⊙ (M₂ ⊗ N₂) ⇒ (M₁ ⊙ M₂) ⊗ (N₁ ⊙ N₂)`.
pub fn chi(m1: &OpenMarkov, n1: &OpenMarkov, m2: &OpenMarkov, n2: &OpenMarkov) -> Result<MarkovMorphism> {
    let (lhs, po) = compose_open_legs(&tensor_open(m1, n1), &tensor_open(m2, n2))?;
    let first = coproduct(m1.states(), n1.states());
    let second = coproduct(m2.states(), n2.states());

    let (c1, q1) = compose_open_legs(m1, m2)?;
    let (c2, q2) = compose_open_legs(n1, n2)?;
    let rhs = tensor_open(&c1, &c2);
    let sum = coproduct(c1.states(), c2.states());

    let from = [
        first.inj_left.then(&po.left)?,
        first.inj_right.then(&po.left)?,
        second.inj_left.then(&po.right)?,
        second.inj_right.then(&po.right)?,
    ];
    let to = [
        q1.left.then(&sum.inj_left)?,
        q2.left.then(&sum.inj_right)?,
        q1.right.then(&sum.inj_left)?,
        q2.right.then(&sum.inj_right)?,
    ];
    let state_map = mediating_map(&from.iter().collect::<Vec<_>>(), &to.iter().collect::<Vec<_>>())?;
    Ok(MarkovMorphism {
        f: FinFunction::identity(lhs.inputs()),
        g: FinFunction::identity(lhs.outputs()),
        source: lhs,
        target: rhs,
        p: state_map,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Handedness {
    Companion,
    Conjoint,
}

/// A companion or conjoint of a bijection `f : S → S'`, with its two
/// binding squares.
///
/// For a companion the cell is `S -f-> (S', 0) <-1- S'`, `to_unit` is
/// `(f, 1, 1)` onto `U_S'` and `from_unit` is `(1, f, f)` out of `U_S`.
/// For a conjoint the cell is `S' -1-> (S', 0) <-f- S`, `to_unit` is
/// `(1, 1, f)` onto `U_S'` and `from_unit` is `(f, f, 1)` out of `U_S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Companion {
    pub handedness: Handedness,
    pub f: FinFunction,
    pub cell: OpenMarkov,
    pub to_unit: MarkovMorphism,
    pub from_unit: MarkovMorphism,
}

pub fn companion_of(f: &FinFunction) -> Result<Companion> {
    if !f.is_bijective() {
        return Err(Error::NotBijection(format!("{f:?}")));
    }
    let (s, s2) = (f.dom(), f.cod());
    let id_s2 = FinFunction::identity(s2);
    let cell = OpenMarkov::new(f.clone(), Generator::zero(s2), id_s2.clone())?;
    Ok(Companion {
        handedness: Handedness::Companion,
        f: f.clone(),
        to_unit: MarkovMorphism {
            source: cell.clone(),
            target: identity_open(s2),
            f: f.clone(),
            p: id_s2.clone(),
            g: id_s2,
        },
        from_unit: MarkovMorphism {
            source: identity_open(s),
            target: cell.clone(),
            f: FinFunction::identity(s),
            p: f.clone(),
            g: f.clone(),
        },
        cell,
    })
}

pub fn conjoint_of(f: &FinFunction) -> Result<Companion> {
    if !f.is_bijective() {
        return Err(Error::NotBijection(format!("{f:?}")));
    }
    let (s, s2) = (f.dom(), f.cod());
    let id_s2 = FinFunction::identity(s2);
    let cell = OpenMarkov::new(id_s2.clone(), Generator::zero(s2), f.clone())?;
    Ok(Companion {
        handedness: Handedness::Conjoint,
        f: f.clone(),
        to_unit: MarkovMorphism {
            source: cell.clone(),
            target: identity_open(s2),
            f: id_s2.clone(),
            p: id_s2,
            g: f.clone(),
        },
        from_unit: MarkovMorphism {
            source: identity_open(s),
            target: cell.clone(),
            f: f.clone(),
            p: f.clone(),
            g: FinFunction::identity(s),
        },
        cell,
    })
}

impl Companion {
    /// The two binding equations: pasting the squares vertically gives
    /// `U_f`, and pasting them horizontally gives the identity on the cell
    /// once the unitors are accounted for.
    pub fn equations_hold(&self) -> Result<bool> {
        if !check_morphism(&self.to_unit) || !check_morphism(&self.from_unit) {
            return Ok(false);
        }
        let vertical = self.from_unit.vertical_compose(&self.to_unit)?;
        if vertical != unit_morphism(&self.f) {
            return Ok(false);
        }
        let whiskered = match self.handedness {
            Handedness::Companion => {
                let h = self.from_unit.horizontal_compose(&self.to_unit)?;
                left_unitor(&self.cell)?
                    .inverse()?
                    .vertical_compose(&h)?
                    .vertical_compose(&right_unitor(&self.cell)?)?
            }
            Handedness::Conjoint => {
                let h = self.to_unit.horizontal_compose(&self.from_unit)?;
                right_unitor(&self.cell)?
                    .inverse()?
                    .vertical_compose(&h)?
                    .vertical_compose(&left_unitor(&self.cell)?)?
            }
        };
        Ok(whiskered == MarkovMorphism::identity(&self.cell))
    }
}
