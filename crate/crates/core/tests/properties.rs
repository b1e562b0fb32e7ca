use cospan_core::exactlin::{kernel, RationalSubspace};
use cospan_core::finset::{compose, pushout};
use cospan_core::laws::generate::{generate, Generated, GENERATED_KINDS};
use cospan_core::laws::{run_suite, Suite};
use cospan_core::linrel::{compose_relations, identity_relation, is_rel_2morphism, tensor_relations};
use cospan_core::openmarkov::{compose_open, OpenMarkov};
use cospan_core::{FinFunction, FinSet, LinearRelation, Rational, RationalMatrix, RelSquare, SquareFS};
use proptest::prelude::*;

fn fun(dom: usize, cod: usize, prefix: (&str, &str), map: Vec<usize>) -> FinFunction {
    FinFunction::from_indices(FinSet::numbered(prefix.0, dom), FinSet::numbered(prefix.1, cod), map).unwrap()
}

/// `(n, m, map)` describing a function from an `n`-set to an `m`-set.
fn arb_map(dom: std::ops::RangeInclusive<usize>, cod: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (usize, usize, Vec<usize>)> {
    (dom, cod).prop_flat_map(|(n, m)| {
        let m = if n > 0 { m.max(1) } else { m };
        (Just(n), Just(m), prop::collection::vec(0..m.max(1), n))
    })
}

/// A span `X <-f- T -g-> Y`.
fn arb_span(max: usize) -> impl Strategy<Value = (FinFunction, FinFunction)> {
    (0..=max, 1..=max, 1..=max).prop_flat_map(|(t, x, y)| {
        (prop::collection::vec(0..x, t), prop::collection::vec(0..y, t))
            .prop_map(move |(f, g)| (fun(t, x, ("t", "x"), f), fun(t, y, ("t", "y"), g)))
    })
}

fn all_functions(dom: &FinSet, cod: &FinSet) -> Vec<FinFunction> {
    let (n, m) = (dom.len(), cod.len());
    if m == 0 {
        return if n == 0 { vec![FinFunction::from_empty(cod)] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        out.push(FinFunction::from_indices(dom.clone(), cod.clone(), idx.clone()).unwrap());
        let mut k = 0;
        while k < n && idx[k] == m - 1 {
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            return out;
        }
        idx[k] += 1;
    }
}

fn q(x: i64) -> Rational {
    Rational::from(x)
}

fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(prop::collection::vec((-4i64..=4, 1i64..=3), cols), rows).prop_map(move |r| {
        let rows = r
            .into_iter()
            .map(|row| row.into_iter().map(|(a, b)| Rational::new(a, b)).collect())
            .collect();
        RationalMatrix::from_rows(rows, cols).unwrap()
    })
}

fn arb_sized_matrix(max: usize) -> impl Strategy<Value = RationalMatrix> {
    (0..=max, 0..=max).prop_flat_map(|(r, c)| arb_matrix(r, c))
}

/// Up to five rows of length `n`.
fn arb_matrix_rows(n: usize) -> impl Strategy<Value = RationalMatrix> {
    (0usize..=5).prop_flat_map(move |r| arb_matrix(r, n))
}

fn arb_relation(dom: usize, cod: usize) -> impl Strategy<Value = LinearRelation> {
    (0..=dom + cod).prop_flat_map(move |k| {
        arb_matrix(k, dom + cod).prop_map(move |m| LinearRelation::new(dom, cod, RationalSubspace::span(&m)).unwrap())
    })
}

/// A relation containing `(f ⊕ g) r`, so `(f, g, r, ·)` is a filled square.
fn widen(r: &LinearRelation, f: &RationalMatrix, g: &RationalMatrix, extra: &RationalMatrix) -> LinearRelation {
    let pushed = r.graph().apply(&f.direct_sum(g)).unwrap();
    let graph = pushed.sum(&RationalSubspace::span(extra)).unwrap();
    LinearRelation::new(f.rows(), g.rows(), graph).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pushout_is_universal((f, g) in arb_span(4), q_size in 1usize..=2) {
        prop_assume!(f.cod().len() + g.cod().len() <= 7);
        let po = pushout(&f, &g).unwrap();
        prop_assert_eq!(compose(&f, &po.left).unwrap(), compose(&g, &po.right).unwrap());
        let target = FinSet::numbered("q", q_size);
        let maps_p = all_functions(&po.apex, &target);
        for a in all_functions(f.cod(), &target) {
            for b in all_functions(g.cod(), &target) {
                let cocone = compose(&f, &a).unwrap() == compose(&g, &b).unwrap();
                let mediators: Vec<&FinFunction> = maps_p
                    .iter()
                    .filter(|m| compose(&po.left, m).unwrap() == a && compose(&po.right, m).unwrap() == b)
                    .collect();
                if cocone {
                    prop_assert_eq!(mediators.len(), 1);
                    prop_assert_eq!(&po.universal(&a, &b).unwrap(), mediators[0]);
                } else {
                    prop_assert!(mediators.is_empty());
                    prop_assert!(po.universal(&a, &b).is_err());
                }
            }
        }
    }

    #[test]
    fn monos_are_stable_under_pushout((n, m, map) in arb_map(0..=5, 0..=6), y in 1usize..=5, g_map in prop::collection::vec(0usize..5, 5)) {
        let m = m.max(n).max(1);
        let injective: Vec<usize> = (0..n).map(|k| (map.get(k).copied().unwrap_or(0) + k * 7) % m).collect();
        let f = fun(n, m, ("t", "x"), injective);
        prop_assume!(f.is_injective());
        let g = fun(n, y, ("t", "y"), g_map[..n].iter().map(|v| v % y).collect());
        let po = pushout(&f, &g).unwrap();
        prop_assert!(po.right.is_injective());
        let po2 = pushout(&g, &f).unwrap();
        prop_assert!(po2.left.is_injective());
    }

    #[test]
    fn pullback_test_matches_fiber_product(
        (c, d, bottom) in arb_map(0..=4, 1..=3),
        b_map in prop::collection::vec(0usize..3, 0..=4),
        a_pairs in prop::collection::vec((0usize..4, 0usize..16), 0..=6),
    ) {
        let bottom = fun(c, d, ("c", "d"), bottom);
        let b = b_map.len();
        let right = fun(b, d, ("b", "d"), b_map.iter().map(|v| v % d).collect());
        // pick each apex element over a random c, then a random b over the same point of d
        let mut left_map = Vec::new();
        let mut top_map = Vec::new();
        if c > 0 {
            for &(ci, pick) in &a_pairs {
                let ci = ci % c;
                let over: Vec<usize> = (0..b).filter(|&bi| right.at(bi) == bottom.at(ci)).collect();
                if !over.is_empty() {
                    left_map.push(ci);
                    top_map.push(over[pick % over.len()]);
                }
            }
        }
        let a = left_map.len();
        let sq = SquareFS {
            top: fun(a, b, ("a", "b"), top_map.clone()),
            bottom,
            left: fun(a, c, ("a", "c"), left_map.clone()),
            right,
        };
        prop_assert!(sq.commutes());
        let mut fiber_product: Vec<(usize, usize)> = (0..b)
            .flat_map(|bi| (0..c).map(move |ci| (bi, ci)))
            .filter(|&(bi, ci)| sq.right.at(bi) == sq.bottom.at(ci))
            .collect();
        fiber_product.sort_unstable();
        let mut image: Vec<(usize, usize)> = top_map.iter().copied().zip(left_map.iter().copied()).collect();
        image.sort_unstable();
        let injective = image.windows(2).all(|w| w[0] != w[1]);
        image.dedup();
        let bijective = injective && image == fiber_product;
        prop_assert_eq!(sq.is_pullback().unwrap(), bijective);
    }

    #[test]
    fn pushforward_is_functorial((n, m, f) in arb_map(0..=5, 1..=5), k in 1usize..=5, g in prop::collection::vec(0usize..5, 5)) {
        let f = fun(n, m, ("a", "b"), f);
        let g = fun(m, k, ("b", "c"), g[..m].iter().map(|v| v % k).collect());
        let gf = compose(&f, &g).unwrap();
        prop_assert_eq!(gf.pushforward_matrix(), g.pushforward_matrix().try_mul(&f.pushforward_matrix()).unwrap());
        let push = f.pushforward_matrix();
        for col in 0..n {
            prop_assert_eq!(push.column(col).iter().sum::<Rational>(), q(1));
        }
        prop_assert_eq!(f.pullback_matrix(), push.transpose());
    }

    #[test]
    fn rationals_stay_reduced(a in -50i64..=50, b in 1i64..=30, k in 1i64..=9) {
        let x = Rational::new(a * k, -b * k);
        prop_assert_eq!(&x, &Rational::new(-a, b));
        prop_assert!(x.denom() > &0.into());
        let g = num_gcd(x.numer().clone(), x.denom().clone());
        prop_assert!(g == 1.into() || x.is_zero());
    }

    #[test]
    fn rank_plus_nullity(m in arb_sized_matrix(5)) {
        prop_assert_eq!(m.rank() + kernel(&m).dim(), m.cols());
        let k = kernel(&m);
        for r in 0..k.dim() {
            prop_assert!(m.mul_vec(k.basis().row(r)).unwrap().iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn grassmann_identity((u, w) in (0usize..=5).prop_flat_map(|n| (arb_matrix_rows(n), arb_matrix_rows(n)))) {
        let (u, w) = (RationalSubspace::span(&u), RationalSubspace::span(&w));
        let sum = u.sum(&w).unwrap();
        let meet = u.intersect(&w).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + w.dim());
        prop_assert!(u.contains(&meet).unwrap() && w.contains(&meet).unwrap());
        prop_assert!(sum.contains(&u).unwrap() && sum.contains(&w).unwrap());
    }

    #[test]
    fn subspaces_are_canonical(m in arb_sized_matrix(4), mix in prop::collection::vec((-3i64..=3, 1i64..=3), 16)) {
        let n = m.rows();
        // add multiples of row 0 to later rows, then reverse the order: same span
        let mut rows = m.to_rows();
        for r in 1..n {
            let (a, b) = mix[r % mix.len()];
            let factor = Rational::new(a, b);
            let row0 = rows[0].clone();
            for (x, y) in rows[r].iter_mut().zip(&row0) {
                *x = &*x + &(&factor * y);
            }
        }
        rows.reverse();
        let mixed = RationalMatrix::from_rows(rows, m.cols()).unwrap();
        prop_assert_eq!(RationalSubspace::span(&m), RationalSubspace::span(&mixed));
        prop_assert_eq!(m.rref().rref(), m.rref());
        let s = RationalSubspace::span(&m);
        prop_assert_eq!(s.dim() == 0, s.basis().rows() == 0);
    }

    #[test]
    fn relation_composition_is_strict(
        r in arb_relation(2, 3), s in arb_relation(3, 2), t in arb_relation(2, 1),
    ) {
        let left = compose_relations(&compose_relations(&r, &s).unwrap(), &t).unwrap();
        let right = compose_relations(&r, &compose_relations(&s, &t).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(compose_relations(&identity_relation(2), &r).unwrap(), r.clone());
        prop_assert_eq!(compose_relations(&r, &identity_relation(3)).unwrap(), r);
    }

    #[test]
    fn tensor_interchanges_with_composition(
        r in arb_relation(2, 1), s in arb_relation(1, 2), r2 in arb_relation(1, 2), s2 in arb_relation(2, 2),
    ) {
        let lhs = tensor_relations(&compose_relations(&r, &s).unwrap(), &compose_relations(&r2, &s2).unwrap());
        let rhs = compose_relations(&tensor_relations(&r, &r2), &tensor_relations(&s, &s2)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pasting_keeps_squares_filled(
        r1 in arb_relation(2, 2), r2 in arb_relation(2, 1),
        f in arb_matrix(2, 2), g in arb_matrix(1, 2), h in arb_matrix(2, 1),
        f2 in arb_matrix(1, 2), g2 in arb_matrix(2, 1),
        e1 in arb_matrix(1, 3), e2 in arb_matrix(1, 3), e3 in arb_matrix(1, 3),
    ) {
        let s1 = widen(&r1, &f, &g, &e1);
        let s2 = widen(&r2, &g, &h, &e2);
        let left = RelSquare { f: f.clone(), g: g.clone(), top: r1.clone(), bottom: s1.clone() };
        let right = RelSquare { f: g.clone(), g: h.clone(), top: r2, bottom: s2 };
        prop_assert!(is_rel_2morphism(&left).unwrap());
        prop_assert!(is_rel_2morphism(&right).unwrap());
        prop_assert!(is_rel_2morphism(&left.horizontal_paste(&right).unwrap()).unwrap());

        let below = RelSquare { f: f2.clone(), g: g2.clone(), top: s1.clone(), bottom: widen(&s1, &f2, &g2, &e3) };
        prop_assert!(is_rel_2morphism(&below).unwrap());
        prop_assert!(is_rel_2morphism(&left.vertical_paste(&below).unwrap()).unwrap());
    }

    #[test]
    fn generators_are_sound_and_replayable(seed in any::<u64>(), size in 1usize..=6) {
        for kind in GENERATED_KINDS {
            let a = generate(kind, seed, size).unwrap();
            let b = generate(kind, seed, size).unwrap();
            prop_assert_eq!(serde_json::to_value(&a).unwrap(), serde_json::to_value(&b).unwrap());
            match a {
                Generated::PullbackSquare { square } => prop_assert!(square.is_pullback().unwrap()),
                Generated::LumpablePair { generator, p } => {
                    prop_assert!(cospan_core::openmarkov::is_lumpable(&generator, &p).unwrap())
                }
                Generated::MarkovMorphism { morphism } => prop_assert!(morphism.validate().is_ok()),
                Generated::ValidGenerator { generator } => prop_assert!(generator.len() <= size),
                _ => {}
            }
        }
    }

    #[test]
    fn composite_legs_stay_injective(seed in any::<u64>()) {
        if let Generated::ComposablePair { first, second } = generate("composable_pair", seed, 6).unwrap() {
            let c: OpenMarkov = compose_open(&first, &second).unwrap();
            prop_assert!(c.i().is_injective() && c.o().is_injective());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn every_suite_holds_for_any_seed(seed in any::<u64>()) {
        for suite in Suite::ALL {
            let a = run_suite(suite.name(), seed, 5, 6).unwrap();
            prop_assert!(a.passed(), "{}: {:?}", suite, a.failures.first());
            prop_assert_eq!(a, run_suite(suite.name(), seed, 5, 6).unwrap());
        }
    }
}

fn num_gcd(mut a: num_bigint::BigInt, mut b: num_bigint::BigInt) -> num_bigint::BigInt {
    use num_traits::{Signed, Zero};
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a.abs()
}
