//! Deterministic fixtures for the criterion benches.

use cospan_core::laws::case_rng;
use cospan_core::laws::generate::{
    random_decoration, random_function, random_generator, random_open_markov, random_relation, Bounds,
};
use cospan_core::linrel::LinearRelation;
use cospan_core::openmarkov::{Generator, OpenMarkov};
use cospan_core::opennet::{NetKind, OpenNet};
use cospan_core::{FinFunction, FinSet, RationalMatrix};

const SEED: u64 = 0x5eed;

/// A random generator on `n` states.
pub fn generator(n: usize) -> Generator {
    let mut rng = case_rng(SEED, n);
    random_generator(&mut rng, &FinSet::numbered("x", n), &Bounds::new(n))
}

/// A dense `rows × cols` rational matrix with small entries.
pub fn matrix(rows: usize, cols: usize) -> RationalMatrix {
    let h = generator(rows.max(cols));
    let picked = h.h().to_rows().into_iter().take(rows).map(|r| r[..cols].to_vec()).collect();
    RationalMatrix::from_rows(picked, cols).expect("rows have `cols` entries")
}

/// An open Markov process on exactly `n` states with `boundary` inputs and outputs.
pub fn open_process(n: usize, boundary: usize) -> OpenMarkov {
    let mut rng = case_rng(SEED, n);
    let mut b = Bounds::new(n);
    b.set = n;
    loop {
        let m = random_open_markov(
            &mut rng,
            &b,
            "x",
            &FinSet::numbered("in", boundary),
            &FinSet::numbered("out", boundary),
        );
        if m.states().len() == n {
            return m;
        }
    }
}

/// Two composable processes `S → T → U`, each on `n` states.
pub fn composable(n: usize, boundary: usize) -> (OpenMarkov, OpenMarkov) {
    let mut rng = case_rng(SEED, n + 1);
    let b = Bounds::new(n);
    let (s, t, u) = (
        FinSet::numbered("s", boundary),
        FinSet::numbered("t", boundary),
        FinSet::numbered("u", boundary),
    );
    let m = random_open_markov(&mut rng, &b, "x", &s, &t);
    let n = random_open_markov(&mut rng, &b, "y", &t, &u);
    (m, n)
}

/// A span `B ← A → C` with `|A| = |B| = |C| = n`.
pub fn span(n: usize) -> (FinFunction, FinFunction) {
    let mut rng = case_rng(SEED, n);
    let a = FinSet::numbered("a", n);
    let f = random_function(&mut rng, &a, &FinSet::numbered("b", n));
    let g = random_function(&mut rng, &a, &FinSet::numbered("c", n));
    (f, g)
}

/// Composable relations `dim → dim → dim`.
pub fn relations(dim: usize) -> (LinearRelation, LinearRelation) {
    let mut rng = case_rng(SEED, dim);
    (random_relation(&mut rng, dim, dim), random_relation(&mut rng, dim, dim))
}

/// An open Petri net with `n` species and `n` transitions on two-element feet.
pub fn net(n: usize) -> OpenNet {
    let mut rng = case_rng(SEED, n);
    let decoration = random_decoration(&mut rng, NetKind::Petri, "v", n, n, &Bounds::new(n));
    let foot = FinSet::numbered("f", 2);
    let i = random_function(&mut rng, &foot, decoration.vertices());
    let o = random_function(&mut rng, &foot, decoration.vertices());
    OpenNet::new(i, decoration, o).expect("legs land in the species")
}
