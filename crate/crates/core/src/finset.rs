//! Finite sets with named elements, total functions between them, and the
//! colimits (coproducts, pushouts) that compose open systems.
//!
//! Elements are stored in a fixed order; that order is the basis order used
//! whenever a finite set is turned into a vector space `ℚ^X`.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactlin::{Rational, RationalMatrix};

/// Prefixes used to disambiguate the two summands of a coproduct.
pub const LEFT_TAG: &str = "L:";
pub const RIGHT_TAG: &str = "R:";

/// An ordered finite set of distinct string labels.
#[derive(Clone, Default)]
pub struct FinSet {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl FinSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (pos, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), pos).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(FinSet { labels, index })
    }

    pub fn empty() -> Self {
        FinSet::default()
    }

    /// `{prefix0, prefix1, ..., prefix(n-1)}`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        FinSet::new((0..n).map(|k| format!("{prefix}{k}"))).expect("numbered labels are distinct")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.labels[idx]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(String::as_str)
    }

    /// Same elements, possibly in another order.
    pub fn same_elements(&self, other: &FinSet) -> bool {
        self.len() == other.len() && self.iter().all(|l| other.contains(l))
    }

    fn require(&self, label: &str, context: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownLabel {
            label: label.to_string(),
            context: context.to_string(),
        })
    }
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for FinSet {}

impl Hash for FinSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.labels.hash(state);
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels.iter()).finish()
    }
}

impl Serialize for FinSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FinSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<String>::deserialize(deserializer)?;
        FinSet::new(labels).map_err(D::Error::custom)
    }
}

/// A total function between two finite sets, stored by element index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinFunction {
    dom: FinSet,
    cod: FinSet,
    map: Vec<usize>,
}

impl FinFunction {
    /// Builds a function from `(source label, target label)` pairs. Every
    /// domain element must be mapped exactly once.
    pub fn new<I, A, B>(dom: FinSet, cod: FinSet, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut map = vec![usize::MAX; dom.len()];
        for (a, b) in pairs {
            let src = dom.require(a.as_ref(), "domain")?;
            let tgt = cod.require(b.as_ref(), "codomain")?;
            if map[src] != usize::MAX && map[src] != tgt {
                return Err(Error::Mismatch(format!(
                    "`{}` mapped to two different elements",
                    a.as_ref()
                )));
            }
            map[src] = tgt;
        }
        if let Some(missing) = map.iter().position(|&t| t == usize::MAX) {
            return Err(Error::NotTotal(dom.label(missing).to_string()));
        }
        Ok(FinFunction { dom, cod, map })
    }

    pub fn from_indices(dom: FinSet, cod: FinSet, map: Vec<usize>) -> Result<Self> {
        if map.len() != dom.len() {
            return Err(Error::Mismatch(format!(
                "index map has {} entries for a domain of size {}",
                map.len(),
                dom.len()
            )));
        }
        if let Some(bad) = map.iter().find(|&&t| t >= cod.len()) {
            return Err(Error::Mismatch(format!(
                "index {bad} outside codomain of size {}",
                cod.len()
            )));
        }
        Ok(FinFunction { dom, cod, map })
    }

    pub fn identity(set: &FinSet) -> Self {
        FinFunction {
            dom: set.clone(),
            cod: set.clone(),
            map: (0..set.len()).collect(),
        }
    }

    /// The unique function out of the empty set.
    pub fn from_empty(cod: &FinSet) -> Self {
        FinFunction {
            dom: FinSet::empty(),
            cod: cod.clone(),
            map: Vec::new(),
        }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    /// Image index of the domain element at `idx`.
    pub fn at(&self, idx: usize) -> usize {
        self.map[idx]
    }

    pub fn indices(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, label: &str) -> Option<&str> {
        self.dom.index_of(label).map(|i| self.cod.label(self.map[i]))
    }

    /// `(source, target)` label pairs in domain order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map
            .iter()
            .enumerate()
            .map(|(i, &j)| (self.dom.label(i), self.cod.label(j)))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &FinFunction) -> Result<FinFunction> {
        compose(self, g)
    }

    /// Domain indices mapped to codomain index `target`.
    pub fn fiber(&self, target: usize) -> Vec<usize> {
        self.map
            .iter()
            .enumerate()
            .filter_map(|(i, &j)| (j == target).then_some(i))
            .collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.map.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        for &j in &self.map {
            hit[j] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    pub fn inverse(&self) -> Result<FinFunction> {
        if !self.is_bijective() {
            return Err(Error::NotBijection(format!("{self:?}")));
        }
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Ok(FinFunction {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            map: inv,
        })
    }

    /// The 0/1 matrix of `f⋆ : ℚ^dom → ℚ^cod`, summing over fibers.
    pub fn pushforward_matrix(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.cod.len(), self.dom.len());
        for (j, &i) in self.map.iter().enumerate() {
            m.set(i, j, Rational::one());
        }
        m
    }

    /// The matrix of `f* : ℚ^cod → ℚ^dom`, precomposition with `f`.
    pub fn pullback_matrix(&self) -> RationalMatrix {
        self.pushforward_matrix().transpose()
    }
}

impl fmt::Debug for FinFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct FinFunctionRepr {
    dom: FinSet,
    cod: FinSet,
    map: std::collections::BTreeMap<String, String>,
}

impl Serialize for FinFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FinFunctionRepr {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            map: self
                .pairs()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FinFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = FinFunctionRepr::deserialize(deserializer)?;
        FinFunction::new(repr.dom, repr.cod, repr.map).map_err(D::Error::custom)
    }
}

/// `g ∘ f`.
pub fn compose(f: &FinFunction, g: &FinFunction) -> Result<FinFunction> {
    if f.cod != g.dom {
        return Err(Error::Mismatch(format!(
            "cannot compose: codomain {:?} differs from domain {:?}",
            f.cod, g.dom
        )));
    }
    Ok(FinFunction {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        map: f.map.iter().map(|&j| g.map[j]).collect(),
    })
}

/// A chosen coproduct `A + B` with its two injections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coproduct {
    pub set: FinSet,
    pub inj_left: FinFunction,
    pub inj_right: FinFunction,
}

impl Coproduct {
    /// The copairing `[f, g] : A + B → Q`.
    pub fn copair(&self, f: &FinFunction, g: &FinFunction) -> Result<FinFunction> {
        if f.dom != self.inj_left.dom || g.dom != self.inj_right.dom || f.cod != g.cod {
            return Err(Error::Mismatch("copairing legs do not match the coproduct".into()));
        }
        let map = f.map.iter().chain(g.map.iter()).copied().collect();
        Ok(FinFunction {
            dom: self.set.clone(),
            cod: f.cod.clone(),
            map,
        })
    }
}

/// `A + B`, labels tagged `L:` and `R:` respectively.
pub fn coproduct(a: &FinSet, b: &FinSet) -> Coproduct {
    let set = FinSet::new(
        a.iter()
            .map(|l| format!("{LEFT_TAG}{l}"))
            .chain(b.iter().map(|l| format!("{RIGHT_TAG}{l}"))),
    )
    .expect("tagged labels are distinct");
    let inj_left = FinFunction {
        dom: a.clone(),
        cod: set.clone(),
        map: (0..a.len()).collect(),
    };
    let inj_right = FinFunction {
        dom: b.clone(),
        cod: set.clone(),
        map: (a.len()..a.len() + b.len()).collect(),
    };
    Coproduct {
        set,
        inj_left,
        inj_right,
    }
}

/// `f + g : A + B → A' + B'`.
pub fn sum_map(f: &FinFunction, g: &FinFunction) -> FinFunction {
    let src = coproduct(&f.dom, &g.dom);
    let tgt = coproduct(&f.cod, &g.cod);
    let map = f
        .map
        .iter()
        .copied()
        .chain(g.map.iter().map(|&j| j + f.cod.len()))
        .collect();
    FinFunction {
        dom: src.set,
        cod: tgt.set,
        map,
    }
}

#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// A chosen pushout `X +_T Y` of `f : T → X` and `g : T → Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushout {
    pub apex: FinSet,
    /// `j : X → P`
    pub left: FinFunction,
    /// `k : Y → P`
    pub right: FinFunction,
}

impl Pushout {
    /// The unique map `P → Q` induced by a cocone `(a : X → Q, b : Y → Q)`.
    /// Fails if the cocone does not factor through the pushout.
    pub fn universal(&self, a: &FinFunction, b: &FinFunction) -> Result<FinFunction> {
        mediating_map(&[&self.left, &self.right], &[a, b])
    }

    /// The copairing `X + Y → P` of the two legs.
    pub fn copairing(&self) -> FinFunction {
        coproduct(self.left.dom(), self.right.dom())
            .copair(&self.left, &self.right)
            .expect("legs share the apex")
    }
}

/// Glues `X` and `Y` along `T`. Classes are found with union–find; each
/// class is labelled by its lexicographically least member label, falling
/// back to `L:`/`R:`-tagged member labels when two classes would collide.
/// Apex order is the order of first appearance scanning `X` then `Y`.
pub fn pushout(f: &FinFunction, g: &FinFunction) -> Result<Pushout> {
    if f.dom != g.dom {
        return Err(Error::Mismatch(format!(
            "pushout legs have different domains {:?} and {:?}",
            f.dom, g.dom
        )));
    }
    let (x, y) = (&f.cod, &g.cod);
    let nx = x.len();
    let mut uf = UnionFind::new(nx + y.len());
    for t in 0..f.dom.len() {
        uf.union(f.map[t], nx + g.map[t]);
    }

    let mut class_of_root: HashMap<usize, usize> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut assignment = Vec::with_capacity(nx + y.len());
    for e in 0..nx + y.len() {
        let root = uf.find(e);
        let next = members.len();
        let class = *class_of_root.entry(root).or_insert(next);
        if class == members.len() {
            members.push(Vec::new());
        }
        members[class].push(e);
        assignment.push(class);
    }

    let raw = |e: usize| -> String {
        if e < nx {
            x.label(e).to_string()
        } else {
            y.label(e - nx).to_string()
        }
    };
    let tagged = |e: usize| -> String {
        if e < nx {
            format!("{LEFT_TAG}{}", x.label(e))
        } else {
            format!("{RIGHT_TAG}{}", y.label(e - nx))
        }
    };
    let pick = |label: &dyn Fn(usize) -> String| -> Vec<String> {
        members
            .iter()
            .map(|ms| ms.iter().map(|&e| label(e)).min().expect("classes are nonempty"))
            .collect()
    };
    let apex = FinSet::new(pick(&raw)).or_else(|_| FinSet::new(pick(&tagged)))?;

    let left = FinFunction {
        dom: x.clone(),
        cod: apex.clone(),
        map: assignment[..nx].to_vec(),
    };
    let right = FinFunction {
        dom: y.clone(),
        cod: apex.clone(),
        map: assignment[nx..].to_vec(),
    };
    Ok(Pushout { apex, left, right })
}

/// Given jointly surjective legs `from[k] : A_k → P` and a second family
/// `to[k] : A_k → Q`, the unique `m : P → Q` with `m ∘ from[k] = to[k]`.
pub fn mediating_map(from: &[&FinFunction], to: &[&FinFunction]) -> Result<FinFunction> {
    if from.len() != to.len() || from.is_empty() {
        return Err(Error::Mismatch("leg families must be nonempty and equally long".into()));
    }
    let p = from[0].cod.clone();
    let q = to[0].cod.clone();
    let mut map: Vec<Option<usize>> = vec![None; p.len()];
    for (a, b) in from.iter().zip(to) {
        if a.dom != b.dom || a.cod != p || b.cod != q {
            return Err(Error::Mismatch("leg families are not parallel".into()));
        }
        for (e, (&pa, &qb)) in a.map.iter().zip(&b.map).enumerate() {
            match map[pa] {
                None => map[pa] = Some(qb),
                Some(prev) if prev == qb => {}
                Some(_) => {
                    return Err(Error::Mismatch(format!(
                        "cocone does not factor: `{}` has two candidate images",
                        a.dom.label(e)
                    )))
                }
            }
        }
    }
    let map = map
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| Error::NotSurjective(format!("`{}` is not hit", p.label(i)))))
        .collect::<Result<Vec<_>>>()?;
    Ok(FinFunction { dom: p, cod: q, map })
}

/// A square of functions
///
/// ```text
///   S --top--> X
///   |          |
///  left      right
///   v          v
///   S' -bottom-> X'
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareFS {
    pub top: FinFunction,
    pub bottom: FinFunction,
    pub left: FinFunction,
    pub right: FinFunction,
}

impl SquareFS {
    pub fn commutes(&self) -> bool {
        match (compose(&self.top, &self.right), compose(&self.left, &self.bottom)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    /// Fiberwise bijection test: for every `s'`, `top` restricts to a
    /// bijection from `left⁻¹(s')` onto `right⁻¹(bottom(s'))`.
    pub fn is_pullback(&self) -> Result<bool> {
        if !self.commutes() {
            return Err(Error::NonCommutingSquare);
        }
        for s_prime in 0..self.bottom.dom.len() {
            let upstairs = self.left.fiber(s_prime);
            let target = self.right.fiber(self.bottom.map[s_prime]);
            if upstairs.len() != target.len() {
                return Ok(false);
            }
            let mut images: Vec<usize> = upstairs.iter().map(|&s| self.top.map[s]).collect();
            images.sort_unstable();
            images.dedup();
            if images.len() != target.len() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(labels: &[&str]) -> FinSet {
        FinSet::new(labels.iter().copied()).unwrap()
    }

    fn fun(dom: &[&str], cod: &[&str], pairs: &[(&str, &str)]) -> FinFunction {
        FinFunction::new(set(dom), set(cod), pairs.iter().copied()).unwrap()
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert_eq!(
            FinSet::new(["a", "a"]).unwrap_err(),
            Error::DuplicateLabel("a".into())
        );
    }

    #[test]
    fn compose_examples() {
        let id = FinFunction::identity(&set(&["a", "b"]));
        assert_eq!(compose(&id, &id).unwrap(), id);

        let f = fun(&["1"], &["a", "b"], &[("1", "a")]);
        let g = fun(&["a", "b"], &["x"], &[("a", "x"), ("b", "x")]);
        assert_eq!(compose(&f, &g).unwrap(), fun(&["1"], &["x"], &[("1", "x")]));
        assert_eq!(compose(&FinFunction::identity(f.dom()), &f).unwrap(), f);
        assert_eq!(compose(&f, &FinFunction::identity(f.cod())).unwrap(), f);
        assert!(matches!(compose(&g, &f), Err(Error::Mismatch(_))));
    }

    #[test]
    fn partial_function_rejected() {
        let err = FinFunction::new(set(&["a", "b"]), set(&["x"]), [("a", "x")]).unwrap_err();
        assert_eq!(err, Error::NotTotal("b".into()));
    }

    #[test]
    fn coproduct_examples() {
        let c = coproduct(&FinSet::empty(), &set(&["x"]));
        assert_eq!(c.set.labels(), ["R:x"]);
        assert!(c.inj_left.dom().is_empty());
        assert!(c.inj_right.is_bijective());

        let c = coproduct(&set(&["a"]), &set(&["a"]));
        assert_eq!(c.set.labels(), ["L:a", "R:a"]);

        let c = coproduct(&set(&["H", "O", "H2O"]), &set(&["H2O", "OH-", "H3O+"]));
        assert_eq!(c.set.len(), 6);
    }

    #[test]
    fn pushout_over_empty_is_coproduct_sized() {
        let x = set(&["a", "b"]);
        let y = set(&["c"]);
        let po = pushout(&FinFunction::from_empty(&x), &FinFunction::from_empty(&y)).unwrap();
        assert_eq!(po.apex.len(), 3);
        assert_eq!(po.apex.labels(), ["a", "b", "c"]);
    }

    #[test]
    fn self_gluing_collapses_nothing() {
        let x = set(&["p", "q", "r"]);
        let id = FinFunction::identity(&x);
        let po = pushout(&id, &id).unwrap();
        assert_eq!(po.apex, x);
        assert_eq!(po.left, id);
        assert_eq!(po.right, id);
    }

    #[test]
    fn chemistry_gluing_has_five_species() {
        let t = set(&["4"]);
        let f = fun(&["4"], &["H", "O", "H2O"], &[("4", "H2O")]);
        let g = fun(&["4"], &["H2O", "OH-", "H3O+"], &[("4", "H2O")]);
        assert_eq!(f.dom(), &t);
        let po = pushout(&f, &g).unwrap();
        assert_eq!(po.apex.labels(), ["H", "O", "H2O", "OH-", "H3O+"]);
        assert_eq!(compose(&f, &po.left).unwrap(), compose(&g, &po.right).unwrap());
    }

    #[test]
    fn colliding_class_labels_fall_back_to_tags() {
        let t = FinSet::empty();
        let x = set(&["a"]);
        let y = set(&["a"]);
        let po = pushout(&FinFunction::new(t.clone(), x, Vec::<(&str, &str)>::new()).unwrap(),
            &FinFunction::new(t, y, Vec::<(&str, &str)>::new()).unwrap())
        .unwrap();
        assert_eq!(po.apex.labels(), ["L:a", "R:a"]);
    }

    #[test]
    fn least_label_represents_class() {
        // x1 ~ y0 ~ x0 via two gluing points
        let f = fun(&["t", "u"], &["m", "b"], &[("t", "m"), ("u", "b")]);
        let g = fun(&["t", "u"], &["z"], &[("t", "z"), ("u", "z")]);
        let po = pushout(&f, &g).unwrap();
        assert_eq!(po.apex.labels(), ["b"]);
    }

    #[test]
    fn pullback_examples() {
        let s = set(&["a", "b"]);
        let id = FinFunction::identity(&s);
        let sq = SquareFS {
            top: id.clone(),
            bottom: id.clone(),
            left: id.clone(),
            right: id.clone(),
        };
        assert!(sq.is_pullback().unwrap());

        let incl = fun(&["a"], &["a", "b"], &[("a", "a")]);
        let sq = SquareFS {
            top: incl.clone(),
            bottom: incl.clone(),
            left: FinFunction::identity(incl.dom()),
            right: FinFunction::identity(incl.cod()),
        };
        assert!(sq.is_pullback().unwrap());
    }

    #[test]
    fn unequal_fibers_are_not_pullbacks() {
        // left: {s1,s2} -> {*}, top bijection onto {x1,x2}, right = id,
        // bottom(*) = x1: fiber over * has 2 points, fiber of right over x1 has 1.
        let top = fun(&["s1", "s2"], &["x1", "x2"], &[("s1", "x1"), ("s2", "x2")]);
        let left = fun(&["s1", "s2"], &["*"], &[("s1", "*"), ("s2", "*")]);
        let right = fun(&["x1", "x2"], &["x1", "x2"], &[("x1", "x1"), ("x2", "x2")]);
        let bottom = fun(&["*"], &["x1", "x2"], &[("*", "x1")]);
        let sq = SquareFS {
            top,
            bottom,
            left,
            right,
        };
        // This square does not commute (s2 ↦ x2 vs x1), so it is rejected.
        assert_eq!(sq.is_pullback(), Err(Error::NonCommutingSquare));

        // Commuting variant: right collapses everything onto x1.
        let right = fun(&["x1", "x2"], &["x1", "x2"], &[("x1", "x1"), ("x2", "x1")]);
        let sq = SquareFS { right, ..sq };
        // Fiber over * = {s1,s2}; fiber of right over x1 = {x1,x2}: a pullback.
        assert!(sq.is_pullback().unwrap());

        // Brute-force fiber enumeration for a genuine failure: S has one point
        // while the fiber of `right` over bottom(*) has two.
        let sq = SquareFS {
            top: fun(&["s"], &["x1", "x2"], &[("s", "x1")]),
            bottom: fun(&["*"], &["y"], &[("*", "y")]),
            left: fun(&["s"], &["*"], &[("s", "*")]),
            right: fun(&["x1", "x2"], &["y"], &[("x1", "y"), ("x2", "y")]),
        };
        assert!(!sq.is_pullback().unwrap());
    }

    #[test]
    fn push_and_pull_matrices() {
        let x = set(&["a", "b", "c"]);
        assert_eq!(
            FinFunction::identity(&x).pushforward_matrix(),
            RationalMatrix::identity(3)
        );
        let f = fun(&["b1", "b2"], &["b"], &[("b1", "b"), ("b2", "b")]);
        assert_eq!(f.pushforward_matrix(), RationalMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(f.pullback_matrix(), RationalMatrix::from_i64(&[&[1], &[1]]));

        let p = fun(
            &["a", "b1", "b2", "c"],
            &["a", "b", "c"],
            &[("a", "a"), ("b1", "b"), ("b2", "b"), ("c", "c")],
        );
        assert_eq!(
            p.pushforward_matrix(),
            RationalMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 1, 0], &[0, 0, 0, 1]])
        );
        assert_eq!(p.pullback_matrix(), p.pushforward_matrix().transpose());
    }

    #[test]
    fn mediating_map_detects_non_factoring_cocone() {
        let f = fun(&["t"], &["x"], &[("t", "x")]);
        let g = fun(&["t"], &["y"], &[("t", "y")]);
        let po = pushout(&f, &g).unwrap();
        let q = set(&["1", "2"]);
        let a = FinFunction::new(set(&["x"]), q.clone(), [("x", "1")]).unwrap();
        let b = FinFunction::new(set(&["y"]), q, [("y", "2")]).unwrap();
        assert!(po.universal(&a, &b).is_err());
    }

    #[test]
    fn json_shape() {
        let f = fun(&["1"], &["a", "b"], &[("1", "a")]);
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"dom": ["1"], "cod": ["a", "b"], "map": {"1": "a"}})
        );
        let back: FinFunction = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<FinSet>(r#"["a","a"]"#).is_err());
    }
}
