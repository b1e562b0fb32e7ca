//! Linear relations `R ⊆ ℚ^m ⊕ ℚ^n` and the squares between them.
//!
//! Coordinates of a relation's graph always list the domain block first:
//! `(v, w)` with `v ∈ ℚ^dom_dim`, `w ∈ ℚ^cod_dim`. The tensor of `R₁ : V₁ ↛ W₁`
//! and `R₂ : V₂ ↛ W₂` lives in `(v₁, v₂ | w₁, w₂)`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactlin::{intersect, Rational, RationalMatrix, RationalSubspace};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearRelation {
    dom_dim: usize,
    cod_dim: usize,
    graph: RationalSubspace,
}

impl LinearRelation {
    pub fn new(dom_dim: usize, cod_dim: usize, graph: RationalSubspace) -> Result<Self> {
        if graph.ambient_dim() != dom_dim + cod_dim {
            return Err(Error::DimensionMismatch(format!(
                "graph lives in ℚ^{} but the relation is {dom_dim} ↛ {cod_dim}",
                graph.ambient_dim()
            )));
        }
        Ok(LinearRelation {
            dom_dim,
            cod_dim,
            graph,
        })
    }

    /// `{(v, Mv)}` for a linear map `M : ℚ^cols → ℚ^rows`.
    pub fn graph_of(m: &RationalMatrix) -> Self {
        let basis = RationalMatrix::identity(m.cols()).hstack(&m.transpose()).expect("square block");
        LinearRelation {
            dom_dim: m.cols(),
            cod_dim: m.rows(),
            graph: RationalSubspace::span(&basis),
        }
    }

    /// Everything: `ℚ^m ⊕ ℚ^n`.
    pub fn full(dom_dim: usize, cod_dim: usize) -> Self {
        LinearRelation {
            dom_dim,
            cod_dim,
            graph: RationalSubspace::full(dom_dim + cod_dim),
        }
    }

    /// Only `(0, 0)`.
    pub fn zero(dom_dim: usize, cod_dim: usize) -> Self {
        LinearRelation {
            dom_dim,
            cod_dim,
            graph: RationalSubspace::zero(dom_dim + cod_dim),
        }
    }

    pub fn dom_dim(&self) -> usize {
        self.dom_dim
    }

    pub fn cod_dim(&self) -> usize {
        self.cod_dim
    }

    pub fn graph(&self) -> &RationalSubspace {
        &self.graph
    }

    pub fn relates(&self, v: &[Rational], w: &[Rational]) -> Result<bool> {
        let joined: Vec<Rational> = v.iter().chain(w).cloned().collect();
        self.graph.contains_vector(&joined)
    }

    /// `{(w, v) : (v, w) ∈ R}`.
    pub fn converse(&self) -> Self {
        let n = self.dom_dim + self.cod_dim;
        let order: Vec<usize> = (self.dom_dim..n).chain(0..self.dom_dim).collect();
        LinearRelation {
            dom_dim: self.cod_dim,
            cod_dim: self.dom_dim,
            graph: RationalSubspace::span(&self.graph.basis().select_columns(&order)),
        }
    }
}

/// `{(v, v)}` on `ℚⁿ`.
pub fn identity_relation(n: usize) -> LinearRelation {
    LinearRelation::graph_of(&RationalMatrix::identity(n))
}

/// `S ∘ R = {(v, u) : ∃w. (v, w) ∈ R ∧ (w, u) ∈ S}`, computed inside
/// `V ⊕ W ⊕ U` as `(R ⊕ U) ∩ (V ⊕ S)` projected onto `V ⊕ U`.
pub fn compose_relations(r: &LinearRelation, s: &LinearRelation) -> Result<LinearRelation> {
    if r.cod_dim != s.dom_dim {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose {} ↛ {} with {} ↛ {}",
            r.dom_dim, r.cod_dim, s.dom_dim, s.cod_dim
        )));
    }
    let (v, w, u) = (r.dom_dim, r.cod_dim, s.cod_dim);
    let total = v + w + u;

    let r_rows = r.graph.basis().hstack(&RationalMatrix::zeros(r.graph.dim(), u))?;
    let u_free = RationalMatrix::zeros(u, v + w).hstack(&RationalMatrix::identity(u))?;
    let r_lift = RationalSubspace::span(&r_rows.vstack(&u_free)?);

    let v_free = RationalMatrix::identity(v).hstack(&RationalMatrix::zeros(v, w + u))?;
    let s_rows = RationalMatrix::zeros(s.graph.dim(), v).hstack(s.graph.basis())?;
    let s_lift = RationalSubspace::span(&v_free.vstack(&s_rows)?);

    let meet = intersect(&r_lift, &s_lift)?;
    let keep: Vec<usize> = (0..v).chain(v + w..total).collect();
    let projection = RationalMatrix::identity(total).select_columns(&keep).transpose();
    LinearRelation::new(v, u, meet.apply(&projection)?)
}

/// `R ⊕ R'` in the `(v, v' | w, w')` coordinate order.
pub fn tensor_relations(r: &LinearRelation, r2: &LinearRelation) -> LinearRelation {
    let (v1, w1, v2, w2) = (r.dom_dim, r.cod_dim, r2.dom_dim, r2.cod_dim);
    let total = v1 + v2 + w1 + w2;
    let mut rows = Vec::with_capacity(r.graph.dim() + r2.graph.dim());
    for k in 0..r.graph.dim() {
        let b = r.graph.basis().row(k);
        let mut row = vec![Rational::zero(); total];
        row[..v1].clone_from_slice(&b[..v1]);
        row[v1 + v2..v1 + v2 + w1].clone_from_slice(&b[v1..]);
        rows.push(row);
    }
    for k in 0..r2.graph.dim() {
        let b = r2.graph.basis().row(k);
        let mut row = vec![Rational::zero(); total];
        row[v1..v1 + v2].clone_from_slice(&b[..v2]);
        row[v1 + v2 + w1..].clone_from_slice(&b[v2..]);
        rows.push(row);
    }
    LinearRelation {
        dom_dim: v1 + v2,
        cod_dim: w1 + w2,
        graph: RationalSubspace::span_vectors(total, rows).expect("rows have the ambient length"),
    }
}

/// A frame
///
/// ```text
///   V₁ --top--> V₂
///   f            g
///   W₁ -bottom-> W₂
/// ```
/// filled by a 2-morphism exactly when `(f ⊕ g) top ⊆ bottom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelSquare {
    pub f: RationalMatrix,
    pub g: RationalMatrix,
    pub top: LinearRelation,
    pub bottom: LinearRelation,
}

impl RelSquare {
    fn check_frame(&self) -> Result<()> {
        let ok = self.f.cols() == self.top.dom_dim
            && self.g.cols() == self.top.cod_dim
            && self.f.rows() == self.bottom.dom_dim
            && self.g.rows() == self.bottom.cod_dim;
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "frame f: {}→{}, g: {}→{} around {}↛{} over {}↛{}",
                self.f.cols(),
                self.f.rows(),
                self.g.cols(),
                self.g.rows(),
                self.top.dom_dim,
                self.top.cod_dim,
                self.bottom.dom_dim,
                self.bottom.cod_dim
            )))
        }
    }

    /// Stacks `self` above `below`.
    pub fn vertical_paste(&self, below: &RelSquare) -> Result<RelSquare> {
        if self.bottom != below.top {
            return Err(Error::Mismatch("bottom of the upper square is not the top of the lower".into()));
        }
        Ok(RelSquare {
            f: below.f.try_mul(&self.f)?,
            g: below.g.try_mul(&self.g)?,
            top: self.top.clone(),
            bottom: below.bottom.clone(),
        })
    }

    /// Places `right` beside `self`; they must share the middle vertical map.
    pub fn horizontal_paste(&self, right: &RelSquare) -> Result<RelSquare> {
        if self.g != right.f {
            return Err(Error::Mismatch("squares do not share their middle vertical map".into()));
        }
        Ok(RelSquare {
            f: self.f.clone(),
            g: right.g.clone(),
            top: compose_relations(&self.top, &right.top)?,
            bottom: compose_relations(&self.bottom, &right.bottom)?,
        })
    }
}

/// Whether the frame admits its (unique) filler.
pub fn is_rel_2morphism(sq: &RelSquare) -> Result<bool> {
    sq.check_frame()?;
    let pushed = sq.top.graph.apply(&sq.f.direct_sum(&sq.g))?;
    sq.bottom.graph.contains(&pushed)
}

#[derive(Serialize, Deserialize)]
struct RelationRepr {
    dom_dim: usize,
    cod_dim: usize,
    basis: Vec<Vec<Rational>>,
}

impl Serialize for LinearRelation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RelationRepr {
            dom_dim: self.dom_dim,
            cod_dim: self.cod_dim,
            basis: self.graph.basis().to_rows(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearRelation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = RelationRepr::deserialize(deserializer)?;
        let graph = RationalSubspace::span_vectors(repr.dom_dim + repr.cod_dim, repr.basis)
            .map_err(D::Error::custom)?;
        LinearRelation::new(repr.dom_dim, repr.cod_dim, graph).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn identity_examples() {
        let id0 = identity_relation(0);
        assert_eq!(id0.graph(), &RationalSubspace::zero(0));
        assert_eq!(
            identity_relation(1).graph(),
            &RationalSubspace::span_vectors(2, vec![q(&[1, 1])]).unwrap()
        );
        assert_eq!(
            identity_relation(2).graph().basis(),
            &RationalMatrix::from_i64(&[&[1, 0, 1, 0], &[0, 1, 0, 1]])
        );
    }

    #[test]
    fn units_are_strict() {
        let r = LinearRelation::new(
            2,
            1,
            RationalSubspace::span_vectors(3, vec![q(&[1, 2, 3]), q(&[0, 1, 1])]).unwrap(),
        )
        .unwrap();
        assert_eq!(compose_relations(&identity_relation(2), &r).unwrap(), r);
        assert_eq!(compose_relations(&r, &identity_relation(1)).unwrap(), r);
    }

    #[test]
    fn full_then_zero_forces_zero_output() {
        let full = LinearRelation::full(2, 3);
        let zero_out = LinearRelation::new(3, 2, {
            // {(w, 0)}: every w relates only to 0
            let rows = RationalMatrix::identity(3).hstack(&RationalMatrix::zeros(3, 2)).unwrap();
            RationalSubspace::span(&rows)
        })
        .unwrap();
        let c = compose_relations(&full, &zero_out).unwrap();
        let expect = RationalSubspace::span(
            &RationalMatrix::identity(2).hstack(&RationalMatrix::zeros(2, 2)).unwrap(),
        );
        assert_eq!(c.graph(), &expect);
    }

    #[test]
    fn mismatched_composition_rejected() {
        assert!(compose_relations(&identity_relation(2), &identity_relation(3)).is_err());
    }

    #[test]
    fn tensor_examples() {
        let r = LinearRelation::graph_of(&RationalMatrix::from_i64(&[&[1, 2]]));
        assert_eq!(tensor_relations(&r, &identity_relation(0)), r);
        assert_eq!(tensor_relations(&identity_relation(0), &r), r);
        assert_eq!(
            tensor_relations(&identity_relation(2), &identity_relation(3)),
            identity_relation(5)
        );
        let t = tensor_relations(&r, &identity_relation(2));
        assert_eq!(t.graph().dim(), r.graph().dim() + 2);
        // (v1, v2 | w1, w2) ordering
        assert!(t
            .relates(&q(&[1, 1, 7, 8]), &q(&[3, 7, 8]))
            .unwrap());
    }

    #[test]
    fn two_morphism_examples() {
        let r = LinearRelation::graph_of(&RationalMatrix::from_i64(&[&[2, 0], &[1, 1]]));
        let id = RationalMatrix::identity(2);
        let sq = RelSquare {
            f: id.clone(),
            g: id.clone(),
            top: r.clone(),
            bottom: r.clone(),
        };
        assert!(is_rel_2morphism(&sq).unwrap());

        let sq = RelSquare {
            f: RationalMatrix::zeros(1, 2),
            g: RationalMatrix::zeros(1, 2),
            top: r.clone(),
            bottom: LinearRelation::zero(1, 1),
        };
        assert!(is_rel_2morphism(&sq).unwrap());

        let sq = RelSquare {
            f: id.clone(),
            g: id,
            top: LinearRelation::full(2, 2),
            bottom: r,
        };
        assert!(!is_rel_2morphism(&sq).unwrap());
    }

    #[test]
    fn converse_swaps_blocks() {
        let r = LinearRelation::graph_of(&RationalMatrix::from_i64(&[&[3]]));
        let c = r.converse();
        assert!(c.relates(&q(&[3]), &q(&[1])).unwrap());
        assert_eq!(c.converse(), r);
    }

    #[test]
    fn json_shape() {
        let r = identity_relation(1);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v, serde_json::json!({"dom_dim": 1, "cod_dim": 1, "basis": [["1", "1"]]}));
        assert_eq!(serde_json::from_value::<LinearRelation>(v).unwrap(), r);
    }
}
