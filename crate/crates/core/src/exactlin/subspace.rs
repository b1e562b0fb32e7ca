use serde::{Deserialize, Serialize};

use super::{Rational, RationalMatrix};
use crate::error::{Error, Result};

/// A subspace of `ℚⁿ`, stored as the unique RREF basis of its row space.
/// Two subspaces are equal exactly when their bases are equal entrywise.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalSubspace {
    ambient_dim: usize,
    basis: RationalMatrix,
}

impl RationalSubspace {
    /// Span of the rows of `rows` (any spanning set, dependent rows allowed).
    pub fn span(rows: &RationalMatrix) -> Self {
        let (r, pivots) = rows.rref_with_pivots();
        RationalSubspace {
            ambient_dim: rows.cols(),
            basis: r.truncate_rows(pivots.len()),
        }
    }

    pub fn span_vectors(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        Ok(Self::span(&RationalMatrix::from_rows(vectors, ambient_dim)?))
    }

    pub fn zero(ambient_dim: usize) -> Self {
        RationalSubspace {
            ambient_dim,
            basis: RationalMatrix::zeros(0, ambient_dim),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        RationalSubspace {
            ambient_dim,
            basis: RationalMatrix::identity(ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.basis.rows())
            .map(|r| {
                (0..self.ambient_dim)
                    .find(|&c| !self.basis.get(r, c).is_zero())
                    .expect("basis rows are nonzero")
            })
            .collect()
    }

    /// Reduces `v` against the RREF basis; zero remainder means membership.
    pub fn contains_vector(&self, v: &[Rational]) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient_dim
            )));
        }
        let mut rem = v.to_vec();
        for (r, p) in self.pivots().into_iter().enumerate() {
            if rem[p].is_zero() {
                continue;
            }
            let factor = rem[p].clone();
            for (c, x) in rem.iter_mut().enumerate() {
                let b = self.basis.get(r, c);
                if !b.is_zero() {
                    *x -= &(&factor * b);
                }
            }
        }
        Ok(rem.iter().all(Rational::is_zero))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &RationalSubspace) -> Result<bool> {
        self.check_ambient(other)?;
        for r in 0..other.dim() {
            if !self.contains_vector(other.basis.row(r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `self + other`.
    pub fn sum(&self, other: &RationalSubspace) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::span(&self.basis.vstack(&other.basis)?))
    }

    pub fn intersect(&self, other: &RationalSubspace) -> Result<Self> {
        intersect(self, other)
    }

    /// Image under the linear map `m`.
    pub fn apply(&self, m: &RationalMatrix) -> Result<Self> {
        if m.cols() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "map with {} columns applied to a subspace of ℚ^{}",
                m.cols(),
                self.ambient_dim
            )));
        }
        // rows of B·Mᵀ are the images of the basis vectors
        Ok(Self::span(&(&self.basis * &m.transpose())))
    }

    fn check_ambient(&self, other: &RationalSubspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }
}

/// `{v : Mv = 0}`.
pub fn kernel(m: &RationalMatrix) -> RationalSubspace {
    let (r, pivots) = m.rref_with_pivots();
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let vectors: Vec<Vec<Rational>> = (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free);
            }
            v
        })
        .collect();
    RationalSubspace::span(&RationalMatrix::from_rows(vectors, n).expect("vectors have length n"))
}

/// Column space of `m`.
pub fn image(m: &RationalMatrix) -> RationalSubspace {
    RationalSubspace::span(&m.transpose())
}

/// `U ∩ W`, via the kernel of `[B_Uᵀ | −B_Wᵀ]`: a kernel vector `(a, b)`
/// gives the common element `aᵀB_U = bᵀB_W`.
pub fn intersect(u: &RationalSubspace, w: &RationalSubspace) -> Result<RationalSubspace> {
    u.check_ambient(w)?;
    let stacked = u.basis.transpose().hstack(&(-&w.basis.transpose()))?;
    let k = kernel(&stacked);
    let coeffs = k.basis.select_columns(&(0..u.dim()).collect::<Vec<_>>());
    Ok(RationalSubspace::span(&(&coeffs * &u.basis)))
}

/// `U ⊕ W ⊆ ℚ^{m+n}` as a block subspace.
pub fn direct_sum(u: &RationalSubspace, w: &RationalSubspace) -> RationalSubspace {
    let left = u.basis.hstack(&RationalMatrix::zeros(u.dim(), w.ambient_dim)).expect("rows agree");
    let right = RationalMatrix::zeros(w.dim(), u.ambient_dim).hstack(&w.basis).expect("rows agree");
    RationalSubspace::span(&left.vstack(&right).expect("columns agree"))
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
}

impl Serialize for RationalSubspace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceRepr {
            ambient_dim: self.ambient_dim,
            basis: self.basis.to_rows(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalSubspace {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SubspaceRepr::deserialize(deserializer)?;
        RationalSubspace::span_vectors(repr.ambient_dim, repr.basis).map_err(D::Error::custom)
    }
}
