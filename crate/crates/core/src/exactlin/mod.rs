//! Exact linear algebra over ℚ: rationals, dense matrices, and subspaces in
//! canonical reduced-row-echelon form.

mod matrix;
mod rational;
mod subspace;

pub use matrix::RationalMatrix;
pub use rational::Rational;
pub use subspace::{direct_sum, image, intersect, kernel, RationalSubspace};

use crate::error::Result;

/// Reduced row echelon form of `m`.
pub fn rref(m: &RationalMatrix) -> RationalMatrix {
    m.rref()
}

/// Image of `u` under `m`.
pub fn apply(m: &RationalMatrix, u: &RationalSubspace) -> Result<RationalSubspace> {
    u.apply(m)
}

/// `w ⊆ u`.
pub fn contains(u: &RationalSubspace, w: &RationalSubspace) -> Result<bool> {
    u.contains(w)
}
