//! Open networks as structured cospans.
//!
//! Open graphs, open Petri nets with rates and open Markov processes are
//! cospans of finite sets whose apex carries extra structure. They compose
//! by pushout and tensor by coproduct. Open Markov processes can further be
//! coarse-grained along lumpings and black-boxed into linear relations over
//! ℚ, computed exactly. The [`laws`] module checks the double-categorical
//! laws relating all of these on seeded random instances.

pub mod error;
pub mod exactlin;
pub mod finset;
pub mod formats;
pub mod laws;
pub mod linrel;
pub mod openmarkov;
pub mod opennet;

pub use error::{Error, Result};
pub use exactlin::{Rational, RationalMatrix, RationalSubspace};
pub use finset::{FinFunction, FinSet, Pushout, SquareFS};
pub use linrel::{LinearRelation, RelSquare};
