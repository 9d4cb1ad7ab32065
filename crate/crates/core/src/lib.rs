//! Evaluation of noncommutative rational functions on matrix tuples via
//! linear (pencil) representations, exact eigenvalue certificates, and
//! constructive matrix Waring decompositions: differences, linear
//! combinations, quotients and products of values of a fixed expression.

pub mod scalarkit;
pub mod matrixkit;
pub mod ncexpr;
pub mod realization;
pub mod witness;
pub mod waring;
pub mod jobio;

pub use matrixkit::{Matrix, MatrixTuple};
pub use ncexpr::RatExpr;
pub use scalarkit::{Cx, Field, Rat};
