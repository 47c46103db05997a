//! The free graded q-differential algebra over the scalar ring.

mod expr;
mod gen;
mod matrix;

pub use expr::{word_grade, FormExpr, Nilpotency, Word};
pub use gen::{Base, Gen, GenClass};
pub use matrix::{cyclic_canonical, MatrixForm};
