//! Exact symbolic engine for q-deformed exterior calculus.
//!
//! The crate builds the curvature tower of a matrix-valued connection in a
//! free graded algebra whose differential obeys the graded q-Leibniz rule,
//! checks the identities that tower satisfies at roots of unity, computes
//! q-symmetrised tensor components, and evaluates the deformed propagator
//! numerically.

pub mod coeff;
pub mod curvature;
pub mod dga;
mod error;
pub mod perm;
pub mod propagator;
pub mod report;
pub mod sample;
pub mod symmetrize;

pub use coeff::{qbinom, qfact, qint, Coefficient, Monomial, Order, RingMode};
pub use dga::{Base, FormExpr, Gen, MatrixForm, Nilpotency};
pub use error::Error;
pub use perm::{generate_sm, Permutation, QFactorTable};
pub use report::{CheckReport, Modes};

