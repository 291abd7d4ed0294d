// negated comparisons are deliberate: NaN parameters must fall into the
// error branches
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical workbench for trigonometric sums and Bessel-function double
//! series: exact finite-sum evaluators, truncated series with convergence
//! diagnostics, a symbolic engine for balanced mixed derivatives, Dirichlet
//! character decompositions, and growth probes for divisor-type error terms.

pub mod balanced;
pub mod series;
pub mod characters;
pub mod experiments;
pub mod specfun;
pub mod sums;

pub use specfun::{BesselOrder, EvalReport, Method};
