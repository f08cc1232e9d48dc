//! Exact combinatorics for sparse graph sequences: homomorphism counting,
//! chromatic polynomials, tensor powers of complete graphs, high-precision
//! evaluation of normalized density limits, and step-kernel cut-norm checks.
//!
//! All counting and density arithmetic is exact (big integers and rationals);
//! logarithms and the limit tables use an arbitrary-precision binary float
//! with a tracked error contract. No `f64` enters any reported value.

pub mod bigfloat;
pub mod chromatic;
pub mod graph;
pub mod hom;
pub mod kernels;
pub mod limits;
pub mod products;
mod treedec;

pub use bigfloat::BigFloat;
pub use graph::Graph;
pub use hom::{Budget, ExactRational};
pub use kernels::{SignedStepKernel, StepKernel};
pub use products::TensorPowerSpec;

/// Arbitrary-precision nonnegative integer used for all homomorphism counts.
pub type BigCount = num_bigint::BigUint;
