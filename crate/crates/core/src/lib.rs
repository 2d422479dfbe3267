//! Exact verification toolkit for the polytopes `Φ(n,n)` and `Ψ(n,n)` inside
//! the doubly stochastic matrices of size `n² × n²`.
//!
//! `Ψ(n,n)` is the convex hull of the Kronecker products `A ⊗ B` of doubly
//! stochastic matrices; `Φ(n,n)` is cut out by a polynomial family of balance
//! equations and contains `Ψ(n,n)`. For every `n ≥ 4` the circulant
//! construction in [`counterexample`] yields matrices `T(n, σ)` that are
//! vertices of `Φ(n,n)` but lie outside `Ψ(n,n)`. Every check here runs in
//! exact rational arithmetic.
//!
//! The numeric core is generic over the scalar (any [`Scalar`], and any
//! [`ExactField`] where pivots must be decided exactly). The aliases below fix
//! the scalar to arbitrary-precision rationals, which is what the
//! verification pipeline uses.

pub mod counterexample;
pub mod error;
pub mod exactmath;
pub mod permutations;
pub mod polytopes;
pub mod symbolic;

pub use error::{Error, Result};
pub use exactmath::{ExactField, Matrix, Scalar, SparseMatrix};
pub use permutations::Permutation;
pub use symbolic::VarMatrix;

/// Arbitrary-precision rational scalar.
pub type Rational = num_rational::BigRational;
/// Dense matrix of arbitrary-precision rationals.
pub type RatMatrix = Matrix<Rational>;
/// LP feasibility verdict over arbitrary-precision rationals.
pub type Feasibility = exactmath::lp::Feasibility<Rational>;
/// Equality system `C·x = d, x ≥ 0` over arbitrary-precision rationals.
pub type ConstraintSystem = polytopes::ConstraintSystem<Rational>;
/// Ψ-membership verdict over arbitrary-precision rationals.
pub type MembershipResult = polytopes::MembershipResult<Rational>;
