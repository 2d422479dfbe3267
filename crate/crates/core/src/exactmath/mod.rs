//! Exact scalar and matrix arithmetic, fraction-free rank, and an exact LP
//! feasibility solver that returns checkable certificates.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, NumRef, Signed, ToPrimitive};

pub mod lp;
mod matrix;
pub(crate) mod modular;
pub mod rank;
mod sparse;
pub mod text;

pub use lp::{check_farkas, lp_feasible, lp_feasible_sparse, Feasibility};
pub use matrix::Matrix;
pub use rank::{columns_independent, rat_rank};
pub use sparse::SparseMatrix;

/// Ring-like scalar usable for matrix storage and products.
pub trait Scalar: Clone + PartialOrd + Num + NumRef + Signed + Debug + Display {}

impl<T> Scalar for T where T: Clone + PartialOrd + Num + NumRef + Signed + Debug + Display {}

/// A scalar whose field operations are exact, so zero tests and sign tests
/// are decisions rather than approximations. Pivoting code requires it.
pub trait ExactField: Scalar {
    /// Integer ring whose fractions make up the field.
    type Int: ExactInteger;

    /// `(numerator, denominator)` in lowest terms with a positive denominator.
    fn to_parts(&self) -> (Self::Int, Self::Int);

    /// `num / den`; `den` must be nonzero.
    fn from_parts(num: Self::Int, den: Self::Int) -> Self;

    /// The image of `self` in the integers modulo the prime `p`, or `None`
    /// when the denominator vanishes there.
    fn residue(&self, p: u64) -> Option<u64>;
}

impl<I> ExactField for Ratio<I>
where
    I: ExactInteger + FromPrimitive + ToPrimitive,
{
    type Int = I;

    fn to_parts(&self) -> (I, I) {
        (self.numer().clone(), self.denom().clone())
    }

    fn from_parts(num: I, den: I) -> Self {
        Ratio::new(num, den)
    }

    fn residue(&self, p: u64) -> Option<u64> {
        let modulus = I::from_u64(p)?;
        let num = self.numer().mod_floor(&modulus).to_u64()?;
        let den = self.denom().mod_floor(&modulus).to_u64()?;
        let inv = modular::inverse(den, p)?;
        Some(modular::mul(num, inv, p))
    }
}

/// Integer type backing a rational scalar, usable for fraction-free elimination.
pub trait ExactInteger: Integer + NumRef + Clone + Signed + Debug + Display {}

impl<I> ExactInteger for I where I: Integer + NumRef + Clone + Signed + Debug + Display {}

/// `value` as a scalar, built by repeated addition so no conversion trait is needed.
pub fn from_count<T: Scalar>(value: usize) -> T {
    let mut acc = T::zero();
    for _ in 0..value {
        acc = acc + T::one();
    }
    acc
}
