//! Coefficient fields.
//!
//! Everything in this crate is generic over a [`Scalar`]: the exact
//! [`BigRational`](num_rational::BigRational) field is what the algebra is
//! verified with, while `f64` is used for numeric sup estimates.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num, ToPrimitive};

/// A commutative field of coefficients.
///
/// Zero tests (`is_zero`) are exact; for floating point types this means
/// only literal zeros are dropped from sparse representations.
pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Num + Neg<Output = Self> + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable in every scalar field")
    }

    fn from_i64_exact(n: i64) -> Self {
        Self::from_i64(n).expect("i64 is representable in every scalar field")
    }
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + PartialEq
        + PartialOrd
        + Num
        + Neg<Output = T>
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// `n choose k` as a scalar.
pub(crate) fn binomial<C: Scalar>(n: u32, k: u32) -> C {
    if k > n {
        return C::zero();
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    C::from_u128(acc).expect("binomial coefficient fits the scalar field")
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub(crate) fn falling_factorial<C: Scalar>(n: u32, k: u32) -> C {
    let mut acc = C::one();
    for i in 0..k {
        acc = acc * C::from_u32(n - i).expect("small integer");
    }
    acc
}
