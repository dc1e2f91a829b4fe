//! Scalar abstraction for the integer-vector parts of the library.
//!
//! Semilinear sets and matrices are generic over [`Scalar`] so the same code
//! runs on `i64` (fast, desk scale) and `BigInt` (exact at any scale). The
//! crate-root aliases fix `BigInt` as the default.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::Signed;

pub trait Scalar: Integer + Signed + Clone + Hash + Debug + Display + From<i32> {}

impl<T> Scalar for T where T: Integer + Signed + Clone + Hash + Debug + Display + From<i32> {}

/// Widening conversion for counts (word lengths, occurrence counts).
pub fn from_count<T: Scalar>(n: u64) -> T {
    T::from(i32::try_from(n).expect("count exceeds scalar conversion range"))
}
