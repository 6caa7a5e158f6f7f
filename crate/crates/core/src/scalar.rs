//! Floating-point scalar abstraction shared by every numeric routine.
//!
//! All graph, filter and kernel code is written against [`Scalar`], which is
//! implemented for `f32` and `f64`. The symmetric eigensolver is the only
//! routine that has to reach into a concrete linear-algebra backend, so it is
//! exposed as an associated function instead of a trait bound (mixing
//! `nalgebra::RealField` with `num_traits::Float` makes every method call
//! ambiguous).

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// floating point: f32 or f64
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Eigendecomposition of a dense symmetric matrix given in column-major
    /// order. Returns `(eigenvalues, eigenvectors)` with eigenvectors stored
    /// column-major, unsorted.
    fn symmetric_eigen(n: usize, column_major: Vec<Self>) -> (Vec<Self>, Vec<Self>);
}

macro_rules! impl_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn symmetric_eigen(n: usize, column_major: Vec<Self>) -> (Vec<Self>, Vec<Self>) {
                let m = DMatrix::<$t>::from_vec(n, n, column_major);
                let eig = m.symmetric_eigen();
                (
                    eig.eigenvalues.as_slice().to_vec(),
                    eig.eigenvectors.as_slice().to_vec(),
                )
            }
        }
    };
}

impl_scalar!(f32);
impl_scalar!(f64);

/// Converts an `f64` constant into `T`. Every `Scalar` can represent (a
/// rounding of) any finite `f64`, so this never fails for finite input.
#[inline]
pub fn cast<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("finite f64 converts to every Scalar")
}

/// Converts a count into `T`.
#[inline]
pub fn from_usize<T: Scalar>(x: usize) -> T {
    T::from_usize(x).expect("usize converts to every Scalar")
}

/// Median of a slice (mean of the two middle elements for even lengths).
/// Returns `None` for empty input. NaNs must be filtered by the caller.
pub fn median<T: Scalar>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    let cmp = |a: &T, b: &T| a.partial_cmp(b).expect("median over NaN-free values");
    let mid = v.len() / 2;
    let (lower, upper, _) = v.select_nth_unstable_by(mid, cmp);
    let upper = *upper;
    if values.len() % 2 == 1 {
        Some(upper)
    } else {
        let below = lower.iter().copied().fold(T::neg_infinity(), T::max);
        Some((below + upper) / cast(2.0))
    }
}
