use num_traits::{FromPrimitive, PrimInt, Signed, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};
use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::iter::Sum;
use std::str::FromStr;

/// Signed integer type used for processing times, weights, due dates and
/// objective values.
///
/// Everything in the crate is generic over this trait. The crate root
/// fixes it to [`i64`](crate::Cost) for the convenience aliases; `i32`
/// works for benchmark-sized data and `i128` for very large generated
/// instances. Instance construction rejects data whose worst-case
/// objective would not fit the chosen type.
pub trait Scalar:
    PrimInt
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Hash
    + Debug
    + Display
    + FromStr
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion used for statistics (means, percentages).
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_checked(value: usize) -> Option<Self> {
        <Self as FromPrimitive>::from_usize(value)
    }
}

impl<T> Scalar for T where
    T: PrimInt
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Sum
        + Hash
        + Debug
        + Display
        + FromStr
        + Serialize
        + DeserializeOwned
        + Send
        + Sync
        + 'static
{
}

/// `weight * max(completion - due, 0)`.
#[inline(always)]
pub(crate) fn weighted_tardiness<T: Scalar>(weight: T, completion: T, due: T) -> T {
    let late = completion - due;
    if late > T::zero() {
        weight * late
    } else {
        T::zero()
    }
}
