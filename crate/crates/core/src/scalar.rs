//! Integer scalar abstraction for weight coordinates.
//!
//! Weights are exact integer pairs. The lattice routines are written once
//! against [`Coord`] and work for fixed-width machine integers as well as
//! arbitrary precision integers. Fixed-width types carry a guard exponent:
//! coordinates at or above `p^GUARD_EXPONENT` are rejected before any
//! arithmetic that could overflow.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, Signed, ToPrimitive};

pub trait Coord:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + CheckedAdd
    + CheckedMul
    + Send
    + Sync
    + 'static
{
    /// `Some(e)` rejects coordinates `>= p^e`; `None` means unbounded.
    const GUARD_EXPONENT: Option<u32>;

    fn from_prime(p: u32) -> Self {
        Self::from_u32(p).expect("every supported scalar holds a u32 prime")
    }
}

macro_rules! fixed_width_coord {
    ($($t:ty),*) => {
        $(impl Coord for $t {
            const GUARD_EXPONENT: Option<u32> = Some(12);
        })*
    };
}

fixed_width_coord!(i64, i128);

impl Coord for BigInt {
    const GUARD_EXPONENT: Option<u32> = None;
}

/// `base^exp` or `None` on overflow.
pub(crate) fn checked_pow<T: Coord>(base: &T, exp: u32) -> Option<T> {
    let mut acc = T::one();
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}
