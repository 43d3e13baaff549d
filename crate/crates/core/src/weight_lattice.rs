//! Exact arithmetic on the SL3 weight lattice.
//!
//! Weights are written in the fundamental-weight basis, `(a, b) = a·λ1 + b·λ2`.
//! A dominant weight has a unique base-p expansion into restricted digit
//! pairs, which by Steinberg's tensor product theorem is the same as writing
//! `L(a,b)` as a tensor product of Frobenius twists of restricted simples.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{checked_pow, Coord};

/// A prime characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p as u64))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_i64(self) -> i64 {
        self.0 as i64
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl TryFrom<u32> for Prime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An integral weight `(a, b)`.
///
/// The scalar defaults to `i64`, which is what every table and digit uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize + Clone", deserialize = "T: Deserialize<'de>"))]
#[serde(from = "(T, T)", into = "(T, T)")]
pub struct Weight<T = i64> {
    pub a: T,
    pub b: T,
}

impl<T> From<(T, T)> for Weight<T> {
    fn from((a, b): (T, T)) -> Self {
        Weight { a, b }
    }
}

impl<T> From<Weight<T>> for (T, T) {
    fn from(w: Weight<T>) -> Self {
        (w.a, w.b)
    }
}

impl<T: fmt::Display> fmt::Display for Weight<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl Weight<i64> {
    pub const ZERO: Weight = Weight { a: 0, b: 0 };

    #[inline]
    pub const fn new(a: i64, b: i64) -> Self {
        Weight { a, b }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Componentwise residue in `[0, p)`.
    #[inline]
    pub fn reduce_mod(&self, p: Prime) -> Weight {
        let p = p.as_i64();
        Weight::new(self.a.rem_euclid(p), self.b.rem_euclid(p))
    }

    pub fn is_restricted(&self, p: Prime) -> bool {
        let p = p.as_i64();
        (0..p).contains(&self.a) && (0..p).contains(&self.b)
    }

    pub fn ensure_restricted(&self, p: Prime) -> Result<()> {
        if self.is_restricted(p) {
            Ok(())
        } else {
            Err(Error::NotRestricted {
                weight: self.to_string(),
                p: p.get(),
            })
        }
    }
}

impl<T: Coord> Weight<T> {
    pub fn from_coords(a: T, b: T) -> Self {
        Weight { a, b }
    }

    pub fn is_dominant(&self) -> bool {
        !self.a.is_negative() && !self.b.is_negative()
    }

    /// Converts to the default `i64` scalar, if the coordinates fit.
    pub fn to_i64(&self) -> Option<Weight> {
        Some(Weight::new(self.a.to_i64()?, self.b.to_i64()?))
    }

    pub fn from_i64(w: Weight) -> Self {
        Weight {
            a: T::from_i64(w.a).expect("i64 fits every supported scalar"),
            b: T::from_i64(w.b).expect("i64 fits every supported scalar"),
        }
    }

    pub fn add(&self, other: &Self) -> Option<Self> {
        Some(Weight {
            a: self.a.checked_add(&other.a)?,
            b: self.b.checked_add(&other.b)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        Weight {
            a: self.a.clone() - other.a.clone(),
            b: self.b.clone() - other.b.clone(),
        }
    }

    pub fn scale(&self, k: &T) -> Option<Self> {
        Some(Weight {
            a: self.a.checked_mul(k)?,
            b: self.b.checked_mul(k)?,
        })
    }
}

/// Swaps the coordinates: `L(a,b)* = L(b,a)`.
pub fn dual<T: Clone>(w: &Weight<T>) -> Weight<T> {
    Weight {
        a: w.b.clone(),
        b: w.a.clone(),
    }
}

/// Base-p digit pairs of a dominant weight, least significant first.
///
/// The zero weight yields `[(0,0)]`; otherwise the last digit is non-zero.
pub fn padic_expand<T: Coord>(p: Prime, w: &Weight<T>) -> Result<Vec<Weight>> {
    if !w.is_dominant() {
        return Err(Error::NotDominant(w.to_string()));
    }
    let base = T::from_prime(p.get());
    let (mut a, mut b) = (w.a.clone(), w.b.clone());
    let mut digits = Vec::new();
    while !a.is_zero() || !b.is_zero() {
        let (qa, ra) = a.div_mod_floor(&base);
        let (qb, rb) = b.div_mod_floor(&base);
        digits.push(Weight::new(
            ra.to_i64().expect("digit below p"),
            rb.to_i64().expect("digit below p"),
        ));
        a = qa;
        b = qb;
    }
    if digits.is_empty() {
        digits.push(Weight::ZERO);
    }
    Ok(digits)
}

/// Rejects coordinates at or above `p^GUARD_EXPONENT` for fixed-width scalars.
pub fn check_guard<T: Coord>(p: Prime, w: &Weight<T>) -> Result<()> {
    let Some(exponent) = T::GUARD_EXPONENT else {
        return Ok(());
    };
    // A bound that does not fit the scalar is never reached.
    let Some(bound) = checked_pow(&T::from_prime(p.get()), exponent) else {
        return Ok(());
    };
    if w.a >= bound || w.b >= bound {
        return Err(Error::GuardExceeded {
            weight: w.to_string(),
            p: p.get(),
            exponent,
        });
    }
    Ok(())
}

/// Canonical Steinberg form `factors[0]^[twist] ⊗ factors[1]^[twist+1] ⊗ …`.
///
/// Every dominant weight has exactly one representation: the zero weight is
/// `{twist: 0, factors: [(0,0)]}`; otherwise `factors` starts and ends with a
/// non-zero restricted weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decomposition {
    pub p: Prime,
    pub twist: usize,
    pub factors: Vec<Weight>,
}

impl Decomposition {
    pub fn zero(p: Prime) -> Self {
        Decomposition {
            p,
            twist: 0,
            factors: vec![Weight::ZERO],
        }
    }

    /// Canonicalises a digit sequence (position = index). Digits must be restricted.
    pub fn from_digits(p: Prime, digits: &[Weight]) -> Result<Self> {
        for d in digits {
            d.ensure_restricted(p)?;
        }
        let Some(first) = digits.iter().position(|d| !d.is_zero()) else {
            return Ok(Decomposition::zero(p));
        };
        let last = digits.iter().rposition(|d| !d.is_zero()).unwrap();
        Ok(Decomposition {
            p,
            twist: first,
            factors: digits[first..=last].to_vec(),
        })
    }

    /// Canonicalises a sparse set of `(position, digit)` pairs.
    pub fn from_positions(p: Prime, digits: impl IntoIterator<Item = (usize, Weight)>) -> Result<Self> {
        let mut dense: Vec<Weight> = Vec::new();
        for (pos, d) in digits {
            if d.is_zero() {
                continue;
            }
            if dense.len() <= pos {
                dense.resize(pos + 1, Weight::ZERO);
            }
            if !dense[pos].is_zero() {
                return Err(Error::TableDefect(format!("two digits at position {pos}")));
            }
            dense[pos] = d;
        }
        Decomposition::from_digits(p, &dense)
    }

    pub fn is_zero(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].is_zero()
    }

    /// Digit at absolute position `pos` (zero outside the support).
    pub fn digit(&self, pos: usize) -> Weight {
        if pos < self.twist {
            return Weight::ZERO;
        }
        self.factors.get(pos - self.twist).copied().unwrap_or(Weight::ZERO)
    }

    /// Non-zero `(position, digit)` pairs in increasing position.
    pub fn nonzero_digits(&self) -> impl Iterator<Item = (usize, Weight)> + '_ {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(move |(i, d)| (i + self.twist, *d))
    }

    /// Highest occupied position (0 for the zero weight).
    pub fn top_position(&self) -> usize {
        self.twist + self.factors.len() - 1
    }

    /// Splits `λ = λ0 ⊗ λ'^[1]` into the restricted digit `λ0` and the
    /// canonical form of `λ'`.
    pub fn split_first(&self) -> (Weight, Decomposition) {
        let lambda0 = self.digit(0);
        if self.is_zero() {
            return (lambda0, self.clone());
        }
        let rest = if self.twist > 0 {
            Decomposition {
                p: self.p,
                twist: self.twist - 1,
                factors: self.factors.clone(),
            }
        } else {
            let tail = &self.factors[1..];
            Decomposition::from_digits(self.p, tail).expect("tail digits are restricted")
        };
        (lambda0, rest)
    }

    /// Twists by `d` more Frobenius layers.
    pub fn twisted(&self, d: usize) -> Decomposition {
        if self.is_zero() {
            return self.clone();
        }
        Decomposition {
            p: self.p,
            twist: self.twist + d,
            factors: self.factors.clone(),
        }
    }

    /// `Σ p^(twist+i) · factors[i]`.
    pub fn recompose<T: Coord>(&self) -> Result<Weight<T>> {
        let base = T::from_prime(self.p.get());
        let overflow = || Error::Overflow(self.to_string());
        let mut acc = Weight::from_coords(T::zero(), T::zero());
        let mut scale = checked_pow(&base, self.twist as u32).ok_or_else(overflow)?;
        for (i, f) in self.factors.iter().enumerate() {
            if i > 0 {
                scale = scale.checked_mul(&base).ok_or_else(overflow)?;
            }
            let term = Weight::<T>::from_i64(*f).scale(&scale).ok_or_else(overflow)?;
            acc = acc.add(&term).ok_or_else(overflow)?;
        }
        Ok(acc)
    }

    pub fn dual(&self) -> Decomposition {
        Decomposition {
            p: self.p,
            twist: self.twist,
            factors: self.factors.iter().map(dual).collect(),
        }
    }
}

impl fmt::Display for Decomposition {
    /// Tensor notation, e.g. `(2,0)*(0,1)^[1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "(0,0)");
        }
        let mut first = true;
        for (pos, d) in self.nonzero_digits() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if pos == 0 {
                write!(f, "{d}")?;
            } else {
                write!(f, "{d}^[{pos}]")?;
            }
        }
        Ok(())
    }
}

/// Canonical Steinberg decomposition of a dominant weight.
pub fn steinberg_decompose<T: Coord>(p: Prime, w: &Weight<T>) -> Result<Decomposition> {
    if !w.is_dominant() {
        return Err(Error::NotDominant(w.to_string()));
    }
    check_guard(p, w)?;
    let digits = padic_expand(p, w)?;
    Decomposition::from_digits(p, &digits)
}

/// Membership of `w` in `p·ZR`, where `ZR` is the A2 root lattice.
///
/// The root lattice is spanned by `(2,-1)` and `(-1,2)`; `(x,y)` lies in it
/// iff `x ≡ y (mod 3)`.
pub fn in_p_scaled_root_lattice<T: Coord>(p: Prime, w: &Weight<T>) -> bool {
    let base = T::from_prime(p.get());
    let (x, ra) = w.a.div_mod_floor(&base);
    let (y, rb) = w.b.div_mod_floor(&base);
    if !ra.is_zero() || !rb.is_zero() {
        return false;
    }
    let three = T::from_u8(3).unwrap();
    (x - y).mod_floor(&three).is_zero()
}
