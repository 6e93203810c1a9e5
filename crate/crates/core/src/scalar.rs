//! Coefficient scalars and the sign grading.
//!
//! All series arithmetic in this crate is generic over a [`Scalar`], an exact
//! field of characteristic zero. The shipped instantiation is
//! [`num_rational::BigRational`] (see the [`Rat`] alias at the crate root);
//! nothing in the core algorithms assumes more than the trait below.

use std::fmt;
use std::ops::{Add, AddAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact field scalar. `is_integer` exists so transforms can run their
/// integrality diagnostics without committing the whole crate to one
/// representation.
pub trait Scalar:
    Signed
    + FromPrimitive
    + ToPrimitive
    + Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    fn is_integer(&self) -> bool;

    /// Exact `p/q` with `q > 0`.
    fn from_ratio(p: i64, q: u64) -> Self {
        Self::from_i64(p).unwrap() / Self::from_u64(q).unwrap()
    }
}

impl Scalar for BigRational {
    fn is_integer(&self) -> bool {
        BigRational::is_integer(self)
    }

    fn from_ratio(p: i64, q: u64) -> Self {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }
}

/// The Z/2 sign grading. Products add parities; Koszul signs are
/// `(-1)^{|a||b|}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub enum Parity {
    #[default]
    Even,
    Odd,
}

impl Parity {
    pub fn from_u32(v: u32) -> Self {
        if v % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn as_u32(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// The Koszul sign `(-1)^{|a||b|}` as `+1`/`-1`.
    pub fn koszul_sign(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl AddAssign for Parity {
    fn add_assign(&mut self, rhs: Parity) {
        *self = *self + rhs;
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u32())
    }
}

/// `(-1)^k` lifted into the scalar.
pub fn sign_pow<T: Scalar>(k: u32) -> T {
    if k % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Binomial coefficient `C(alpha, k)` for a scalar `alpha`, by the falling
/// factorial. Exact for any field scalar.
pub fn binomial<T: Scalar>(alpha: &T, k: u32) -> T {
    let mut num = T::one();
    let mut den = T::one();
    for i in 0..k {
        num = num * (alpha.clone() - T::from_u32(i).unwrap());
        den = den * T::from_u32(i + 1).unwrap();
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[test]
    fn parity_arithmetic() {
        assert_eq!(Parity::Odd + Parity::Odd, Parity::Even);
        assert_eq!(Parity::Odd + Parity::Even, Parity::Odd);
        assert_eq!(Parity::Odd.koszul_sign(Parity::Odd), -1);
        assert_eq!(Parity::Odd.koszul_sign(Parity::Even), 1);
    }

    #[test]
    fn binomial_integer_and_rational() {
        let five = BigRational::from_i64(5).unwrap();
        assert_eq!(binomial(&five, 2), BigRational::from_i64(10).unwrap());
        // C(1/2, 2) = (1/2)(-1/2)/2 = -1/8
        let half = BigRational::from_ratio(1, 2);
        assert_eq!(binomial(&half, 2), BigRational::from_ratio(-1, 8));
    }
}
