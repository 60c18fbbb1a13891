//! Scalar traits used by operator assembly and exact elimination.
//!
//! Operator assembly ([`crate::supercharge`], [`crate::hamiltonian`]) is written
//! against [`Scalar`], which any `num_traits::Num` type with negation satisfies
//! (`f32`, `f64`, [`Rational`](crate::Rational), [`Zp`]). Rank, kernel and
//! subquotient computations need exact division and are written against
//! [`ExactField`], implemented for the big rationals and for the prime fields
//! [`Zp`].

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

/// Ring element usable as a matrix entry.
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + Debug + Send + Sync + FromPrimitive + 'static
{
    /// Lossy conversion used by the floating-point cross-checks.
    fn to_f64_lossy(&self) -> f64;
}

impl Scalar for f64 {
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }
}

impl Scalar for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or_else(|| {
            // numerator/denominator too large for a direct conversion
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }
}

/// A field with exact arithmetic: stored entries are either exactly zero or
/// invertible, so elimination never needs a tolerance.
pub trait ExactField: Scalar + PartialEq {
    /// Multiplicative inverse. Panics on zero.
    fn inverse(&self) -> Self;

    /// `self - factor * other`, the elimination update.
    fn sub_mul(&self, factor: &Self, other: &Self) -> Self;

    /// `self * other` without consuming either operand.
    fn mul_ref(&self, other: &Self) -> Self;
}

impl ExactField for BigRational {
    fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        self.recip()
    }

    fn sub_mul(&self, factor: &Self, other: &Self) -> Self {
        self - factor * other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

/// Integer `v` as a rational.
pub fn rational(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `n/d` as a rational. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Element of the prime field `Z/PZ` with `2^30 < P < 2^32`, so products of two
/// reduced residues fit in a `u64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Zp<const P: u64>(u64);

impl<const P: u64> Zp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(v: i64) -> Self {
        Zp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Zp(acc)
    }

    /// Reduction of a rational; `None` when the denominator vanishes mod `P`.
    pub fn from_rational(q: &BigRational) -> Option<Self> {
        let p = BigInt::from(P);
        let n = q.numer().mod_floor(&p).to_u64()?;
        let d = q.denom().mod_floor(&p).to_u64()?;
        if d == 0 {
            return None;
        }
        Some(Zp(n) * Zp(d).inverse())
    }
}

impl<const P: u64> Debug for Zp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> Display for Zp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Zp<P> {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        let s = self.0 + o.0;
        Zp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Zp<P> {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        Zp(if self.0 >= o.0 {
            self.0 - o.0
        } else {
            self.0 + P - o.0
        })
    }
}

impl<const P: u64> Mul for Zp<P> {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        Zp(self.0 * o.0 % P)
    }
}

impl<const P: u64> Div for Zp<P> {
    type Output = Self;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.inverse()
    }
}

impl<const P: u64> Rem for Zp<P> {
    type Output = Self;

    // every nonzero element is a unit
    fn rem(self, _o: Self) -> Self {
        Zp(0)
    }
}

impl<const P: u64> Neg for Zp<P> {
    type Output = Self;

    fn neg(self) -> Self {
        Zp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Zero for Zp<P> {
    fn zero() -> Self {
        Zp(0)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Zp<P> {
    fn one() -> Self {
        Zp(1)
    }
}

impl<const P: u64> Num for Zp<P> {
    type FromStrRadixErr = std::num::ParseIntError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        i64::from_str_radix(s, radix).map(Zp::new)
    }
}

impl<const P: u64> FromPrimitive for Zp<P> {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Zp::new(n))
    }

    fn from_u64(n: u64) -> Option<Self> {
        Some(Zp(n % P))
    }
}

impl<const P: u64> Scalar for Zp<P> {
    fn to_f64_lossy(&self) -> f64 {
        self.0 as f64
    }
}

impl<const P: u64> ExactField for Zp<P> {
    fn inverse(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(P - 2)
    }

    fn sub_mul(&self, factor: &Self, other: &Self) -> Self {
        *self - *factor * *other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        *self * *other
    }
}

/// Primes in `(2^30, 2^31)` available to the modular rank path.
pub const MODULAR_PRIMES: [u64; 8] = [
    1_073_741_827,
    1_073_741_831,
    1_073_741_833,
    1_073_741_839,
    1_073_741_843,
    1_073_741_857,
    1_073_741_891,
    1_073_741_909,
];
