//! Ordered-field scalars used for exact transport.
//!
//! Two concrete types implement [`Scalar`]:
//!
//! * [`Rational`], an arbitrary-precision reduced fraction;
//! * [`Infinitesimal`], a first-order element `a + b·ε` where `ε > 0` is
//!   smaller than every positive rational. Products truncate `ε²` to zero,
//!   and ordering is lexicographic on `(a, b)`.
//!
//! Evaluating a parametric transport problem at `α = 1 − ε` yields the value
//! on the final linear segment as `α → 1` in a single solve.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseScalarError;

/// Exact rational number.
pub type Rational = BigRational;

/// Builds a rational from a small numerator and denominator.
///
/// Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integral rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or `"p"` into a rational. Decimal notation is rejected.
pub fn parse_rational(text: &str) -> Result<Rational, ParseScalarError> {
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| ParseScalarError(text.to_string()))?;
    let den = BigInt::from_str(den).map_err(|_| ParseScalarError(text.to_string()))?;
    if den.is_zero() {
        return Err(ParseScalarError(text.to_string()));
    }
    Ok(Rational::new(num, den))
}

/// Element of an ordered field (or of the first-order infinitesimal ring)
/// supporting exactly the operations the transport and curvature code needs.
///
/// Division is only ever by positive integers, which is well defined for
/// both implementations.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + Ord
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + 'static
{
    fn zero() -> Self;

    fn one() -> Self;

    fn from_rational(value: Rational) -> Self;

    fn is_zero(&self) -> bool;

    /// Multiplies by a rational constant.
    fn scale(&self, factor: &Rational) -> Self;

    /// Real part and infinitesimal coefficient. Rationals report a zero
    /// coefficient.
    fn parts(&self) -> [Rational; 2];

    /// Inverse of [`Scalar::parts`]. Returns `None` when a rational is asked
    /// to carry a nonzero infinitesimal coefficient.
    fn from_parts(parts: [Rational; 2]) -> Option<Self>;

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn div_int(&self, divisor: u64) -> Self {
        self.scale(&Rational::new(BigInt::one(), BigInt::from(divisor)))
    }

    fn mul_int(&self, factor: i64) -> Self {
        self.scale(&int(factor))
    }

    fn min_of(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }

    fn one() -> Self {
        <Rational as One>::one()
    }

    fn from_rational(value: Rational) -> Self {
        value
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn scale(&self, factor: &Rational) -> Self {
        self * factor
    }

    fn parts(&self) -> [Rational; 2] {
        [self.clone(), <Rational as Zero>::zero()]
    }

    fn from_parts(parts: [Rational; 2]) -> Option<Self> {
        let [real, eps] = parts;
        Zero::is_zero(&eps).then_some(real)
    }
}

/// First-order infinitesimal number `real + eps·ε`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Infinitesimal {
    pub real: Rational,
    pub eps: Rational,
}

impl Infinitesimal {
    pub fn new(real: Rational, eps: Rational) -> Self {
        Self { real, eps }
    }

    /// The point `1 − ε`, i.e. the idleness parameter just below one.
    pub fn one_minus_epsilon() -> Self {
        Self::new(int(1), int(-1))
    }

    pub fn epsilon() -> Self {
        Self::new(int(0), int(1))
    }
}

impl From<Rational> for Infinitesimal {
    fn from(real: Rational) -> Self {
        Self::new(real, <Rational as Zero>::zero())
    }
}

impl Add for Infinitesimal {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.real + rhs.real, self.eps + rhs.eps)
    }
}

impl<'a> Add<&'a Infinitesimal> for Infinitesimal {
    type Output = Self;
    fn add(self, rhs: &'a Infinitesimal) -> Self {
        Self::new(self.real + &rhs.real, self.eps + &rhs.eps)
    }
}

impl Sub for Infinitesimal {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.real - rhs.real, self.eps - rhs.eps)
    }
}

impl<'a> Sub<&'a Infinitesimal> for Infinitesimal {
    type Output = Self;
    fn sub(self, rhs: &'a Infinitesimal) -> Self {
        Self::new(self.real - &rhs.real, self.eps - &rhs.eps)
    }
}

impl Neg for Infinitesimal {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.real, -self.eps)
    }
}

impl Mul for Infinitesimal {
    type Output = Self;
    // ε² = 0
    fn mul(self, rhs: Self) -> Self {
        let eps = &self.real * &rhs.eps + &self.eps * &rhs.real;
        Self::new(self.real * rhs.real, eps)
    }
}

impl Scalar for Infinitesimal {
    fn zero() -> Self {
        Self::new(Zero::zero(), Zero::zero())
    }

    fn one() -> Self {
        Self::new(One::one(), Zero::zero())
    }

    fn from_rational(value: Rational) -> Self {
        value.into()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.real) && Zero::is_zero(&self.eps)
    }

    fn scale(&self, factor: &Rational) -> Self {
        Self::new(&self.real * factor, &self.eps * factor)
    }

    fn parts(&self) -> [Rational; 2] {
        [self.real.clone(), self.eps.clone()]
    }

    fn from_parts(parts: [Rational; 2]) -> Option<Self> {
        let [real, eps] = parts;
        Some(Self::new(real, eps))
    }
}

impl fmt::Display for Infinitesimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.eps) {
            return write!(f, "{}", self.real);
        }
        let sign = if Signed::is_negative(&self.eps) { '-' } else { '+' };
        write!(f, "{} {} {} e", self.real, sign, self.eps.abs())
    }
}

impl FromStr for Infinitesimal {
    type Err = ParseScalarError;

    /// Accepts the [`fmt::Display`] form: `"a"`, `"a + b e"` or `"a - b e"`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(text.to_string());
        let trimmed = text.trim();
        let Some(body) = trimmed.strip_suffix('e') else {
            return parse_rational(trimmed).map(Self::from);
        };
        let body = body.trim_end();
        let (split, sign) = [" + ", " - "]
            .iter()
            .filter_map(|sep| body.rfind(sep).map(|at| (at, *sep)))
            .max_by_key(|(at, _)| *at)
            .ok_or_else(err)?;
        let real = parse_rational(&body[..split])?;
        let mut eps = parse_rational(&body[split + sign.len()..])?;
        if sign == " - " {
            eps = -eps;
        }
        Ok(Self::new(real, eps))
    }
}
