//! Exact rational arithmetic, integer combinatorics and closed rational
//! intervals.
//!
//! Every number in the crate is an [`ExactRational`]: a `BigRational` that is
//! kept normalized after every operation (denominator positive, numerator and
//! denominator coprime, zero stored as `0/1`). Intervals carry exact endpoints,
//! so interval arithmetic never rounds; the only approximation enters through
//! [`sqrt_enclosure`], whose endpoints are proven by squaring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

/// Arbitrary-precision signed rational, always normalized.
pub type ExactRational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("double factorial is undefined for n = {0} (need n >= -1)")]
    DoubleFactorialDomain(i64),
    #[error("square root of a negative value: {0}")]
    NegativeSqrt(String),
    #[error("precision must be at least one bit")]
    ZeroPrecision,
    #[error("interval endpoints out of order: [{lo}, {hi}]")]
    InvertedInterval { lo: String, hi: String },
    #[error("division by an interval containing zero: {0}")]
    DivisionByZero(String),
}

/// `n / d` as a normalized rational.
///
/// # Panics
/// If `d == 0`.
pub fn ratio(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: impl Into<BigInt>) -> ExactRational {
    BigRational::from_integer(n.into())
}

pub fn from_biguint(n: BigUint) -> ExactRational {
    BigRational::from_integer(BigInt::from_biguint(Sign::Plus, n))
}

/// `2^e` for any signed exponent.
pub fn pow2(e: i64) -> ExactRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

static FACTORIALS: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());

/// `n!`, memoized process-wide.
pub fn factorial(n: u64) -> BigUint {
    let idx = n as usize;
    {
        let table = FACTORIALS.read().unwrap_or_else(|e| e.into_inner());
        if let Some(v) = table.get(idx) {
            return v.clone();
        }
    }
    let mut table = FACTORIALS.write().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(BigUint::one());
    }
    while table.len() <= idx {
        let next = table.last().map(|v| v * BigUint::from(table.len())).unwrap_or_default();
        table.push(next);
    }
    table[idx].clone()
}

/// `n!!` with the conventions `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Result<BigUint, ArithError> {
    match n {
        n if n < -1 => Err(ArithError::DoubleFactorialDomain(n)),
        -1 | 0 => Ok(BigUint::one()),
        n if n % 2 == 0 => {
            // (2j)!! = 2^j j!
            let j = (n / 2) as u64;
            Ok(factorial(j) << j)
        }
        n => {
            // (2j-1)!! = (2j)! / (2^j j!)
            let j = ((n + 1) / 2) as u64;
            Ok(factorial(2 * j) / (factorial(j) << j))
        }
    }
}

/// `floor(sqrt(n))`.
pub fn isqrt(n: &BigInt) -> Result<BigInt, ArithError> {
    if n.is_negative() {
        return Err(ArithError::NegativeSqrt(n.to_string()));
    }
    Ok(n.sqrt())
}

fn perfect_square_root(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Certified enclosure `[l, u]` of `sqrt(q)` with `l^2 <= q <= u^2`, `l >= 0`
/// and `u - l <= 2^-bits`. Exact (`l == u`) when `q` is the square of a
/// rational.
pub fn sqrt_enclosure(q: &ExactRational, bits: u32) -> Result<RationalInterval, ArithError> {
    if bits == 0 {
        return Err(ArithError::ZeroPrecision);
    }
    if q.is_negative() {
        return Err(ArithError::NegativeSqrt(q.to_string()));
    }
    if let (Some(n), Some(d)) = (perfect_square_root(q.numer()), perfect_square_root(q.denom())) {
        return Ok(RationalInterval::point(BigRational::new(n, d)));
    }
    // r = isqrt(floor(q * 4^bits)) gives r^2 <= q 4^bits < (r+1)^2.
    let scaled = (q.numer() << (2 * bits as usize)) / q.denom();
    let r = scaled.sqrt();
    let unit = BigInt::one() << bits as usize;
    let lo = BigRational::new(r.clone(), unit.clone());
    let hi = BigRational::new(r + 1, unit);
    Ok(RationalInterval { lo, hi })
}

/// `floor(q * 2^bits) / 2^bits`.
pub fn dyadic_floor(q: &ExactRational, bits: u32) -> ExactRational {
    let unit = BigInt::one() << bits as usize;
    BigRational::new((q * BigRational::from_integer(unit.clone())).floor().to_integer(), unit)
}

/// `ceil(q * 2^bits) / 2^bits`.
pub fn dyadic_ceil(q: &ExactRational, bits: u32) -> ExactRational {
    let unit = BigInt::one() << bits as usize;
    BigRational::new((q * BigRational::from_integer(unit.clone())).ceil().to_integer(), unit)
}

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    lo: ExactRational,
    hi: ExactRational,
}

impl RationalInterval {
    pub fn new(lo: ExactRational, hi: ExactRational) -> Result<Self, ArithError> {
        if lo > hi {
            return Err(ArithError::InvertedInterval { lo: lo.to_string(), hi: hi.to_string() });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(q: ExactRational) -> Self {
        Self { lo: q.clone(), hi: q }
    }

    pub fn lo(&self) -> &ExactRational {
        &self.lo
    }

    pub fn hi(&self) -> &ExactRational {
        &self.hi
    }

    pub fn into_bounds(self) -> (ExactRational, ExactRational) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &ExactRational) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    /// `other ⊆ self`.
    pub fn contains_interval(&self, other: &RationalInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn intersect(&self, other: &RationalInterval) -> Option<RationalInterval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(RationalInterval { lo, hi })
    }

    /// Interval enclosing `min(a, b)` for `a ∈ self`, `b ∈ other`.
    pub fn min(&self, other: &RationalInterval) -> RationalInterval {
        RationalInterval { lo: (&self.lo).min(&other.lo).clone(), hi: (&self.hi).min(&other.hi).clone() }
    }

    pub fn scale(&self, c: &ExactRational) -> RationalInterval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if c.is_negative() {
            RationalInterval { lo: b, hi: a }
        } else {
            RationalInterval { lo: a, hi: b }
        }
    }

    pub fn shift(&self, c: &ExactRational) -> RationalInterval {
        RationalInterval { lo: &self.lo + c, hi: &self.hi + c }
    }

    pub fn checked_div(&self, rhs: &RationalInterval) -> Result<RationalInterval, ArithError> {
        if rhs.contains_zero() {
            return Err(ArithError::DivisionByZero(rhs.to_string()));
        }
        let recip = RationalInterval { lo: rhs.hi.recip(), hi: rhs.lo.recip() };
        Ok(self * &recip)
    }

    /// Widen outward to the dyadic grid `2^-bits`.
    pub fn round_outward(&self, bits: u32) -> RationalInterval {
        RationalInterval { lo: dyadic_floor(&self.lo, bits), hi: dyadic_ceil(&self.hi, bits) }
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for &RationalInterval {
    type Output = RationalInterval;
    fn add(self, rhs: &RationalInterval) -> RationalInterval {
        RationalInterval { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }
}

impl Sub for &RationalInterval {
    type Output = RationalInterval;
    fn sub(self, rhs: &RationalInterval) -> RationalInterval {
        RationalInterval { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }
}

impl Mul for &RationalInterval {
    type Output = RationalInterval;
    fn mul(self, rhs: &RationalInterval) -> RationalInterval {
        let products = [&self.lo * &rhs.lo, &self.lo * &rhs.hi, &self.hi * &rhs.lo, &self.hi * &rhs.hi];
        let mut lo = &products[0];
        let mut hi = &products[0];
        for p in &products[1..] {
            if p < lo {
                lo = p;
            }
            if p > hi {
                hi = p;
            }
        }
        RationalInterval { lo: lo.clone(), hi: hi.clone() }
    }
}

impl Neg for &RationalInterval {
    type Output = RationalInterval;
    fn neg(self) -> RationalInterval {
        RationalInterval { lo: -&self.hi, hi: -&self.lo }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for RationalInterval {
            type Output = RationalInterval;
            fn $method(self, rhs: RationalInterval) -> RationalInterval {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalInterval {
    type Output = RationalInterval;
    fn neg(self) -> RationalInterval {
        RationalInterval { lo: -self.hi, hi: -self.lo }
    }
}

impl From<ExactRational> for RationalInterval {
    fn from(q: ExactRational) -> Self {
        RationalInterval::point(q)
    }
}

/// Number of bits needed so that `2^-bits <= q`, for `q > 0`. Used to pick
/// working precisions from tolerances.
pub fn bits_below(q: &ExactRational) -> u32 {
    debug_assert!(q.is_positive());
    let num_bits = q.numer().bits() as i64;
    let den_bits = q.denom().bits() as i64;
    // q >= 2^(num_bits-1) / 2^den_bits
    (den_bits - num_bits + 1).max(0) as u32
}
