//! Order-`k` two-sided bound families, their certified evaluation, an
//! independent arctangent enclosure, and grid verification.
//!
//! For each theorem the lower and upper sides differ by exactly one positive
//! term of an alternating series, so both sides are exact polynomials plus a
//! base function involving `sqrt(1+x²)`. Evaluation encloses the square root
//! with [`sqrt_enclosure`]; nothing else is approximated.
//!
//! The oracle [`arctan_oracle`] shares no code with the bound path beyond
//! integer square roots: it halves the angle in fixed-point integer arithmetic
//! until the argument is at most 1/4 and brackets the Taylor series there by
//! consecutive partial sums.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::coefficients::{coeff_c_t1, coeff_c_t4, coeff_e, CoefficientError};
use crate::exact::{
    bits_below, integer, isqrt, pow2, ratio, sqrt_enclosure, ArithError, ExactRational, RationalInterval,
};

/// Precision of the certified rational lower bound used for `sqrt(3)/2`.
pub const DOMAIN_ENDPOINT_BITS: u32 = 64;

/// Starting precision of adaptive verification.
pub const START_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("truncation order k must be at least 1, got {0}")]
    OrderOutOfRange(u32),
    #[error("x = {x} lies outside the domain (0, {domain}] of {theorem}")]
    OutOfDomain { theorem: Theorem, x: String, domain: DomainEnd },
    #[error("x must be positive, got {0}")]
    NonPositiveArgument(String),
    #[error("grid must have at least one point")]
    EmptyGrid,
    #[error("max_bits must be at least 8, got {0}")]
    PrecisionTooLow(u32),
    #[error("target width must be positive, got {0}")]
    NonPositiveWidth(String),
    #[error("bound enclosure {enclosure} is disjoint from the arctan enclosure {oracle} at x = {x}")]
    OracleDisagreement { x: String, enclosure: String, oracle: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    /// `arctan x - 3x/(1+2 sqrt(1+x²))` between partial sums of `Σ (-1)^m C(m) x^(2m+1)`.
    T1,
    /// `arctan x` between `(3x + Σ (-1)^m E(m) x^(2m+1)) / (1+2 sqrt(1+x²))`.
    T2,
    /// `arctan x - 2x/(1+sqrt(1+x²))` between partial sums of `Σ (-1)^m C(m) x^(2m+1)`.
    T3,
}

impl Theorem {
    pub const ALL: [Theorem; 3] = [Theorem::T1, Theorem::T2, Theorem::T3];

    pub fn number(self) -> u8 {
        match self {
            Theorem::T1 => 1,
            Theorem::T2 => 2,
            Theorem::T3 => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Theorem::T1),
            2 => Some(Theorem::T2),
            3 => Some(Theorem::T3),
            _ => None,
        }
    }

    pub fn domain(self) -> DomainEnd {
        match self {
            Theorem::T1 => DomainEnd::Sqrt(ratio(3, 4)),
            Theorem::T2 | Theorem::T3 => DomainEnd::Rational(integer(1)),
        }
    }

    /// The single term separating the order-`k` upper and lower sides, as
    /// `(exponent, coefficient)`.
    pub fn gap_term(self, k: u32) -> Result<(u32, ExactRational), BoundsError> {
        if k < 1 {
            return Err(BoundsError::OrderOutOfRange(k));
        }
        let k = k as u64;
        Ok(match self {
            Theorem::T1 => (4 * k as u32 + 3, coeff_c_t1(2 * k + 1)),
            Theorem::T2 => (4 * k as u32 + 3, coeff_e(2 * k + 1)?),
            Theorem::T3 => (4 * k as u32 + 1, coeff_c_t4(2 * k)?),
        })
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Lower,
    Upper,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        })
    }
}

/// Right end of a validity domain `(0, end]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DomainEnd {
    /// `sqrt(radicand)`, kept symbolic so membership is decided exactly.
    Sqrt(ExactRational),
    Rational(ExactRational),
}

impl DomainEnd {
    /// `0 < x <= end`, decided exactly.
    pub fn contains(&self, x: &ExactRational) -> bool {
        if !x.is_positive() {
            return false;
        }
        match self {
            DomainEnd::Sqrt(r) => x * x <= *r,
            DomainEnd::Rational(r) => x <= r,
        }
    }

    /// A rational provably inside the domain and within
    /// `2^-DOMAIN_ENDPOINT_BITS` of its end.
    pub fn certified_lower(&self) -> ExactRational {
        match self {
            DomainEnd::Sqrt(r) => sqrt_enclosure(r, DOMAIN_ENDPOINT_BITS).expect("radicand > 0").lo().clone(),
            DomainEnd::Rational(r) => r.clone(),
        }
    }
}

impl fmt::Display for DomainEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainEnd::Sqrt(r) => write!(f, "sqrt({r})"),
            DomainEnd::Rational(r) => write!(f, "{r}"),
        }
    }
}

/// One monomial `coeff · x^exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: u32,
    pub coeff: ExactRational,
}

/// One side of one theorem's order-`k` bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundFamily {
    theorem: Theorem,
    side: Side,
    k: u32,
    terms: Vec<Term>,
}

impl BoundFamily {
    pub fn build(theorem: Theorem, k: u32, side: Side) -> Result<Self, BoundsError> {
        if k < 1 {
            return Err(BoundsError::OrderOutOfRange(k));
        }
        let kk = k as u64;
        let (first, last) = match (theorem, side) {
            (Theorem::T1, Side::Lower) => (0, 2 * kk + 1),
            (Theorem::T1, Side::Upper) => (0, 2 * kk),
            (Theorem::T2, Side::Lower) => (2, 2 * kk + 1),
            (Theorem::T2, Side::Upper) => (2, 2 * kk),
            (Theorem::T3, Side::Lower) => (1, 2 * kk - 1),
            (Theorem::T3, Side::Upper) => (1, 2 * kk),
        };
        let mut terms = Vec::new();
        for m in first..=last {
            let c = match theorem {
                Theorem::T1 => coeff_c_t1(m),
                Theorem::T2 => coeff_e(m)?,
                Theorem::T3 => coeff_c_t4(m)?,
            };
            if c.is_zero() {
                continue;
            }
            let coeff = if m % 2 == 0 { c } else { -c };
            terms.push(Term { exponent: 2 * m as u32 + 1, coeff });
        }
        Ok(Self { theorem, side, k, terms })
    }

    /// A family with arbitrary correction terms; used to evaluate perturbed
    /// or experimental bounds with the same machinery.
    pub fn from_terms(theorem: Theorem, side: Side, k: u32, terms: Vec<Term>) -> Self {
        Self { theorem, side, k, terms }
    }

    pub fn theorem(&self) -> Theorem {
        self.theorem
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn domain(&self) -> DomainEnd {
        self.theorem.domain()
    }

    /// Exact value of the polynomial correction at `x`.
    pub fn poly(&self, x: &ExactRational) -> ExactRational {
        self.terms.iter().fold(ExactRational::zero(), |acc, t| acc + &t.coeff * x.pow(t.exponent as i32))
    }

    /// Certified enclosure of this side's bound on `arctan x`.
    pub fn evaluate(&self, x: &ExactRational, bits: u32) -> Result<RationalInterval, BoundsError> {
        check_domain(self.theorem, x)?;
        self.evaluate_exploratory(x, bits)
    }

    /// As [`evaluate`](Self::evaluate) but for any `x > 0`, including points
    /// outside the proven domain.
    pub fn evaluate_exploratory(&self, x: &ExactRational, bits: u32) -> Result<RationalInterval, BoundsError> {
        if !x.is_positive() {
            return Err(BoundsError::NonPositiveArgument(x.to_string()));
        }
        let poly = self.poly(x);
        match self.theorem {
            Theorem::T1 | Theorem::T3 => Ok(base_term_unchecked(self.theorem, x, bits)?.shift(&poly)),
            Theorem::T2 => {
                let denom = shafer_denominator(x, bits)?;
                let numer = RationalInterval::point(integer(3) * x + poly);
                Ok(numer.checked_div(&denom)?)
            }
        }
    }
}

fn check_domain(theorem: Theorem, x: &ExactRational) -> Result<(), BoundsError> {
    let domain = theorem.domain();
    if domain.contains(x) {
        Ok(())
    } else {
        Err(BoundsError::OutOfDomain { theorem, x: x.to_string(), domain })
    }
}

/// `1 + 2 sqrt(1+x²)`.
fn shafer_denominator(x: &ExactRational, bits: u32) -> Result<RationalInterval, ArithError> {
    let s = sqrt_enclosure(&(ExactRational::one() + x * x), bits)?;
    Ok(s.scale(&integer(2)).shift(&ExactRational::one()))
}

fn base_term_unchecked(theorem: Theorem, x: &ExactRational, bits: u32) -> Result<RationalInterval, ArithError> {
    let numer = RationalInterval::point(match theorem {
        Theorem::T1 | Theorem::T2 => integer(3) * x,
        Theorem::T3 => integer(2) * x,
    });
    let denom = match theorem {
        Theorem::T1 | Theorem::T2 => shafer_denominator(x, bits)?,
        Theorem::T3 => sqrt_enclosure(&(ExactRational::one() + x * x), bits)?.shift(&ExactRational::one()),
    };
    numer.checked_div(&denom)
}

/// Certified enclosure of the base function: `3x/(1+2 sqrt(1+x²))` for T1
/// and T2, `2x/(1+sqrt(1+x²))` for T3.
pub fn eval_base_term(theorem: Theorem, x: &ExactRational, bits: u32) -> Result<RationalInterval, BoundsError> {
    check_domain(theorem, x)?;
    Ok(base_term_unchecked(theorem, x, bits)?)
}

// ---- arctan oracle ---------------------------------------------------------------

/// Fixed-point interval `[lo, hi] · 2^-p` scaled by `2^halvings`.
struct FixedEnclosure {
    lo: BigInt,
    hi: BigInt,
    precision: u32,
    halvings: u32,
}

fn mul_floor(a: &BigInt, b: &BigInt, p: u32) -> BigInt {
    (a * b) >> p as usize
}

fn mul_ceil(a: &BigInt, b: &BigInt, p: u32) -> BigInt {
    -((-(a * b)) >> p as usize)
}

/// `arctan x` for `x > 0` at working precision `p`.
fn arctan_fixed(x: &ExactRational, p: u32) -> FixedEnclosure {
    let one = BigInt::one() << p as usize;
    let one_sq = &one * &one;
    let scaled = x * BigRational::from_integer(one.clone());
    let mut tl = scaled.floor().to_integer();
    let mut th = scaled.ceil().to_integer();
    let quarter = &one >> 2usize;

    // tan(θ/2) = t / (1 + sqrt(1+t²)) is increasing in t, so each endpoint
    // maps through its own outward-rounded image.
    let mut halvings = 0;
    while th > quarter {
        let root_lo = isqrt(&(&one_sq + &th * &th)).expect("positive");
        let root_hi = isqrt(&(&one_sq + &tl * &tl)).expect("positive") + 1;
        th = (&th * &one).div_ceil(&(&one + root_lo));
        tl = (&tl * &one).div_floor(&(&one + root_hi));
        halvings += 1;
    }

    // Partial sums of Σ (-1)^m t^(2m+1)/(2m+1) for 0 <= t <= 1/4: the sum
    // through an even index is an upper bound, through an odd index a lower
    // bound. Rounding follows the sign of each term.
    let mut last_even = (p as u64).saturating_sub(2).div_ceil(4);
    if last_even % 2 == 1 {
        last_even += 1;
    }
    let lower = alternating_sum(&tl, last_even + 1, p, false);
    let upper = alternating_sum(&th, last_even, p, true);
    FixedEnclosure { lo: lower, hi: upper, precision: p, halvings }
}

/// Fixed-point `Σ_{m<=last} (-1)^m t^(2m+1)/(2m+1)`, rounded so the result is
/// below (`round_up = false`) or above the exact partial sum.
fn alternating_sum(t: &BigInt, last: u64, p: u32, round_up: bool) -> BigInt {
    let t2_floor = mul_floor(t, t, p);
    let t2_ceil = mul_ceil(t, t, p);
    let mut pow_floor = t.clone();
    let mut pow_ceil = t.clone();
    let mut acc = BigInt::zero();
    for m in 0..=last {
        let d = BigInt::from(2 * m + 1);
        let positive = m % 2 == 0;
        // positive terms rounded in the direction of the result, negative
        // terms against it
        if positive == round_up {
            acc += if positive { pow_ceil.div_ceil(&d) } else { -pow_ceil.div_ceil(&d) };
        } else {
            acc += if positive { pow_floor.div_floor(&d) } else { -pow_floor.div_floor(&d) };
        }
        pow_floor = mul_floor(&pow_floor, &t2_floor, p);
        pow_ceil = mul_ceil(&pow_ceil, &t2_ceil, p);
    }
    acc
}

/// Certified enclosure of `arctan x` of width at most `2^-bits`, with
/// endpoints on the dyadic grid `2^-(bits+2)`.
pub fn arctan_oracle(x: &ExactRational, bits: u32) -> RationalInterval {
    if x.is_zero() {
        return RationalInterval::point(ExactRational::zero());
    }
    if x.is_negative() {
        return -arctan_oracle(&-x, bits);
    }
    let target = pow2(-(bits as i64));
    let mut work = bits + 24;
    loop {
        let enc = arctan_fixed(x, work);
        let shift = enc.precision as i64 - enc.halvings as i64;
        let lo = BigRational::from_integer(enc.lo) * pow2(-shift);
        let hi = BigRational::from_integer(enc.hi) * pow2(-shift);
        let out = RationalInterval::new(lo, hi).expect("ordered").round_outward(bits + 2);
        if out.width() <= target {
            return out;
        }
        work += 32;
    }
}

// ---- verification -------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Both strict inequalities proven.
    Separated,
    /// At least one inequality proven false.
    Violated,
    /// Neither proven nor refuted at the precision cap.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Separated => "SEPARATED",
            Verdict::Violated => "VIOLATED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPoint {
    pub index: u64,
    pub x: ExactRational,
    pub verdict: Verdict,
    /// Encloses `min(arctan x - lower(x), upper(x) - arctan x)`.
    pub margin: RationalInterval,
    /// Precision at which the verdict was reached.
    pub bits: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub separated: usize,
    pub violated: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub theorem: Theorem,
    pub k: u32,
    pub grid_n: u64,
    /// Rightmost grid point; points are `i/grid_n · domain_hi`.
    pub domain_hi: ExactRational,
    /// False when `domain_hi` lies outside the theorem's proven domain.
    pub proven_domain: bool,
    pub points: Vec<GridPoint>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn all_separated(&self) -> bool {
        self.summary.separated == self.points.len()
    }
}

fn check_point(
    lower: &BoundFamily,
    upper: &BoundFamily,
    index: u64,
    x: ExactRational,
    max_bits: u32,
) -> Result<GridPoint, BoundsError> {
    let mut bits = START_BITS.min(max_bits);
    loop {
        let atan = arctan_oracle(&x, bits);
        let lo = lower.evaluate_exploratory(&x, bits)?;
        let up = upper.evaluate_exploratory(&x, bits)?;
        let below = &atan - &lo;
        let above = &up - &atan;
        let margin = below.min(&above);
        let verdict = if margin.is_strictly_positive() {
            Some(Verdict::Separated)
        } else if below.is_strictly_negative() || above.is_strictly_negative() {
            Some(Verdict::Violated)
        } else if bits >= max_bits {
            Some(Verdict::Inconclusive)
        } else {
            None
        };
        if let Some(verdict) = verdict {
            return Ok(GridPoint { index, x, verdict, margin, bits });
        }
        bits = bits.saturating_mul(2).min(max_bits);
    }
}

/// Checks `lower(x) < arctan x < upper(x)` at `x_i = i/grid_n · domain_hi`,
/// `i = 1..=grid_n`, doubling precision from [`START_BITS`] up to `max_bits`
/// at each point until the verdict is certified.
pub fn verify_families(
    lower: &BoundFamily,
    upper: &BoundFamily,
    domain_hi: &ExactRational,
    grid_n: u64,
    max_bits: u32,
) -> Result<VerificationReport, BoundsError> {
    if grid_n == 0 {
        return Err(BoundsError::EmptyGrid);
    }
    if max_bits < 8 {
        return Err(BoundsError::PrecisionTooLow(max_bits));
    }
    if !domain_hi.is_positive() {
        return Err(BoundsError::NonPositiveArgument(domain_hi.to_string()));
    }
    let points = (1..=grid_n)
        .into_par_iter()
        .map(|i| {
            let x = domain_hi * ratio(i as i64, grid_n as i64);
            check_point(lower, upper, i, x, max_bits)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut summary = Summary::default();
    for p in &points {
        match p.verdict {
            Verdict::Separated => summary.separated += 1,
            Verdict::Violated => summary.violated += 1,
            Verdict::Inconclusive => summary.inconclusive += 1,
        }
    }
    Ok(VerificationReport {
        theorem: lower.theorem(),
        k: lower.k(),
        grid_n,
        domain_hi: domain_hi.clone(),
        proven_domain: lower.domain().contains(domain_hi),
        points,
        summary,
    })
}

/// Grid verification of one theorem at order `k` over its proven domain. For
/// T1 the right end is the certified rational lower bound of `sqrt(3)/2`.
pub fn verify_theorem(theorem: Theorem, k: u32, grid_n: u64, max_bits: u32) -> Result<VerificationReport, BoundsError> {
    let lower = BoundFamily::build(theorem, k, Side::Lower)?;
    let upper = BoundFamily::build(theorem, k, Side::Upper)?;
    verify_families(&lower, &upper, &theorem.domain().certified_lower(), grid_n, max_bits)
}

/// As [`verify_theorem`] on the grid ending at an arbitrary `domain_hi`; the
/// report's `proven_domain` flag is false when the grid leaves the domain.
pub fn verify_theorem_on(
    theorem: Theorem,
    k: u32,
    domain_hi: &ExactRational,
    grid_n: u64,
    max_bits: u32,
) -> Result<VerificationReport, BoundsError> {
    let lower = BoundFamily::build(theorem, k, Side::Lower)?;
    let upper = BoundFamily::build(theorem, k, Side::Upper)?;
    verify_families(&lower, &upper, domain_hi, grid_n, max_bits)
}

/// `[lower(x).lo, upper(x).hi]` from the order-`k` bounds, rejected if it is
/// certifiably disjoint from [`arctan_oracle`] at the same precision.
pub fn enclose_arctan_via_bounds(
    theorem: Theorem,
    x: &ExactRational,
    k: u32,
    bits: u32,
) -> Result<RationalInterval, BoundsError> {
    check_domain(theorem, x)?;
    let lo = BoundFamily::build(theorem, k, Side::Lower)?.evaluate(x, bits)?;
    let up = BoundFamily::build(theorem, k, Side::Upper)?.evaluate(x, bits)?;
    let enclosure = RationalInterval::new(lo.lo().clone(), up.hi().clone())?;
    let oracle = arctan_oracle(x, bits);
    if enclosure.intersect(&oracle).is_none() {
        return Err(BoundsError::OracleDisagreement {
            x: x.to_string(),
            enclosure: enclosure.to_string(),
            oracle: oracle.to_string(),
        });
    }
    Ok(enclosure)
}

/// Smallest `k <= k_max` whose enclosure at `x` is no wider than
/// `target_width`.
pub fn minimal_k_for_width(
    theorem: Theorem,
    x: &ExactRational,
    target_width: &ExactRational,
    k_max: u32,
) -> Result<Option<u32>, BoundsError> {
    if !target_width.is_positive() {
        return Err(BoundsError::NonPositiveWidth(target_width.to_string()));
    }
    check_domain(theorem, x)?;
    let bits = (bits_below(target_width) + 16).max(START_BITS);
    for k in 1..=k_max {
        if enclose_arctan_via_bounds(theorem, x, k, bits)?.width() <= *target_width {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
