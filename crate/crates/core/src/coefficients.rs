//! Exact coefficient sequences of the arctangent bound families.
//!
//! | family | meaning | first index |
//! |--------|---------|-------------|
//! | `A`    | `arctan x = Σ (-1)^m A(m) x^(2m+1)` | 0 |
//! | `K`    | `sqrt(1+x²) = 1 + Σ (-1)^m K(m) x^(2m+2)` | 0 |
//! | `B`    | `3x/(1+2 sqrt(1+x²)) = Σ B(m) x^(2m+1)` | 0 |
//! | `C_T1` | `arctan x - 3x/(1+2 sqrt(1+x²)) = Σ (-1)^m C(m) x^(2m+1)` | 0 |
//! | `E`    | `(1+2 sqrt(1+x²)) arctan x - 3x = Σ (-1)^m E(m) x^(2m+1)` | 2 |
//! | `C_T4` | `arctan x - 2x/(1+sqrt(1+x²)) = Σ (-1)^m C(m) x^(2m+1)` | 1 |
//!
//! Values are memoized per family behind a lock; every public accessor is a
//! pure function of its arguments.

use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{double_factorial, factorial, from_biguint, integer, pow2, ratio, ExactRational, RationalInterval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoefficientError {
    #[error("{family} is defined from m = {first}, got m = {m}")]
    IndexOutOfRange { family: Family, m: u64, first: u64 },
    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    K,
    B,
    CT1,
    E,
    CT4,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::A, Family::K, Family::B, Family::CT1, Family::E, Family::CT4];

    pub fn first_index(self) -> u64 {
        match self {
            Family::A | Family::K | Family::B | Family::CT1 => 0,
            Family::E => 2,
            Family::CT4 => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::K => "K",
            Family::B => "B",
            Family::CT1 => "C_T1",
            Family::E => "E",
            Family::CT4 => "C_T4",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }

    fn check_index(self, m: u64) -> Result<(), CoefficientError> {
        let first = self.first_index();
        if m < first {
            return Err(CoefficientError::IndexOutOfRange { family: self, m, first });
        }
        Ok(())
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Contiguous run of one family's coefficients, `values[i]` holding index
/// `first + i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    family: Family,
    first: u64,
    values: Vec<ExactRational>,
}

impl CoefficientTable {
    /// Coefficients `m_from..=m_to` of `family`.
    pub fn build(family: Family, m_from: u64, m_to: u64) -> Result<Self, CoefficientError> {
        family.check_index(m_from)?;
        let values = if m_from > m_to {
            Vec::new()
        } else {
            ensure_cached(family, m_to);
            let memo = MEMO[family.slot()].read().unwrap_or_else(|e| e.into_inner());
            let off = family.first_index();
            memo[(m_from - off) as usize..=(m_to - off) as usize].to_vec()
        };
        Ok(Self { family, first: m_from, values })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn first_index(&self) -> u64 {
        self.first
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, m: u64) -> Option<&ExactRational> {
        m.checked_sub(self.first).and_then(|i| self.values.get(i as usize))
    }

    pub fn values(&self) -> &[ExactRational] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &ExactRational)> + '_ {
        self.values.iter().enumerate().map(move |(i, v)| (self.first + i as u64, v))
    }
}

static MEMO: [RwLock<Vec<ExactRational>>; 6] = [const { RwLock::new(Vec::new()) }; 6];

fn ensure_cached(family: Family, m: u64) {
    let off = family.first_index();
    let needed = (m - off + 1) as usize;
    {
        let memo = MEMO[family.slot()].read().unwrap_or_else(|e| e.into_inner());
        if memo.len() >= needed {
            return;
        }
    }
    let mut memo = MEMO[family.slot()].write().unwrap_or_else(|e| e.into_inner());
    if memo.len() >= needed {
        return;
    }
    let start = off + memo.len() as u64;
    // E is computed per index; the other families rebuild a prefix sum, so
    // grow those geometrically.
    let target = match family {
        Family::E => m,
        _ => m.max(off + 2 * memo.len() as u64),
    };
    memo.extend(compute_range(family, start, target));
}

fn cached(family: Family, m: u64) -> ExactRational {
    ensure_cached(family, m);
    let memo = MEMO[family.slot()].read().unwrap_or_else(|e| e.into_inner());
    memo[(m - family.first_index()) as usize].clone()
}

fn compute_range(family: Family, from: u64, to: u64) -> Vec<ExactRational> {
    match family {
        Family::A => (from..=to).map(a_value).collect(),
        Family::K => (from..=to).map(k_value).collect(),
        Family::B => {
            let brackets = b_brackets(to);
            (from..=to).map(|m| b_value(m, &brackets)).collect()
        }
        Family::CT1 => {
            let brackets = b_brackets(to);
            (from..=to).map(|m| c_t1_value(m, &brackets)).collect()
        }
        Family::E => (from..=to).map(e_value).collect(),
        Family::CT4 => (from..=to).map(c_t4_value).collect(),
    }
}

fn a_value(m: u64) -> ExactRational {
    ratio(1, 2 * m as i64 + 1)
}

fn k_value(m: u64) -> ExactRational {
    // (2m)! / (m! (m+1)! 2^(2m+1))
    let num = from_biguint(factorial(2 * m));
    let den = from_biguint(factorial(m) * factorial(m + 1));
    num / den * pow2(-(2 * m as i64 + 1))
}

/// `1 - 8 Σ_{i=2}^{m} (2i-2)!/((i-1)! i! 2^(2i-1)) (3/4)^i` for every
/// `m <= to` (entries 0 and 1 are the empty sum).
fn b_brackets(to: u64) -> Vec<ExactRational> {
    let mut out = Vec::with_capacity(to as usize + 1);
    let mut sum = ExactRational::zero();
    let three_quarters = ratio(3, 4);
    let mut power = three_quarters.clone() * &three_quarters;
    for m in 0..=to {
        if m >= 2 {
            let i = m;
            let term = from_biguint(factorial(2 * i - 2)) / from_biguint(factorial(i - 1) * factorial(i))
                * pow2(-(2 * i as i64 - 1))
                * &power;
            sum += term;
            power *= &three_quarters;
        }
        out.push(ExactRational::one() - integer(8) * &sum);
    }
    out
}

/// `4^(m-1) / 3^m`.
fn b_prefactor(m: u64) -> ExactRational {
    let three_pow = num_traits::pow(BigInt::from(3), m as usize);
    pow2(2 * m as i64 - 2) / BigRational::from_integer(three_pow)
}

fn b_value(m: u64, brackets: &[ExactRational]) -> ExactRational {
    match m {
        0 => ExactRational::one(),
        1 => ratio(-1, 3),
        _ => {
            let v = b_prefactor(m) * &brackets[m as usize];
            if m % 2 == 0 {
                v
            } else {
                -v
            }
        }
    }
}

fn c_t1_value(m: u64, brackets: &[ExactRational]) -> ExactRational {
    if m < 2 {
        return ExactRational::zero();
    }
    a_value(m) - b_prefactor(m) * &brackets[m as usize]
}

/// `E(m) = 3/(2m+1) - Σ_{i=0}^{m-1} (2m-2i-2)! / (2^(2m-2i-2) (2i+1) (m-i-1)! (m-i)!)`,
/// summed over the common denominator `4^(m-1) · lcm(1, 3, ..., 2m-1)`.
fn e_value(m: u64) -> ExactRational {
    let mut odd_lcm = BigInt::one();
    for i in 0..m {
        odd_lcm = odd_lcm.lcm(&BigInt::from(2 * i + 1));
    }
    let mut numer = BigInt::zero();
    for i in 0..m {
        let j = m - i - 1;
        let fact_ratio = BigInt::from(factorial(2 * j) / (factorial(j) * factorial(j + 1)));
        let scale = (&odd_lcm / BigInt::from(2 * i + 1)) << (2 * (m - 1 - j)) as usize;
        numer += fact_ratio * scale;
    }
    let denom = odd_lcm << (2 * (m - 1)) as usize;
    ratio(3, 2 * m as i64 + 1) - BigRational::new(numer, denom)
}

fn c_t4_value(m: u64) -> ExactRational {
    // 1/(2m+1) - (2m-1)!! / ((m+1)! 2^m)
    let df = from_biguint(double_factorial(2 * m as i64 - 1).expect("m >= 1"));
    a_value(m) - df / from_biguint(factorial(m + 1)) * pow2(-(m as i64))
}

pub fn coeff_a(m: u64) -> ExactRational {
    a_value(m)
}

pub fn coeff_k(m: u64) -> ExactRational {
    cached(Family::K, m)
}

/// `B(m)` from the explicit Cauchy-product formula (`B(0) = 1`, `B(1) = -1/3`).
pub fn coeff_b_explicit(m: u64) -> ExactRational {
    cached(Family::B, m)
}

/// `B(0..=m_max)` generated by `B(m+1) = -(4/3) B(m) + 2 (-1)^m (2m-1)!!/(2m+2)!!`
/// from the seeds `B(0) = 1`, `B(1) = -1/3`.
pub fn coeff_b_by_recurrence(m_max: u64) -> Vec<ExactRational> {
    let mut out = vec![ExactRational::one()];
    if m_max == 0 {
        return out;
    }
    out.push(ratio(-1, 3));
    let four_thirds = ratio(4, 3);
    for m in 1..m_max {
        let rhs = b_recurrence_rhs(m);
        let next = rhs - &four_thirds * &out[m as usize];
        out.push(next);
    }
    out
}

/// `2 (-1)^m (2m-1)!! / (2m+2)!!`.
pub(crate) fn b_recurrence_rhs(m: u64) -> ExactRational {
    let num = from_biguint(double_factorial(2 * m as i64 - 1).expect("m >= 0"));
    let den = from_biguint(double_factorial(2 * m as i64 + 2).expect("m >= 0"));
    let v = integer(2) * num / den;
    if m % 2 == 0 {
        v
    } else {
        -v
    }
}

/// `C(m)` of the first bound family: zero for `m < 2`, otherwise
/// `1/(2m+1) - 4^(m-1)/3^m (1 - 8 Σ ...)`, i.e. `A(m) - (-1)^m B(m)`.
pub fn coeff_c_t1(m: u64) -> ExactRational {
    cached(Family::CT1, m)
}

pub fn coeff_e(m: u64) -> Result<ExactRational, CoefficientError> {
    Family::E.check_index(m)?;
    Ok(cached(Family::E, m))
}

pub fn coeff_c_t4(m: u64) -> Result<ExactRational, CoefficientError> {
    Family::CT4.check_index(m)?;
    Ok(cached(Family::CT4, m))
}

/// Memoized coefficient lookup for any family.
pub fn coefficient(family: Family, m: u64) -> Result<ExactRational, CoefficientError> {
    family.check_index(m)?;
    Ok(cached(family, m))
}

/// Certified enclosure of the value of a convergent series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesEnclosure {
    pub value: RationalInterval,
    pub terms_used: u64,
    pub tail_bound: ExactRational,
}

fn check_tol(tol: &ExactRational) -> Result<(), CoefficientError> {
    if !tol.is_positive() {
        return Err(CoefficientError::NonPositiveTolerance(tol.to_string()));
    }
    Ok(())
}

/// Sums a positive series whose consecutive-term ratio is bounded by 3/4,
/// stopping once `scale · 3 · t_K <= tol`. Returns `(partial_sum, t_K, K+1)`.
fn sum_ratio_bounded(
    first: ExactRational,
    mut next_ratio: impl FnMut(u64) -> ExactRational,
    scale: &ExactRational,
    tol: &ExactRational,
) -> (ExactRational, ExactRational, u64) {
    let three = integer(3);
    let mut term = first;
    let mut sum = term.clone();
    let mut k = 0u64;
    while &(scale * &three) * &term > *tol {
        term *= next_ratio(k);
        sum += &term;
        k += 1;
    }
    (sum, term, k + 1)
}

/// `g(k, m) = (2k+2m-1)! / ((k+m-1)! (k+m+1)!)`.
pub(crate) fn beta_g(k: u64, m: u64) -> ExactRational {
    let n = k + m;
    from_biguint(factorial(2 * n - 1)) / from_biguint(factorial(n - 1) * factorial(n + 1))
}

/// Enclosure of `β(m) = 3(-1)^m / 2^(2m+1) Σ_k g(k, m) (3/16)^k` for `m >= 2`.
///
/// The term ratio is `3(2n+1) / (8(n+2)) < 3/4` with `n = k + m`, so the tail
/// after the last summed term `t_K` is at most `3 t_K`.
pub fn beta_enclosure(m: u64, tol: &ExactRational) -> Result<SeriesEnclosure, CoefficientError> {
    if m < 2 {
        return Err(CoefficientError::IndexOutOfRange { family: Family::B, m, first: 2 });
    }
    check_tol(tol)?;
    let scale = integer(3) * pow2(-(2 * m as i64 + 1));
    let (sum, last, terms) = sum_ratio_bounded(
        beta_g(0, m),
        |k| {
            let n = (k + m) as i64;
            ratio(3 * (2 * n + 1), 8 * (n + 2))
        },
        &scale,
        tol,
    );
    let tail = &scale * integer(3) * last;
    let lo = &scale * sum;
    let hi = &lo + &tail;
    let magnitude = RationalInterval::new(lo, hi).expect("tail >= 0");
    let value = if m % 2 == 0 { magnitude } else { -magnitude };
    Ok(SeriesEnclosure { value, terms_used: terms, tail_bound: tail })
}

/// `β₁ᵏ(m) = Π_{n<k} (m + 1/2 + n) / (m + 2 + n)`.
pub fn beta1_term(m: u64, k: u64) -> ExactRational {
    (0..k).fold(ExactRational::one(), |acc, n| acc * ratio((2 * m + 2 * n + 1) as i64, (2 * (m + 2 + n)) as i64))
}

/// Enclosure of `β₁(m) = Σ_k β₁ᵏ(m) (3/4)^k`.
///
/// Consecutive terms have ratio `(3/4)(m+1/2+k)/(m+2+k) < 3/4`, so the tail
/// after the last summed term `u_K` is at most `3 u_K`; this is never larger
/// than the cruder `Σ_{k>K} (3/4)^k` bound that follows from `β₁ᵏ(m) < 1`.
pub fn beta1_enclosure(m: u64, tol: &ExactRational) -> Result<SeriesEnclosure, CoefficientError> {
    check_tol(tol)?;
    let (sum, last, terms) = sum_ratio_bounded(
        ExactRational::one(),
        |k| ratio(3 * (2 * (m + k) + 1) as i64, 8 * (m + 2 + k) as i64),
        &ExactRational::one(),
        tol,
    );
    let tail = integer(3) * last;
    let hi = &sum + &tail;
    Ok(SeriesEnclosure {
        value: RationalInterval::new(sum, hi).expect("tail >= 0"),
        terms_used: terms,
        tail_bound: tail,
    })
}

/// `(3/2) (2m-1)!! / (2m+2)!!`, the exact factor relating `β⁺(m)` to `β₁(m)`.
pub fn beta_plus_prefactor(m: u64) -> ExactRational {
    let num = from_biguint(double_factorial(2 * m as i64 - 1).expect("m >= 0"));
    let den = from_biguint(double_factorial(2 * m as i64 + 2).expect("m >= 0"));
    ratio(3, 2) * num / den
}

/// Enclosure of `β⁺(m) = (3/2) (2m-1)!!/(2m+2)!! β₁(m)`.
pub fn beta_plus_enclosure(m: u64, tol: &ExactRational) -> Result<SeriesEnclosure, CoefficientError> {
    check_tol(tol)?;
    let factor = beta_plus_prefactor(m);
    let inner = beta1_enclosure(m, &(tol / &factor))?;
    Ok(SeriesEnclosure {
        value: inner.value.scale(&factor),
        terms_used: inner.terms_used,
        tail_bound: inner.tail_bound * factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_values() {
        assert_eq!(coeff_a(0), ratio(1, 1));
        assert_eq!(coeff_a(2), ratio(1, 5));
        assert_eq!(coeff_a(7), ratio(1, 15));
    }

    #[test]
    fn b_initial_values() {
        assert_eq!(coeff_b_explicit(0), ExactRational::one());
        assert_eq!(coeff_b_explicit(1), ratio(-1, 3));
        assert_eq!(coeff_b_explicit(2), ratio(7, 36));
        assert_eq!(coeff_b_explicit(3), ratio(-29, 216));
    }

    #[test]
    fn b_recurrence_prefixes() {
        assert_eq!(coeff_b_by_recurrence(1), vec![ratio(1, 1), ratio(-1, 3)]);
        assert_eq!(coeff_b_by_recurrence(2), vec![ratio(1, 1), ratio(-1, 3), ratio(7, 36)]);
        assert_eq!(coeff_b_by_recurrence(3)[3], ratio(-29, 216));
    }

    #[test]
    fn b_explicit_matches_recurrence() {
        let rec = coeff_b_by_recurrence(200);
        for (m, v) in rec.iter().enumerate() {
            assert_eq!(coeff_b_explicit(m as u64), *v, "m={m}");
        }
    }

    #[test]
    fn c_t1_values() {
        assert_eq!(coeff_c_t1(0), ExactRational::zero());
        assert_eq!(coeff_c_t1(1), ExactRational::zero());
        assert_eq!(coeff_c_t1(2), ratio(1, 180));
        assert_eq!(coeff_c_t1(3), ratio(13, 1512));
        assert_eq!(coeff_c_t1(5), ratio(3791, 342_144));
        assert_eq!(coeff_c_t1(7), ratio(130_591, 11_197_440));
        for m in 2..40 {
            let via_b = coeff_a(m) - if m % 2 == 0 { coeff_b_explicit(m) } else { -coeff_b_explicit(m) };
            assert_eq!(coeff_c_t1(m), via_b, "m={m}");
        }
    }

    #[test]
    fn e_values() {
        assert_eq!(coeff_e(2).unwrap(), ratio(1, 60));
        assert_eq!(coeff_e(3).unwrap(), ratio(17, 840));
        assert_eq!(coeff_e(4).unwrap(), ratio(139, 6720));
        assert_eq!(coeff_e(6).unwrap(), ratio(89_279, 4_612_608));
        assert_eq!(coeff_e(1), Err(CoefficientError::IndexOutOfRange { family: Family::E, m: 1, first: 2 }));
    }

    #[test]
    fn c_t4_values() {
        assert_eq!(coeff_c_t4(1).unwrap(), ratio(1, 12));
        assert_eq!(coeff_c_t4(2).unwrap(), ratio(3, 40));
        assert_eq!(coeff_c_t4(4).unwrap(), ratio(65, 1152));
        assert_eq!(coeff_c_t4(6).unwrap(), ratio(595, 13_312));
        assert!(coeff_c_t4(0).is_err());
    }

    #[test]
    fn table_indexing() {
        let t = CoefficientTable::build(Family::E, 2, 4).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.get(2), Some(&ratio(1, 60)));
        assert_eq!(t.get(1), None);
        assert_eq!(t.get(5), None);
        let rows: Vec<u64> = t.iter().map(|(m, _)| m).collect();
        assert_eq!(rows, vec![2, 3, 4]);
        assert!(CoefficientTable::build(Family::CT4, 0, 3).is_err());
        assert!(CoefficientTable::build(Family::A, 5, 4).unwrap().is_empty());
    }

    #[test]
    fn memo_agrees_with_direct_computation() {
        for family in Family::ALL {
            let first = family.first_index();
            let direct = compute_range(family, first, first + 30);
            let table = CoefficientTable::build(family, first, first + 30).unwrap();
            assert_eq!(table.values(), direct.as_slice(), "{family}");
        }
    }

    #[test]
    fn beta_encloses_b() {
        let tol = ratio(1, 1_000_000);
        let e2 = beta_enclosure(2, &tol).unwrap();
        assert!(e2.value.contains(&ratio(7, 36)));
        assert!(e2.value.width() <= tol);
        let e3 = beta_enclosure(3, &tol).unwrap();
        assert!(e3.value.contains(&ratio(-29, 216)));
        let loose = beta_enclosure(2, &ratio(1, 1)).unwrap();
        assert!(loose.value.contains(&ratio(7, 36)));
        assert!(loose.terms_used <= 3);
        assert!(beta_enclosure(1, &tol).is_err());
        assert!(beta_enclosure(2, &ExactRational::zero()).is_err());
    }

    #[test]
    fn beta1_examples() {
        let tol = ratio(1, 10_000);
        let b0 = beta1_enclosure(0, &tol).unwrap();
        assert!(*b0.value.lo() > ratio(16, 13) && *b0.value.hi() < integer(4));
        assert!(b0.value.width() <= tol);
        let b5 = beta1_enclosure(5, &tol).unwrap();
        assert!(*b5.value.lo() > ratio(56, 23) && *b5.value.hi() < integer(4));
        assert_eq!(beta1_term(0, 0), ExactRational::one());
        assert_eq!(beta1_term(0, 1), ratio(1, 4));
        assert!(beta1_enclosure(0, &ratio(-1, 2)).is_err());
    }

    #[test]
    fn beta_plus_prefactors() {
        let tol = ratio(1, 10_000);
        assert_eq!(beta_plus_prefactor(0), ratio(3, 4));
        assert_eq!(beta_plus_prefactor(1), ratio(3, 16));
        let bp = beta_plus_enclosure(0, &tol).unwrap();
        let b1 = beta1_enclosure(0, &(&tol / ratio(3, 4))).unwrap();
        assert_eq!(bp.value, b1.value.scale(&ratio(3, 4)));
        assert!(bp.value.width() <= tol);
    }
}
