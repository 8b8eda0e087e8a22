//! Exact checks of the identities, recurrences and inequalities that the
//! bound constructions rely on.
//!
//! Every check evaluates both sides in exact rational arithmetic. A failing
//! check does not abort: the verdict records the first failing index so that
//! transcription errors are easy to locate. Sweeps partition the `m` range
//! across the rayon pool and keep the smallest failing point, so verdicts are
//! independent of scheduling.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::coefficients::{self, beta1_enclosure, beta_g, coeff_b_explicit, coeff_e};
use crate::exact::{double_factorial, factorial, from_biguint, integer, pow2, ratio, ExactRational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    /// `F(m,k) = G(m,k+1) - G(m,k)`
    WzPair,
    /// `Σ_k F(m,k)` telescopes to `-G(m,0) = (2m-1)!/((m-1)!(m+1)!)`
    WzTelescope,
    /// per-term form of `β(m+1) + (4/3)β(m) = (-1)^m/2^(2m-1) Σ F(m,k)`
    BetaRelation,
    /// explicit `B` against its recurrence, and the two forms of its right side
    BRecurrence,
    /// `-2m E(m) + (2m+3) E(m+1) = 1/(2m+1) - (m+1)(2m)!/(((m+1)!)² 4^m)`
    ERecurrence,
    /// `E(m) = e(m) = g(m) S(m)`
    EEqualsE,
    /// `S⁺(m) = m (2m)!/(2 ((2m)!!)²) - 1/4`
    SPlusClosed,
    /// `(2j+1)! < ((2j)!!)² (j+1)`
    T2IndIneq,
    /// `2m h(m) < 3 S(m)`
    T2TwoMhLtThreeS,
    /// `0 < e(m) <= g(m) S⁺(m) < 1/(2m+1)`
    T2EBound,
    /// `(2m+2)!! > 2 (2m+1)!!`
    T3PosIneq,
    /// `(2m+4)!! > 3 (2m+3)!!`
    T3MonoIneq,
    /// `8(m+2)/(2m+13) < β₁(m) < 4`
    Lemma3,
    /// `β₁(m+1) > β₁(m) (m+2)/(m+1/2) (1 - (3/2)/(m+2))`
    Lemma4,
}

impl IdentityId {
    pub fn name(self) -> &'static str {
        match self {
            IdentityId::WzPair => "WZ_PAIR",
            IdentityId::WzTelescope => "WZ_TELESCOPE",
            IdentityId::BetaRelation => "BETA_RELATION",
            IdentityId::BRecurrence => "B_RECURRENCE",
            IdentityId::ERecurrence => "E_RECURRENCE",
            IdentityId::EEqualsE => "E_EQUALS_e",
            IdentityId::SPlusClosed => "S_PLUS_CLOSED",
            IdentityId::T2IndIneq => "T2_IND_INEQ",
            IdentityId::T2TwoMhLtThreeS => "T2_2mh_LT_3S",
            IdentityId::T2EBound => "T2_E_BOUND",
            IdentityId::T3PosIneq => "T3_POS_INEQ",
            IdentityId::T3MonoIneq => "T3_MONO_INEQ",
            IdentityId::Lemma3 => "LEMMA3",
            IdentityId::Lemma4 => "LEMMA4",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Index at which a check failed. `k` is absent for single-index checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FailurePoint {
    pub m: u64,
    pub k: Option<u64>,
}

impl FailurePoint {
    pub fn at(m: u64) -> Self {
        Self { m, k: None }
    }

    pub fn at_mk(m: u64, k: u64) -> Self {
        Self { m, k: Some(k) }
    }
}

impl fmt::Display for FailurePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "(m={}, k={k})", self.m),
            None => write!(f, "(m={})", self.m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityVerdict {
    pub id: IdentityId,
    pub range: String,
    first_failure: Option<FailurePoint>,
}

impl IdentityVerdict {
    pub fn new(id: IdentityId, range: impl Into<String>, first_failure: Option<FailurePoint>) -> Self {
        Self { id, range: range.into(), first_failure }
    }

    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }

    pub fn first_failure(&self) -> Option<FailurePoint> {
        self.first_failure
    }
}

impl fmt::Display for IdentityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first_failure {
            None => write!(f, "{} over {}: holds", self.id, self.range),
            Some(p) => write!(f, "{} over {}: FAILS first at {p}", self.id, self.range),
        }
    }
}

fn first_failure<F>(ms: std::ops::RangeInclusive<u64>, check: F) -> Option<FailurePoint>
where
    F: Fn(u64) -> Option<FailurePoint> + Send + Sync,
{
    ms.into_par_iter().filter_map(check).min()
}

fn fact(n: u64) -> ExactRational {
    from_biguint(factorial(n))
}

fn dfact(n: i64) -> ExactRational {
    from_biguint(double_factorial(n).expect("n >= -1"))
}

fn signed(m: u64, v: ExactRational) -> ExactRational {
    if m % 2 == 0 {
        v
    } else {
        -v
    }
}

fn three_sixteenths_pow(k: u64) -> ExactRational {
    num_traits::pow(ratio(3, 16), k as usize)
}

// ---- WZ pair -------------------------------------------------------------

/// `F(m,k) = (2m+2k+13)(2m+2k-1)! / ((8m+8k+16)(m+k-1)!(m+k+1)!) (3/16)^k`.
///
/// # Panics
/// If `m + k == 0`.
pub fn wz_f(m: u64, k: u64) -> ExactRational {
    let n = m + k;
    let num = integer(2 * n + 13) * fact(2 * n - 1);
    let den = integer(8 * n + 16) * fact(n - 1) * fact(n + 1);
    num / den * three_sixteenths_pow(k)
}

/// `G(m,k) = (-8k-8m-16)(2k+2m-1)! / ((8k+8m+16)(k+m-1)!(k+m+1)!) (3/16)^k`.
///
/// # Panics
/// If `m + k == 0`.
pub fn wz_g(m: u64, k: u64) -> ExactRational {
    let n = m + k;
    let num = -integer(8 * n + 16) * fact(2 * n - 1);
    let den = integer(8 * n + 16) * fact(n - 1) * fact(n + 1);
    num / den * three_sixteenths_pow(k)
}

fn wz_pair_holds(m: u64, k: u64) -> bool {
    wz_f(m, k) == wz_g(m, k + 1) - wz_g(m, k)
}

pub fn check_wz_pair(m: u64, k: u64) -> IdentityVerdict {
    assert!(m >= 2, "WZ pair is checked for m >= 2");
    let fail = (!wz_pair_holds(m, k)).then(|| FailurePoint::at_mk(m, k));
    IdentityVerdict::new(IdentityId::WzPair, format!("m={m}, k={k}"), fail)
}

pub fn sweep_wz_pair(m_max: u64, k_max: u64) -> IdentityVerdict {
    let fail =
        first_failure(2..=m_max, |m| (0..=k_max).find(|&k| !wz_pair_holds(m, k)).map(|k| FailurePoint::at_mk(m, k)));
    IdentityVerdict::new(IdentityId::WzPair, format!("2<=m<={m_max}, 0<=k<={k_max}"), fail)
}

/// `(2m-1)! / ((m-1)! (m+1)!)`, the closed form of `Σ_k F(m,k)`.
pub fn wz_sum_closed_form(m: u64) -> ExactRational {
    fact(2 * m - 1) / (fact(m - 1) * fact(m + 1))
}

fn telescope_failure(m: u64, k_terms: u64) -> Option<FailurePoint> {
    let g0 = wz_g(m, 0);
    // -G(m,0) against the closed form, and against the double-factorial form
    let closed = wz_sum_closed_form(m);
    if -&g0 != closed {
        return Some(FailurePoint::at_mk(m, 0));
    }
    let cross = pow2(2 * m as i64 - 1) * integer(2) * dfact(2 * m as i64 - 1) / dfact(2 * m as i64 + 2);
    if closed != cross {
        return Some(FailurePoint::at_mk(m, 0));
    }
    let mut partial = ExactRational::zero();
    let mut prev_abs = g0.abs();
    for k in 0..k_terms {
        partial += wz_f(m, k);
        let g_next = wz_g(m, k + 1);
        if partial != &g_next - &g0 {
            return Some(FailurePoint::at_mk(m, k + 1));
        }
        let abs = g_next.abs();
        if abs >= prev_abs {
            return Some(FailurePoint::at_mk(m, k + 1));
        }
        prev_abs = abs;
    }
    None
}

/// Checks `Σ_{k<k_terms} F(m,k) = G(m,k_terms) - G(m,0)` for every prefix,
/// `-G(m,0) = (2m-1)!/((m-1)!(m+1)!) = 2^(2m-1) · 2 (2m-1)!!/(2m+2)!!`, and
/// that `|G(m,k)|` strictly decreases, so the full sum is `-G(m,0)`.
pub fn check_wz_telescope(m: u64, k_terms: u64) -> IdentityVerdict {
    assert!(m >= 2, "telescoping is checked for m >= 2");
    IdentityVerdict::new(IdentityId::WzTelescope, format!("m={m}, k_terms={k_terms}"), telescope_failure(m, k_terms))
}

pub fn sweep_wz_telescope(m_max: u64, k_terms: u64) -> IdentityVerdict {
    let fail = first_failure(2..=m_max, |m| telescope_failure(m, k_terms));
    IdentityVerdict::new(IdentityId::WzTelescope, format!("2<=m<={m_max}, k_terms={k_terms}"), fail)
}

// ---- per-term β recurrence ----------------------------------------------------

/// `φ(m) = 3(-1)^m / 2^(2m+1)`.
fn phi(m: u64) -> ExactRational {
    signed(m, integer(3) * pow2(-(2 * m as i64 + 1)))
}

fn relation_12_holds(m: u64, k: u64) -> bool {
    let w = three_sixteenths_pow(k);
    let lhs = (phi(m + 1) * beta_g(k, m + 1) + ratio(4, 3) * phi(m) * beta_g(k, m)) * w;
    let rhs = signed(m, pow2(-(2 * m as i64 - 1))) * wz_f(m, k);
    lhs == rhs
}

/// `φ(m+1) g(k,m+1) (3/16)^k + (4/3) φ(m) g(k,m) (3/16)^k = (-1)^m / 2^(2m-1) · F(m,k)`.
pub fn check_relation_12(m: u64, k: u64) -> IdentityVerdict {
    assert!(m >= 2, "relation is checked for m >= 2");
    let fail = (!relation_12_holds(m, k)).then(|| FailurePoint::at_mk(m, k));
    IdentityVerdict::new(IdentityId::BetaRelation, format!("m={m}, k={k}"), fail)
}

pub fn sweep_relation_12(m_max: u64, k_max: u64) -> IdentityVerdict {
    let fail = first_failure(2..=m_max, |m| {
        (0..=k_max).find(|&k| !relation_12_holds(m, k)).map(|k| FailurePoint::at_mk(m, k))
    });
    IdentityVerdict::new(IdentityId::BetaRelation, format!("2<=m<={m_max}, 0<=k<={k_max}"), fail)
}

// ---- B recurrence --------------------------------------------------------------

/// `(-1)^m (2m-1)! / (2^(2m-1) (m-1)! (m+1)!)`, the first printed right side.
fn b_rhs_factorial_form(m: u64) -> ExactRational {
    signed(m, fact(2 * m - 1) * pow2(-(2 * m as i64 - 1)) / (fact(m - 1) * fact(m + 1)))
}

/// `2 (-1)^m (2m-1)!! / (2m+2)!!`, the second printed right side.
fn b_rhs_double_factorial_form(m: u64) -> ExactRational {
    signed(m, integer(2) * dfact(2 * m as i64 - 1) / dfact(2 * m as i64 + 2))
}

/// Checks `B(m+1) + (4/3) B(m)` against both right-hand forms for
/// `1 <= m < values.len() - 1`, with `values[m] = B(m)`.
pub fn check_b_recurrence_on(values: &[ExactRational]) -> IdentityVerdict {
    let top = values.len().saturating_sub(1) as u64;
    let fail = (1..top).find_map(|m| {
        let lhs = &values[m as usize + 1] + ratio(4, 3) * &values[m as usize];
        let a = b_rhs_factorial_form(m);
        let b = b_rhs_double_factorial_form(m);
        (a != b || lhs != a).then(|| FailurePoint::at(m))
    });
    IdentityVerdict::new(IdentityId::BRecurrence, format!("1<=m<{top}"), fail)
}

/// Both right-hand forms agree, the explicit `B` satisfies the recurrence, and
/// the explicit values equal the recurrence-generated ones, for `m <= m_max`.
pub fn check_b_recurrence_equiv(m_max: u64) -> IdentityVerdict {
    let explicit: Vec<ExactRational> = (0..=m_max + 1).map(coeff_b_explicit).collect();
    let generated = coefficients::coeff_b_by_recurrence(m_max);
    let range = format!("1<=m<={m_max}");
    let recurrence = check_b_recurrence_on(&explicit);
    if let Some(p) = recurrence.first_failure() {
        return IdentityVerdict::new(IdentityId::BRecurrence, range, Some(p));
    }
    let fail = generated.iter().zip(&explicit).position(|(g, e)| g != e).map(|m| FailurePoint::at(m as u64));
    IdentityVerdict::new(IdentityId::BRecurrence, range, fail)
}

// ---- E apparatus ----------------------------------------------------------------

fn e_recurrence_holds(m: u64) -> bool {
    let (Ok(e0), Ok(e1)) = (coeff_e(m), coeff_e(m + 1)) else {
        return false;
    };
    let lhs = -integer(2 * m) * e0 + integer(2 * m + 3) * e1;
    let f = fact(m + 1);
    let rhs = ratio(1, 2 * m as i64 + 1) - integer(m + 1) * fact(2 * m) / (&f * &f) * pow2(-(2 * m as i64));
    lhs == rhs
}

pub fn check_e_recurrence(m: u64) -> IdentityVerdict {
    assert!(m >= 2, "E recurrence is checked for m >= 2");
    let fail = (!e_recurrence_holds(m)).then(|| FailurePoint::at(m));
    IdentityVerdict::new(IdentityId::ERecurrence, format!("m={m}"), fail)
}

pub fn sweep_e_recurrence(m_max: u64) -> IdentityVerdict {
    // warm the memo once so the parallel sweep only reads
    let _ = coeff_e(m_max + 1);
    let fail = first_failure(2..=m_max, |m| (!e_recurrence_holds(m)).then(|| FailurePoint::at(m)));
    IdentityVerdict::new(IdentityId::ERecurrence, format!("2<=m<={m_max}"), fail)
}

/// `g(m) = m! (m-1)! 2^(2m+1) / (2m+1)!`.
pub fn e_g_factor(m: u64) -> ExactRational {
    fact(m) * fact(m - 1) * pow2(2 * m as i64 + 1) / fact(2 * m + 1)
}

/// `h(j) = (2j+2)! (((2j)!!)² (j+1) - (2j+1)!) / (2^(2j+3) (2j+1) ((j+1)!)² ((2j)!!)²)`.
pub fn e_h(j: u64) -> ExactRational {
    let dd = double_factorial(2 * j as i64).expect("j >= 0");
    let dd2 = &dd * &dd;
    let f1 = factorial(j + 1);
    let big = |n: BigUint| num_bigint::BigInt::from(n);
    let num = big(factorial(2 * j + 2)) * (big(&dd2 * BigUint::from(j + 1)) - big(factorial(2 * j + 1)));
    let den = big((BigUint::one() << (2 * j + 3)) * BigUint::from(2 * j + 1) * &f1 * &f1 * dd2);
    BigRational::new(num, den)
}

/// `S(m) = Σ_{j=1}^{m-1} h(j)` for every `m` in `0..=m_max` (entries 0 and 1
/// are the empty sum).
fn e_s_prefix(m_max: u64) -> Vec<ExactRational> {
    let mut out = Vec::with_capacity(m_max as usize + 1);
    let mut s = ExactRational::zero();
    out.push(s.clone());
    for m in 1..=m_max {
        if m >= 2 {
            s += e_h(m - 1);
        }
        out.push(s.clone());
    }
    out
}

pub fn e_s(m: u64) -> ExactRational {
    (1..m).map(e_h).fold(ExactRational::zero(), |acc, h| acc + h)
}

/// `e(m) = g(m) S(m)`.
pub fn compute_e(m: u64) -> ExactRational {
    assert!(m >= 2, "e(m) is defined for m >= 2");
    e_g_factor(m) * e_s(m)
}

pub fn check_e_equals_coefficient(m_max: u64) -> IdentityVerdict {
    let s = e_s_prefix(m_max);
    let fail = (2..=m_max).find(|&m| coeff_e(m).ok() != Some(e_g_factor(m) * &s[m as usize])).map(FailurePoint::at);
    IdentityVerdict::new(IdentityId::EEqualsE, format!("2<=m<={m_max}"), fail)
}

/// `S⁺(m) = Σ_{j=1}^{m-1} (2j)! / (4 ((2j)!!)²)`.
pub fn e_s_plus(m: u64) -> ExactRational {
    (1..m)
        .map(|j| {
            let d = dfact(2 * j as i64);
            fact(2 * j) / (integer(4) * &d * &d)
        })
        .fold(ExactRational::zero(), |acc, t| acc + t)
}

fn s_plus_closed(m: u64) -> ExactRational {
    let d = dfact(2 * m as i64);
    integer(m) * fact(2 * m) / (integer(2) * &d * &d) - ratio(1, 4)
}

pub fn check_s_plus_closed_form(m: u64) -> IdentityVerdict {
    assert!(m >= 2, "S+ closed form is checked for m >= 2");
    let fail = (e_s_plus(m) != s_plus_closed(m)).then(|| FailurePoint::at(m));
    IdentityVerdict::new(IdentityId::SPlusClosed, format!("m={m}"), fail)
}

pub fn sweep_s_plus_closed_form(m_max: u64) -> IdentityVerdict {
    let mut sum = ExactRational::zero();
    let mut fail = None;
    for m in 2..=m_max {
        let j = m - 1;
        let d = dfact(2 * j as i64);
        sum += fact(2 * j) / (integer(4) * &d * &d);
        if sum != s_plus_closed(m) {
            fail = Some(FailurePoint::at(m));
            break;
        }
    }
    IdentityVerdict::new(IdentityId::SPlusClosed, format!("2<=m<={m_max}"), fail)
}

/// The three inequalities used for the `E` sequence:
/// `(2j+1)! < ((2j)!!)² (j+1)` for `1 <= j <= m_max`,
/// `2m h(m) < 3 S(m)` for `2 <= m <= m_max`, and
/// `0 < e(m) <= g(m) S⁺(m) < 1/(2m+1)` for `2 <= m <= m_max`.
pub fn check_t2_inequalities(m_max: u64) -> [IdentityVerdict; 3] {
    let ind = (1..=m_max).find(|&j| {
        let dd = double_factorial(2 * j as i64).expect("j >= 0");
        factorial(2 * j + 1) >= &dd * &dd * BigUint::from(j + 1)
    });

    let hs: Vec<ExactRational> =
        (0..=m_max).into_par_iter().map(|j| if j == 0 { ExactRational::zero() } else { e_h(j) }).collect();
    let mut s = ExactRational::zero();
    let mut s_plus = ExactRational::zero();
    let mut two_mh = None;
    let mut e_bound = None;
    for m in 2..=m_max {
        let j = m - 1;
        s += &hs[j as usize];
        let d = dfact(2 * j as i64);
        s_plus += fact(2 * j) / (integer(4) * &d * &d);
        if two_mh.is_none() && integer(2 * m) * &hs[m as usize] >= integer(3) * &s {
            two_mh = Some(FailurePoint::at(m));
        }
        if e_bound.is_none() {
            let g = e_g_factor(m);
            let e = &g * &s;
            let upper = &g * &s_plus;
            if !(e.is_positive() && e <= upper && upper < ratio(1, 2 * m as i64 + 1)) {
                e_bound = Some(FailurePoint::at(m));
            }
        }
    }
    [
        IdentityVerdict::new(IdentityId::T2IndIneq, format!("1<=j<={m_max}"), ind.map(FailurePoint::at)),
        IdentityVerdict::new(IdentityId::T2TwoMhLtThreeS, format!("2<=m<={m_max}"), two_mh),
        IdentityVerdict::new(IdentityId::T2EBound, format!("2<=m<={m_max}"), e_bound),
    ]
}

/// `(2m+2)!! > 2 (2m+1)!!` and `(2m+4)!! > 3 (2m+3)!!` for `1 <= m <= m_max`.
pub fn check_t3_inequalities(m_max: u64) -> [IdentityVerdict; 2] {
    let df = |n: u64| double_factorial(n as i64).expect("n >= 0");
    let pos = (1..=m_max).find(|&m| df(2 * m + 2) <= df(2 * m + 1) * 2u32);
    let mono = (1..=m_max).find(|&m| df(2 * m + 4) <= df(2 * m + 3) * 3u32);
    [
        IdentityVerdict::new(IdentityId::T3PosIneq, format!("1<=m<={m_max}"), pos.map(FailurePoint::at)),
        IdentityVerdict::new(IdentityId::T3MonoIneq, format!("1<=m<={m_max}"), mono.map(FailurePoint::at)),
    ]
}

// ---- β₁ lemmas ----------------------------------------------------------------------

/// `8(m+2)/(2m+13) < β₁(m).lo` and `β₁(m).hi < 4` for `0 <= m <= m_max`.
pub fn check_lemma3(m_max: u64, tol: &ExactRational) -> IdentityVerdict {
    let fail = first_failure(0..=m_max, |m| {
        let enc = beta1_enclosure(m, tol).ok()?;
        let lower = ratio(8 * (m as i64 + 2), 2 * m as i64 + 13);
        (!(lower < *enc.value.lo() && *enc.value.hi() < integer(4))).then(|| FailurePoint::at(m))
    });
    IdentityVerdict::new(IdentityId::Lemma3, format!("0<=m<={m_max}"), fail)
}

/// Certified form of `β₁(m+1) > β₁(m) (m+2)/(m+1/2) (1 - (3/2)/(m+2))`:
/// the lower end of the `β₁(m+1)` enclosure must exceed the upper end of the
/// right side's enclosure, for `0 <= m <= m_max`.
pub fn check_lemma4(m_max: u64, tol: &ExactRational) -> IdentityVerdict {
    let fail = first_failure(0..=m_max, |m| {
        let here = beta1_enclosure(m, tol).ok()?;
        let next = beta1_enclosure(m + 1, tol).ok()?;
        let mi = m as i64;
        let factor = ratio(2 * (mi + 2), 2 * mi + 1) * (ExactRational::one() - ratio(3, 2 * (mi + 2)));
        let rhs_hi = here.value.scale(&factor).hi().clone();
        (*next.value.lo() <= rhs_hi).then(|| FailurePoint::at(m))
    });
    IdentityVerdict::new(IdentityId::Lemma4, format!("0<=m<={m_max}"), fail)
}

/// Index ranges for [`run_suite`].
#[derive(Debug, Clone)]
pub struct SuiteBounds {
    pub wz_m_max: u64,
    pub wz_k_max: u64,
    pub telescope_m_max: u64,
    pub telescope_k_terms: u64,
    pub rel12_m_max: u64,
    pub rel12_k_max: u64,
    pub b_m_max: u64,
    pub e_recurrence_m_max: u64,
    pub e_equals_m_max: u64,
    pub s_plus_m_max: u64,
    pub inequality_m_max: u64,
    pub lemma_m_max: u64,
    pub lemma_tol: ExactRational,
}

impl Default for SuiteBounds {
    fn default() -> Self {
        Self {
            wz_m_max: 50,
            wz_k_max: 200,
            telescope_m_max: 50,
            telescope_k_terms: 60,
            rel12_m_max: 40,
            rel12_k_max: 100,
            b_m_max: 200,
            e_recurrence_m_max: 200,
            e_equals_m_max: 100,
            s_plus_m_max: 300,
            inequality_m_max: 1000,
            lemma_m_max: 200,
            lemma_tol: pow2(-40),
        }
    }
}

/// Every check, in a fixed order.
pub fn run_suite(b: &SuiteBounds) -> Vec<IdentityVerdict> {
    let mut out = vec![
        sweep_wz_pair(b.wz_m_max, b.wz_k_max),
        sweep_wz_telescope(b.telescope_m_max, b.telescope_k_terms),
        sweep_relation_12(b.rel12_m_max, b.rel12_k_max),
        check_b_recurrence_equiv(b.b_m_max),
        sweep_e_recurrence(b.e_recurrence_m_max),
        check_e_equals_coefficient(b.e_equals_m_max),
        sweep_s_plus_closed_form(b.s_plus_m_max),
    ];
    out.extend(check_t2_inequalities(b.inequality_m_max));
    out.extend(check_t3_inequalities(b.inequality_m_max));
    out.push(check_lemma3(b.lemma_m_max, &b.lemma_tol));
    out.push(check_lemma4(b.lemma_m_max, &b.lemma_tol));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn wz_pair_small() {
        assert!(check_wz_pair(2, 0).holds());
        // literal substitution: F(2,0) = 17 · 3! / (32 · 1! · 3!) = 17/32
        assert_eq!(wz_f(2, 0), ratio(17, 32));
        assert_eq!(wz_g(2, 0), ratio(-1, 1));
        assert!(sweep_wz_pair(10, 30).holds());
    }

    #[test]
    fn telescope_closed_forms() {
        assert_eq!(-wz_g(2, 0), ratio(1, 1));
        assert_eq!(-wz_g(3, 0), ratio(5, 2)); // 5!/(2! 4!)
        assert_eq!(wz_sum_closed_form(3), ratio(5, 2));
        assert!(check_wz_telescope(2, 50).holds());
        assert!(check_wz_telescope(3, 20).holds());
    }

    #[test]
    fn telescope_remainder_is_g_at_horizon() {
        let partial: ExactRational = (0..50).map(|k| wz_f(2, k)).sum();
        let remainder = ratio(1, 1) - &partial;
        assert_eq!(remainder, wz_g(2, 50).abs());
        // the remainder after 50 terms is ~6.6e-9, after 200 terms below 1e-20
        assert!(remainder < ratio(1, 100_000_000) && remainder > ratio(1, 1_000_000_000));
        let partial200: ExactRational = (0..200).map(|k| wz_f(2, k)).sum();
        let r = ratio(1, 1) - partial200;
        assert!(r.is_positive() && r < BigRational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), 20)));
    }

    #[test]
    fn relation_12_points() {
        assert!(check_relation_12(2, 0).holds());
        assert!(check_relation_12(5, 3).holds());
        assert!(sweep_relation_12(8, 20).holds());
    }

    #[test]
    fn e_recurrence_points() {
        // -4·(1/60) + 7·(17/840) = 3/40 = 1/5 - 3·4!/((3!)²·16)
        assert!(check_e_recurrence(2).holds());
        assert!(check_e_recurrence(3).holds());
        assert!(sweep_e_recurrence(30).holds());
    }

    #[test]
    fn e_from_g_and_s() {
        assert_eq!(compute_e(2), ratio(1, 60));
        assert_eq!(compute_e(3), ratio(17, 840));
        assert_eq!(compute_e(5), ratio(8947, 443_520));
        assert_eq!(e_g_factor(2), ratio(8, 15));
        assert_eq!(e_h(1), ratio(1, 32));
        assert_eq!(e_h(2), ratio(9, 256));
        assert!(check_e_equals_coefficient(30).holds());
    }

    #[test]
    fn s_plus_points() {
        assert_eq!(e_s_plus(2), ratio(1, 8));
        assert!(check_s_plus_closed_form(2).holds());
        assert!(check_s_plus_closed_form(3).holds());
        assert!(sweep_s_plus_closed_form(40).holds());
    }

    #[test]
    fn g_times_s_plus_closed_form() {
        // g(m) S⁺(m) = 1/(2m+1) - 4^m / (2m (2m+1) binom(2m, m)), strictly below 1/(2m+1)
        for m in 2..40u64 {
            let binom = fact(2 * m) / (fact(m) * fact(m));
            let expected =
                ratio(1, 2 * m as i64 + 1) - pow2(2 * m as i64) / (integer(2 * m) * integer(2 * m + 1) * binom);
            assert_eq!(e_g_factor(m) * e_s_plus(m), expected, "m={m}");
        }
        assert_eq!(e_g_factor(2) * e_s_plus(2), ratio(1, 15));
    }

    #[test]
    fn t2_inequalities_small() {
        let [ind, two_mh, bound] = check_t2_inequalities(40);
        assert!(ind.holds());
        assert!(bound.holds());
        // 4 h(2) = 36/256 is not below 3 S(2) = 24/256; the inequality only
        // starts at m = 4
        assert_eq!(two_mh.first_failure(), Some(FailurePoint::at(2)));
        assert!(integer(6) * e_h(3) > integer(3) * e_s(3));
        for m in 4..40 {
            assert!(integer(2 * m) * e_h(m) < integer(3) * e_s(m), "m={m}");
        }
    }

    #[test]
    fn t3_inequalities_small() {
        let [pos, mono] = check_t3_inequalities(100);
        assert!(pos.holds() && mono.holds());
        assert_eq!(double_factorial(4).unwrap(), BigUint::from(8u32));
        assert_eq!(double_factorial(6).unwrap(), BigUint::from(48u32));
    }

    #[test]
    fn b_recurrence_forms() {
        assert_eq!(b_rhs_factorial_form(1), ratio(-1, 4));
        assert_eq!(b_rhs_double_factorial_form(1), ratio(-1, 4));
        assert_eq!(b_rhs_factorial_form(2), ratio(1, 8));
        assert_eq!(b_rhs_double_factorial_form(2), ratio(1, 8));
        assert!(check_b_recurrence_equiv(40).holds());
    }

    #[test]
    fn corrupted_table_reports_first_failure() {
        let mut values: Vec<ExactRational> = (0..=20).map(coeff_b_explicit).collect();
        values[7] += ratio(1, 1_000_000);
        let v = check_b_recurrence_on(&values);
        assert!(!v.holds());
        assert_eq!(v.first_failure(), Some(FailurePoint::at(6)));
    }

    #[test]
    fn lemma_checks_small() {
        let tol = pow2(-40);
        assert!(check_lemma3(20, &tol).holds());
        assert!(check_lemma4(20, &tol).holds());
    }

    #[test]
    fn verdict_display() {
        let ok = IdentityVerdict::new(IdentityId::WzPair, "m=2", None);
        assert_eq!(ok.to_string(), "WZ_PAIR over m=2: holds");
        let bad = IdentityVerdict::new(IdentityId::BetaRelation, "x", Some(FailurePoint::at_mk(3, 4)));
        assert_eq!(bad.to_string(), "BETA_RELATION over x: FAILS first at (m=3, k=4)");
    }
}
