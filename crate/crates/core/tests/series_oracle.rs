//! Coefficients recomputed from truncated power series of the underlying
//! functions, sharing nothing with the closed forms in the library.

use arctan_bounds::coefficients::{
    beta_plus_enclosure, coeff_a, coeff_b_explicit, coeff_c_t1, coeff_c_t4, coeff_e, coeff_k,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

const N: usize = 60;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Coefficients of `sqrt(1+y)` in powers of `y`.
fn sqrt_series(n: usize) -> Vec<Q> {
    let half = q(1, 2);
    let mut out = vec![Q::one()];
    let mut c = Q::one();
    for i in 0..n - 1 {
        // binom(1/2, i+1) = binom(1/2, i) (1/2 - i) / (i+1)
        c = c * (&half - Q::from_integer(BigInt::from(i))) / Q::from_integer(BigInt::from(i + 1));
        out.push(c.clone());
    }
    out
}

/// `arctan x / x` in powers of `y = x²`.
fn arctan_series(n: usize) -> Vec<Q> {
    (0..n).map(|i| q(if i % 2 == 0 { 1 } else { -1 }, 2 * i as i64 + 1)).collect()
}

/// `num / den` as power series, `den[0] != 0`.
fn divide(num: &[Q], den: &[Q]) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::with_capacity(num.len());
    for n in 0..num.len() {
        let mut acc = num[n].clone();
        for i in 1..=n.min(den.len() - 1) {
            acc -= &den[i] * &out[n - i];
        }
        out.push(acc / &den[0]);
    }
    out
}

fn multiply(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().min(b.len());
    (0..n).map(|k| (0..=k).fold(Q::zero(), |acc, i| acc + &a[i] * &b[k - i])).collect()
}

fn sign(m: usize) -> Q {
    if m % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

#[test]
fn a_from_arctan_series() {
    let at = arctan_series(N);
    for (m, c) in at.iter().enumerate() {
        assert_eq!(sign(m) * c, coeff_a(m as u64), "m={m}");
    }
}

#[test]
fn k_from_binomial_series() {
    let s = sqrt_series(N + 1);
    for m in 0..N {
        // sqrt(1+x²) = 1 + Σ (-1)^m K(m) x^(2m+2)
        assert_eq!(sign(m) * &s[m + 1], coeff_k(m as u64), "m={m}");
    }
}

/// `1 + 2 sqrt(1+y)`.
fn shafer_den() -> Vec<Q> {
    let mut d: Vec<Q> = sqrt_series(N).into_iter().map(|c| c * Q::from_integer(BigInt::from(2))).collect();
    d[0] += Q::one();
    d
}

#[test]
fn b_from_series_division() {
    let mut three = vec![Q::zero(); N];
    three[0] = Q::from_integer(BigInt::from(3));
    let b = divide(&three, &shafer_den());
    for (m, c) in b.iter().enumerate() {
        assert_eq!(*c, coeff_b_explicit(m as u64), "m={m}");
    }
}

#[test]
fn c_t1_from_series_difference() {
    let mut three = vec![Q::zero(); N];
    three[0] = Q::from_integer(BigInt::from(3));
    let base = divide(&three, &shafer_den());
    let at = arctan_series(N);
    for m in 0..N {
        let f = &at[m] - &base[m];
        assert_eq!(f, sign(m) * coeff_c_t1(m as u64), "m={m}");
    }
}

#[test]
fn e_from_cauchy_product() {
    let prod = multiply(&shafer_den(), &arctan_series(N));
    // (1 + 2 sqrt(1+x²)) arctan x - 3x
    assert_eq!(prod[0], Q::from_integer(BigInt::from(3)));
    assert!(prod[1].is_zero());
    for (m, c) in prod.iter().enumerate().skip(2) {
        assert_eq!(*c, sign(m) * coeff_e(m as u64).unwrap(), "m={m}");
    }
}

#[test]
fn c_t4_from_series_difference() {
    let mut den = sqrt_series(N);
    den[0] += Q::one();
    let mut two = vec![Q::zero(); N];
    two[0] = Q::from_integer(BigInt::from(2));
    let base = divide(&two, &den);
    let at = arctan_series(N);
    assert!((&at[0] - &base[0]).is_zero());
    for m in 1..N {
        assert_eq!(&at[m] - &base[m], sign(m) * coeff_c_t4(m as u64).unwrap(), "m={m}");
    }
}

/// `3/2^(2m+1) Σ_k (2k+2m-1)! / ((k+m-1)! (k+m+1)! 4^k) (3/4)^k`, summed
/// directly until the next term is below `tol/3`.
fn beta_plus_direct(m: u64, tol: &Q) -> (Q, Q) {
    let fact = |n: u64| -> BigInt { (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)) };
    let prefix = Q::new(BigInt::from(3), BigInt::one() << (2 * m + 1) as usize);
    let mut sum = Q::zero();
    let mut k = 0u64;
    loop {
        let n = k + m;
        let t = &prefix
            * Q::new(fact(2 * n - 1), fact(n - 1) * fact(n + 1) * (BigInt::one() << (2 * k) as usize))
            * Q::new(BigInt::from(3).pow(k as u32), BigInt::from(4).pow(k as u32));
        // consecutive ratio 3(2n+1)/(8(n+2)) < 3/4, so the tail past t is below 3t
        if Q::from_integer(BigInt::from(3)) * &t <= *tol {
            return (sum.clone(), sum + Q::from_integer(BigInt::from(3)) * t);
        }
        sum += t;
        k += 1;
    }
}

#[test]
fn beta_plus_matches_direct_sum() {
    let tol = q(1, 1_000_000_000);
    for m in 1..=20 {
        let (lo, hi) = beta_plus_direct(m, &tol);
        let enc = beta_plus_enclosure(m, &tol).unwrap();
        assert!(enc.value.lo() <= &hi && &lo <= enc.value.hi(), "m={m}");
        assert!(lo.is_positive());
    }
    let tol6 = q(1, 1_000_000);
    let (lo, hi) = beta_plus_direct(2, &tol6);
    let enc = beta_plus_enclosure(2, &tol6).unwrap();
    let mid = (&lo + &hi) / Q::from_integer(BigInt::from(2));
    assert!(enc.value.lo() - &tol6 <= mid && mid <= enc.value.hi() + &tol6);
}
