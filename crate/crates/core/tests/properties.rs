use arctan_bounds::bounds::{
    arctan_oracle, enclose_arctan_via_bounds, verify_theorem, verify_theorem_on, BoundFamily, Side, Term, Theorem,
    Verdict,
};
use arctan_bounds::exact::{integer, pow2, ratio, ExactRational, RationalInterval};
use arctan_bounds::identities::{compute_e, run_suite, SuiteBounds};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn theorem() -> impl Strategy<Value = Theorem> {
    prop_oneof![Just(Theorem::T1), Just(Theorem::T2), Just(Theorem::T3)]
}

/// `i/n` of the theorem's certified right end.
fn in_domain(t: Theorem, i: u64, n: u64) -> ExactRational {
    t.domain().certified_lower() * ratio(i as i64, n as i64)
}

fn widen(iv: &RationalInterval, by: &ExactRational) -> RationalInterval {
    RationalInterval::new(iv.lo() - by, iv.hi() + by).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enclosures_nest(t in theorem(), i in 1u64..=1000, k in 1u32..=3, dk in 1u32..=2) {
        let x = in_domain(t, i, 1000);
        let coarse = enclose_arctan_via_bounds(t, &x, k, 160).unwrap();
        let fine = enclose_arctan_via_bounds(t, &x, k + dk, 160).unwrap();
        prop_assert!(widen(&coarse, &pow2(-150)).contains_interval(&fine));
        prop_assert!(fine.width() <= coarse.width() + pow2(-150));
    }

    #[test]
    fn oracle_is_odd(n in -5000i64..=5000, d in 1i64..=997) {
        let x = ratio(n, d);
        prop_assert_eq!(arctan_oracle(&-&x, 80), -arctan_oracle(&x, 80));
    }

    #[test]
    fn oracle_width(n in -100_000i64..=100_000, d in 1i64..=1000, bits in 1u32..=200) {
        let x = ratio(n, d);
        let w = arctan_oracle(&x, bits).width();
        prop_assert!(w <= pow2(-(bits as i64)));
    }

    #[test]
    fn oracle_addition_formula(a in 1i64..=999, b in 1i64..=999) {
        // arctan a + arctan b = arctan((a+b)/(1-ab)) for a, b in (0,1)
        let (x, y) = (ratio(a, 1000), ratio(b, 1000));
        let z = (&x + &y) / (ExactRational::one() - &x * &y);
        let sum = arctan_oracle(&x, 96) + arctan_oracle(&y, 96);
        prop_assert!(sum.intersect(&arctan_oracle(&z, 96)).is_some());
    }

    #[test]
    fn separated_points_have_positive_margin(t in theorem(), k in 1u32..=4) {
        let r = verify_theorem(t, k, 8, 512).unwrap();
        for p in &r.points {
            prop_assert_eq!(p.verdict, Verdict::Separated);
            prop_assert!(p.margin.lo() > &ExactRational::zero());
        }
    }
}

#[test]
fn oracle_inside_every_enclosure() {
    // below x ~ 1/10 the k = 3 gap term drops under 2^-128 and no 128-bit
    // enclosure can contain the oracle interval
    let mut rng = StdRng::seed_from_u64(7);
    for t in Theorem::ALL {
        let hi = t.domain().certified_lower();
        for _ in 0..50 {
            let u = ratio(rng.gen_range(0..=1_000_000), 1_000_000);
            let x = ratio(1, 8) + (&hi - ratio(1, 8)) * u;
            let oracle = arctan_oracle(&x, 128);
            for k in 1..=3 {
                let enc = enclose_arctan_via_bounds(t, &x, k, 128).unwrap();
                assert!(enc.contains_interval(&oracle), "{t} k={k} x={x}");
            }
        }
    }
}

#[test]
fn order_one_terms_exact() {
    let terms = |t, side| BoundFamily::build(t, 1, side).unwrap().terms().to_vec();
    let term = |e, c| Term { exponent: e, coeff: c };
    assert_eq!(terms(Theorem::T1, Side::Lower), vec![term(5, ratio(1, 180)), term(7, ratio(-13, 1512))]);
    assert_eq!(terms(Theorem::T1, Side::Upper), vec![term(5, ratio(1, 180))]);
    assert_eq!(terms(Theorem::T2, Side::Lower), vec![term(5, ratio(1, 60)), term(7, ratio(-17, 840))]);
    assert_eq!(terms(Theorem::T2, Side::Upper), vec![term(5, ratio(1, 60))]);
    assert_eq!(terms(Theorem::T3, Side::Lower), vec![term(3, ratio(-1, 12))]);
    assert_eq!(terms(Theorem::T3, Side::Upper), vec![term(3, ratio(-1, 12)), term(5, ratio(3, 40))]);
}

#[test]
fn grid_examples() {
    for (t, k, n) in [(Theorem::T1, 1, 16), (Theorem::T2, 3, 64), (Theorem::T3, 2, 64)] {
        let r = verify_theorem(t, k, n, 256).unwrap();
        assert!(r.all_separated(), "{t} k={k}: {:?}", r.summary);
        assert_eq!(r.points.len() as u64, n);
        for (i, p) in r.points.iter().enumerate() {
            assert_eq!(p.index, i as u64 + 1);
            assert_eq!(p.x, in_domain(t, p.index, n));
        }
    }
}

#[test]
fn exploratory_grid_is_flagged() {
    let r = verify_theorem_on(Theorem::T1, 1, &integer(2), 8, 256).unwrap();
    assert!(!r.proven_domain);
    assert!(verify_theorem(Theorem::T1, 1, 8, 256).unwrap().proven_domain);
}

#[test]
fn verification_is_deterministic() {
    let a = verify_theorem(Theorem::T2, 2, 16, 256).unwrap();
    let b = verify_theorem(Theorem::T2, 2, 16, 256).unwrap();
    assert_eq!(a, b);
    let small = SuiteBounds {
        wz_m_max: 10,
        wz_k_max: 20,
        telescope_m_max: 10,
        telescope_k_terms: 20,
        rel12_m_max: 10,
        rel12_k_max: 20,
        b_m_max: 30,
        e_recurrence_m_max: 30,
        e_equals_m_max: 20,
        s_plus_m_max: 30,
        inequality_m_max: 30,
        lemma_m_max: 10,
        lemma_tol: pow2(-30),
    };
    assert_eq!(run_suite(&small), run_suite(&small));
}

#[test]
fn e_positive() {
    for m in 2..=100 {
        assert!(compute_e(m) > ExactRational::zero(), "m={m}");
    }
}

#[test]
fn e_ratio_below_one() {
    let bad: Vec<u64> = (2..=100).filter(|&m| compute_e(m + 1) / compute_e(m) >= ExactRational::one()).collect();
    assert!(bad.is_empty(), "e(m+1)/e(m) >= 1 at m in {bad:?}");
}

#[test]
fn oracle_at_large_and_tiny_arguments() {
    let big = BigRational::from_integer(BigInt::from(10).pow(40));
    let tiny = big.recip();
    // arctan(1/y) + arctan(y) = pi/2 for y > 0
    let sum = arctan_oracle(&big, 128) + arctan_oracle(&tiny, 128);
    let half_pi = arctan_oracle(&integer(1), 128).scale(&integer(2));
    assert!(sum.intersect(&half_pi).is_some());
    let t = arctan_oracle(&tiny, 200);
    assert!(t.contains(&(&tiny - tiny.pow(3) / integer(3))));
}
