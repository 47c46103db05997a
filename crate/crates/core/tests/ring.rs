use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use qcurv_core::coeff::binomial;
use qcurv_core::sample::{self, rng};
use qcurv_core::{qbinom, qfact, qint, Coefficient, RingMode};

fn modes() -> Vec<RingMode> {
    vec![
        RingMode::Free,
        RingMode::root_of_unity(3).unwrap(),
        RingMode::root_of_unity(4).unwrap(),
        RingMode::primitive_root(2).unwrap(),
        RingMode::primitive_root(3).unwrap(),
        RingMode::primitive_root(4).unwrap(),
        RingMode::primitive_root(5).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        for mode in modes() {
            let mut r = rng(seed);
            let a = sample::coefficient(&mut r, 3, mode);
            let b = sample::coefficient(&mut r, 3, mode);
            let c = sample::coefficient(&mut r, 3, mode);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(&a * &Coefficient::one(), a.clone());
        }
    }

    #[test]
    fn monomials_invert(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = sample::monomial_coefficient(&mut r, 4, RingMode::Free);
        prop_assert!((&m * &m.inverse().unwrap()).is_one());
    }
}

#[test]
fn qbinom_symmetry_and_pascal_variants() {
    for mode in modes() {
        for k in 0..=8u32 {
            for r in 0..=k as i64 {
                assert_eq!(qbinom(k, r, mode), qbinom(k, k as i64 - r, mode), "k={k} r={r} {mode}");
                if k >= 1 && r >= 1 && r < k as i64 {
                    // the mirrored recursion [k,r] = q^{k-r}[k-1,r-1] + [k-1,r]
                    let other = &(&Coefficient::q_pow(k as i64 - r, mode) * &qbinom(k - 1, r - 1, mode))
                        + &qbinom(k - 1, r, mode);
                    assert_eq!(qbinom(k, r, mode), other);
                }
            }
            assert!(qbinom(k, -1, mode).is_zero());
            assert!(qbinom(k, k as i64 + 1, mode).is_zero());
        }
    }
}

#[test]
fn qbinom_classical_limit() {
    let one = BigRational::one();
    for k in 0..=8u32 {
        for r in 0..=k {
            let at_one = qbinom(k, r as i64, RingMode::Free).eval_q(&one);
            assert_eq!(at_one, Coefficient::from_rational(binomial(k, r).into()));
        }
    }
}

#[test]
fn telescoping() {
    let q = Coefficient::q_pow(1, RingMode::Free);
    for n in 0..=12u32 {
        let lhs = &qint(n, RingMode::Free) * &(&Coefficient::one() - &q);
        let rhs = &Coefficient::one() - &Coefficient::q_pow(n as i64, RingMode::Free);
        assert_eq!(lhs, rhs, "n={n}");
    }
}

#[test]
fn factorial_quotient() {
    let free = RingMode::Free;
    for k in 0..=7u32 {
        for r in 0..=k {
            let lhs = &qbinom(k, r as i64, free) * &(&qfact(r, free) * &qfact(k - r, free));
            assert_eq!(lhs, qfact(k, free));
        }
    }
}

#[test]
fn gaussian_binomials_vanish_at_primitive_roots() {
    for k in 2..=6u32 {
        let mode = RingMode::primitive_root(k).unwrap();
        assert!(qint(k, mode).is_zero());
        for r in 1..k {
            assert!(qbinom(k, r as i64, mode).is_zero(), "k={k} r={r}");
        }
    }
}
