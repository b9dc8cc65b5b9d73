mod common;

use num_complex::Complex64;
use omegabias::numtheory::euler_phi;
use omegabias::{character, enumerate_characters};
use proptest::prelude::*;

#[test]
fn orthogonality_up_to_200() {
    for q in 1..=200u64 {
        let chars = enumerate_characters(q).unwrap();
        let phi = euler_phi(q) as f64;
        assert_eq!(chars.len() as f64, phi);
        let tables: Vec<Vec<Complex64>> = chars
            .iter()
            .map(|c| (0..q).map(|a| c.evaluate(a)).collect())
            .collect();
        for (i, ti) in tables.iter().enumerate() {
            for (j, tj) in tables.iter().enumerate() {
                let s: Complex64 = ti.iter().zip(tj).map(|(a, b)| a * b.conj()).sum::<Complex64>() / phi;
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((s - expected).norm() < 1e-12, "q={q} ({i},{j}): {s}");
            }
        }
    }
}

#[test]
fn gauss_sum_modulus_up_to_100() {
    for q in 1..=100u64 {
        for chi in enumerate_characters(q).unwrap() {
            if chi.is_primitive() {
                let tau = chi.gauss_sum().unwrap();
                assert!((tau.norm_sqr() - q as f64).abs() < 1e-10, "q={q} idx={}", chi.index());
                assert!((chi.root_number().unwrap().norm() - 1.0).abs() < 1e-12);
            } else {
                assert!(chi.gauss_sum().is_err());
                assert!(chi.root_number().is_err());
            }
        }
    }
}

/// Smallest `d | q` such that `chi(n) = 1` whenever `n = 1 mod d` and `gcd(n, q) = 1`.
fn brute_conductor(q: u64, values: &[Complex64]) -> u64 {
    (1..=q)
        .filter(|d| q % d == 0)
        .find(|&d| {
            (0..q)
                .filter(|&n| n % d == 1 % d && common::gcd(n, q) == 1)
                .all(|n| (values[n as usize] - 1.0).norm() < 1e-12)
        })
        .unwrap()
}

#[test]
fn conductor_by_brute_force_up_to_60() {
    for q in 1..=60u64 {
        for chi in enumerate_characters(q).unwrap() {
            let values: Vec<Complex64> = (0..q).map(|a| chi.evaluate(a)).collect();
            let f = brute_conductor(q, &values);
            assert_eq!(chi.conductor(), f, "q={q} idx={}", chi.index());
            assert_eq!(chi.is_primitive(), f == q);
        }
    }
}

#[test]
fn real_primitive_root_numbers_are_one() {
    for q in [3u64, 4, 5, 7, 8, 11] {
        for chi in enumerate_characters(q).unwrap() {
            if chi.is_real() && chi.is_primitive() {
                let eps = chi.root_number().unwrap();
                assert!((eps - 1.0).norm() < 1e-12, "q={q}: {eps}");
            }
        }
    }
}

#[test]
fn mod_seven_quadratic_symbol() {
    let chars = enumerate_characters(7).unwrap();
    let real: Vec<_> = chars.iter().filter(|c| c.is_real() && !c.is_principal()).collect();
    assert_eq!(real.len(), 1);
    let legendre = |a: u64| if a % 7 == 0 { 0 } else if [1, 2, 4].contains(&(a % 7)) { 1 } else { -1 };
    for a in 0..30 {
        assert_eq!(real[0].real_value(a).unwrap(), legendre(a));
    }
    assert_eq!(real[0].real_value(3), Some(-1));
}

#[test]
fn complex_mod_five_root_number() {
    let chi = enumerate_characters(5)
        .unwrap()
        .into_iter()
        .find(|c| (c.evaluate(2) - Complex64::new(0.0, 1.0)).norm() < 1e-15)
        .unwrap();
    let direct: Complex64 = (1..=5u64)
        .map(|a| chi.evaluate(a) * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * a as f64 / 5.0))
        .sum();
    assert!((chi.gauss_sum().unwrap() - direct).norm() < 1e-12);
    assert!((chi.root_number().unwrap().norm() - 1.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn completely_multiplicative(q in 1u64..=400, idx_seed in any::<usize>(), a in 0u64..10_000, b in 0u64..10_000) {
        let n = euler_phi(q) as usize;
        let chi = character(q, idx_seed % n).unwrap();
        let ab = chi.evaluate(a * b);
        let prod = chi.evaluate(a) * chi.evaluate(b);
        prop_assert!((ab - prod).norm() < 1e-12);
        match (chi.exponent(a), chi.exponent(b), chi.exponent(a * b)) {
            (Some(ea), Some(eb), Some(eab)) => prop_assert_eq!((ea + eb) % chi.order(), eab),
            (x, y, z) => prop_assert!(z.is_none() && (x.is_none() || y.is_none())),
        }
    }

    #[test]
    fn real_values_are_exact(q in 1u64..=400, idx_seed in any::<usize>(), a in 0u64..100_000) {
        let n = euler_phi(q) as usize;
        let chi = character(q, idx_seed % n).unwrap();
        let v = chi.evaluate(a);
        prop_assert_eq!(chi.exponent(a).is_none(), common::gcd(a, q) != 1);
        if chi.is_real() {
            let r = chi.real_value(a).unwrap();
            prop_assert!([-1, 0, 1].contains(&r));
            prop_assert_eq!(v, Complex64::new(r as f64, 0.0));
        }
        prop_assert!((chi.conj().evaluate(a) - v.conj()).norm() < 1e-14);
    }

    #[test]
    fn parity_matches_minus_one(q in 3u64..=400, idx_seed in any::<usize>()) {
        let n = euler_phi(q) as usize;
        let chi = character(q, idx_seed % n).unwrap();
        let m1 = chi.evaluate(q - 1);
        prop_assert_eq!(m1.re, if chi.parity() == 0 { 1.0 } else { -1.0 });
        let total: Complex64 = (0..q).map(|a| chi.evaluate(a)).sum();
        if !chi.is_principal() {
            prop_assert!(total.norm() < 1e-9);
        }
    }
}
