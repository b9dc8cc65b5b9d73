//! Bernoulli numbers and the complex log-gamma function.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Highest index `j` for which `B_{2j}` is tabulated.
pub const MAX_BERNOULLI_HALF_INDEX: usize = 30;

/// `B_{2j}` for `j = 0..=30`, computed exactly and rounded once to `f64`.
pub fn bernoulli_even() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = 2 * MAX_BERNOULLI_HALF_INDEX;
        let b = bernoulli_exact(n);
        (0..=MAX_BERNOULLI_HALF_INDEX)
            .map(|j| b[2 * j].to_f64().expect("finite Bernoulli number"))
            .collect()
    })
}

/// `B_{2j} / (2j)!` for `j = 0..=30`.
pub fn bernoulli_over_factorial() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = 2 * MAX_BERNOULLI_HALF_INDEX;
        let b = bernoulli_exact(n);
        let mut fact = BigInt::one();
        let mut out = Vec::with_capacity(MAX_BERNOULLI_HALF_INDEX + 1);
        for m in 0..=n {
            if m > 0 {
                fact *= BigInt::from(m);
            }
            if m % 2 == 0 {
                let v = &b[m] / BigRational::from_integer(fact.clone());
                out.push(v.to_f64().expect("finite"));
            }
        }
        out
    })
}

/// `B_0..=B_n` from `sum_{k=0}^{m} C(m+1, k) B_k = 0`.
fn bernoulli_exact(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (k, bk) in b.iter().enumerate() {
            acc += bk * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        // binom is now C(m+1, m)
        b.push(-acc / BigRational::from_integer(binom));
    }
    b
}

const STIRLING_TERMS: usize = 12;
const STIRLING_MIN_ABS: f64 = 16.0;

/// Principal branch of `log Gamma(z)` (branch cut on the non-positive real
/// axis), by upward recurrence into the Stirling region.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 0.0 || w.norm() < STIRLING_MIN_ABS {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

fn stirling(z: Complex64) -> Complex64 {
    let b = bernoulli_even();
    let mut series = Complex64::new(0.0, 0.0);
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    for j in 1..=STIRLING_TERMS {
        let m = 2.0 * j as f64;
        series += pow * (b[j] / (m * (m - 1.0)));
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bernoulli() {
        let b = bernoulli_even();
        assert_eq!(b[0], 1.0);
        assert!((b[1] - 1.0 / 6.0).abs() < 1e-17);
        assert!((b[2] + 1.0 / 30.0).abs() < 1e-17);
        assert!((b[3] - 1.0 / 42.0).abs() < 1e-17);
        assert!((b[6] + 691.0 / 2730.0).abs() < 1e-16);
        let c = bernoulli_over_factorial();
        assert!((c[1] - 1.0 / 12.0).abs() < 1e-17);
        assert!((c[2] + 1.0 / 720.0).abs() < 1e-18);
    }

    #[test]
    fn ln_gamma_real_values() {
        let cases = [
            (1.0, 0.0),
            (2.0, 0.0),
            (0.5, 0.5 * PI.ln()),
            (5.0, 24f64.ln()),
            (0.25, 3.625_609_908_221_908_f64.ln()),
            (30.5, 72.953_471_184_169_41),
        ];
        for (x, expected) in cases {
            let g = ln_gamma(Complex64::new(x, 0.0));
            assert!((g.re - expected).abs() < 1e-13, "x={x}: {} vs {expected}", g.re);
            assert!(g.im.abs() < 1e-14);
        }
    }

    #[test]
    fn ln_gamma_recurrence_complex() {
        for &(x, y) in &[(0.25, 3.0), (0.75, -17.5), (1.3, 250.0), (0.25, 5000.0)] {
            let z = Complex64::new(x, y);
            let lhs = ln_gamma(z + 1.0);
            let rhs = ln_gamma(z) + z.ln();
            let diff = lhs - rhs;
            // equal modulo 2 pi i
            let k = (diff.im / (2.0 * PI)).round();
            assert!(diff.re.abs() < 1e-11 * (1.0 + lhs.re.abs()), "{z}");
            assert!((diff.im - 2.0 * PI * k).abs() < 1e-9, "{z}");
        }
    }

    #[test]
    fn gamma_modulus_on_critical_line() {
        // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
        for t in [0.5f64, 3.0, 12.0] {
            let g = ln_gamma(Complex64::new(0.5, t));
            let expected = 0.5 * (PI / (PI * t).cosh()).ln();
            assert!((g.re - expected).abs() < 1e-12, "t={t}");
        }
    }
}
