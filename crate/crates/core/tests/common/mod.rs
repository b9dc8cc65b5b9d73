//! Independent reference computations for the integration tests. Nothing
//! here calls into the library.
#![allow(dead_code)]

use num_complex::Complex64;

/// `sum_{k>=0} (-1)^k a(k)` by the Cohen-Villegas-Zagier acceleration.
pub fn alternating_sum(n: usize, a: impl Fn(usize) -> Complex64) -> Complex64 {
    let d = (3.0 + 8f64.sqrt()).powi(n as i32);
    let d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut s = Complex64::new(0.0, 0.0);
    for k in 0..n {
        c = b - c;
        s += c * a(k);
        let (kf, nf) = (k as f64, n as f64);
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    s / d
}

/// Riemann zeta through the alternating eta series.
pub fn zeta(s: Complex64) -> Complex64 {
    let eta = alternating_sum(80, |k| Complex64::new(k as f64 + 1.0, 0.0).powc(-s));
    eta / (1.0 - Complex64::new(2.0, 0.0).powc(1.0 - s))
}

/// `L(s, chi_{-4}) = sum (-1)^k (2k+1)^{-s}`.
pub fn l_minus4(s: Complex64) -> Complex64 {
    alternating_sum(80, |k| Complex64::new(2.0 * k as f64 + 1.0, 0.0).powc(-s))
}

/// Five-point central difference of a real function.
pub fn five_point(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Five-point central difference along the real direction of a complex function.
pub fn five_point_c(f: impl Fn(Complex64) -> Complex64, z: Complex64, h: f64) -> Complex64 {
    (-f(z + 2.0 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2.0 * h)) / (12.0 * h)
}

/// `log Gamma(z)` for `Re z > 0`, up to a multiple of `2 pi i`, by shifting to
/// `Re z >= 10` and the Stirling series with tabulated coefficients.
pub fn ln_gamma(mut z: Complex64) -> Complex64 {
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
    ];
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < 10.0 {
        shift += z.ln();
        z += 1.0;
    }
    let inv = z.inv();
    let mut p = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for c in C {
        series += c * p;
        p *= inv * inv;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

/// Real function on the critical line with the sign pattern of
/// `L(1/2 + it, chi_{-4})`'s zeros.
pub fn z_minus4(t: f64) -> f64 {
    let s = Complex64::new(0.5, t);
    let theta = 0.5 * t * (4.0 / std::f64::consts::PI).ln() + ln_gamma(Complex64::new(0.75, 0.5 * t)).im;
    (Complex64::from_polar(1.0, theta) * l_minus4(s)).re
}

/// Sign changes of `f` on a grid of step `h` over `[a, b]`, each refined by
/// bisection to width `tol`.
pub fn bisect_roots(f: impl Fn(f64) -> f64, a: f64, b: f64, h: f64, tol: f64) -> Vec<f64> {
    let n = ((b - a) / h).ceil() as usize;
    let mut roots = Vec::new();
    let mut x0 = a;
    let mut f0 = f(x0);
    for i in 1..=n {
        let x1 = (a + i as f64 * h).min(b);
        let f1 = f(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi, mut flo) = (x0, x1, f0);
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm * flo <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

/// `(omega(n), Omega(n))` by trial division.
pub fn trial_division(mut n: u64) -> (u8, u8) {
    let (mut w, mut o) = (0, 0);
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            w += 1;
            while n % p == 0 {
                n /= p;
                o += 1;
            }
        }
        p += 1;
    }
    if n > 1 {
        w += 1;
        o += 1;
    }
    (w, o)
}

/// Primes up to `n` by the sieve of Eratosthenes.
pub fn primes(n: usize) -> Vec<usize> {
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
