//! Summation helpers.

use num_complex::Complex64;

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

const FIXED_SHIFT: i32 = 100;

/// Exact accumulator for reciprocals `1/n`, `n <= 2^40`.
///
/// Each term is rounded once to `f64` and then added exactly into a 2^-100
/// fixed-point `i128`, so the total does not depend on summation order or on
/// how the range was split.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HarmonicAccumulator {
    fixed: i128,
}

impl HarmonicAccumulator {
    #[inline]
    pub fn add_reciprocal(&mut self, n: u64) {
        debug_assert!(n >= 1 && n <= 1 << 40);
        self.fixed += reciprocal_fixed(n);
    }

    pub fn merge(&mut self, other: &HarmonicAccumulator) {
        self.fixed += other.fixed;
    }

    pub fn value(&self) -> f64 {
        self.fixed as f64 * 2f64.powi(-FIXED_SHIFT)
    }
}

#[inline]
fn reciprocal_fixed(n: u64) -> i128 {
    // 1/n has ulp >= 2^-93 for n <= 2^40, so the scaled value is an integer.
    ((1.0 / n as f64) * 2f64.powi(FIXED_SHIFT)) as i128
}
