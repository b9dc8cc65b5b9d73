//! Dirichlet L-functions through the Hurwitz zeta function.
//!
//! `L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q)`, with each Hurwitz value
//! from an Euler-Maclaurin truncation. The `s`-derivative is the term-wise
//! derivative of the same truncation, so `L'` stays accurate at zeros of `L`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::numeric::ComplexSum;
use crate::special::{bernoulli_over_factorial, ln_gamma, MAX_BERNOULLI_HALF_INDEX};

/// Largest `|Im s|` the kernel is meant for.
pub const MAX_IMAG: f64 = 1e4;

/// Truncation parameters for the Euler-Maclaurin evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalParams {
    /// Fixed number of explicit terms; `None` picks `max(12, ceil(1.3 |Im s|) + 10)`.
    pub em_terms: Option<usize>,
    /// Number `M` of Bernoulli correction terms, `1..=30`.
    pub bernoulli_order: usize,
}

impl Default for EvalParams {
    fn default() -> Self {
        EvalParams {
            em_terms: None,
            bernoulli_order: 12,
        }
    }
}

impl EvalParams {
    pub fn terms_for(&self, s: Complex64) -> usize {
        self.em_terms
            .unwrap_or_else(|| 12.max((1.3 * s.im.abs()).ceil() as usize + 10))
    }

    fn validate(&self) -> Result<()> {
        if self.em_terms == Some(0) {
            return Err(Error::domain("em_terms must be >= 1"));
        }
        if !(1..=MAX_BERNOULLI_HALF_INDEX).contains(&self.bernoulli_order) {
            return Err(Error::domain("bernoulli_order must be in 1..=30"));
        }
        Ok(())
    }
}

/// An L-value with its `s`-derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LValue {
    pub value: Complex64,
    pub derivative: Complex64,
    /// Size of the last Euler-Maclaurin correction; a heuristic, not a bound.
    pub err_hint: f64,
}

/// `(zeta(s, a), d/ds zeta(s, a), last correction size)`.
fn hurwitz_raw(s: Complex64, a: f64, params: &EvalParams) -> (Complex64, Complex64, f64) {
    let n = params.terms_for(s);
    let mut value = ComplexSum::default();
    let mut deriv = ComplexSum::default();
    for k in 0..n {
        let ln = (k as f64 + a).ln();
        let term = (-s * ln).exp();
        value.add(term);
        deriv.add(-ln * term);
    }
    let u = n as f64 + a;
    let ln_u = u.ln();
    let u_neg_s = (-s * ln_u).exp();
    let sm1 = s - 1.0;
    // tail integral u^{1-s}/(s-1)
    let tail = u * u_neg_s / sm1;
    value.add(tail);
    deriv.add(-ln_u * tail - tail / sm1);
    // boundary term
    value.add(0.5 * u_neg_s);
    deriv.add(-0.5 * ln_u * u_neg_s);
    // Bernoulli corrections c_j (s)_{2j-1} u^{-s-2j+1}
    let coeff = bernoulli_over_factorial();
    let mut poch = s; // (s)_{1}
    let mut poch_d = Complex64::new(1.0, 0.0);
    let mut upow = u_neg_s / u; // u^{-s-1}
    let inv_u2 = 1.0 / (u * u);
    let mut last = 0.0;
    for j in 1..=params.bernoulli_order {
        let c = coeff[j];
        let t = c * poch * upow;
        value.add(t);
        deriv.add(c * upow * (poch_d - ln_u * poch));
        last = t.norm();
        // (s)_{2j+1} = (s)_{2j-1} (s + 2j - 1)(s + 2j)
        let f1 = s + (2 * j - 1) as f64;
        let f2 = s + (2 * j) as f64;
        let p1 = poch * f1;
        let p1_d = poch_d * f1 + poch;
        poch_d = p1_d * f2 + p1;
        poch = p1 * f2;
        upow *= inv_u2;
    }
    (value.value(), deriv.value(), last)
}

/// Hurwitz zeta `zeta(s, a)` and its `s`-derivative.
pub fn hurwitz_zeta(s: Complex64, a: f64, params: &EvalParams) -> Result<(Complex64, Complex64)> {
    params.validate()?;
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole);
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::domain(format!("Hurwitz parameter {a} outside (0, 1]")));
    }
    if s.im.abs() > MAX_IMAG {
        return Err(Error::domain("|Im s| beyond the supported range"));
    }
    let (v, d, _) = hurwitz_raw(s, a, params);
    Ok((v, d))
}

/// Precomputed per-character data for repeated L-evaluations.
#[derive(Clone, Debug)]
pub struct LKernel {
    modulus: u64,
    principal: bool,
    ln_q: f64,
    /// `(a / q, chi(a))` over residues coprime to `q`.
    terms: Vec<(f64, Complex64)>,
}

impl LKernel {
    pub fn new(chi: &DirichletCharacter) -> Self {
        let q = chi.modulus();
        let terms = (1..=q)
            .filter_map(|a| {
                chi.exponent(a)
                    .map(|_| (a as f64 / q as f64, chi.evaluate(a)))
            })
            .collect();
        LKernel {
            modulus: q,
            principal: chi.is_principal(),
            ln_q: (q as f64).ln(),
            terms,
        }
    }

    pub fn eval(&self, s: Complex64, params: &EvalParams) -> Result<LValue> {
        params.validate()?;
        if self.principal && s == Complex64::new(1.0, 0.0) {
            return Err(Error::Pole);
        }
        if s.im.abs() > MAX_IMAG {
            return Err(Error::domain("|Im s| beyond the supported range"));
        }
        let mut sum = ComplexSum::default();
        let mut dsum = ComplexSum::default();
        let mut err = 0.0f64;
        for &(a, c) in &self.terms {
            let (v, d, e) = hurwitz_raw(s, a, params);
            sum.add(c * v);
            dsum.add(c * d);
            err += e;
        }
        let q_neg_s = (-s * self.ln_q).exp();
        let value = q_neg_s * sum.value();
        let derivative = -self.ln_q * value + q_neg_s * dsum.value();
        Ok(LValue {
            value,
            derivative,
            err_hint: err * q_neg_s.norm(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

/// `L(s, chi)` and `L'(s, chi)`.
pub fn l_value(chi: &DirichletCharacter, s: Complex64, params: &EvalParams) -> Result<LValue> {
    LKernel::new(chi).eval(s, params)
}

fn require_primitive(chi: &DirichletCharacter) -> Result<()> {
    if chi.is_primitive() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "character ({}, {}) is not primitive",
            chi.modulus(),
            chi.index()
        )))
    }
}

/// `Lambda(s, chi) = (q/pi)^{(s+a)/2} Gamma((s+a)/2) L(s, chi)` with `a` the parity.
pub fn completed_lambda(chi: &DirichletCharacter, s: Complex64, params: &EvalParams) -> Result<Complex64> {
    require_primitive(chi)?;
    let l = l_value(chi, s, params)?.value;
    let w = (s + chi.parity() as f64) * 0.5;
    let ln_factor = w * (chi.modulus() as f64 / PI).ln() + ln_gamma(w);
    Ok(ln_factor.exp() * l)
}

/// Real-valued rotation of `L(1/2 + it, chi)` for a primitive character.
///
/// `Z(t) = Re[eps^{-1/2} (q/pi)^{it/2} Gamma(w)/|Gamma(w)| L(1/2 + it)]` with
/// `w = (1/2 + a + it)/2` and the principal square root of the root number.
#[derive(Clone, Debug)]
pub struct RotatedZ {
    kernel: LKernel,
    params: EvalParams,
    parity: u8,
    ln_q_over_pi: f64,
    half_arg_eps: f64,
    real: bool,
}

impl RotatedZ {
    pub fn new(chi: &DirichletCharacter, params: EvalParams) -> Result<Self> {
        require_primitive(chi)?;
        params.validate()?;
        let eps = chi.root_number()?;
        Ok(RotatedZ {
            kernel: LKernel::new(chi),
            params,
            parity: chi.parity(),
            ln_q_over_pi: (chi.modulus() as f64 / PI).ln(),
            half_arg_eps: 0.5 * eps.arg(),
            real: chi.is_real(),
        })
    }

    pub fn is_real_character(&self) -> bool {
        self.real
    }

    pub fn params(&self) -> &EvalParams {
        &self.params
    }

    /// Rotation angle `theta(t)` with `Z(t) = Re[e^{i theta} L(1/2 + it)]`.
    pub fn theta(&self, t: f64) -> f64 {
        let w = Complex64::new(0.25 + 0.5 * self.parity as f64, 0.5 * t);
        0.5 * t * self.ln_q_over_pi + ln_gamma(w).im - self.half_arg_eps
    }

    /// The full rotated value; its imaginary part vanishes up to rounding.
    pub fn rotated(&self, t: f64) -> Result<Complex64> {
        let l = self.l_on_line(t)?;
        Ok(Complex64::from_polar(1.0, self.theta(t)) * l.value)
    }

    pub fn z(&self, t: f64) -> Result<f64> {
        Ok(self.rotated(t)?.re)
    }

    /// `L` and `L'` at `1/2 + it`.
    pub fn l_on_line(&self, t: f64) -> Result<LValue> {
        self.kernel.eval(Complex64::new(0.5, t), &self.params)
    }
}

/// `Z_chi(t)` for a primitive character.
pub fn rotated_z(chi: &DirichletCharacter, t: f64, params: &EvalParams) -> Result<f64> {
    RotatedZ::new(chi, *params)?.z(t)
}
