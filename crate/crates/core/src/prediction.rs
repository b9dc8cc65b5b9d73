//! Explicit-formula predictions for `psi_omega(x, chi)` and `psi_Omega(x, chi)`.
//!
//! For a non-principal `chi` with `L(1/2, chi) != 0`,
//!
//! ```text
//! psi_f(x, chi) = s_f a(chi) { L(1/2) sqrt(x)/log x + (2 L(1/2) - L'(1/2)) sqrt(x)/log^2 x }
//!               + sqrt(x)/log^2 x { sum_{|gamma| <= T0} L'(rho) x^{i gamma} / (1/2 + i gamma) + Sigma(x, T0) }
//! ```
//!
//! with `s_omega = -1`, `s_Omega = +1` and `a(chi) = 1` exactly when `chi`
//! is real. `Sigma` has no computable closed form here; it is measured as
//! whatever the explicit terms miss, which also absorbs the lower-order
//! `sqrt(x)/log^3 x` contributions.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::lfunction::LValue;
use crate::zeros::ZeroCache;

/// Which prime-factor counting function is summed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// `omega(n)`, distinct prime factors.
    Omega,
    /// `Omega(n)`, prime factors with multiplicity.
    BigOmega,
}

impl Kind {
    pub const ALL: [Kind; 2] = [Kind::Omega, Kind::BigOmega];

    /// Sign in front of the deterministic block.
    pub fn main_sign(self) -> f64 {
        match self {
            Kind::Omega => -1.0,
            Kind::BigOmega => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Omega => "omega",
            Kind::BigOmega => "Omega",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" => Ok(Kind::Omega),
            "Omega" => Ok(Kind::BigOmega),
            other => Err(Error::domain(format!("unknown kind {other:?} (omega|Omega)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    pub x: f64,
    pub kind: Kind,
    /// `1` for real characters, `0` otherwise.
    pub a_chi: u8,
    pub main_deterministic: Complex64,
    pub zero_sum: Complex64,
    pub t0: f64,
}

impl Prediction {
    pub fn full(&self) -> Complex64 {
        self.main_deterministic + self.zero_sum
    }
}

/// `sqrt(x) / log^2 x`.
pub fn scale(x: f64) -> f64 {
    let l = x.ln();
    x.sqrt() / (l * l)
}

/// Precomputed explicit-formula terms for one character and truncation.
#[derive(Clone, Debug)]
pub struct Predictor {
    real: bool,
    l_half: Complex64,
    l_prime_half: Complex64,
    /// `(gamma, L'(rho) / (1/2 + i gamma))`; for real characters only
    /// `gamma > 0`, doubled by taking real parts.
    terms: Vec<(f64, Complex64)>,
    t0: f64,
}

impl Predictor {
    pub fn new(chi: &DirichletCharacter, l_half: &LValue, cache: &ZeroCache, t0: f64) -> Result<Self> {
        if chi.is_principal() {
            return Err(Error::domain("prediction needs a non-principal character"));
        }
        if (cache.modulus, cache.chi_index) != (chi.modulus(), chi.index()) {
            return Err(Error::domain(format!(
                "zero cache is for ({}, {}), not ({}, {})",
                cache.modulus,
                cache.chi_index,
                chi.modulus(),
                chi.index()
            )));
        }
        if !(t0 >= 0.0) || t0 > cache.t_scanned {
            return Err(Error::domain(format!(
                "T0 = {t0} exceeds scanned height {}",
                cache.t_scanned
            )));
        }
        let real = chi.is_real();
        let terms = cache
            .up_to(t0)
            .filter(|r| !real || r.gamma > 0.0)
            .map(|r| (r.gamma, r.l_prime / Complex64::new(0.5, r.gamma)))
            .collect();
        Ok(Predictor {
            real,
            l_half: l_half.value,
            l_prime_half: l_half.derivative,
            terms,
            t0,
        })
    }

    /// Number of zeros (counting both signs) inside `|gamma| <= T0`.
    pub fn zero_count(&self) -> usize {
        if self.real {
            2 * self.terms.len()
        } else {
            self.terms.len()
        }
    }

    /// `sum_{|gamma| <= T0} L'(rho) x^{i gamma} / (1/2 + i gamma)`, without
    /// the `sqrt(x)/log^2 x` factor.
    pub fn normalized_zero_sum(&self, x: f64) -> Complex64 {
        let lx = x.ln();
        if self.real {
            let re: f64 = self
                .terms
                .iter()
                .map(|&(g, c)| 2.0 * (c * Complex64::from_polar(1.0, g * lx)).re)
                .sum();
            Complex64::new(re, 0.0)
        } else {
            self.terms
                .iter()
                .map(|&(g, c)| c * Complex64::from_polar(1.0, g * lx))
                .sum()
        }
    }

    /// Deterministic block divided by `sqrt(x)/log^2 x`:
    /// `s_f a(chi) [L(1/2) log x + 2 L(1/2) - L'(1/2)]`.
    pub fn normalized_main(&self, x: f64, kind: Kind) -> Complex64 {
        if !self.real {
            return Complex64::new(0.0, 0.0);
        }
        kind.main_sign() * (self.l_half * x.ln() + 2.0 * self.l_half - self.l_prime_half)
    }

    pub fn at(&self, x: f64, kind: Kind) -> Result<Prediction> {
        if !(x >= 2.0) {
            return Err(Error::domain(format!("prediction needs x >= 2, got {x}")));
        }
        let s = scale(x);
        let l = x.ln();
        let main = if self.real {
            kind.main_sign()
                * (self.l_half * x.sqrt() / l + (2.0 * self.l_half - self.l_prime_half) * s)
        } else {
            Complex64::new(0.0, 0.0)
        };
        Ok(Prediction {
            x,
            kind,
            a_chi: u8::from(self.real),
            main_deterministic: main,
            zero_sum: s * self.normalized_zero_sum(x),
            t0: self.t0,
        })
    }
}

/// One prediction from scratch.
pub fn predict(
    x: f64,
    chi: &DirichletCharacter,
    kind: Kind,
    l_half: &LValue,
    cache: &ZeroCache,
    t0: f64,
) -> Result<Prediction> {
    Predictor::new(chi, l_half, cache, t0)?.at(x, kind)
}

/// Lower end `log 10^3` of the mean-square integral.
pub fn default_y0() -> f64 {
    1000f64.ln()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualSeries {
    /// `y = log x` at each used checkpoint.
    pub y: Vec<f64>,
    /// `Sigma_emp(e^y, T0)`.
    pub sigma: Vec<Complex64>,
}

impl ResidualSeries {
    /// `(1/(Y - y0)) int_{y0}^{Y} |Sigma|^2 dy` by the trapezoid rule on the
    /// grid points with `y <= Y`.
    pub fn mean_square(&self, y_end: f64) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .y
            .iter()
            .zip(&self.sigma)
            .take_while(|(y, _)| **y <= y_end * (1.0 + 1e-15))
            .map(|(&y, s)| (y, s.norm_sqr()))
            .collect();
        if pts.len() < 2 {
            return 0.0;
        }
        let integral: f64 = pts
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum();
        integral / (pts[pts.len() - 1].0 - pts[0].0)
    }

    /// Mean square over the whole grid.
    pub fn mean_square_full(&self) -> f64 {
        self.y.last().map_or(0.0, |&y| self.mean_square(y))
    }
}

/// `Sigma_emp(x, T0) = (psi_f(x) - main - zero_sum) log^2 x / sqrt(x)` over
/// checkpoints with `log x >= y0`.
pub fn residual_series(observed: &[(u64, Complex64)], predictions: &[Prediction], y0: f64) -> Result<ResidualSeries> {
    if observed.len() != predictions.len() {
        return Err(Error::domain("observation and prediction grids differ in length"));
    }
    let mut y = Vec::new();
    let mut sigma = Vec::new();
    for (&(x, psi), p) in observed.iter().zip(predictions) {
        if x as f64 != p.x {
            return Err(Error::domain(format!("grid mismatch at x = {x} vs {}", p.x)));
        }
        let lx = (x as f64).ln();
        if lx < y0 {
            continue;
        }
        y.push(lx);
        sigma.push((psi - p.full()) / scale(x as f64));
    }
    if y.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("checkpoint grid must be strictly increasing"));
    }
    Ok(ResidualSeries { y, sigma })
}

/// One row of the observed-versus-predicted comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComparisonRow {
    pub x: u64,
    pub observed: Complex64,
    pub main: Complex64,
    pub full: Complex64,
    /// `(observed - full) log^2 x / sqrt(x)`.
    pub resid_norm: Complex64,
}

impl ComparisonRow {
    /// `(observed - main) log^2 x / sqrt(x)`.
    pub fn main_resid_norm(&self) -> Complex64 {
        (self.observed - self.main) / scale(self.x as f64)
    }
}

/// Observed twists against the explicit-formula terms, one row per checkpoint.
pub fn figure_table(observed: &[(u64, Complex64)], predictor: &Predictor, kind: Kind) -> Result<Vec<ComparisonRow>> {
    observed
        .iter()
        .filter(|(x, _)| *x >= 2)
        .map(|&(x, psi)| {
            let p = predictor.at(x as f64, kind)?;
            let full = p.full();
            Ok(ComparisonRow {
                x,
                observed: psi,
                main: p.main_deterministic,
                full,
                resid_norm: (psi - full) / scale(x as f64),
            })
        })
        .collect()
}
