//! Logarithmic density of the sign sets
//! `P_omega = {N : psi_omega(N, chi) < 0}` and `P_Omega = {N : psi_Omega(N, chi) > 0}`.
//!
//! The empirical side comes from [`crate::sieve::density_scan`]. The model
//! side assumes the positive zero ordinates are linearly independent over
//! the rationals, so `gamma y mod 2 pi` equidistributes and the normalized
//! twist behaves like
//!
//! ```text
//! s_f d(y) + sum_{0 < gamma <= T0} A_gamma cos(U_gamma),   A_gamma = 2 |L'(rho) / rho|,
//! ```
//!
//! with `U_gamma` iid uniform on `[0, 2 pi)` and drift
//! `d(y) = a(chi) [L(1/2) y + 2 L(1/2) - L'(1/2)]`. Truncation at `T0` is a
//! model error of its own.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::lfunction::LValue;
use crate::prediction::Kind;
use crate::sieve::EmpiricalDensity;
use crate::zeros::ZeroCache;

pub const MIN_TRIALS: usize = 1_000;
/// Disagreement threshold between empirical and model densities.
pub const AGREEMENT_TOL: f64 = 0.1;
const CHUNK: usize = 1024;

#[derive(Clone, Debug, PartialEq)]
pub struct LiModel {
    pub amplitudes: Vec<f64>,
    /// `a(chi) L(1/2)`.
    pub drift_slope: f64,
    /// `a(chi) (2 L(1/2) - L'(1/2))`.
    pub drift_intercept: f64,
    pub seed: u64,
}

impl LiModel {
    pub fn from_zeros(chi: &DirichletCharacter, l_half: &LValue, cache: &ZeroCache, t0: f64, seed: u64) -> Result<Self> {
        if t0 > cache.t_scanned {
            return Err(Error::domain(format!(
                "T0 = {t0} exceeds scanned height {}",
                cache.t_scanned
            )));
        }
        let amplitudes = cache
            .up_to(t0)
            .filter(|r| r.gamma > 0.0)
            .map(|r| 2.0 * (r.l_prime / Complex64::new(0.5, r.gamma)).norm())
            .collect();
        let (slope, intercept) = if chi.is_real() {
            let l = l_half.value.re;
            (l, 2.0 * l - l_half.derivative.re)
        } else {
            (0.0, 0.0)
        };
        Ok(LiModel {
            amplitudes,
            drift_slope: slope,
            drift_intercept: intercept,
            seed,
        })
    }

    pub fn drift(&self, y: f64) -> f64 {
        self.drift_slope * y + self.drift_intercept
    }

    /// Standard deviation of the oscillating part.
    pub fn oscillation_sd(&self) -> f64 {
        (self.amplitudes.iter().map(|a| 0.5 * a * a).sum::<f64>()).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub kind: Kind,
    pub y: Vec<f64>,
    /// Probability of the sign-set condition for `kind` at each `y`.
    pub p: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
}

impl McEstimate {
    /// Binomial standard error at each grid point.
    pub fn standard_errors(&self) -> Vec<f64> {
        self.p
            .iter()
            .map(|&p| (p * (1.0 - p) / self.trials as f64).sqrt())
            .collect()
    }

    /// Trapezoid mean of `p` in `y` over `[y_lo, y_hi]`.
    pub fn mean_over(&self, y_lo: f64, y_hi: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .y
            .iter()
            .zip(&self.p)
            .filter(|(y, _)| **y >= y_lo && **y <= y_hi)
            .map(|(&y, &p)| (y, p))
            .collect();
        match pts.len() {
            0 => None,
            1 => Some(pts[0].1),
            _ => {
                let area: f64 = pts
                    .windows(2)
                    .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
                    .sum();
                Some(area / (pts[pts.len() - 1].0 - pts[0].0))
            }
        }
    }
}

fn sample_chunk(model: &LiModel, chunk: usize, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    rng.set_stream(chunk as u64);
    (0..n)
        .map(|_| {
            model
                .amplitudes
                .iter()
                .map(|a| a * (TAU * rng.gen::<f64>()).cos())
                .sum()
        })
        .collect()
}

/// Random-phase estimate of the sign-set probability at each `y`.
///
/// The same `trials` samples of the oscillating part are reused for every
/// `y`, so the estimate is monotone in `y` whenever the drift is.
pub fn li_monte_carlo(model: &LiModel, y_grid: &[f64], trials: usize, kind: Kind) -> Result<McEstimate> {
    if trials < MIN_TRIALS {
        return Err(Error::domain(format!("need at least {MIN_TRIALS} trials, got {trials}")));
    }
    if model.amplitudes.is_empty() && model.drift_slope == 0.0 && model.drift_intercept == 0.0 {
        return Err(Error::Degenerate("no zeros and no drift".into()));
    }
    let chunks = trials.div_ceil(CHUNK);
    let mut samples: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| sample_chunk(model, c, CHUNK.min(trials - c * CHUNK)))
        .flatten()
        .collect();
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let p = y_grid
        .iter()
        .map(|&y| {
            let d = model.drift(y);
            let hits = match kind {
                // -d + X < 0
                Kind::Omega => samples.partition_point(|&x| x < d),
                // d + X > 0
                Kind::BigOmega => samples.len() - samples.partition_point(|&x| x <= -d),
            };
            hits as f64 / n
        })
        .collect();
    Ok(McEstimate {
        kind,
        y: y_grid.to_vec(),
        p,
        trials,
        seed: model.seed,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub x: Option<u64>,
    pub delta_omega: Option<f64>,
    pub delta_big_omega: Option<f64>,
    /// `(x, delta_omega(x), delta_Omega(x))` at each checkpoint.
    pub trace: Vec<(u64, f64, f64)>,
    pub monte_carlo: Option<McEstimate>,
    /// Trapezoid mean of the model probability over the empirical `y`-range.
    pub mc_mean: Option<f64>,
    /// Set when an empirical density and the model mean differ by more than
    /// [`AGREEMENT_TOL`].
    pub disagree_omega: bool,
    pub disagree_big_omega: bool,
}

/// Merges the empirical scan and the model estimate.
///
/// The model mean is taken over the `y`-grid points up to `log X`; under the
/// random-phase model the two sign conditions have the same law, so one
/// estimate serves both kinds.
pub fn report(empirical: Option<&EmpiricalDensity>, mc: Option<&McEstimate>) -> DensityReport {
    let x = empirical.map(|e| e.x_max);
    let delta_omega = empirical.map(EmpiricalDensity::delta_omega);
    let delta_big_omega = empirical.map(EmpiricalDensity::delta_big_omega);
    let y_hi = x.map_or(f64::INFINITY, |x| (x as f64).ln());
    let mc_mean = mc.and_then(|m| m.mean_over(f64::NEG_INFINITY, y_hi));
    let disagree = |d: Option<f64>| matches!((d, mc_mean), (Some(d), Some(m)) if (d - m).abs() > AGREEMENT_TOL);
    DensityReport {
        x,
        delta_omega,
        delta_big_omega,
        trace: empirical.map(EmpiricalDensity::trace).unwrap_or_default(),
        monte_carlo: mc.cloned(),
        mc_mean,
        disagree_omega: disagree(delta_omega),
        disagree_big_omega: disagree(delta_big_omega),
    }
}
