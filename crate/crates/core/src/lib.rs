//! Prime-factor counting sums twisted by Dirichlet characters, the
//! L-function data that predicts them, and the resulting sign bias.
//!
//! The pipeline is: [`sieve`] computes exact per-residue-class sums of
//! `omega(n)` and `Omega(n)`; [`characters`] twists them into
//! `psi_f(x, chi) = sum_{n <= x} chi(n) f(n)`; [`lfunction`] and [`zeros`]
//! supply `L(1/2, chi)`, `L'(1/2, chi)` and the critical-line zeros with
//! `L'(rho, chi)`; [`prediction`] assembles the explicit-formula main terms
//! and measures what they miss; [`density`] estimates the logarithmic
//! density of the sign sets, empirically and under a random-phase model.

pub mod characters;
pub mod density;
pub mod error;
pub mod lfunction;
pub mod numeric;
pub mod numtheory;
pub mod output;
pub mod prediction;
pub mod sieve;
pub mod special;
pub mod zeros;

pub use num_complex::Complex64;

pub use characters::{character, enumerate_characters, DirichletCharacter};
pub use density::{li_monte_carlo, DensityReport, LiModel, McEstimate};
pub use error::{Error, Result};
pub use lfunction::{completed_lambda, hurwitz_zeta, l_value, rotated_z, EvalParams, LValue};
pub use prediction::{figure_table, predict, residual_series, Kind, Prediction, Predictor, ResidualSeries};
pub use sieve::{density_scan, sieve_run, ClassSums, EmpiricalDensity, SieveConfig};
pub use zeros::{count_check, load_cache, scan_zeros, store_cache, CountReport, ZeroCache, ZeroRecord};

/// Version string written into cache headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
