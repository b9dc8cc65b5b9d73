mod common;

use num_complex::Complex64;
use omegabias::prediction::{default_y0, scale};
use omegabias::sieve::geometric_checkpoints;
use omegabias::{
    character, enumerate_characters, figure_table, l_value, predict, residual_series, scan_zeros, sieve_run,
    ClassSums, DirichletCharacter, EvalParams, Kind, Predictor, SieveConfig, ZeroCache,
};

fn half(chi: &DirichletCharacter) -> omegabias::LValue {
    l_value(chi, Complex64::new(0.5, 0.0), &EvalParams::default()).unwrap()
}

fn zeros(chi: &DirichletCharacter, t: f64) -> ZeroCache {
    scan_zeros(chi, t, &EvalParams::default()).unwrap().cache
}

fn observed(sums: &ClassSums, chi: &DirichletCharacter, kind: Kind) -> Vec<(u64, Complex64)> {
    sums.checkpoints()
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let (w, o) = sums.twist_row(chi, k);
            (x, if kind == Kind::Omega { w } else { o })
        })
        .collect()
}

#[test]
fn main_term_closed_form_at_1e6() {
    let chi = character(4, 1).unwrap();
    let cache = zeros(&chi, 10.0);
    let p = predict(1e6, &chi, Kind::Omega, &half(&chi), &cache, 0.0).unwrap();
    let l = common::l_minus4(Complex64::new(0.5, 0.0)).re;
    let dl = common::five_point(|s| common::l_minus4(Complex64::new(s, 0.0)).re, 0.5, 1e-3);
    let lx = 1e6f64.ln();
    let expected = -(l * 1e3 / lx + (2.0 * l - dl) * 1e3 / (lx * lx));
    assert!((p.main_deterministic.re - expected).abs() < 1e-9 * expected.abs());
    assert_eq!(p.main_deterministic.im, 0.0);
    assert_eq!(p.zero_sum, Complex64::new(0.0, 0.0));
    assert_eq!(p.a_chi, 1);
}

#[test]
fn kinds_differ_only_in_main_sign() {
    let chi = character(4, 1).unwrap();
    let cache = zeros(&chi, 30.0);
    let l = half(&chi);
    for x in [1e3, 5e4, 1e8] {
        let a = predict(x, &chi, Kind::Omega, &l, &cache, 30.0).unwrap();
        let b = predict(x, &chi, Kind::BigOmega, &l, &cache, 30.0).unwrap();
        assert_eq!(a.main_deterministic, -b.main_deterministic);
        assert_eq!(a.zero_sum, b.zero_sum);
        let full = a.full();
        assert!(full.im.abs() < 1e-8 * (1.0 + full.re.abs()));
    }
}

#[test]
fn complex_character_below_first_zero_is_zero() {
    let chars = enumerate_characters(5).unwrap();
    let chi = chars.iter().find(|c| !c.is_real()).unwrap();
    let cache = zeros(chi, 20.0);
    let first = cache.records.iter().map(|r| r.gamma.abs()).fold(f64::INFINITY, f64::min);
    let p = predict(1e5, chi, Kind::Omega, &half(chi), &cache, 0.5 * first).unwrap();
    assert_eq!(p.full(), Complex64::new(0.0, 0.0));
    assert_eq!(p.a_chi, 0);
}

#[test]
fn conjugate_character_gives_conjugate_prediction() {
    let chars = enumerate_characters(7).unwrap();
    for chi in chars.iter().filter(|c| !c.is_real()) {
        let bar = chi.conj();
        let (c1, c2) = (zeros(chi, 40.0), zeros(&bar, 40.0));
        let (p1, p2) = (
            Predictor::new(chi, &half(chi), &c1, 40.0).unwrap(),
            Predictor::new(&bar, &half(&bar), &c2, 40.0).unwrap(),
        );
        assert_eq!(p1.zero_count(), p2.zero_count());
        for x in [2e3, 3.3e5, 7e7] {
            let a = p1.at(x, Kind::BigOmega).unwrap().full();
            let b = p2.at(x, Kind::BigOmega).unwrap().full();
            assert!((a - b.conj()).norm() < 1e-8 * (1.0 + a.norm()), "idx {} x={x}: {a} vs {b}", chi.index());
        }
    }
}

#[test]
fn truncation_nesting() {
    let chi = character(4, 1).unwrap();
    let cache = zeros(&chi, 40.0);
    let l = half(&chi);
    let x = 777_777.0;
    let hi = predict(x, &chi, Kind::Omega, &l, &cache, 35.0).unwrap().zero_sum;
    let lo = predict(x, &chi, Kind::Omega, &l, &cache, 20.0).unwrap().zero_sum;
    let direct: Complex64 = cache
        .records
        .iter()
        .filter(|r| r.gamma.abs() > 20.0 && r.gamma.abs() <= 35.0)
        .map(|r| r.l_prime * Complex64::from_polar(1.0, r.gamma * x.ln()) / Complex64::new(0.5, r.gamma))
        .sum::<Complex64>()
        * scale(x);
    assert!((hi - lo - direct).norm() < 1e-9 * (1.0 + direct.norm()));
}

#[test]
fn residual_reduces_to_observation_for_empty_prediction() {
    let chars = enumerate_characters(5).unwrap();
    let chi = chars.iter().find(|c| !c.is_real()).unwrap();
    let cache = zeros(chi, 10.0);
    let sums = sieve_run(&SieveConfig::new(100_000, 5), 1).unwrap();
    let obs = observed(&sums, chi, Kind::Omega);
    let predictor = Predictor::new(chi, &half(chi), &cache, 0.0).unwrap();
    let preds: Vec<_> = obs.iter().map(|&(x, _)| predictor.at(x as f64, Kind::Omega).unwrap()).collect();
    let series = residual_series(&obs, &preds, default_y0()).unwrap();
    assert_eq!(series.y.len(), obs.len());
    for ((x, psi), sigma) in obs.iter().zip(&series.sigma) {
        assert!((sigma * scale(*x as f64) - psi).norm() < 1e-9 * (1.0 + psi.norm()));
    }
    assert!(residual_series(&obs[1..], &preds[..obs.len() - 1], default_y0()).is_err());
    assert!(residual_series(&obs, &preds[1..], default_y0()).is_err());
}

#[test]
fn mean_square_is_stable_under_grid_refinement() {
    let chi = character(4, 1).unwrap();
    let cache = zeros(&chi, 10.0);
    let predictor = Predictor::new(&chi, &half(&chi), &cache, 10.0).unwrap();
    let x = 10_000_000;
    let m = |ratio: f64| {
        let sums = sieve_run(&SieveConfig::new(x, 4).with_checkpoints(geometric_checkpoints(x, ratio)), 1).unwrap();
        let obs = observed(&sums, &chi, Kind::BigOmega);
        let preds: Vec<_> = obs.iter().map(|&(x, _)| predictor.at(x as f64, Kind::BigOmega).unwrap()).collect();
        residual_series(&obs, &preds, default_y0()).unwrap().mean_square_full()
    };
    let (coarse, fine) = (m(1.02), m(1.01));
    assert!(coarse > 0.0);
    assert!(((coarse - fine) / coarse).abs() < 0.05, "{coarse} vs {fine}");
}

#[test]
fn figure_rows_cover_every_checkpoint() {
    let chi = character(4, 1).unwrap();
    let cache = zeros(&chi, 20.0);
    let predictor = Predictor::new(&chi, &half(&chi), &cache, 20.0).unwrap();
    let sums = sieve_run(&SieveConfig::new(50_000, 4), 1).unwrap();
    let obs = observed(&sums, &chi, Kind::BigOmega);
    let rows = figure_table(&obs, &predictor, Kind::BigOmega).unwrap();
    assert_eq!(rows.len(), obs.len());
    for (r, (x, psi)) in rows.iter().zip(&obs) {
        assert_eq!((r.x, r.observed), (*x, *psi));
        let s = scale(*x as f64);
        assert!((r.resid_norm * s - (r.observed - r.full)).norm() < 1e-9 * (1.0 + psi.norm()));
        assert!((r.main_resid_norm() * s - (r.observed - r.main)).norm() < 1e-9 * (1.0 + psi.norm()));
    }
}

#[test]
fn preconditions() {
    let chi = character(4, 1).unwrap();
    let cache = zeros(&chi, 10.0);
    let l = half(&chi);
    assert!(predict(1e4, &chi, Kind::Omega, &l, &cache, 10.5).is_err());
    assert!(predict(1.0, &chi, Kind::Omega, &l, &cache, 5.0).is_err());
    assert!(predict(1e4, &character(4, 0).unwrap(), Kind::Omega, &l, &cache, 5.0).is_err());
    assert!(predict(1e4, &character(8, 2).unwrap(), Kind::Omega, &l, &cache, 5.0).is_err());
}
