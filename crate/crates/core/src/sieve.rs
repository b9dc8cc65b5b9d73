//! Segmented sieve for `omega(n)` (distinct prime factors) and `Omega(n)`
//! (prime factors with multiplicity).
//!
//! Each segment keeps two additive counters and a residual cofactor per
//! integer. Every prime `p <= sqrt(x_max)` strikes its multiples, and every
//! power `p^j` strikes again, adding one to `Omega` and dividing `p` out of
//! the cofactor each time. A cofactor still above one at the end is a single
//! prime larger than `sqrt(x_max)`.
//!
//! The sieve feeds two consumers in the same pass: exact per-residue-class
//! sums at a set of checkpoints, and (for a real character) the running
//! twisted sums with the harmonic weight of the sign sets.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::characters::{root_of_unity, DirichletCharacter};
use crate::error::{Error, Result};
use crate::numeric::HarmonicAccumulator;
use crate::numtheory::{isqrt, primes_up_to};

/// Largest supported sieve bound.
pub const MAX_X: u64 = 1 << 40;
pub const DEFAULT_SEGMENT: u64 = 1 << 20;
pub const DEFAULT_RATIO: f64 = 1.02;
/// Smallest checkpoint of the default grid.
pub const GRID_START: u64 = 1_000;

/// Geometric checkpoint grid `round(1000 r^k)` inside `[1000, x_max]`,
/// deduplicated, with `x_max` itself appended.
pub fn geometric_checkpoints(x_max: u64, ratio: f64) -> Vec<u64> {
    assert!(ratio > 1.0, "checkpoint ratio must exceed 1");
    let mut out: Vec<u64> = Vec::new();
    let mut k = 0i32;
    loop {
        let x = (GRID_START as f64 * ratio.powi(k)).round() as u64;
        if x > x_max {
            break;
        }
        if out.last() != Some(&x) {
            out.push(x);
        }
        k += 1;
    }
    if x_max > 0 && out.last() != Some(&x_max) {
        out.push(x_max);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SieveConfig {
    pub x_max: u64,
    pub segment_size: u64,
    pub modulus: u64,
    pub checkpoints: Vec<u64>,
}

impl SieveConfig {
    /// Default segment size and the ratio-1.02 checkpoint grid.
    pub fn new(x_max: u64, modulus: u64) -> Self {
        SieveConfig {
            x_max,
            segment_size: DEFAULT_SEGMENT,
            modulus,
            checkpoints: geometric_checkpoints(x_max, DEFAULT_RATIO),
        }
    }

    pub fn with_checkpoints(mut self, checkpoints: Vec<u64>) -> Self {
        self.checkpoints = checkpoints;
        self
    }

    pub fn with_segment_size(mut self, segment_size: u64) -> Self {
        self.segment_size = segment_size;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.x_max > MAX_X {
            return Err(Error::domain(format!("x_max {} exceeds 2^40", self.x_max)));
        }
        if self.segment_size < 2 {
            return Err(Error::domain("segment_size must be >= 2"));
        }
        if self.modulus == 0 {
            return Err(Error::domain("modulus must be >= 1"));
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("checkpoints must be strictly increasing"));
        }
        if let Some(&last) = self.checkpoints.last() {
            if last > self.x_max {
                return Err(Error::domain("checkpoint beyond x_max"));
            }
        }
        if self.checkpoints.first() == Some(&0) {
            return Err(Error::domain("checkpoints must be >= 1"));
        }
        Ok(())
    }
}

/// Per-residue-class sums of `omega` and `Omega` at each checkpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSums {
    modulus: u64,
    checkpoints: Vec<u64>,
    /// `[checkpoint][residue] -> (S_omega, S_Omega)`, flattened.
    sums: Vec<[u64; 2]>,
}

impl ClassSums {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn checkpoints(&self) -> &[u64] {
        &self.checkpoints
    }

    fn position(&self, x: u64) -> Result<usize> {
        self.checkpoints
            .binary_search(&x)
            .map_err(|_| Error::domain(format!("{x} is not a stored checkpoint")))
    }

    /// Row of class sums at checkpoint index `k`.
    pub fn row(&self, k: usize) -> &[[u64; 2]] {
        let q = self.modulus as usize;
        &self.sums[k * q..(k + 1) * q]
    }

    /// `(S_omega(x; a), S_Omega(x; a))`.
    pub fn get(&self, x: u64, a: u64) -> Result<(u64, u64)> {
        let k = self.position(x)?;
        let [w, o] = self.row(k)[(a % self.modulus) as usize];
        Ok((w, o))
    }

    /// Untwisted totals `sum_{n <= x} omega(n)` and `Omega(n)`.
    pub fn totals(&self, x: u64) -> Result<(u64, u64)> {
        let k = self.position(x)?;
        Ok(self
            .row(k)
            .iter()
            .fold((0, 0), |(w, o), s| (w + s[0], o + s[1])))
    }

    /// `(psi_omega(x, chi), psi_Omega(x, chi))`.
    pub fn twist(&self, chi: &DirichletCharacter, x: u64) -> Result<(Complex64, Complex64)> {
        self.check_modulus(chi)?;
        let k = self.position(x)?;
        Ok(self.twist_row(chi, k))
    }

    /// Twist at checkpoint index `k`; exact integers are grouped by root of
    /// unity before the single complex combination.
    pub fn twist_row(&self, chi: &DirichletCharacter, k: usize) -> (Complex64, Complex64) {
        let d = chi.order() as usize;
        let mut by_exp = vec![[0u128; 2]; d];
        for (a, s) in self.row(k).iter().enumerate() {
            if let Some(e) = chi.exponent(a as u64) {
                by_exp[e as usize][0] += s[0] as u128;
                by_exp[e as usize][1] += s[1] as u128;
            }
        }
        if d <= 2 {
            let re = |i: usize| {
                let plus = by_exp[0][i] as i128;
                let minus = by_exp.get(1).map_or(0, |v| v[i] as i128);
                Complex64::new((plus - minus) as f64, 0.0)
            };
            return (re(0), re(1));
        }
        let mut out = [Complex64::new(0.0, 0.0); 2];
        for (e, v) in by_exp.iter().enumerate() {
            let z = root_of_unity(e as u64, d as u64);
            for i in 0..2 {
                out[i] += z * v[i] as f64;
            }
        }
        (out[0], out[1])
    }

    /// Exact twist for a real character.
    pub fn twist_real(&self, chi: &DirichletCharacter, x: u64) -> Result<(i128, i128)> {
        self.check_modulus(chi)?;
        if !chi.is_real() {
            return Err(Error::domain("exact integer twist needs a real character"));
        }
        let k = self.position(x)?;
        let mut out = [0i128; 2];
        for (a, s) in self.row(k).iter().enumerate() {
            let v = chi.real_value(a as u64).expect("real") as i128;
            out[0] += v * s[0] as i128;
            out[1] += v * s[1] as i128;
        }
        Ok((out[0], out[1]))
    }

    fn check_modulus(&self, chi: &DirichletCharacter) -> Result<()> {
        if chi.modulus() != self.modulus {
            return Err(Error::domain(format!(
                "character modulus {} does not match sieve modulus {}",
                chi.modulus(),
                self.modulus
            )));
        }
        Ok(())
    }
}

/// Harmonic sign-set measures for one real character.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalDensity {
    pub x_max: u64,
    /// Running `psi_omega`, `psi_Omega` at each checkpoint.
    pub psi_at_checkpoints: Vec<[i64; 2]>,
    /// `sum 1/n` over `n <= x` with `psi_omega(n) < 0`, at each checkpoint.
    pub h_omega: Vec<f64>,
    /// `sum 1/n` over `n <= x` with `psi_Omega(n) > 0`, at each checkpoint.
    pub h_big_omega: Vec<f64>,
    pub checkpoints: Vec<u64>,
    pub h_omega_total: f64,
    pub h_big_omega_total: f64,
}

impl EmpiricalDensity {
    /// `H / log X`, zero for `X <= 1`.
    pub fn normalized(h: f64, x: u64) -> f64 {
        if x <= 1 {
            0.0
        } else {
            h / (x as f64).ln()
        }
    }

    pub fn delta_omega(&self) -> f64 {
        Self::normalized(self.h_omega_total, self.x_max)
    }

    pub fn delta_big_omega(&self) -> f64 {
        Self::normalized(self.h_big_omega_total, self.x_max)
    }

    /// `(x, delta_omega(x), delta_Omega(x))` at each checkpoint.
    pub fn trace(&self) -> Vec<(u64, f64, f64)> {
        self.checkpoints
            .iter()
            .zip(self.h_omega.iter().zip(&self.h_big_omega))
            .map(|(&x, (&hw, &ho))| (x, Self::normalized(hw, x), Self::normalized(ho, x)))
            .collect()
    }
}

/// Output of one sieve run.
#[derive(Clone, Debug, PartialEq)]
pub struct SieveOutput {
    pub class_sums: ClassSums,
    pub density: Option<EmpiricalDensity>,
}

/// Prime table and segment machinery.
pub struct FactorSieve {
    x_max: u64,
    primes: Vec<u64>,
}

/// Scratch buffers for one segment.
#[derive(Default)]
pub struct SegmentBuffers {
    pub omega: Vec<u8>,
    pub big_omega: Vec<u8>,
    cofactor: Vec<u64>,
}

impl FactorSieve {
    pub fn new(x_max: u64) -> Self {
        FactorSieve {
            x_max,
            primes: primes_up_to(isqrt(x_max)),
        }
    }

    /// Fills `buf` with `omega(n)`, `Omega(n)` for `n` in `[lo, hi)`, `lo >= 1`,
    /// `hi <= x_max + 1`.
    pub fn fill(&self, lo: u64, hi: u64, buf: &mut SegmentBuffers) {
        debug_assert!(lo >= 1 && hi <= self.x_max + 1 && lo <= hi);
        let len = (hi - lo) as usize;
        buf.omega.clear();
        buf.omega.resize(len, 0);
        buf.big_omega.clear();
        buf.big_omega.resize(len, 0);
        buf.cofactor.clear();
        buf.cofactor.extend(lo..hi);
        for &p in &self.primes {
            if p * p >= hi {
                break;
            }
            let first = lo.div_ceil(p).max(1) * p;
            let mut m = first;
            while m < hi {
                let i = (m - lo) as usize;
                buf.omega[i] += 1;
                buf.big_omega[i] += 1;
                buf.cofactor[i] /= p;
                m += p;
            }
            let mut pk = p;
            while let Some(next) = pk.checked_mul(p).filter(|&v| v < hi) {
                pk = next;
                let mut m = lo.div_ceil(pk) * pk;
                while m < hi {
                    let i = (m - lo) as usize;
                    buf.big_omega[i] += 1;
                    buf.cofactor[i] /= p;
                    m += pk;
                }
            }
        }
        for i in 0..len {
            if buf.cofactor[i] > 1 {
                buf.omega[i] += 1;
                buf.big_omega[i] += 1;
            }
        }
    }

    /// `(omega(n), Omega(n))` for `n` in `[lo, hi)`.
    pub fn range(&self, lo: u64, hi: u64) -> (Vec<u8>, Vec<u8>) {
        let mut buf = SegmentBuffers::default();
        self.fill(lo.max(1), hi, &mut buf);
        let pad = usize::from(lo == 0);
        let mut w = vec![0; pad];
        let mut o = vec![0; pad];
        w.extend_from_slice(&buf.omega);
        o.extend_from_slice(&buf.big_omega);
        (w, o)
    }
}

/// Entry state for the sign-set accumulation of one segment.
#[derive(Clone, Copy)]
struct DensityEntry<'a> {
    chi: &'a [i8],
    psi: [i64; 2],
}

struct SegmentResult {
    class_delta: Vec<[u64; 2]>,
    /// `(checkpoint index, class sums from segment start through checkpoint)`.
    class_at: Vec<(usize, Vec<[u64; 2]>)>,
    density: Option<SegmentDensity>,
}

struct SegmentDensity {
    psi_exit: [i64; 2],
    harmonic: [HarmonicAccumulator; 2],
    /// `(checkpoint index, psi at checkpoint, harmonic partial through checkpoint)`.
    at: Vec<(usize, [i64; 2], [HarmonicAccumulator; 2])>,
}

fn process_segment(
    sieve: &FactorSieve,
    lo: u64,
    hi: u64,
    q: u64,
    checkpoints: &[u64],
    density: Option<DensityEntry<'_>>,
    buf: &mut SegmentBuffers,
) -> SegmentResult {
    sieve.fill(lo, hi, buf);
    let qs = q as usize;
    let mut class_delta = vec![[0u64; 2]; qs];
    let mut class_at = Vec::new();
    let mut ck = checkpoints.partition_point(|&x| x < lo);
    let mut residue = (lo % q) as usize;
    let mut psi = density.map(|d| d.psi);
    let mut harmonic = [HarmonicAccumulator::default(); 2];
    let mut dens_at = Vec::new();
    for (i, n) in (lo..hi).enumerate() {
        let w = buf.omega[i] as u64;
        let o = buf.big_omega[i] as u64;
        class_delta[residue][0] += w;
        class_delta[residue][1] += o;
        if let (Some(d), Some(psi)) = (density, psi.as_mut()) {
            let c = d.chi[residue] as i64;
            psi[0] += c * w as i64;
            psi[1] += c * o as i64;
            if psi[0] < 0 {
                harmonic[0].add_reciprocal(n);
            }
            if psi[1] > 0 {
                harmonic[1].add_reciprocal(n);
            }
        }
        if ck < checkpoints.len() && checkpoints[ck] == n {
            class_at.push((ck, class_delta.clone()));
            if let Some(psi) = psi {
                dens_at.push((ck, psi, harmonic));
            }
            ck += 1;
        }
        residue += 1;
        if residue == qs {
            residue = 0;
        }
    }
    SegmentResult {
        class_delta,
        class_at,
        density: psi.map(|psi_exit| SegmentDensity {
            psi_exit,
            harmonic,
            at: dens_at,
        }),
    }
}

fn segments(x_max: u64, size: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut lo = 1u64;
    while lo <= x_max {
        let hi = (lo + size).min(x_max + 1);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

fn add_rows(acc: &mut [[u64; 2]], delta: &[[u64; 2]]) -> Result<()> {
    for (a, d) in acc.iter_mut().zip(delta) {
        for i in 0..2 {
            a[i] = a[i]
                .checked_add(d[i])
                .ok_or(Error::Overflow("class sums"))?;
        }
    }
    Ok(())
}

fn real_table(chi: &DirichletCharacter, q: u64) -> Result<Vec<i8>> {
    if chi.modulus() != q {
        return Err(Error::domain("character modulus does not match sieve modulus"));
    }
    if !chi.is_real() {
        return Err(Error::domain(
            "sign sets are only defined for real characters",
        ));
    }
    if chi.is_principal() {
        return Err(Error::domain("density scan needs a non-principal character"));
    }
    Ok((0..q).map(|a| chi.real_value(a).unwrap() as i8).collect())
}

/// Runs the sieve, producing class sums and, if `density_char` is given, the
/// sign-set measures for that real character.
///
/// `threads == 1` is the single-threaded reference path (one pass, carried
/// state). Larger values run a two-pass scheme: per-segment class totals,
/// a prefix combine that yields each segment's entry state, then the
/// weighted accumulation. All results are exact integers or exactly summed
/// fixed-point values, so every thread count gives bit-identical output.
pub fn run(
    cfg: &SieveConfig,
    density_char: Option<&DirichletCharacter>,
    threads: usize,
) -> Result<SieveOutput> {
    cfg.validate()?;
    let q = cfg.modulus;
    let chi_table = density_char.map(|c| real_table(c, q)).transpose()?;
    let sieve = FactorSieve::new(cfg.x_max);
    let segs = segments(cfg.x_max, cfg.segment_size);
    let cps = &cfg.checkpoints;

    let results: Vec<SegmentResult> = if threads <= 1 {
        let mut buf = SegmentBuffers::default();
        let mut psi = [0i64; 2];
        let mut out = Vec::with_capacity(segs.len());
        for &(lo, hi) in &segs {
            let entry = chi_table.as_deref().map(|chi| DensityEntry { chi, psi });
            let r = process_segment(&sieve, lo, hi, q, cps, entry, &mut buf);
            if let Some(d) = &r.density {
                psi = d.psi_exit;
            }
            out.push(r);
        }
        out
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::domain(format!("thread pool: {e}")))?;
        pool.install(|| -> Result<Vec<SegmentResult>> {
            let mut first: Vec<SegmentResult> = segs
                .par_iter()
                .map_init(SegmentBuffers::default, |buf, &(lo, hi)| {
                    process_segment(&sieve, lo, hi, q, cps, None, buf)
                })
                .collect();
            if let Some(chi) = chi_table.as_deref() {
                let mut entries = Vec::with_capacity(segs.len());
                let mut psi = [0i64; 2];
                for r in &first {
                    entries.push(psi);
                    for (a, d) in r.class_delta.iter().enumerate() {
                        psi[0] += chi[a] as i64 * d[0] as i64;
                        psi[1] += chi[a] as i64 * d[1] as i64;
                    }
                }
                let second: Vec<SegmentDensity> = segs
                    .par_iter()
                    .zip(entries.par_iter())
                    .map_init(SegmentBuffers::default, |buf, (&(lo, hi), &psi)| {
                        let entry = DensityEntry { chi, psi };
                        process_segment(&sieve, lo, hi, q, cps, Some(entry), buf)
                            .density
                            .expect("density requested")
                    })
                    .collect();
                for (r, d) in first.iter_mut().zip(second) {
                    r.density = Some(d);
                }
            }
            Ok(first)
        })?
    };

    combine(cfg, results, chi_table.is_some())
}

fn combine(cfg: &SieveConfig, results: Vec<SegmentResult>, with_density: bool) -> Result<SieveOutput> {
    let qs = cfg.modulus as usize;
    let ncp = cfg.checkpoints.len();
    let mut running = vec![[0u64; 2]; qs];
    let mut sums = vec![[0u64; 2]; ncp * qs];
    let mut harmonic = [HarmonicAccumulator::default(); 2];
    let mut psi_at = vec![[0i64; 2]; ncp];
    let mut h_at = vec![[HarmonicAccumulator::default(); 2]; ncp];
    for r in results {
        for (k, partial) in &r.class_at {
            let row = &mut sums[k * qs..(k + 1) * qs];
            row.copy_from_slice(&running);
            add_rows(row, partial)?;
        }
        add_rows(&mut running, &r.class_delta)?;
        if let Some(d) = r.density {
            for (k, psi, h) in &d.at {
                psi_at[*k] = *psi;
                let mut hk = harmonic;
                hk[0].merge(&h[0]);
                hk[1].merge(&h[1]);
                h_at[*k] = hk;
            }
            harmonic[0].merge(&d.harmonic[0]);
            harmonic[1].merge(&d.harmonic[1]);
        }
    }
    let class_sums = ClassSums {
        modulus: cfg.modulus,
        checkpoints: cfg.checkpoints.clone(),
        sums,
    };
    let density = with_density.then(|| EmpiricalDensity {
        x_max: cfg.x_max,
        psi_at_checkpoints: psi_at,
        h_omega: h_at.iter().map(|h| h[0].value()).collect(),
        h_big_omega: h_at.iter().map(|h| h[1].value()).collect(),
        checkpoints: cfg.checkpoints.clone(),
        h_omega_total: harmonic[0].value(),
        h_big_omega_total: harmonic[1].value(),
    });
    Ok(SieveOutput {
        class_sums,
        density,
    })
}

/// Class sums only.
pub fn sieve_run(cfg: &SieveConfig, threads: usize) -> Result<ClassSums> {
    Ok(run(cfg, None, threads)?.class_sums)
}

/// Harmonic sign-set measures for a real non-principal character.
pub fn density_scan(
    cfg: &SieveConfig,
    chi: &DirichletCharacter,
    threads: usize,
) -> Result<EmpiricalDensity> {
    Ok(run(cfg, Some(chi), threads)?
        .density
        .expect("density requested"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{character, enumerate_characters};

    fn trial(mut n: u64) -> (u8, u8) {
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

    #[test]
    fn matches_trial_division_small() {
        let sieve = FactorSieve::new(5000);
        let mut buf = SegmentBuffers::default();
        for (lo, hi) in [(1, 5001), (17, 300), (4096, 5001)] {
            sieve.fill(lo, hi, &mut buf);
            for n in lo..hi {
                let i = (n - lo) as usize;
                assert_eq!((buf.omega[i], buf.big_omega[i]), trial(n), "n={n}");
            }
        }
    }

    #[test]
    fn toy_class_sums_mod_four() {
        let cfg = SieveConfig::new(10, 4).with_checkpoints(vec![10]);
        let sums = sieve_run(&cfg, 1).unwrap();
        assert_eq!(sums.get(10, 1).unwrap(), (2, 3));
        assert_eq!(sums.get(10, 3).unwrap(), (2, 2));
        let chi = character(4, 1).unwrap();
        let (w, o) = sums.twist(&chi, 10).unwrap();
        assert_eq!(w, Complex64::new(0.0, 0.0));
        assert_eq!(o, Complex64::new(1.0, 0.0));
        assert_eq!(sums.twist_real(&chi, 10).unwrap(), (0, 1));
    }

    #[test]
    fn x_max_one_is_all_zero() {
        let cfg = SieveConfig::new(1, 4).with_checkpoints(vec![1]);
        let sums = sieve_run(&cfg, 1).unwrap();
        for a in 0..4 {
            assert_eq!(sums.get(1, a).unwrap(), (0, 0));
        }
    }

    #[test]
    fn x_max_zero_is_empty() {
        let cfg = SieveConfig::new(0, 4);
        assert!(cfg.checkpoints.is_empty());
        let sums = sieve_run(&cfg, 1).unwrap();
        assert!(sums.checkpoints().is_empty());
    }

    #[test]
    fn principal_twist_at_thousand() {
        let cfg = SieveConfig::new(1000, 1).with_checkpoints(vec![1000]);
        let sums = sieve_run(&cfg, 1).unwrap();
        let chi = character(1, 0).unwrap();
        let (w, _) = sums.twist(&chi, 1000).unwrap();
        let oracle: u64 = (1..=1000).map(|n| trial(n).0 as u64).sum();
        assert_eq!(oracle, 2126);
        assert_eq!(w.re, 2126.0);
    }

    #[test]
    fn twist_errors() {
        let cfg = SieveConfig::new(100, 4).with_checkpoints(vec![50, 100]);
        let sums = sieve_run(&cfg, 1).unwrap();
        let chi5 = character(5, 1).unwrap();
        assert!(sums.twist(&chi5, 100).is_err());
        let chi4 = character(4, 1).unwrap();
        assert!(sums.twist(&chi4, 99).is_err());
    }

    #[test]
    fn invalid_configs() {
        let base = SieveConfig::new(100, 4);
        assert!(base.clone().with_segment_size(1).validate().is_err());
        assert!(base.clone().with_checkpoints(vec![5, 5]).validate().is_err());
        assert!(base.clone().with_checkpoints(vec![101]).validate().is_err());
        assert!(SieveConfig::new(MAX_X + 1, 4).validate().is_err());
        assert!(SieveConfig { modulus: 0, ..base }.validate().is_err());
    }

    #[test]
    fn toy_density() {
        let chi = character(4, 1).unwrap();
        let cfg = SieveConfig::new(10, 4).with_checkpoints(vec![2, 10]);
        let d = density_scan(&cfg, &chi, 1).unwrap();
        let h = 1.0 / 9.0 + 1.0 / 10.0;
        assert!((d.h_big_omega_total - h).abs() < 1e-15);
        assert_eq!(d.psi_at_checkpoints[1], [0, 1]);
        let tr = d.trace();
        assert_eq!((tr[0].1, tr[0].2), (0.0, 0.0));
        assert!((d.delta_big_omega() - h / 10f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn density_rejects_complex_and_principal() {
        let cfg = SieveConfig::new(100, 5);
        let chars = enumerate_characters(5).unwrap();
        let complex = chars.iter().find(|c| !c.is_real()).unwrap();
        assert!(density_scan(&cfg, complex, 1).is_err());
        assert!(density_scan(&cfg, &chars[0], 1).is_err());
    }

    #[test]
    fn parallel_matches_reference() {
        let chi = character(4, 1).unwrap();
        let cfg = SieveConfig::new(200_000, 4)
            .with_segment_size(4096)
            .with_checkpoints(geometric_checkpoints(200_000, 1.05));
        let a = run(&cfg, Some(&chi), 1).unwrap();
        let b = run(&cfg, Some(&chi), 4).unwrap();
        assert_eq!(a, b);
        let c = run(&cfg.clone().with_segment_size(1 << 20), Some(&chi), 3).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn geometric_grid_shape() {
        let g = geometric_checkpoints(1_000_000, 1.02);
        assert_eq!(g[0], 1000);
        assert_eq!(*g.last().unwrap(), 1_000_000);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(geometric_checkpoints(999, 1.02) == vec![999]);
    }
}
