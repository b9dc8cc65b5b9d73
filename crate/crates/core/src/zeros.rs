//! Critical-line zeros of `L(s, chi)` for primitive characters.
//!
//! Zeros are located as sign changes of the rotated function `Z_chi(t)` on
//! a grid whose step follows the local zero spacing, refined by bisection
//! and then Illinois-style regula falsi. The result is checked against the
//! smooth zero count `(T/pi) log(qT / (2 pi e))` and can be persisted as a
//! small CSV cache.

use std::f64::consts::{E, PI};
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::characters::{character, DirichletCharacter};
use crate::error::{Error, Result};
use crate::lfunction::{EvalParams, RotatedZ};
use crate::output::fmt_f64;
use crate::VERSION;

/// Largest scan height accepted by [`scan_zeros`].
pub const MAX_HEIGHT: f64 = 1e3;
/// Target `|L(rho)|` for refinement.
pub const REFINE_TARGET: f64 = 1e-10;
/// Largest `|L(rho)|` a stored record may carry.
pub const RESIDUAL_LIMIT: f64 = 1e-9;
/// `|Z|` below which a turning point without sign change is reported.
pub const EVEN_ORDER_TOL: f64 = 1e-6;
/// Window occupancy constant `C` in the `C log(qT)` bound.
pub const WINDOW_CONSTANT: f64 = 2.0;
const DUPLICATE_GAP: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroRecord {
    /// Ordinate: the zero is at `1/2 + i gamma`.
    pub gamma: f64,
    pub l_prime: Complex64,
    /// `|L(1/2 + i gamma)|` after refinement.
    pub refine_residual: f64,
    /// `(q, character index)`.
    pub char_id: (u64, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCache {
    pub modulus: u64,
    pub chi_index: usize,
    pub t_scanned: f64,
    pub version: String,
    pub records: Vec<ZeroRecord>,
}

impl ZeroCache {
    pub fn count(&self) -> usize {
        self.records.len()
    }

    /// Records with `|gamma| <= t0`.
    pub fn up_to(&self, t0: f64) -> impl Iterator<Item = &ZeroRecord> {
        self.records.iter().filter(move |r| r.gamma.abs() <= t0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_scanned > 0.0) {
            return Err(Error::domain("T_scanned must be positive"));
        }
        if self.records.windows(2).any(|w| w[0].gamma >= w[1].gamma) {
            return Err(Error::domain("zero ordinates must be strictly increasing"));
        }
        Ok(())
    }
}

/// A turning point of `Z` that came close to zero without a sign change.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuspectZero {
    pub t_lo: f64,
    pub t_hi: f64,
    pub min_abs_z: f64,
}

#[derive(Clone, Debug)]
pub struct ZeroScan {
    pub cache: ZeroCache,
    /// Possible multiple or even-order zeros; surfaced, not resolved.
    pub warnings: Vec<SuspectZero>,
    pub report: CountReport,
}

/// Smooth count of zeros with `|gamma| <= T` (both signs), clamped at zero.
pub fn smooth_count(q: u64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    ((t / PI) * (q as f64 * t / (2.0 * PI * E)).ln()).max(0.0)
}

/// One-sided smooth count on `[0, t]`.
fn one_sided(q: u64, t: f64) -> f64 {
    0.5 * smooth_count(q, t.abs())
}

/// Grid step at height `t`.
pub fn grid_step(q: u64, t: f64) -> f64 {
    0.25 * 2.0 * PI / ((q as f64 * (t.abs() + 10.0) / (2.0 * PI)) + E).ln()
}

#[derive(Clone, Debug, PartialEq)]
pub struct WindowOccupancy {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub expected: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountReport {
    pub count: usize,
    pub expected: f64,
    pub deviation: f64,
    /// Global allowance `2 + log(qT)`.
    pub tolerance: f64,
    /// Per-window allowance `C log(qT)`.
    pub window_limit: f64,
    pub windows: Vec<WindowOccupancy>,
    /// `Some(false)` when a real character's cache is not symmetric under
    /// `gamma -> -gamma`.
    pub symmetric: Option<bool>,
    pub passed: bool,
}

impl CountReport {
    pub fn max_window(&self) -> usize {
        self.windows.iter().map(|w| w.count).max().unwrap_or(0)
    }
}

fn unit_windows(t: f64, real: bool) -> Vec<(f64, f64)> {
    let k = t.ceil() as i64;
    let start = if real { 0 } else { -k };
    (start..k)
        .map(|i| (i as f64, ((i + 1) as f64).min(t)))
        .map(|(lo, hi)| (lo.max(-t), hi))
        .filter(|(lo, hi)| hi > lo)
        .collect()
}

fn count_in(gammas: &[f64], lo: f64, hi: f64) -> usize {
    gammas.iter().filter(|&&g| g >= lo && g < hi).count()
}

fn window_expected(q: u64, lo: f64, hi: f64) -> f64 {
    // windows never straddle zero
    if lo >= 0.0 {
        one_sided(q, hi) - one_sided(q, lo)
    } else {
        one_sided(q, lo) - one_sided(q, hi)
    }
}

fn report_for(q: u64, t: f64, gammas: &[f64], real: bool) -> CountReport {
    let count = gammas.len();
    let expected = smooth_count(q, t);
    let deviation = (count as f64 - expected).abs();
    let log_qt = (q as f64 * t).ln().max(0.0);
    let tolerance = 2.0 + log_qt;
    let window_limit = WINDOW_CONSTANT * log_qt.max(1.0);
    let windows: Vec<WindowOccupancy> = unit_windows(t, false)
        .into_iter()
        .map(|(lo, hi)| WindowOccupancy {
            lo,
            hi,
            count: count_in(gammas, lo, hi),
            expected: window_expected(q, lo, hi),
        })
        .collect();
    let symmetric = real.then(|| {
        let pos: Vec<f64> = gammas.iter().copied().filter(|&g| g > 0.0).collect();
        let neg: Vec<f64> = gammas.iter().rev().copied().filter(|&g| g < 0.0).map(|g| -g).collect();
        pos.len() == neg.len() && pos.iter().zip(&neg).all(|(a, b)| (a - b).abs() <= 1e-9 * a.max(1.0))
    });
    let passed = deviation <= tolerance
        && windows.iter().all(|w| w.count as f64 <= window_limit)
        && symmetric != Some(false);
    CountReport {
        count,
        expected,
        deviation,
        tolerance,
        window_limit,
        windows,
        symmetric,
        passed,
    }
}

/// Compares a cache with the smooth zero count. Never fails; inspect
/// [`CountReport::passed`].
pub fn count_check(cache: &ZeroCache) -> CountReport {
    let real = character(cache.modulus, cache.chi_index)
        .map(|c| c.is_real())
        .unwrap_or(false);
    let gammas: Vec<f64> = cache.records.iter().map(|r| r.gamma).collect();
    report_for(cache.modulus, cache.t_scanned, &gammas, real)
}

struct Scanner<'a> {
    z: &'a RotatedZ,
    q: u64,
}

impl Scanner<'_> {
    fn grid(&self, lo: f64, hi: f64, refine: f64) -> Vec<f64> {
        let mut ts = vec![lo];
        let mut t = lo;
        while t < hi {
            t = (t + grid_step(self.q, t) / refine).min(hi);
            ts.push(t);
        }
        ts
    }

    fn eval(&self, t: f64) -> Result<f64> {
        self.z.z(t)
    }

    /// Brackets of sign changes plus turning points near zero.
    fn brackets(&self, lo: f64, hi: f64, refine: f64) -> Result<(Vec<(f64, f64)>, Vec<SuspectZero>)> {
        let ts = self.grid(lo, hi, refine);
        let zs: Vec<f64> = ts
            .par_iter()
            .map(|&t| self.eval(t))
            .collect::<Result<Vec<f64>>>()?;
        let mut brackets = Vec::new();
        let mut suspects = Vec::new();
        for i in 0..ts.len() - 1 {
            if zs[i] == 0.0 {
                brackets.push((ts[i], ts[i]));
            } else if zs[i] * zs[i + 1] < 0.0 {
                brackets.push((ts[i], ts[i + 1]));
            }
            if i > 0
                && zs[i - 1] * zs[i] > 0.0
                && zs[i] * zs[i + 1] > 0.0
                && zs[i].abs() < zs[i - 1].abs()
                && zs[i].abs() < zs[i + 1].abs()
            {
                let (tmin, zmin) = self.minimize_abs(ts[i - 1], ts[i + 1], zs[i].signum())?;
                if zmin * zs[i] < 0.0 {
                    // two close zeros hidden between grid points
                    brackets.push((ts[i - 1], tmin));
                    brackets.push((tmin, ts[i + 1]));
                } else if zmin.abs() < EVEN_ORDER_TOL {
                    suspects.push(SuspectZero {
                        t_lo: ts[i - 1],
                        t_hi: ts[i + 1],
                        min_abs_z: zmin.abs(),
                    });
                }
            }
        }
        if zs.last() == Some(&0.0) {
            let t = *ts.last().unwrap();
            brackets.push((t, t));
        }
        Ok((brackets, suspects))
    }

    /// Golden-section minimization of `sign * Z` on `[a, b]`; stops early
    /// once the sign flips.
    fn minimize_abs(&self, mut a: f64, mut b: f64, sign: f64) -> Result<(f64, f64)> {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let mut fc = sign * self.eval(c)?;
        let mut fd = sign * self.eval(d)?;
        for _ in 0..60 {
            if fc < 0.0 {
                return Ok((c, sign * fc));
            }
            if fd < 0.0 {
                return Ok((d, sign * fd));
            }
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = sign * self.eval(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = sign * self.eval(d)?;
            }
            if b - a < 1e-12 * b.abs().max(1.0) {
                break;
            }
        }
        let (t, f) = if fc < fd { (c, fc) } else { (d, fd) };
        Ok((t, sign * f))
    }

    /// Bisection down to a narrow bracket, then Illinois regula falsi.
    fn refine(&self, mut a: f64, mut b: f64) -> Result<f64> {
        if a == b {
            return Ok(a);
        }
        let mut fa = self.eval(a)?;
        let mut fb = self.eval(b)?;
        while b - a > 1e-3 {
            let m = 0.5 * (a + b);
            let fm = self.eval(m)?;
            if fm == 0.0 {
                return Ok(m);
            }
            if fa * fm < 0.0 {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
        }
        let mut side = 0i8;
        for _ in 0..100 {
            let m = (a * fb - b * fa) / (fb - fa);
            let m = if m.is_finite() && m > a && m < b { m } else { 0.5 * (a + b) };
            let fm = self.eval(m)?;
            if fm == 0.0 || fm.abs() < 1e-15 || b - a < 4.0 * f64::EPSILON * b.abs().max(1.0) {
                return Ok(m);
            }
            if fa * fm < 0.0 {
                b = m;
                fb = fm;
                if side == -1 {
                    fa *= 0.5;
                }
                side = -1;
            } else {
                a = m;
                fa = fm;
                if side == 1 {
                    fb *= 0.5;
                }
                side = 1;
            }
        }
        Ok(if fa.abs() < fb.abs() { a } else { b })
    }

    fn record(&self, gamma: f64, char_id: (u64, usize)) -> Result<ZeroRecord> {
        let l = self.z.l_on_line(gamma)?;
        let residual = l.value.norm();
        if residual > REFINE_TARGET {
            warn!("zero at {gamma} refined only to |L| = {residual:e}");
        }
        Ok(ZeroRecord {
            gamma,
            l_prime: l.derivative,
            refine_residual: residual,
            char_id,
        })
    }

    fn scan_range(
        &self,
        lo: f64,
        hi: f64,
        refine: f64,
        char_id: (u64, usize),
    ) -> Result<(Vec<ZeroRecord>, Vec<SuspectZero>)> {
        let (brackets, suspects) = self.brackets(lo, hi, refine)?;
        let records = brackets
            .par_iter()
            .map(|&(a, b)| self.refine(a, b).and_then(|g| self.record(g, char_id)))
            .collect::<Result<Vec<_>>>()?;
        Ok((records, suspects))
    }
}

fn merge_records(into: &mut Vec<ZeroRecord>, more: Vec<ZeroRecord>) {
    into.extend(more);
    into.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
    into.dedup_by(|b, a| (b.gamma - a.gamma).abs() <= DUPLICATE_GAP);
}

fn mirrored(records: &[ZeroRecord]) -> Vec<ZeroRecord> {
    let mut out: Vec<ZeroRecord> = records
        .iter()
        .filter(|r| r.gamma > 0.0)
        .map(|r| ZeroRecord {
            gamma: -r.gamma,
            l_prime: r.l_prime.conj(),
            ..*r
        })
        .collect();
    out.extend(records.iter().copied());
    out.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
    out
}

/// All critical-line zeros with `|gamma| <= T`.
///
/// Real characters are scanned on `[0, T]` and mirrored; complex ones on
/// `[-T, T]`. Unit windows whose local count falls one or more short of the
/// smooth count, or every short window when the global check fails, are
/// rescanned with a quarter of the step before giving up.
pub fn scan_zeros(chi: &DirichletCharacter, t_max: f64, params: &EvalParams) -> Result<ZeroScan> {
    if !(t_max > 0.0 && t_max <= MAX_HEIGHT) {
        return Err(Error::domain(format!("scan height {t_max} outside (0, {MAX_HEIGHT}]")));
    }
    if chi.is_principal() {
        return Err(Error::domain("zero scan needs a non-principal character"));
    }
    let z = RotatedZ::new(chi, *params)?;
    let q = chi.modulus();
    let char_id = (q, chi.index());
    let real = chi.is_real();
    let scanner = Scanner { z: &z, q };
    let lo = if real { 0.0 } else { -t_max };

    let (mut found, mut warnings) = scanner.scan_range(lo, t_max, 1.0, char_id)?;
    let full = |found: &[ZeroRecord]| if real { mirrored(found) } else { found.to_vec() };

    let gammas: Vec<f64> = full(&found).iter().map(|r| r.gamma).collect();
    let report = report_for(q, t_max, &gammas, real);
    let side: Vec<f64> = found.iter().map(|r| r.gamma).collect();
    let windows: Vec<(f64, f64)> = unit_windows(t_max, real)
        .into_iter()
        .filter(|&(a, b)| {
            let deficit = window_expected(q, a, b) - count_in(&side, a, b) as f64;
            deficit >= 1.0 || (!report.passed && deficit > 0.0)
        })
        .collect();
    for &(a, b) in &windows {
        let (more, w) = scanner.scan_range(a, b, 4.0, char_id)?;
        merge_records(&mut found, more);
        warnings.extend(w);
    }

    let records = full(&found);
    let gammas: Vec<f64> = records.iter().map(|r| r.gamma).collect();
    let report = report_for(q, t_max, &gammas, real);
    if report.deviation > report.tolerance {
        let suspect = unit_windows(t_max, real)
            .into_iter()
            .filter(|&(a, b)| window_expected(q, a, b) > count_in(&side_of(&gammas, real), a, b) as f64)
            .collect();
        return Err(Error::MissedZeros {
            found: report.count,
            expected: report.expected,
            windows: suspect,
        });
    }
    for w in &warnings {
        warn!(
            "possible multiple or even-order zero in [{}, {}]: min |Z| = {:e}",
            w.t_lo, w.t_hi, w.min_abs_z
        );
    }
    let cache = ZeroCache {
        modulus: q,
        chi_index: chi.index(),
        t_scanned: t_max,
        version: VERSION.to_string(),
        records,
    };
    Ok(ZeroScan {
        cache,
        warnings,
        report,
    })
}

fn side_of(gammas: &[f64], real: bool) -> Vec<f64> {
    if real {
        gammas.iter().copied().filter(|&g| g >= 0.0).collect()
    } else {
        gammas.to_vec()
    }
}

/// File name used for the cache of character `(q, index)`.
pub fn cache_file_name(q: u64, index: usize) -> String {
    format!("zeros_q{q}_chi{index}.csv")
}

/// Serializes a cache; floats carry 17 significant digits.
pub fn render_cache(cache: &ZeroCache) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# q={} chi={} T={} count={} version={}",
        cache.modulus,
        cache.chi_index,
        fmt_f64(cache.t_scanned),
        cache.records.len(),
        cache.version
    );
    for r in &cache.records {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fmt_f64(r.gamma),
            fmt_f64(r.l_prime.re),
            fmt_f64(r.l_prime.im),
            fmt_f64(r.refine_residual)
        );
    }
    s
}

/// Writes `cache` to `path` through a temporary file and a rename.
pub fn store_cache(cache: &ZeroCache, path: &Path) -> Result<()> {
    cache.validate()?;
    write_atomic(path, render_cache(cache).as_bytes())
}

/// Writes `bytes` to a sibling temp file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::domain(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", file_name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

/// Parses a cache produced by [`render_cache`].
pub fn parse_cache(text: &str, path: &Path) -> Result<ZeroCache> {
    let err = |msg: String| Error::Parse {
        path: path.to_path_buf(),
        msg,
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| err("empty file".into()))?;
    let body = header
        .strip_prefix("# ")
        .ok_or_else(|| err("missing '# ' header".into()))?;
    let mut fields = std::collections::HashMap::new();
    for kv in body.split_whitespace() {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| err(format!("malformed header field {kv:?}")))?;
        fields.insert(k, v);
    }
    let get = |k: &str| fields.get(k).copied().ok_or_else(|| err(format!("header lacks {k}")));
    let modulus: u64 = get("q")?.parse().map_err(|e| err(format!("q: {e}")))?;
    let chi_index: usize = get("chi")?.parse().map_err(|e| err(format!("chi: {e}")))?;
    let t_scanned: f64 = get("T")?.parse().map_err(|e| err(format!("T: {e}")))?;
    let count: usize = get("count")?.parse().map_err(|e| err(format!("count: {e}")))?;
    let version = get("version")?.to_string();
    if version != VERSION {
        return Err(err(format!("version {version} does not match {VERSION}")));
    }
    if !text.ends_with('\n') {
        return Err(err("truncated final line".into()));
    }
    let mut records = Vec::with_capacity(count);
    for (i, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 4 {
            return Err(err(format!("row {} has {} columns", i + 1, cols.len())));
        }
        let mut v = [0f64; 4];
        for (slot, c) in v.iter_mut().zip(&cols) {
            *slot = c
                .parse()
                .map_err(|e| err(format!("row {}: {e}", i + 1)))?;
        }
        records.push(ZeroRecord {
            gamma: v[0],
            l_prime: Complex64::new(v[1], v[2]),
            refine_residual: v[3],
            char_id: (modulus, chi_index),
        });
    }
    if records.len() != count {
        return Err(err(format!("header count {count} but {} rows", records.len())));
    }
    let cache = ZeroCache {
        modulus,
        chi_index,
        t_scanned,
        version,
        records,
    };
    cache.validate().map_err(|e| err(e.to_string()))?;
    Ok(cache)
}

pub fn load_cache(path: &Path) -> Result<ZeroCache> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_cache(&text, path)
}
