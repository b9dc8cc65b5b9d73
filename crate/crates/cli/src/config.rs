//! Run configuration: a `key = value` file plus command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use omegabias::characters::MAX_MODULUS;
use omegabias::density::MIN_TRIALS;
use omegabias::numtheory::euler_phi;
use omegabias::sieve::{DEFAULT_RATIO, DEFAULT_SEGMENT, MAX_X};
use omegabias::zeros::MAX_HEIGHT;
use omegabias::Kind;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiSelect {
    Index(usize),
    All,
}

impl fmt::Display for ChiSelect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChiSelect::Index(i) => write!(f, "{i}"),
            ChiSelect::All => f.write_str("all"),
        }
    }
}

impl FromStr for ChiSelect {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("all") {
            Ok(ChiSelect::All)
        } else {
            s.parse().map(ChiSelect::Index).map_err(|_| format!("bad character index '{s}'"))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub x_max: u64,
    pub q: u64,
    pub chi: ChiSelect,
    pub kinds: Vec<Kind>,
    /// Zero scan height.
    pub t: f64,
    pub t0: Vec<f64>,
    pub ratio: f64,
    pub out: PathBuf,
    pub seed: u64,
    pub threads: usize,
    pub trials: usize,
    pub segment_size: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            x_max: 100_000_000,
            q: 4,
            chi: ChiSelect::Index(1),
            kinds: Kind::ALL.to_vec(),
            t: 100.0,
            t0: vec![10.0, 30.0, 50.0, 100.0],
            ratio: DEFAULT_RATIO,
            out: PathBuf::from("out"),
            seed: 1,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            trials: 10_000,
            segment_size: DEFAULT_SEGMENT,
        }
    }
}

/// Accepts plain integers and integral scientific notation such as `1e8`.
fn parse_count(key: &str, v: &str) -> Result<u64> {
    if let Ok(n) = v.parse::<u64>() {
        return Ok(n);
    }
    match v.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x < 1.8e19 => Ok(x as u64),
        _ => Err(CliError::Config(format!("{key}: expected a non-negative integer, got '{v}'"))),
    }
}

fn parse_float(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Config(format!("{key}: expected a number, got '{v}'")))
}

fn parse_list<T>(key: &str, v: &str, f: impl Fn(&str, &str) -> Result<T>) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| f(key, s))
        .collect()
}

fn parse_kind(key: &str, v: &str) -> Result<Kind> {
    v.parse().map_err(|e| CliError::Config(format!("{key}: {e}")))
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "xmax" | "x_max" => self.x_max = parse_count(key, v)?,
            "q" => self.q = parse_count(key, v)?,
            "chi" => self.chi = v.parse().map_err(CliError::Config)?,
            "kind" | "kinds" => self.kinds = parse_list(key, v, parse_kind)?,
            "T" => self.t = parse_float(key, v)?,
            "T0" => self.t0 = parse_list(key, v, parse_float)?,
            "ratio" => self.ratio = parse_float(key, v)?,
            "out" => self.out = PathBuf::from(v),
            "seed" => self.seed = parse_count(key, v)?,
            "threads" => self.threads = parse_count(key, v)? as usize,
            "trials" => self.trials = parse_count(key, v)? as usize,
            "segment" | "segment_size" => self.segment_size = parse_count(key, v)?,
            other => return Err(CliError::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Reads `key = value` lines; blank lines and `#` comments are skipped.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.x_max > MAX_X {
            return bad(format!("xmax {} exceeds 2^40", self.x_max));
        }
        if self.q == 0 || self.q > MAX_MODULUS {
            return bad(format!("q must be in 1..={MAX_MODULUS}, got {}", self.q));
        }
        if let ChiSelect::Index(i) = self.chi {
            let n = euler_phi(self.q);
            if i as u64 >= n {
                return bad(format!("chi index {i} out of range: there are {n} characters mod {}", self.q));
            }
        }
        if self.kinds.is_empty() {
            return bad("at least one kind is required".into());
        }
        if !(self.t > 0.0 && self.t <= MAX_HEIGHT) {
            return bad(format!("T must be in (0, {MAX_HEIGHT}], got {}", self.t));
        }
        if let Some(t0) = self.t0.iter().find(|&&t0| !(t0 >= 0.0 && t0 <= self.t)) {
            return bad(format!("T0 = {t0} must lie in [0, T = {}]", self.t));
        }
        if !(self.ratio > 1.0 && self.ratio < 10.0) {
            return bad(format!("ratio must be in (1, 10), got {}", self.ratio));
        }
        if self.threads == 0 {
            return bad("threads must be >= 1".into());
        }
        if self.trials < MIN_TRIALS {
            return bad(format!("trials must be >= {MIN_TRIALS}"));
        }
        if self.segment_size < 2 {
            return bad("segment size must be >= 2".into());
        }
        Ok(())
    }

    /// Settings that determine the outputs; thread count, segment size and
    /// output directory are excluded.
    pub fn canonical(&self) -> String {
        let kinds: Vec<&str> = self.kinds.iter().map(|k| k.name()).collect();
        let t0: Vec<String> = self.t0.iter().map(f64::to_string).collect();
        format!(
            "xmax={} q={} chi={} kind={} T={} T0={} ratio={} seed={} trials={}",
            self.x_max,
            self.q,
            self.chi,
            kinds.join(","),
            self.t,
            t0.join(","),
            self.ratio,
            self.seed,
            self.trials
        )
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    /// Comment lines placed at the top of every CSV.
    pub fn provenance(&self) -> Vec<String> {
        vec![
            format!("omegabias {}", omegabias::VERSION),
            format!("config_sha256={}", self.hash()),
            format!("config: {}", self.canonical()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_and_overrides() {
        let mut c = RunConfig::default();
        c.apply_str("# comment\nxmax = 1e6\nq=7\nchi = all\nT0 = 10, 20 # trailing\nkind=Omega\n")
            .unwrap();
        assert_eq!(c.x_max, 1_000_000);
        assert_eq!(c.q, 7);
        assert_eq!(c.chi, ChiSelect::All);
        assert_eq!(c.t0, vec![10.0, 20.0]);
        assert_eq!(c.kinds, vec![Kind::BigOmega]);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = RunConfig::default();
        assert!(c.apply_str("xmax = -3").is_err());
        assert!(c.apply_str("colour = red").is_err());
        assert!(c.apply_str("no equals sign").is_err());
        let mut c = RunConfig::default();
        c.chi = ChiSelect::Index(2);
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.t0 = vec![200.0];
        assert!(c.validate().is_err());
    }

    #[test]
    fn hash_ignores_threads_and_out() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.threads = 17;
        b.out = "elsewhere".into();
        b.segment_size = 4096;
        assert_eq!(a.hash(), b.hash());
        b.seed = 2;
        assert_ne!(a.hash(), b.hash());
    }
}
