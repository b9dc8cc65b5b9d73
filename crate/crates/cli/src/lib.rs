//! Command-line driver: configuration, the pipeline stages and exit codes.

pub mod config;
pub mod error;
pub mod pipeline;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{ChiSelect, RunConfig};
pub use error::{CliError, Result};
pub use pipeline::{execute, Pipeline, Stage};

#[derive(Debug, Parser)]
#[command(name = "omegabias", version, about = "Character-twisted omega/Omega sums, their explicit-formula predictions and sign-set densities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum Command {
    /// Class sums and character twists: checkpoints.csv, twists.csv.
    Sieve,
    /// Critical-line zeros and L'(rho): zeros_q{q}_chi{index}.csv.
    Zeros,
    /// Observed twists against the predicted terms: compare_*.csv, meansq.csv.
    Compare,
    /// Empirical and random-phase sign-set densities: density.csv, mc.csv.
    Density,
    /// Every stage in order.
    All,
}

impl From<Command> for Stage {
    fn from(c: Command) -> Stage {
        match c {
            Command::Sieve => Stage::Sieve,
            Command::Zeros => Stage::Zeros,
            Command::Compare => Stage::Compare,
            Command::Density => Stage::Density,
            Command::All => Stage::All,
        }
    }
}

/// Flags override the config file, which overrides the defaults.
#[derive(Clone, Debug, Default, Args)]
pub struct Overrides {
    /// File of `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub xmax: Option<String>,
    #[arg(long, global = true)]
    pub q: Option<String>,
    /// Character index or `all`.
    #[arg(long, global = true)]
    pub chi: Option<String>,
    /// `omega` or `Omega`; repeatable.
    #[arg(long, global = true)]
    pub kind: Vec<String>,
    /// Zero scan height.
    #[arg(long = "T", global = true)]
    pub t: Option<String>,
    /// Zero-sum truncation heights; repeatable.
    #[arg(long = "T0", global = true)]
    pub t0: Vec<String>,
    #[arg(long, global = true)]
    pub ratio: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<String>,
    #[arg(long, global = true)]
    pub threads: Option<String>,
    /// Monte Carlo trials.
    #[arg(long, global = true)]
    pub trials: Option<String>,
    /// Sieve segment length.
    #[arg(long, global = true)]
    pub segment: Option<String>,
}

impl Overrides {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let single = [
            ("xmax", &self.xmax),
            ("q", &self.q),
            ("chi", &self.chi),
            ("T", &self.t),
            ("ratio", &self.ratio),
            ("out", &self.out),
            ("seed", &self.seed),
            ("threads", &self.threads),
            ("trials", &self.trials),
            ("segment", &self.segment),
        ];
        for (key, value) in single {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if !self.kind.is_empty() {
            cfg.set("kind", &self.kind.join(","))?;
        }
        if !self.t0.is_empty() {
            cfg.set("T0", &self.t0.join(","))?;
        }
        Ok(cfg)
    }
}

/// Resolves the configuration and runs the chosen stage.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let cfg = cli.overrides.resolve()?;
    execute(cli.command.into(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("run.conf");
        std::fs::write(&file, "xmax = 1e6\nq = 4\nT0 = 10\nseed = 9\n").unwrap();
        let cli = Cli::try_parse_from([
            "omegabias",
            "compare",
            "--config",
            file.to_str().unwrap(),
            "--T0",
            "20",
            "--T0",
            "30",
            "--kind",
            "Omega",
            "--xmax",
            "5000",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::Compare));
        let cfg = cli.overrides.resolve().unwrap();
        assert_eq!(cfg.x_max, 5000);
        assert_eq!(cfg.t0, vec![20.0, 30.0]);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.kinds, vec![omegabias::Kind::BigOmega]);
    }

    #[test]
    fn bad_flag_values_are_config_errors() {
        let cli = Cli::try_parse_from(["omegabias", "sieve", "--q", "four"]).unwrap();
        assert_eq!(run(&cli).unwrap_err().exit_code(), 2);
        let cli = Cli::try_parse_from(["omegabias", "sieve", "--config", "/nonexistent/run.conf"]).unwrap();
        assert_eq!(run(&cli).unwrap_err().exit_code(), 4);
    }
}
