//! The `sieve`, `zeros`, `compare` and `density` stages.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use log::{info, warn};
use omegabias::density::{report, DensityReport};
use omegabias::output::{self, MeanSquareRow};
use omegabias::prediction::default_y0;
use omegabias::sieve::{self, geometric_checkpoints};
use omegabias::zeros::{cache_file_name, write_atomic};
use omegabias::{
    count_check, enumerate_characters, figure_table, l_value, li_monte_carlo, load_cache,
    residual_series, scan_zeros, store_cache, ClassSums, Complex64, DirichletCharacter,
    EmpiricalDensity, EvalParams, Kind, LiModel, McEstimate, Predictor, SieveConfig, ZeroCache,
};

use crate::config::{ChiSelect, RunConfig};
use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Sieve,
    Zeros,
    Compare,
    Density,
    All,
}

/// Holds the configuration and whatever sieve products have been computed
/// so far, so that `all` sieves once.
pub struct Pipeline {
    cfg: RunConfig,
    comments: Vec<String>,
    chars: Vec<DirichletCharacter>,
    sums: Option<ClassSums>,
    densities: BTreeMap<usize, EmpiricalDensity>,
    written: Vec<PathBuf>,
}

impl Pipeline {
    pub fn new(cfg: RunConfig) -> Result<Self> {
        cfg.validate()?;
        let all = enumerate_characters(cfg.q)?;
        let chars = match cfg.chi {
            ChiSelect::All => all,
            ChiSelect::Index(i) => vec![all[i].clone()],
        };
        Ok(Pipeline {
            comments: cfg.provenance(),
            cfg,
            chars,
            sums: None,
            densities: BTreeMap::new(),
            written: Vec::new(),
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    /// Files written so far, in order.
    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn run(&mut self, stage: Stage) -> Result<()> {
        fs::create_dir_all(&self.cfg.out)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", self.cfg.out.display())))?;
        match stage {
            Stage::Sieve => self.sieve(),
            Stage::Zeros => self.zeros().map(drop),
            Stage::Compare => self.compare(),
            Stage::Density => self.density(true),
            Stage::All => {
                let first_real = self.density_characters()?.into_iter().next();
                self.ensure_sums(first_real.as_ref())?;
                self.sieve()?;
                self.zeros()?;
                self.compare()?;
                self.density(false)
            }
        }
    }

    fn sieve_config(&self) -> SieveConfig {
        SieveConfig::new(self.cfg.x_max, self.cfg.q)
            .with_checkpoints(geometric_checkpoints(self.cfg.x_max, self.cfg.ratio))
            .with_segment_size(self.cfg.segment_size)
    }

    fn ensure_sums(&mut self, density_char: Option<&DirichletCharacter>) -> Result<()> {
        if self.sums.is_none() {
            info!("sieving to {}", self.cfg.x_max);
            let out = sieve::run(&self.sieve_config(), density_char, self.cfg.threads)?;
            if let (Some(chi), Some(d)) = (density_char, out.density) {
                self.densities.insert(chi.index(), d);
            }
            self.sums = Some(out.class_sums);
        }
        Ok(())
    }

    fn ensure_density(&mut self, chi: &DirichletCharacter) -> Result<()> {
        if self.sums.is_none() {
            return self.ensure_sums(Some(chi));
        }
        if !self.densities.contains_key(&chi.index()) {
            let d = sieve::density_scan(&self.sieve_config(), chi, self.cfg.threads)?;
            self.densities.insert(chi.index(), d);
        }
        Ok(())
    }

    fn sums(&self) -> &ClassSums {
        self.sums.as_ref().expect("sieve has run")
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.cfg.out.join(name);
        write_atomic(&path, contents.as_bytes())?;
        info!("wrote {}", path.display());
        self.written.push(path);
        Ok(())
    }

    fn cache_path(&self, chi: &DirichletCharacter) -> PathBuf {
        self.cfg.out.join(cache_file_name(chi.modulus(), chi.index()))
    }

    /// Characters whose zeros can be scanned. An explicitly requested
    /// character that does not qualify is a configuration error.
    fn zero_characters(&self) -> Result<Vec<DirichletCharacter>> {
        let ok = |c: &DirichletCharacter| c.is_primitive() && !c.is_principal();
        if let ChiSelect::Index(i) = self.cfg.chi {
            if !ok(&self.chars[0]) {
                return Err(CliError::Config(format!(
                    "character {i} mod {} is not primitive and non-principal; zeros, compare and density need one",
                    self.cfg.q
                )));
            }
        }
        Ok(self.chars.iter().filter(|c| ok(c)).cloned().collect())
    }

    fn density_characters(&self) -> Result<Vec<DirichletCharacter>> {
        Ok(self.zero_characters()?.into_iter().filter(|c| c.is_real()).collect())
    }

    fn sieve(&mut self) -> Result<()> {
        self.ensure_sums(None)?;
        let checkpoints = output::checkpoints_csv(self.sums(), &self.comments);
        let twists = output::twists_csv(self.sums(), &self.chars, &self.comments);
        self.write("checkpoints.csv", &checkpoints)?;
        self.write("twists.csv", &twists)
    }

    /// Loads each cache that covers `T`, scanning and storing the others,
    /// and runs the count check on every one.
    fn zeros(&mut self) -> Result<Vec<ZeroCache>> {
        let mut caches = Vec::new();
        for chi in self.zero_characters()? {
            let path = self.cache_path(&chi);
            let existing = if path.exists() {
                let c = load_cache(&path)?;
                if (c.modulus, c.chi_index) != (chi.modulus(), chi.index()) {
                    return Err(CliError::Io(format!("{} belongs to another character", path.display())));
                }
                (c.t_scanned >= self.cfg.t).then_some(c)
            } else {
                None
            };
            let cache = match existing {
                Some(c) => {
                    info!("reusing {} (T = {})", path.display(), c.t_scanned);
                    c
                }
                None => {
                    info!("scanning zeros of chi {} mod {} up to T = {}", chi.index(), chi.modulus(), self.cfg.t);
                    let scan = scan_zeros(&chi, self.cfg.t, &EvalParams::default())?;
                    store_cache(&scan.cache, &path)?;
                    self.written.push(path.clone());
                    scan.cache
                }
            };
            let report = count_check(&cache);
            if !report.passed {
                return Err(CliError::Verification(format!(
                    "count check failed for {}: {} zeros vs smooth count {:.2} (tolerance {:.2}), largest unit window {} (limit {:.2})",
                    path.display(),
                    report.count,
                    report.expected,
                    report.tolerance,
                    report.max_window(),
                    report.window_limit
                )));
            }
            caches.push(cache);
        }
        Ok(caches)
    }

    fn require_cache(&self, chi: &DirichletCharacter, height: f64) -> Result<ZeroCache> {
        let path = self.cache_path(chi);
        if !path.exists() {
            return Err(CliError::Io(format!(
                "zero cache {} not found; run `omegabias zeros --q {} --chi {} --T {}` first",
                path.display(),
                chi.modulus(),
                chi.index(),
                self.cfg.t
            )));
        }
        let cache = load_cache(&path)?;
        if cache.t_scanned < height {
            return Err(CliError::Config(format!(
                "{} covers T = {} but T0 = {height} was requested; rerun `omegabias zeros` with a larger --T",
                path.display(),
                cache.t_scanned
            )));
        }
        Ok(cache)
    }

    fn observed(&self, chi: &DirichletCharacter, kind: Kind) -> Vec<(u64, Complex64)> {
        let sums = self.sums();
        sums.checkpoints()
            .iter()
            .enumerate()
            .filter(|(_, &x)| x >= 2)
            .map(|(k, &x)| {
                let (w, o) = sums.twist_row(chi, k);
                (x, if kind == Kind::Omega { w } else { o })
            })
            .collect()
    }

    fn compare(&mut self) -> Result<()> {
        let chars = self.zero_characters()?;
        let t0_max = self.cfg.t0.iter().copied().fold(0.0, f64::max);
        let caches: Vec<ZeroCache> = chars
            .iter()
            .map(|chi| self.require_cache(chi, t0_max))
            .collect::<Result<_>>()?;
        self.ensure_sums(None)?;
        let params = EvalParams::default();
        let mut meansq = Vec::new();
        for (chi, cache) in chars.iter().zip(&caches) {
            let l_half = l_value(chi, Complex64::new(0.5, 0.0), &params)?;
            for &kind in &self.cfg.kinds.clone() {
                let observed = self.observed(chi, kind);
                for &t0 in &self.cfg.t0.clone() {
                    let predictor = Predictor::new(chi, &l_half, cache, t0)?;
                    let rows = figure_table(&observed, &predictor, kind)?;
                    let name = output::compare_file_name(kind.name(), chi.modulus(), chi.index(), t0);
                    self.write(&name, &output::compare_csv(&rows, &self.comments))?;

                    let predictions = observed
                        .iter()
                        .map(|&(x, _)| predictor.at(x as f64, kind))
                        .collect::<omegabias::Result<Vec<_>>>()?;
                    let series = residual_series(&observed, &predictions, default_y0())?;
                    if series.y.len() >= 2 {
                        meansq.push(MeanSquareRow {
                            kind,
                            q: chi.modulus(),
                            chi_index: chi.index(),
                            t0,
                            y: *series.y.last().expect("nonempty"),
                            m: series.mean_square_full(),
                        });
                    }
                }
            }
        }
        self.write("meansq.csv", &output::meansq_csv(&meansq, &self.comments))
    }

    /// With `strict`, an explicitly chosen complex character is an error;
    /// otherwise the stage is skipped.
    fn density(&mut self, strict: bool) -> Result<()> {
        let chars = self.density_characters()?;
        if let ChiSelect::Index(i) = self.cfg.chi {
            if chars.is_empty() && !strict {
                info!("character {i} is complex; skipping density");
                return Ok(());
            }
            if chars.is_empty() {
                return Err(CliError::Config(format!(
                    "character {i} mod {} is complex; the sign sets need a real character",
                    self.cfg.q
                )));
            }
        }
        let t0 = self.cfg.t0.iter().copied().fold(0.0, f64::max);
        let caches: Vec<ZeroCache> = chars
            .iter()
            .map(|chi| self.require_cache(chi, t0))
            .collect::<Result<_>>()?;
        let params = EvalParams::default();
        let mut reports: Vec<(u64, usize, DensityReport)> = Vec::new();
        let mut summary = self.comments.clone();
        for (chi, cache) in chars.iter().zip(&caches) {
            self.ensure_density(chi)?;
            let emp = &self.densities[&chi.index()];
            let l_half = l_value(chi, Complex64::new(0.5, 0.0), &params)?;
            let model = LiModel::from_zeros(chi, &l_half, cache, t0, self.cfg.seed)?;
            let ys: Vec<f64> = emp
                .checkpoints
                .iter()
                .filter(|&&x| x >= 2)
                .map(|&x| (x as f64).ln())
                .collect();
            let mc = li_monte_carlo(&model, &ys, self.cfg.trials, Kind::Omega)?;
            let r = report(Some(emp), Some(&mc));
            if r.disagree_omega || r.disagree_big_omega {
                warn!(
                    "chi {} mod {}: empirical densities ({:?}, {:?}) and model mean {:?} differ by more than {}",
                    chi.index(),
                    chi.modulus(),
                    r.delta_omega,
                    r.delta_big_omega,
                    r.mc_mean,
                    omegabias::density::AGREEMENT_TOL
                );
            }
            summary.push(summary_line(chi, t0, &r));
            reports.push((chi.modulus(), chi.index(), r));
        }
        let dens: Vec<(u64, usize, &DensityReport)> = reports.iter().map(|(q, i, r)| (*q, *i, r)).collect();
        let mcs: Vec<(u64, usize, &McEstimate)> = reports
            .iter()
            .filter_map(|(q, i, r)| r.monte_carlo.as_ref().map(|m| (*q, *i, m)))
            .collect();
        let density = output::density_csv(&dens, &summary);
        let mc = output::mc_csv(&mcs, &self.comments);
        self.write("density.csv", &density)?;
        self.write("mc.csv", &mc)
    }
}

fn summary_line(chi: &DirichletCharacter, t0: f64, r: &DensityReport) -> String {
    let opt = |v: Option<f64>| v.map_or("absent".to_string(), output::fmt_f64);
    format!(
        "q={} chi={} T0={} delta_omega={} delta_Omega={} mc_mean={} disagree_omega={} disagree_Omega={}",
        chi.modulus(),
        chi.index(),
        t0,
        opt(r.delta_omega),
        opt(r.delta_big_omega),
        opt(r.mc_mean),
        r.disagree_omega,
        r.disagree_big_omega
    )
}

/// Runs `stage` inside a thread pool of the configured size and returns the
/// files written.
pub fn execute(stage: Stage, cfg: RunConfig) -> Result<Vec<PathBuf>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let mut p = Pipeline::new(cfg)?;
    pool.install(|| p.run(stage))?;
    Ok(p.written().to_vec())
}
