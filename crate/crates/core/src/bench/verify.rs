//! Checks every kernel variant against the dense oracle.

use rand::Rng;

use super::BenchConfig;
use crate::error::{Error, Result};
use crate::grid::{Grid, LevelVector};
use crate::kernels::{hierarchize, KernelVariant, VariantTag};
use crate::oracle::{hierarchize_oracle_with_cap, max_relative_deviation, DEFAULT_ORACLE_CAP};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub grids: Vec<LevelVector>,
    pub variants: Vec<KernelVariant>,
    pub seeds: Vec<u64>,
    pub tolerance: f64,
    pub oracle_cap: usize,
}

impl VerifyConfig {
    /// Grids, variants and seed of a benchmark configuration; tolerance 1e-10.
    pub fn from_bench(cfg: &BenchConfig) -> Result<Self> {
        Ok(Self {
            grids: cfg.grids.level_vectors()?,
            variants: cfg.variants.clone(),
            seeds: vec![cfg.seed],
            tolerance: 1e-10,
            oracle_cap: DEFAULT_ORACLE_CAP,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub variant: VariantTag,
    pub levels: LevelVector,
    pub seed: u64,
    pub max_relative_deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub outcomes: Vec<VerifyOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerifyOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }

    /// Largest deviation seen per variant, in first-seen order.
    pub fn worst_per_variant(&self) -> Vec<(VariantTag, f64)> {
        let mut worst: Vec<(VariantTag, f64)> = Vec::new();
        for o in &self.outcomes {
            match worst.iter_mut().find(|w| w.0 == o.variant) {
                Some(w) => w.1 = w.1.max(o.max_relative_deviation),
                None => worst.push((o.variant, o.max_relative_deviation)),
            }
        }
        worst
    }
}

pub fn verify_mode(cfg: &VerifyConfig) -> Result<VerifyReport> {
    verify_with(cfg, |grid, variant| hierarchize(grid, variant, None))
}

/// Like [`verify_mode`] with a caller-supplied transform in place of the kernels.
pub fn verify_with(
    cfg: &VerifyConfig,
    mut kernel: impl FnMut(&mut Grid, KernelVariant) -> Result<()>,
) -> Result<VerifyReport> {
    if cfg.variants.is_empty() {
        return Err(Error::Config("no kernel variants selected".into()));
    }
    if !(cfg.tolerance >= 0.0) {
        return Err(Error::Config(format!("tolerance {} must be non-negative", cfg.tolerance)));
    }
    for levels in &cfg.grids {
        let n = levels.num_points()?;
        if n > cfg.oracle_cap {
            return Err(Error::Config(format!(
                "grid {levels} has {n} points, above the oracle cap {}",
                cfg.oracle_cap
            )));
        }
    }
    let mut report = VerifyReport::default();
    for levels in &cfg.grids {
        for &seed in &cfg.seeds {
            let nodal = Grid::random(levels.clone(), crate::grid::LayoutKind::RowMajor, seed)?;
            let expected = hierarchize_oracle_with_cap(&nodal, cfg.oracle_cap)?;
            for &variant in &cfg.variants {
                let mut g = nodal.convert_layout(variant.tag.preferred_layout());
                kernel(&mut g, variant)?;
                let dev = max_relative_deviation(&g.to_row_major(), &expected);
                report.outcomes.push(VerifyOutcome {
                    variant: variant.tag,
                    levels: levels.clone(),
                    seed,
                    max_relative_deviation: dev,
                    passed: dev <= cfg.tolerance,
                });
            }
        }
    }
    Ok(report)
}

/// Random level vector of dimension `dim` with at most `max_points` points.
pub fn random_levels(rng: &mut impl Rng, dim: usize, max_points: usize) -> LevelVector {
    loop {
        let levels: Vec<u32> = (0..dim).map(|_| rng.gen_range(1..=12)).collect();
        let l = LevelVector::new(levels).expect("levels in 1..=12");
        if l.num_points().is_ok_and(|n| n <= max_points) {
            return l;
        }
    }
}
