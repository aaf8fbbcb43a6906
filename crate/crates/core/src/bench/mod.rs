//! Benchmark harness: level sweeps per variant, timing and derived performance.
//!
//! Performance is always computed from the analytic flop count and wall-clock
//! time converted to cycles at a configured nominal frequency.

mod csv;
mod roofline;
mod verify;

use std::time::Instant;

pub use self::csv::{emit_csv, emit_csv_with_metadata, format_float, read_csv, CSV_HEADER};
pub use self::roofline::{emit_roofline, Ceilings, RooflinePlot};
pub use self::verify::{random_levels, verify_mode, verify_with, VerifyConfig, VerifyOutcome, VerifyReport};

use crate::costmodel::CostBreakdown;
use crate::error::{Error, Result};
use crate::grid::{Grid, LayoutKind, LevelVector};
use crate::kernels::{hierarchize, KernelVariant, VariantTag};

/// 1 GiB, the size of the largest grids examined.
pub const DEFAULT_MEM_CAP_BYTES: usize = 1 << 30;

/// Which grids a sweep visits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelSpec {
    Explicit(Vec<LevelVector>),
    /// Near-isotropic grids for every level sum in `min..=max`; leading axes
    /// take the remainder, e.g. sum 5 in 2-D gives `3x2`.
    LevelSum { dim: usize, min: u32, max: u32 },
    /// Axis 0 grows while all other axes stay at `others`; the level sum still
    /// runs over `min..=max`.
    FirstAxis { dim: usize, min: u32, max: u32, others: u32 },
}

impl LevelSpec {
    pub fn level_vectors(&self) -> Result<Vec<LevelVector>> {
        match self {
            LevelSpec::Explicit(v) => Ok(v.clone()),
            &LevelSpec::LevelSum { dim, min, max } => (min..=max)
                .map(|sum| {
                    if dim == 0 || (sum as usize) < dim {
                        return Err(Error::Config(format!(
                            "level sum {sum} too small for {dim} dimensions"
                        )));
                    }
                    let base = sum / dim as u32;
                    let extra = (sum % dim as u32) as usize;
                    LevelVector::new(
                        (0..dim).map(|k| base + u32::from(k < extra)).collect::<Vec<_>>(),
                    )
                })
                .collect(),
            &LevelSpec::FirstAxis { dim, min, max, others } => (min..=max)
                .map(|sum| {
                    let rest = others * (dim as u32).saturating_sub(1);
                    if dim == 0 || sum <= rest {
                        return Err(Error::Config(format!(
                            "level sum {sum} leaves nothing for axis 0 with {} axes at level {others}",
                            dim.saturating_sub(1)
                        )));
                    }
                    let mut l = vec![others; dim];
                    l[0] = sum - rest;
                    LevelVector::new(l)
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub grids: LevelSpec,
    pub variants: Vec<KernelVariant>,
    pub reps: usize,
    pub warmup: usize,
    pub seed: u64,
    /// Nominal clock used to turn seconds into cycles.
    pub freq_ghz: f64,
    /// Scalar compute ceiling for roofline plots.
    pub peak_flops_per_cycle: f64,
    /// Memory bandwidth ceiling for roofline plots.
    pub bandwidth_bytes_per_cycle: f64,
    /// Bytes per value in the traffic model.
    pub element_bytes: u64,
    /// Grids whose buffer exceeds this are reported as skipped.
    pub mem_cap_bytes: usize,
    /// Overrides each variant's preferred layout.
    pub layout: Option<LayoutKind>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            grids: LevelSpec::LevelSum { dim: 1, min: 10, max: 20 },
            variants: vec![VariantTag::Ind.into(), VariantTag::Bfs.into()],
            reps: 5,
            warmup: 1,
            seed: 42,
            freq_ghz: 2.7,
            peak_flops_per_cycle: 8.0,
            bandwidth_bytes_per_cycle: 4.0,
            element_bytes: 8,
            mem_cap_bytes: DEFAULT_MEM_CAP_BYTES,
            layout: None,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::Config("at least one repetition required".into()));
        }
        if !(self.freq_ghz > 0.0 && self.freq_ghz.is_finite()) {
            return Err(Error::Config(format!("frequency {} GHz must be positive", self.freq_ghz)));
        }
        if self.variants.is_empty() {
            return Err(Error::Config("no kernel variants selected".into()));
        }
        if self.element_bytes == 0 {
            return Err(Error::Config("element size must be positive".into()));
        }
        if let Some(layout) = self.layout {
            for v in &self.variants {
                v.check_layout(layout).map_err(|e| Error::Config(e.to_string()))?;
            }
        }
        self.grids.level_vectors()?;
        Ok(())
    }

    pub fn layout_for(&self, variant: &KernelVariant) -> LayoutKind {
        self.layout.unwrap_or(variant.tag.preferred_layout())
    }

    pub fn ceilings(&self) -> Ceilings {
        Ceilings {
            peak_flops_per_cycle: self.peak_flops_per_cycle,
            bandwidth_bytes_per_cycle: self.bandwidth_bytes_per_cycle,
        }
    }
}

/// One measurement row.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub variant: VariantTag,
    pub levels: LevelVector,
    pub points: usize,
    /// Buffer size including padding.
    pub bytes: usize,
    pub reps: usize,
    /// Median wall time; `None` when the grid was skipped.
    pub seconds: Option<f64>,
    pub cycles: Option<f64>,
    pub flops_model: u64,
    pub flops_per_cycle: Option<f64>,
    pub gflops: Option<f64>,
    pub intensity: f64,
    pub checksum: Option<u64>,
}

impl BenchRecord {
    pub fn is_skipped(&self) -> bool {
        self.seconds.is_none()
    }

    fn skipped(variant: VariantTag, levels: LevelVector, bytes: usize, reps: usize, cost: &CostBreakdown) -> Result<Self> {
        Ok(Self {
            variant,
            points: levels.num_points()?,
            levels,
            bytes,
            reps,
            seconds: None,
            cycles: None,
            flops_model: cost.flops,
            flops_per_cycle: None,
            gflops: None,
            intensity: cost.intensity,
            checksum: None,
        })
    }

    fn measured(mut self, seconds: f64, freq_ghz: f64, checksum: u64) -> Self {
        let cycles = seconds * freq_ghz * 1e9;
        self.seconds = Some(seconds);
        self.cycles = Some(cycles);
        self.flops_per_cycle = Some(self.flops_model as f64 / cycles);
        self.gflops = Some(self.flops_model as f64 / seconds / 1e9);
        self.checksum = Some(checksum);
        self
    }
}

/// Median of a non-empty sample; the mean of the middle pair for even sizes.
pub fn median(samples: &mut [f64]) -> f64 {
    assert!(!samples.is_empty(), "median of empty sample");
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        0.5 * (samples[n / 2 - 1] + samples[n / 2])
    }
}

/// Runs the sweep and returns one record per (grid, variant), in sweep order.
pub fn run_sweep(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    run_sweep_with(cfg, |_| {})
}

/// [`run_sweep`] with a callback invoked after every record.
///
/// Every repetition starts from the same seeded random grid with values in
/// `[-1, 1]`; copying it into the working buffer happens outside the timed
/// region.
pub fn run_sweep_with(cfg: &BenchConfig, mut progress: impl FnMut(&BenchRecord)) -> Result<Vec<BenchRecord>> {
    cfg.validate()?;
    let mut records = Vec::new();
    for levels in cfg.grids.level_vectors()? {
        let cost = CostBreakdown::new(&levels, cfg.element_bytes)?;
        for variant in &cfg.variants {
            let layout = cfg.layout_for(variant);
            let bytes = layout
                .buffer_len(&levels)?
                .checked_mul(std::mem::size_of::<f64>())
                .ok_or_else(|| Error::Capacity(format!("buffer for {levels} overflows usize")))?;
            let record = BenchRecord::skipped(variant.tag, levels.clone(), bytes, cfg.reps, &cost)?;
            let record = if bytes > cfg.mem_cap_bytes {
                record
            } else {
                let template = Grid::random(levels.clone(), layout, cfg.seed)?;
                let mut work = template.clone();
                for _ in 0..cfg.warmup {
                    work.values_mut().copy_from_slice(template.values());
                    hierarchize(&mut work, *variant, None)?;
                }
                let mut times = Vec::with_capacity(cfg.reps);
                for _ in 0..cfg.reps {
                    work.values_mut().copy_from_slice(template.values());
                    let start = Instant::now();
                    hierarchize(&mut work, *variant, None)?;
                    times.push(start.elapsed().as_secs_f64());
                }
                // clamp to one nanosecond so tiny grids never report zero time
                let seconds = median(&mut times).max(1e-9);
                record.measured(seconds, cfg.freq_ghz, work.checksum())
            };
            progress(&record);
            records.push(record);
        }
    }
    Ok(records)
}
