//! Benchmark, verification and plotting front end for the combigrid kernels.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use combigrid::bench::{
    emit_csv_with_metadata, emit_roofline, random_levels, read_csv, run_sweep_with, verify_mode,
    BenchConfig, Ceilings, LevelSpec, VerifyConfig, DEFAULT_MEM_CAP_BYTES,
};
use combigrid::combi::enumerate_scheme;
use combigrid::oracle::{evaluate_interpolant, DEFAULT_ORACLE_CAP};
use combigrid::{KernelVariant, LayoutKind, LevelVector, VariantTag};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "combigrid-bench", version, about = "Hierarchization kernel benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time hierarchization over a grid sweep and write CSV.
    Bench(BenchArgs),
    /// Compare every variant against the dense oracle.
    Verify(VerifyArgs),
    /// Render a roofline plot from benchmark CSV.
    Roofline(RooflineArgs),
    /// Print (and optionally hierarchize) a combination scheme.
    Scheme(SchemeArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Number of dimensions for level-sum sweeps.
    #[arg(long, default_value_t = 1)]
    dims: usize,
    /// Explicit level vector, e.g. `5,5,3`; repeatable.
    #[arg(long = "levels")]
    levels: Vec<String>,
    #[arg(long)]
    levelsum_min: Option<u32>,
    #[arg(long)]
    levelsum_max: Option<u32>,
    /// Grow axis 0 only; other axes stay at --aniso-other-level.
    #[arg(long)]
    aniso_first_axis: bool,
    #[arg(long, default_value_t = 2)]
    aniso_other_level: u32,
    /// Comma-separated variant names; all variants when omitted.
    #[arg(long, value_delimiter = ',')]
    variants: Vec<String>,
    /// Poles per vector step.
    #[arg(long, default_value_t = 4)]
    width: usize,
    /// Poles per unrolled step.
    #[arg(long, default_value_t = 4)]
    unroll: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    warmup: usize,
    /// Nominal clock for converting seconds to cycles.
    #[arg(long, default_value_t = 2.7)]
    freq_ghz: f64,
    #[arg(long, default_value_t = 8.0)]
    peak_flops_per_cycle: f64,
    /// Memory bandwidth for the roofline, e.g. from a STREAM run.
    #[arg(long, default_value_t = 10.8)]
    bandwidth_gbps: f64,
    #[arg(long, default_value_t = DEFAULT_MEM_CAP_BYTES)]
    mem_cap_bytes: usize,
    /// Force one layout for all variants.
    #[arg(long)]
    layout: Option<String>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Also write a roofline SVG.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Seeds per grid, starting at --seed.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Extra random grids per dimension 1..=4.
    #[arg(long, default_value_t = 0)]
    random_grids: usize,
    /// Point limit for random grids.
    #[arg(long, default_value_t = 5000)]
    max_points: usize,
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
}

#[derive(Args)]
struct RooflineArgs {
    /// Benchmark CSV.
    #[arg(long)]
    csv: PathBuf,
    /// Output SVG.
    #[arg(long)]
    plot: PathBuf,
    #[arg(long, default_value_t = 2.7)]
    freq_ghz: f64,
    #[arg(long, default_value_t = 8.0)]
    peak_flops_per_cycle: f64,
    #[arg(long, default_value_t = 10.8)]
    bandwidth_gbps: f64,
}

#[derive(Args)]
struct SchemeArgs {
    #[arg(long, default_value_t = 2)]
    dims: usize,
    /// Target level n; members satisfy |l|_1 = n - q.
    #[arg(long, default_value_t = 4)]
    level: u32,
    /// Sample prod 4x(1-x) on every member and hierarchize with this variant.
    #[arg(long)]
    hierarchize: Option<String>,
}

enum Failure {
    Verification,
    Config(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Config(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

impl GridArgs {
    fn variants(&self) -> Result<Vec<KernelVariant>, Failure> {
        if self.variants.is_empty() {
            return Ok(KernelVariant::all()
                .map(|v| v.with_width(self.width)?.with_unroll(self.unroll))
                .collect::<Result<_, _>>()?);
        }
        self.variants
            .iter()
            .map(|s| {
                let tag: VariantTag = s.parse()?;
                Ok(KernelVariant::new(tag).with_width(self.width)?.with_unroll(self.unroll)?)
            })
            .collect()
    }

    fn spec(&self) -> Result<LevelSpec, Failure> {
        if !self.levels.is_empty() {
            if self.levelsum_min.is_some() || self.levelsum_max.is_some() {
                return Err(Failure::Config("--levels and --levelsum-* are exclusive".into()));
            }
            let levels = self
                .levels
                .iter()
                .map(|s| s.parse::<LevelVector>())
                .collect::<Result<_, _>>()?;
            return Ok(LevelSpec::Explicit(levels));
        }
        let (Some(min), Some(max)) = (self.levelsum_min, self.levelsum_max) else {
            return Err(Failure::Config(
                "give --levels or both --levelsum-min and --levelsum-max".into(),
            ));
        };
        if min > max {
            return Err(Failure::Config(format!("--levelsum-min {min} above --levelsum-max {max}")));
        }
        Ok(if self.aniso_first_axis {
            LevelSpec::FirstAxis { dim: self.dims, min, max, others: self.aniso_other_level }
        } else {
            LevelSpec::LevelSum { dim: self.dims, min, max }
        })
    }
}

fn bench(args: BenchArgs) -> CliResult {
    let cfg = BenchConfig {
        grids: args.grid.spec()?,
        variants: args.grid.variants()?,
        reps: args.reps,
        warmup: args.warmup,
        seed: args.grid.seed,
        freq_ghz: args.freq_ghz,
        peak_flops_per_cycle: args.peak_flops_per_cycle,
        bandwidth_bytes_per_cycle: args.bandwidth_gbps / args.freq_ghz,
        element_bytes: 8,
        mem_cap_bytes: args.mem_cap_bytes,
        layout: args.layout.as_deref().map(str::parse::<LayoutKind>).transpose()?,
    };
    let records = run_sweep_with(&cfg, |r| match r.flops_per_cycle {
        Some(p) => eprintln!("{:<42} {:>12} {:>10.4} flops/cycle", r.variant, r.levels, p),
        None => eprintln!("{:<42} {:>12} skipped ({} bytes over cap)", r.variant, r.levels, r.bytes),
    })?;
    let metadata = [
        ("aggregation", format!("median of {} repetitions", cfg.reps)),
        ("warmup", cfg.warmup.to_string()),
        ("seed", cfg.seed.to_string()),
        ("freq_ghz", cfg.freq_ghz.to_string()),
        ("flops", "calculated from the analytic count".to_string()),
    ];
    let text = emit_csv_with_metadata(&records, &metadata)?;
    match &args.csv {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    if let Some(path) = &args.plot {
        let plot = emit_roofline(&records, &cfg.ceilings())?;
        for w in &plot.warnings {
            eprintln!("warning: {w}");
        }
        fs::write(path, plot.svg)?;
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> CliResult {
    let mut grids = match args.grid.spec() {
        Ok(spec) => spec.level_vectors()?,
        Err(_) if args.random_grids > 0 => Vec::new(),
        Err(e) => return Err(e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.grid.seed);
    for d in 1..=4 {
        for _ in 0..args.random_grids {
            grids.push(random_levels(&mut rng, d, args.max_points));
        }
    }
    let cfg = VerifyConfig {
        grids,
        variants: args.grid.variants()?,
        seeds: (args.grid.seed..args.grid.seed + args.seeds.max(1)).collect(),
        tolerance: args.tolerance,
        oracle_cap: DEFAULT_ORACLE_CAP,
    };
    let report = verify_mode(&cfg)?;
    for (variant, worst) in report.worst_per_variant() {
        let ok = report.failures().all(|o| o.variant != variant);
        println!(
            "{} {:<42} max relative deviation {:.3e}",
            if ok { "PASS" } else { "FAIL" },
            variant,
            worst
        );
    }
    for f in report.failures() {
        println!(
            "failed: {} on {} seed {}: {:.3e} > {:.1e}",
            f.variant, f.levels, f.seed, f.max_relative_deviation, args.tolerance
        );
    }
    println!("{} checks over {} grids", report.outcomes.len(), cfg.grids.len());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn roofline(args: RooflineArgs) -> CliResult {
    if !(args.freq_ghz > 0.0) {
        return Err(Failure::Config("--freq-ghz must be positive".into()));
    }
    let records = read_csv(&fs::read_to_string(&args.csv)?)?;
    let ceilings = Ceilings {
        peak_flops_per_cycle: args.peak_flops_per_cycle,
        bandwidth_bytes_per_cycle: args.bandwidth_gbps / args.freq_ghz,
    };
    let plot = emit_roofline(&records, &ceilings)?;
    for w in &plot.warnings {
        eprintln!("warning: {w}");
    }
    fs::write(&args.plot, plot.svg)?;
    eprintln!("{} series written to {}", plot.series, args.plot.display());
    Ok(())
}

fn scheme(args: SchemeArgs) -> CliResult {
    let scheme = enumerate_scheme(args.dims, args.level)?;
    println!("{:>16} {:>6} {:>12}", "levels", "coeff", "points");
    for m in &scheme.members {
        println!("{:>16} {:>+6} {:>12}", m.levels.to_string(), m.coefficient, m.levels.num_points()?);
    }
    println!("{} grids, coefficient sum {}", scheme.members.len(), scheme.coefficient_sum());
    if let Some(variant) = args.hierarchize {
        let tag: VariantTag = variant.parse()?;
        let f = |x: &[f64]| x.iter().map(|&t| 4.0 * t * (1.0 - t)).product::<f64>();
        let grids = scheme.hierarchize(f, tag)?;
        let center = vec![0.5; args.dims];
        let combined: f64 = scheme
            .members
            .iter()
            .zip(&grids)
            .map(|(m, g)| m.coefficient as f64 * evaluate_interpolant(g, &center))
            .sum();
        println!("hierarchized with {tag}; combined interpolant at centre {combined} (exact {})", f(&center));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bench(a) => bench(a),
        Command::Verify(a) => verify(a),
        Command::Roofline(a) => roofline(a),
        Command::Scheme(a) => scheme(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
