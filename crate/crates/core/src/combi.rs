//! Regular combination technique: member grids, coefficients and batch hierarchization.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Grid, LevelVector};
use crate::kernels::{hierarchize, KernelVariant};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeMember {
    pub levels: LevelVector,
    pub coefficient: i64,
}

/// Grids `|l|_1 = n - q`, `q = 0..d`, weighted by `(-1)^q binom(d - 1, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinationScheme {
    pub dim: usize,
    pub level: u32,
    pub members: Vec<SchemeMember>,
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All level vectors with entries `>= 1` summing to `sum`, lexicographic.
fn compositions(dim: usize, sum: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let remaining = dim - prefix.len();
    if remaining == 1 {
        prefix.push(sum);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 1..=sum.saturating_sub(remaining as u32 - 1) {
        prefix.push(first);
        compositions(dim, sum - first, prefix, out);
        prefix.pop();
    }
}

/// Enumerates the regular combination scheme of dimension `dim` and level `n`.
///
/// Members are ordered by diagonal (`q` ascending), then lexicographically.
pub fn enumerate_scheme(dim: usize, n: u32) -> Result<CombinationScheme> {
    if dim == 0 {
        return Err(Error::Parameter("dimension must be at least 1".into()));
    }
    if (n as usize) < dim {
        return Err(Error::Parameter(format!(
            "level {n} below dimension {dim}: no grid with all levels >= 1"
        )));
    }
    let mut members = Vec::new();
    for q in 0..dim as u32 {
        let sum = n - q;
        if (sum as usize) < dim {
            break;
        }
        let sign = if q % 2 == 0 { 1 } else { -1 };
        let coefficient = sign * binomial(dim as u64 - 1, u64::from(q)) as i64;
        let mut levels = Vec::new();
        compositions(dim, sum, &mut Vec::with_capacity(dim), &mut levels);
        for l in levels {
            members.push(SchemeMember { levels: LevelVector::new(l)?, coefficient });
        }
    }
    Ok(CombinationScheme { dim, level: n, members })
}

impl CombinationScheme {
    pub fn coefficient_sum(&self) -> i64 {
        self.members.iter().map(|m| m.coefficient).sum()
    }

    /// Samples `f` on every member grid and hierarchizes each one.
    ///
    /// Grids are independent and processed in parallel. Every grid uses the
    /// variant's preferred layout.
    pub fn hierarchize<F>(&self, f: F, variant: impl Into<KernelVariant>) -> Result<Vec<Grid>>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let variant = variant.into();
        self.members
            .par_iter()
            .map(|m| {
                let mut g = Grid::from_fn(m.levels.clone(), variant.tag.preferred_layout(), &f)?;
                hierarchize(&mut g, variant, None)?;
                Ok(g)
            })
            .collect()
    }
}

/// Free-function form of [`CombinationScheme::hierarchize`].
pub fn hierarchize_scheme<F>(
    scheme: &CombinationScheme,
    f: F,
    variant: impl Into<KernelVariant>,
) -> Result<Vec<Grid>>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    scheme.hierarchize(f, variant)
}
