use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported level on a single axis.
///
/// Points per axis are `2^level - 1` and several index computations need
/// `2^(level + 1)`, so levels are kept well inside 64-bit range.
pub const MAX_AXIS_LEVEL: u32 = 40;

/// Refinement levels of an anisotropic full grid, one entry per dimension.
///
/// Level 1 holds a single interior point, level `l` holds `2^l - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelVector(Vec<u32>);

impl LevelVector {
    pub fn new(levels: impl Into<Vec<u32>>) -> Result<Self> {
        let levels = levels.into();
        if levels.is_empty() {
            return Err(Error::InvalidLevels("at least one dimension required".into()));
        }
        if let Some(&bad) = levels.iter().find(|&&l| l == 0 || l > MAX_AXIS_LEVEL) {
            return Err(Error::InvalidLevels(format!(
                "level {bad} outside 1..={MAX_AXIS_LEVEL}"
            )));
        }
        Ok(Self(levels))
    }

    /// Isotropic level vector `(level, ..., level)`.
    pub fn isotropic(dim: usize, level: u32) -> Result<Self> {
        Self::new(vec![level; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn levels(&self) -> &[u32] {
        &self.0
    }

    pub fn level(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    pub fn level_sum(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Interior points on `axis`: `2^level - 1`.
    pub fn points_on_axis(&self, axis: usize) -> usize {
        (1usize << self.0[axis]) - 1
    }

    /// Total number of grid points, `prod(2^l_i - 1)`.
    pub fn num_points(&self) -> Result<usize> {
        self.0.iter().try_fold(1usize, |acc, &l| {
            acc.checked_mul((1usize << l) - 1).ok_or_else(|| {
                Error::Capacity(format!("point count of {self} overflows usize"))
            })
        })
    }
}

impl fmt::Display for LevelVector {
    /// Levels joined by `x`, e.g. `5x5x3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("x")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for LevelVector {
    type Err = Error;

    /// Accepts `3,2,2` as well as `3x2x2`.
    fn from_str(s: &str) -> Result<Self> {
        let levels = s
            .split([',', 'x'])
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidLevels(format!("cannot parse {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(levels)
    }
}

impl TryFrom<&[u32]> for LevelVector {
    type Error = Error;

    fn try_from(levels: &[u32]) -> Result<Self> {
        Self::new(levels.to_vec())
    }
}

/// Number of interior points for `levels`; convenience over [`LevelVector::num_points`].
pub fn num_points(levels: &LevelVector) -> Result<usize> {
    levels.num_points()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_counts() {
        assert_eq!(num_points(&LevelVector::new([3]).unwrap()).unwrap(), 7);
        assert_eq!(num_points(&LevelVector::new([1, 1, 1]).unwrap()).unwrap(), 1);
        assert_eq!(num_points(&LevelVector::new([2, 2]).unwrap()).unwrap(), 9);
    }

    #[test]
    fn rejects_invalid() {
        assert!(LevelVector::new(Vec::<u32>::new()).is_err());
        assert!(LevelVector::new([2, 0]).is_err());
        assert!(LevelVector::new([41]).is_err());
    }

    #[test]
    fn overflow_is_capacity_error() {
        let l = LevelVector::new([40, 40]).unwrap();
        assert!(matches!(l.num_points(), Err(Error::Capacity(_))));
    }

    #[test]
    fn display_and_parse() {
        let l: LevelVector = "5,5,3".parse().unwrap();
        assert_eq!(l.to_string(), "5x5x3");
        assert_eq!("5x5x3".parse::<LevelVector>().unwrap(), l);
        assert_eq!(l.level_sum(), 13);
    }
}
