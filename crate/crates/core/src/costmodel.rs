//! Analytic operation counts and the traffic model used for performance figures.
//!
//! Along an axis of level `l`, a pole has `2^l - 2` non-root points, and the
//! outermost point of each level `2..=l` has only one predecessor. A pole
//! therefore needs `2^(l+1) - 2l - 2` predecessor updates, each one addition
//! and one multiplication.

use crate::error::{Error, Result};
use crate::grid::LevelVector;

fn overflow(levels: &LevelVector) -> Error {
    Error::Capacity(format!("operation count for {levels} overflows u64"))
}

/// `sum_i per_pole(l_i) * prod_{j != i} (2^l_j - 1)` with checked arithmetic.
fn sum_over_axes(levels: &LevelVector, per_pole: impl Fn(u32) -> u64) -> Result<u64> {
    let ls = levels.levels();
    let mut total = 0u64;
    for (i, &li) in ls.iter().enumerate() {
        let poles = ls
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .try_fold(1u64, |acc, (_, &lj)| acc.checked_mul((1u64 << lj) - 1))
            .ok_or_else(|| overflow(levels))?;
        let term = per_pole(li).checked_mul(poles).ok_or_else(|| overflow(levels))?;
        total = total.checked_add(term).ok_or_else(|| overflow(levels))?;
    }
    Ok(total)
}

/// Flops of a full hierarchization: `2 sum_i (2^(l_i+1) - 2 l_i - 2) prod_{j!=i} (2^l_j - 1)`.
pub fn flop_count(levels: &LevelVector) -> Result<u64> {
    let updates = sum_over_axes(levels, |l| (1u64 << (l + 1)) - 2 * u64::from(l) - 2)?;
    updates.checked_mul(2).ok_or_else(|| overflow(levels))
}

/// Additions, unchanged by the reduced update: half the flops.
pub fn addition_count(levels: &LevelVector) -> Result<u64> {
    Ok(flop_count(levels)? / 2)
}

/// Multiplications when two-predecessor updates share one multiplication:
/// one per non-root point, `sum_i (2^l_i - 2) prod_{j!=i} (2^l_j - 1)`.
pub fn mult_count_reduced(levels: &LevelVector) -> Result<u64> {
    sum_over_axes(levels, |l| (1u64 << l) - 2)
}

/// Compulsory traffic: one read and one write of every point per axis sweep.
pub fn memory_volume_model(levels: &LevelVector, element_bytes: u64) -> Result<u64> {
    let n = levels.num_points()? as u64;
    (levels.dim() as u64)
        .checked_mul(2 * element_bytes)
        .and_then(|b| b.checked_mul(n))
        .ok_or_else(|| overflow(levels))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    pub flops: u64,
    pub additions: u64,
    pub multiplications: u64,
    pub multiplications_reduced: u64,
    pub bytes: u64,
    /// Flops per modeled byte.
    pub intensity: f64,
}

impl CostBreakdown {
    pub fn new(levels: &LevelVector, element_bytes: u64) -> Result<Self> {
        let flops = flop_count(levels)?;
        let bytes = memory_volume_model(levels, element_bytes)?;
        Ok(Self {
            flops,
            additions: flops / 2,
            multiplications: flops / 2,
            multiplications_reduced: mult_count_reduced(levels)?,
            bytes,
            intensity: flops as f64 / bytes as f64,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(l: &[u32]) -> LevelVector {
        LevelVector::new(l.to_vec()).unwrap()
    }

    #[test]
    fn flop_examples() {
        assert_eq!(flop_count(&lv(&[3])).unwrap(), 16);
        assert_eq!(flop_count(&lv(&[2, 2])).unwrap(), 24);
        assert_eq!(flop_count(&lv(&[1])).unwrap(), 0);
    }

    #[test]
    fn reduced_mult_examples() {
        assert_eq!(mult_count_reduced(&lv(&[3])).unwrap(), 6);
        assert_eq!(mult_count_reduced(&lv(&[2, 2])).unwrap(), 12);
        assert_eq!(mult_count_reduced(&lv(&[1])).unwrap(), 0);
    }

    #[test]
    fn traffic_examples() {
        assert_eq!(memory_volume_model(&lv(&[3]), 8).unwrap(), 112);
        assert_eq!(memory_volume_model(&lv(&[2, 2]), 8).unwrap(), 288);
        assert_eq!(memory_volume_model(&lv(&[1]), 8).unwrap(), 16);
    }

    #[test]
    fn breakdown_invariants() {
        let c = CostBreakdown::new(&lv(&[5, 3, 2]), 8).unwrap();
        assert_eq!(c.additions + c.multiplications, c.flops);
        assert!(c.multiplications_reduced <= c.multiplications);
        assert_eq!(c.intensity, c.flops as f64 / c.bytes as f64);
    }

    #[test]
    fn overflow_reported() {
        assert!(matches!(flop_count(&lv(&[40, 40])), Err(Error::Capacity(_))));
    }

    #[test]
    fn reduced_ratio_approaches_half_from_above() {
        // per pole (2^l - 2) / (2^(l+1) - 2l - 2), which exceeds 1/2 for l >= 2
        for d in 1..=3 {
            let mut previous = f64::INFINITY;
            for l in 8..=20 {
                let levels = LevelVector::isotropic(d, l).unwrap();
                let ratio = mult_count_reduced(&levels).unwrap() as f64
                    / addition_count(&levels).unwrap() as f64;
                assert!(ratio > 0.5 && ratio < 0.55, "d={d} l={l} ratio={ratio}");
                assert!(ratio < previous);
                previous = ratio;
            }
            assert!(previous - 0.5 < 1e-4);
        }
    }
}
