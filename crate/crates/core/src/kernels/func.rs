//! Baseline kernel navigating with an explicit level-index vector.
//!
//! Every point is addressed by a `(level, index)` pair per dimension, and
//! every buffer access goes through a full level-index to offset conversion.
//! This mirrors how general-purpose sparse grid libraries walk their data and
//! is kept deliberately unoptimized as the slow reference.

use super::sweep::Sweep;
use crate::grid::{hierarchical_level, Grid};

/// `(level, odd index)` of one grid point along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct LevelIndex {
    level: u32,
    index: u64,
}

impl LevelIndex {
    fn from_nodal(axis_level: u32, i: u64) -> Self {
        let tz = i.trailing_zeros();
        Self { level: axis_level - tz, index: i >> tz }
    }

    fn to_nodal(self, axis_level: u32) -> u64 {
        self.index << (axis_level - self.level)
    }

    /// Moves to `(level, index + delta)` and normalizes to the coarsest level
    /// naming the same point; `None` on the domain boundary.
    fn neighbour(self, delta: i64) -> Option<Self> {
        let mut index = self.index.checked_add_signed(delta)?;
        if index == 0 || index >= 1 << self.level {
            return None;
        }
        let mut level = self.level;
        while index % 2 == 0 {
            index /= 2;
            level -= 1;
        }
        Some(Self { level, index })
    }
}

fn offset_of(grid: &Grid, li: &[LevelIndex], nodal: &mut [u64]) -> usize {
    let levels = grid.levels();
    for (axis, (n, l)) in nodal.iter_mut().zip(li).enumerate() {
        *n = l.to_nodal(levels.level(axis));
    }
    grid.layout()
        .buffer_offset(levels, nodal)
        .expect("level-index vector stays inside the grid")
}

pub(crate) fn dimension<S: Sweep>(grid: &mut Grid, axis: usize) {
    let levels = grid.levels().clone();
    let dim = levels.dim();
    let axis_level = levels.level(axis);
    if axis_level == 1 {
        return;
    }
    let mut nodal_pole = vec![1u64; dim];
    let mut nodal = vec![0u64; dim];
    let mut li: Vec<LevelIndex> = (0..dim)
        .map(|k| LevelIndex::from_nodal(levels.level(k), 1))
        .collect();

    loop {
        for k in (0..dim).filter(|&k| k != axis) {
            li[k] = LevelIndex::from_nodal(levels.level(k), nodal_pole[k]);
            debug_assert_eq!(li[k].level, hierarchical_level(levels.level(k), nodal_pole[k]));
        }
        for lam in S::levels(axis_level) {
            for index in (1..1u64 << lam).step_by(2) {
                let here = LevelIndex { level: lam, index };
                li[axis] = here;
                let o = offset_of(grid, &li, &mut nodal);
                if let Some(left) = here.neighbour(-1) {
                    li[axis] = left;
                    let p = offset_of(grid, &li, &mut nodal);
                    let v = grid.values()[p];
                    grid.values_mut()[o] = S::update(grid.values()[o], v);
                }
                if let Some(right) = here.neighbour(1) {
                    li[axis] = right;
                    let p = offset_of(grid, &li, &mut nodal);
                    let v = grid.values()[p];
                    grid.values_mut()[o] = S::update(grid.values()[o], v);
                }
            }
        }

        // next pole: odometer over all axes except `axis`
        let mut k = 0;
        loop {
            if k == dim {
                return;
            }
            if k != axis && nodal_pole[k] < levels.points_on_axis(k) as u64 {
                nodal_pole[k] += 1;
                break;
            }
            nodal_pole[k] = 1;
            k += 1;
        }
    }
}
