use std::fmt;
use std::str::FromStr;

use super::index::{bfs_position, rev_bfs_position};
use super::level::LevelVector;
use crate::error::{Error, Result};

/// Storage order of the points inside one axis-0 line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PoleOrder {
    /// Ascending index, `i - 1`.
    Natural,
    /// Level order with the root first.
    Bfs,
    /// Level order with the finest level first and the root last.
    RevBfs,
}

impl PoleOrder {
    /// Offset of index `i` inside a line of level `axis_level`.
    #[inline]
    pub fn position(self, axis_level: u32, i: u64) -> u64 {
        match self {
            PoleOrder::Natural => i - 1,
            PoleOrder::Bfs => bfs_position(axis_level, i),
            PoleOrder::RevBfs => rev_bfs_position(axis_level, i),
        }
    }
}

/// Memory layout of a grid buffer.
///
/// Axis 0 varies fastest. Only the order inside axis-0 lines differs between
/// kinds; axes 1.. are always lexicographic. Padded kinds append one slot to
/// every axis-0 line so that lines hold `2^l_0` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayoutKind {
    RowMajor,
    RowMajorPadded,
    Bfs1,
    Bfs1Padded,
    RevBfs1,
}

impl LayoutKind {
    pub const ALL: [LayoutKind; 5] = [
        LayoutKind::RowMajor,
        LayoutKind::RowMajorPadded,
        LayoutKind::Bfs1,
        LayoutKind::Bfs1Padded,
        LayoutKind::RevBfs1,
    ];

    pub fn is_padded(self) -> bool {
        matches!(self, LayoutKind::RowMajorPadded | LayoutKind::Bfs1Padded)
    }

    pub fn pole_order(self) -> PoleOrder {
        match self {
            LayoutKind::RowMajor | LayoutKind::RowMajorPadded => PoleOrder::Natural,
            LayoutKind::Bfs1 | LayoutKind::Bfs1Padded => PoleOrder::Bfs,
            LayoutKind::RevBfs1 => PoleOrder::RevBfs,
        }
    }

    /// Slots per axis-0 line: `n_0`, or `n_0 + 1` when padded.
    pub fn line_len(self, levels: &LevelVector) -> usize {
        levels.points_on_axis(0) + usize::from(self.is_padded())
    }

    /// Buffer length including padding.
    pub fn buffer_len(self, levels: &LevelVector) -> Result<usize> {
        let lines = levels.num_points()? / levels.points_on_axis(0);
        lines
            .checked_mul(self.line_len(levels))
            .ok_or_else(|| Error::Capacity(format!("buffer for {levels} overflows usize")))
    }

    /// Distance in the buffer between neighbouring indices on `axis`.
    pub fn stride(self, levels: &LevelVector, axis: usize) -> usize {
        if axis == 0 {
            return 1;
        }
        (1..axis).fold(self.line_len(levels), |acc, k| acc * levels.points_on_axis(k))
    }

    /// Buffer offset of a logical multi-index (1-based components).
    pub fn buffer_offset(self, levels: &LevelVector, multi_index: &[u64]) -> Result<usize> {
        if multi_index.len() != levels.dim() {
            return Err(Error::Parameter(format!(
                "multi-index has {} components, grid has {} dimensions",
                multi_index.len(),
                levels.dim()
            )));
        }
        for (axis, &i) in multi_index.iter().enumerate() {
            let max = levels.points_on_axis(axis) as u64;
            if i == 0 || i > max {
                return Err(Error::Index { axis, index: i, max });
            }
        }
        Ok(self.offset_unchecked(levels, multi_index))
    }

    #[inline]
    pub(crate) fn offset_unchecked(self, levels: &LevelVector, multi_index: &[u64]) -> usize {
        let mut offset = self.pole_order().position(levels.level(0), multi_index[0]) as usize;
        let mut stride = self.line_len(levels);
        for axis in 1..levels.dim() {
            offset += (multi_index[axis] as usize - 1) * stride;
            stride *= levels.points_on_axis(axis);
        }
        offset
    }

    /// Line offsets of indices `1..=n_0`, in index order.
    pub(crate) fn line_table(self, levels: &LevelVector) -> Vec<usize> {
        let l0 = levels.level(0);
        (1..=levels.points_on_axis(0) as u64)
            .map(|i| self.pole_order().position(l0, i) as usize)
            .collect()
    }
}

impl fmt::Display for LayoutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LayoutKind::RowMajor => "row-major",
            LayoutKind::RowMajorPadded => "row-major-padded",
            LayoutKind::Bfs1 => "bfs",
            LayoutKind::Bfs1Padded => "bfs-padded",
            LayoutKind::RevBfs1 => "rev-bfs",
        })
    }
}

impl FromStr for LayoutKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LayoutKind::ALL
            .into_iter()
            .find(|k| k.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parameter(format!("unknown layout {s:?}")))
    }
}

/// Free-function form of [`LayoutKind::buffer_offset`].
pub fn buffer_offset(layout: LayoutKind, levels: &LevelVector, multi_index: &[u64]) -> Result<usize> {
    layout.buffer_offset(levels, multi_index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::for_each_multi_index;
    use proptest::prelude::*;

    fn lv(l: &[u32]) -> LevelVector {
        LevelVector::new(l.to_vec()).unwrap()
    }

    #[test]
    fn offset_examples() {
        let l = lv(&[2, 2]);
        assert_eq!(buffer_offset(LayoutKind::RowMajor, &l, &[1, 1]).unwrap(), 0);
        assert_eq!(buffer_offset(LayoutKind::RowMajor, &l, &[3, 2]).unwrap(), 5);
        assert_eq!(buffer_offset(LayoutKind::Bfs1, &lv(&[3, 1]), &[4, 1]).unwrap(), 0);
        assert_eq!(buffer_offset(LayoutKind::RowMajorPadded, &l, &[1, 2]).unwrap(), 4);
    }

    #[test]
    fn row_major_enumeration() {
        let l = lv(&[2, 2]);
        let mut offsets = Vec::new();
        for_each_multi_index(&l, |idx| {
            offsets.push(buffer_offset(LayoutKind::RowMajor, &l, idx).unwrap());
        });
        assert_eq!(offsets, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn out_of_range_is_index_error() {
        let l = lv(&[2, 2]);
        assert!(matches!(
            buffer_offset(LayoutKind::RowMajor, &l, &[4, 1]),
            Err(Error::Index { axis: 0, index: 4, max: 3 })
        ));
        assert!(matches!(
            buffer_offset(LayoutKind::RowMajor, &l, &[1, 0]),
            Err(Error::Index { axis: 1, .. })
        ));
    }

    #[test]
    fn buffer_lengths() {
        let l = lv(&[3, 2]);
        assert_eq!(LayoutKind::RowMajor.buffer_len(&l).unwrap(), 21);
        assert_eq!(LayoutKind::Bfs1Padded.buffer_len(&l).unwrap(), 24);
        assert_eq!(LayoutKind::RowMajorPadded.stride(&l, 1), 8);
    }

    proptest! {
        #[test]
        fn offsets_are_injective(levels in prop::collection::vec(1u32..6, 1..5)) {
            let l = LevelVector::new(levels).unwrap();
            prop_assume!(l.num_points().unwrap() <= 100_000);
            for kind in LayoutKind::ALL {
                let len = kind.buffer_len(&l).unwrap();
                let mut seen = vec![false; len];
                let mut ok = true;
                for_each_multi_index(&l, |idx| {
                    let o = kind.buffer_offset(&l, idx).unwrap();
                    ok &= o < len && !seen[o];
                    seen[o] = true;
                });
                prop_assert!(ok, "{kind} not injective for {l}");
            }
        }
    }
}
