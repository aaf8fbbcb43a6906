//! Level vectors, hierarchical index arithmetic and grid storage.

mod index;
mod layout;
mod level;

pub use index::{
    bfs_position, hierarchical_level, hierarchical_predecessors, rev_bfs_position,
    within_level_index,
};
pub use layout::{buffer_offset, LayoutKind, PoleOrder};
pub use level::{num_points, LevelVector, MAX_AXIS_LEVEL};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Calls `f` with every logical multi-index in row-major order, axis 0 fastest.
pub fn for_each_multi_index(levels: &LevelVector, mut f: impl FnMut(&[u64])) {
    let dim = levels.dim();
    let mut idx = vec![1u64; dim];
    loop {
        f(&idx);
        let mut axis = 0;
        loop {
            if axis == dim {
                return;
            }
            if idx[axis] < levels.points_on_axis(axis) as u64 {
                idx[axis] += 1;
                break;
            }
            idx[axis] = 1;
            axis += 1;
        }
    }
}

/// Coordinates `i_k * 2^-l_k` of a multi-index.
pub fn coordinates(levels: &LevelVector, multi_index: &[u64], out: &mut [f64]) {
    for (axis, (x, &i)) in out.iter_mut().zip(multi_index).enumerate() {
        *x = i as f64 / (1u64 << levels.level(axis)) as f64;
    }
}

/// A full grid without boundary points: values plus the level vector and layout
/// that locate them in the buffer.
///
/// Padding slots are initialized to zero and never read by the kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    levels: LevelVector,
    layout: LayoutKind,
    values: Vec<f64>,
}

impl Grid {
    pub fn zeros(levels: LevelVector, layout: LayoutKind) -> Result<Self> {
        let len = layout.buffer_len(&levels)?;
        Ok(Self { levels, layout, values: vec![0.0; len] })
    }

    /// Builds a grid from live values given in logical row-major order.
    pub fn from_row_major(levels: LevelVector, layout: LayoutKind, values: &[f64]) -> Result<Self> {
        let n = levels.num_points()?;
        if values.len() != n {
            return Err(Error::Parameter(format!(
                "{} values supplied for a grid of {n} points",
                values.len()
            )));
        }
        let mut grid = Self::zeros(levels, layout)?;
        grid.scatter_row_major(values);
        Ok(grid)
    }

    /// Samples `f` at the grid coordinates.
    pub fn from_fn(
        levels: LevelVector,
        layout: LayoutKind,
        mut f: impl FnMut(&[f64]) -> f64,
    ) -> Result<Self> {
        let mut grid = Self::zeros(levels, layout)?;
        let mut x = vec![0.0; grid.levels.dim()];
        let levels = grid.levels.clone();
        for_each_multi_index(&levels, |idx| {
            coordinates(&levels, idx, &mut x);
            let o = layout.offset_unchecked(&levels, idx);
            grid.values[o] = f(&x);
        });
        Ok(grid)
    }

    /// Uniform random live values in `[-1, 1]`, drawn in logical order so that
    /// the same seed gives the same logical grid in every layout.
    pub fn random(levels: LevelVector, layout: LayoutKind, seed: u64) -> Result<Self> {
        let n = levels.num_points()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        Self::from_row_major(levels, layout, &values)
    }

    pub fn levels(&self) -> &LevelVector {
        &self.levels
    }

    pub fn layout(&self) -> LayoutKind {
        self.layout
    }

    /// Raw buffer including padding slots.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn num_points(&self) -> usize {
        self.values.len() / self.layout.line_len(&self.levels) * self.levels.points_on_axis(0)
    }

    /// Size of the buffer in bytes, padding included.
    pub fn buffer_bytes(&self) -> usize {
        self.values.len() * std::mem::size_of::<f64>()
    }

    pub fn get(&self, multi_index: &[u64]) -> Result<f64> {
        Ok(self.values[self.layout.buffer_offset(&self.levels, multi_index)?])
    }

    pub fn set(&mut self, multi_index: &[u64], value: f64) -> Result<()> {
        let o = self.layout.buffer_offset(&self.levels, multi_index)?;
        self.values[o] = value;
        Ok(())
    }

    /// Live values in logical row-major order.
    pub fn to_row_major(&self) -> Vec<f64> {
        let table = self.layout.line_table(&self.levels);
        let line = self.layout.line_len(&self.levels);
        let mut out = Vec::with_capacity(self.num_points());
        for chunk in self.values.chunks_exact(line) {
            out.extend(table.iter().map(|&p| chunk[p]));
        }
        out
    }

    fn scatter_row_major(&mut self, values: &[f64]) {
        let table = self.layout.line_table(&self.levels);
        let line = self.layout.line_len(&self.levels);
        for (dst, src) in self.values.chunks_exact_mut(line).zip(values.chunks_exact(table.len())) {
            for (&p, &v) in table.iter().zip(src) {
                dst[p] = v;
            }
        }
    }

    /// Same logical values stored in `target`; padding slots are zero.
    pub fn convert_layout(&self, target: LayoutKind) -> Grid {
        if target == self.layout {
            return self.clone();
        }
        let mut out = Grid::zeros(self.levels.clone(), target)
            .expect("source grid already has a valid size");
        out.scatter_row_major(&self.to_row_major());
        out
    }

    /// Buffer offsets of the padding slots (empty for unpadded layouts).
    pub fn padding_offsets(&self) -> Vec<usize> {
        if !self.layout.is_padded() {
            return Vec::new();
        }
        let line = self.layout.line_len(&self.levels);
        (line - 1..self.values.len()).step_by(line).collect()
    }

    /// FNV-1a over the bit patterns of the live values in logical order.
    ///
    /// Equal checksums across layouts mean bitwise-equal logical grids.
    pub fn checksum(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let table = self.layout.line_table(&self.levels);
        let line = self.layout.line_len(&self.levels);
        let mut h = OFFSET;
        for chunk in self.values.chunks_exact(line) {
            for &p in &table {
                for b in chunk[p].to_bits().to_le_bytes() {
                    h ^= u64::from(b);
                    h = h.wrapping_mul(PRIME);
                }
            }
        }
        h
    }
}

/// Free-function form of [`Grid::convert_layout`].
pub fn convert_layout(grid: &Grid, target: LayoutKind) -> Grid {
    grid.convert_layout(target)
}
