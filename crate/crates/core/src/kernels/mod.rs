//! Hierarchization and dehierarchization kernels.
//!
//! A grid is transformed in place, one axis at a time. Every variant performs
//! the same arithmetic per point (`x -= 0.5 * left`, then `x -= 0.5 * right`,
//! levels finest to coarsest), so all non-reduced variants produce bitwise
//! identical results. They differ in how they navigate the data and how many
//! poles they handle per inner step.

mod blocked;
mod func;
mod pole;
mod sweep;

use std::fmt;
use std::str::FromStr;

pub use pole::{dehierarchize_pole, hierarchize_pole};

use crate::error::{Error, Result};
use crate::grid::{Grid, LayoutKind, PoleOrder};
use blocked::AxisGeometry;
use sweep::{Forward, Inverse, Sweep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VariantTag {
    /// Level-index vector navigation, the slow baseline.
    Func,
    /// Row-major data, predecessors from offsets and strides.
    Ind,
    Bfs,
    BfsRev,
    BfsUnrolled,
    BfsVectorized,
    BfsOverVectorized,
    BfsOverVectorizedPreBranched,
    BfsOverVectorizedPreBranchedReducedOp,
}

impl VariantTag {
    pub const ALL: [VariantTag; 9] = [
        VariantTag::Func,
        VariantTag::Ind,
        VariantTag::Bfs,
        VariantTag::BfsRev,
        VariantTag::BfsUnrolled,
        VariantTag::BfsVectorized,
        VariantTag::BfsOverVectorized,
        VariantTag::BfsOverVectorizedPreBranched,
        VariantTag::BfsOverVectorizedPreBranchedReducedOp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VariantTag::Func => "Func",
            VariantTag::Ind => "Ind",
            VariantTag::Bfs => "BFS",
            VariantTag::BfsRev => "BFS-Rev",
            VariantTag::BfsUnrolled => "BFS-Unrolled",
            VariantTag::BfsVectorized => "BFS-Vectorized",
            VariantTag::BfsOverVectorized => "BFS-OverVectorized",
            VariantTag::BfsOverVectorizedPreBranched => "BFS-OverVectorized-PreBranched",
            VariantTag::BfsOverVectorizedPreBranchedReducedOp => {
                "BFS-OverVectorized-PreBranched-ReducedOp"
            }
        }
    }

    /// Whether two-predecessor updates use the single-multiplication form.
    pub fn is_reduced(self) -> bool {
        self == VariantTag::BfsOverVectorizedPreBranchedReducedOp
    }

    /// Layouts this variant can operate on.
    pub fn accepted_layouts(self) -> &'static [LayoutKind] {
        use LayoutKind::*;
        match self {
            VariantTag::Func | VariantTag::Ind => &[RowMajor, RowMajorPadded],
            VariantTag::Bfs | VariantTag::BfsUnrolled => &[Bfs1, Bfs1Padded],
            VariantTag::BfsRev => &[RevBfs1],
            VariantTag::BfsVectorized
            | VariantTag::BfsOverVectorized
            | VariantTag::BfsOverVectorizedPreBranched
            | VariantTag::BfsOverVectorizedPreBranchedReducedOp => &[Bfs1Padded],
        }
    }

    /// The layout benchmarks allocate for this variant.
    pub fn preferred_layout(self) -> LayoutKind {
        self.accepted_layouts()[0]
    }
}

impl fmt::Display for VariantTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VariantTag {
    type Err = Error;

    /// Case-insensitive; `-` and `_` are ignored, so `bfs_rev` and `BFS-Rev` both parse.
    fn from_str(s: &str) -> Result<Self> {
        let norm = |t: &str| t.replace(['-', '_'], "").to_ascii_lowercase();
        let want = norm(s);
        VariantTag::ALL
            .into_iter()
            .find(|v| norm(v.name()) == want)
            .ok_or_else(|| Error::Parameter(format!("unknown kernel variant {s:?}")))
    }
}

/// A kernel variant together with its blocking parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KernelVariant {
    pub tag: VariantTag,
    width: usize,
    unroll: usize,
}

const BLOCK_SIZES: [usize; 5] = [1, 2, 4, 8, 16];

impl KernelVariant {
    /// Vector width 4 (doubles per 256-bit register) and unroll factor 4.
    pub fn new(tag: VariantTag) -> Self {
        Self { tag, width: 4, unroll: 4 }
    }

    /// Sets the number of poles per vector step (power of two, at most 16).
    pub fn with_width(mut self, width: usize) -> Result<Self> {
        check_block("vector width", width)?;
        self.width = width;
        Ok(self)
    }

    /// Sets the number of poles per unrolled step (power of two, at most 16).
    pub fn with_unroll(mut self, unroll: usize) -> Result<Self> {
        check_block("unroll factor", unroll)?;
        self.unroll = unroll;
        Ok(self)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn unroll(&self) -> usize {
        self.unroll
    }

    pub fn all() -> impl Iterator<Item = KernelVariant> {
        VariantTag::ALL.into_iter().map(KernelVariant::new)
    }

    pub fn check_layout(&self, layout: LayoutKind) -> Result<()> {
        let accepted = self.tag.accepted_layouts();
        if accepted.contains(&layout) {
            return Ok(());
        }
        Err(Error::LayoutMismatch {
            variant: self.tag.to_string(),
            required: accepted.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" or "),
            actual: layout.to_string(),
        })
    }
}

impl From<VariantTag> for KernelVariant {
    fn from(tag: VariantTag) -> Self {
        Self::new(tag)
    }
}

fn check_block(what: &str, n: usize) -> Result<()> {
    if BLOCK_SIZES.contains(&n) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{what} {n} must be one of {BLOCK_SIZES:?}")))
    }
}

macro_rules! with_block {
    ($n:expr, $f:ident :: <$s:ty> ($($arg:expr),*)) => {
        match $n {
            1 => blocked::$f::<$s, 1>($($arg),*),
            2 => blocked::$f::<$s, 2>($($arg),*),
            4 => blocked::$f::<$s, 4>($($arg),*),
            8 => blocked::$f::<$s, 8>($($arg),*),
            16 => blocked::$f::<$s, 16>($($arg),*),
            _ => unreachable!("block size validated on construction"),
        }
    };
}

/// Axis-0 lines are contiguous; they are transformed with the pole kernel
/// matching the layout's line order.
fn lines<S: Sweep>(grid: &mut Grid, reduced: bool) {
    let level = grid.levels().level(0);
    let live = grid.levels().points_on_axis(0);
    let line_len = grid.layout().line_len(grid.levels());
    let order = grid.layout().pole_order();
    for line in grid.values_mut().chunks_exact_mut(line_len) {
        let line = &mut line[..live];
        match order {
            PoleOrder::Natural => pole::natural::<S>(line, 0, 1, level, reduced),
            PoleOrder::Bfs => pole::level_ordered::<S, false>(line, level, reduced),
            PoleOrder::RevBfs => pole::level_ordered::<S, true>(line, level, reduced),
        }
    }
}

fn dimension<S: Sweep>(grid: &mut Grid, axis: usize, variant: KernelVariant) -> Result<()> {
    variant.check_layout(grid.layout())?;
    if axis >= grid.levels().dim() {
        return Err(Error::Parameter(format!(
            "axis {axis} out of range for a {}-dimensional grid",
            grid.levels().dim()
        )));
    }
    if grid.levels().level(axis) == 1 {
        return Ok(());
    }
    let reduced = variant.tag.is_reduced();
    if variant.tag == VariantTag::Func {
        func::dimension::<S>(grid, axis);
        return Ok(());
    }
    if axis == 0 {
        lines::<S>(grid, reduced);
        return Ok(());
    }
    let geo = AxisGeometry::new(grid, axis);
    let buf = grid.values_mut();
    match variant.tag {
        VariantTag::Func => unreachable!(),
        VariantTag::Ind | VariantTag::Bfs | VariantTag::BfsRev => {
            blocked::scalar_poles::<S>(buf, &geo, false)
        }
        VariantTag::BfsUnrolled => with_block!(variant.unroll, unrolled::<S>(buf, &geo)),
        VariantTag::BfsVectorized => with_block!(variant.width, vectorized::<S>(buf, &geo)),
        VariantTag::BfsOverVectorized => {
            with_block!(variant.width, over_vectorized::<S>(buf, &geo, false, false))
        }
        VariantTag::BfsOverVectorizedPreBranched => {
            with_block!(variant.width, over_vectorized::<S>(buf, &geo, true, false))
        }
        VariantTag::BfsOverVectorizedPreBranchedReducedOp => {
            with_block!(variant.width, over_vectorized::<S>(buf, &geo, true, true))
        }
    }
    Ok(())
}

fn axis_order(dim: usize, order: Option<&[usize]>, reversed: bool) -> Result<Vec<usize>> {
    match order {
        None if reversed => Ok((0..dim).rev().collect()),
        None => Ok((0..dim).collect()),
        Some(order) => {
            let mut seen = vec![false; dim];
            for &a in order {
                if a >= dim || std::mem::replace(&mut seen[a], true) {
                    return Err(Error::Parameter(format!(
                        "axis order {order:?} is not a permutation of 0..{dim}"
                    )));
                }
            }
            if order.len() != dim {
                return Err(Error::Parameter(format!(
                    "axis order {order:?} is not a permutation of 0..{dim}"
                )));
            }
            Ok(order.to_vec())
        }
    }
}

/// Hierarchizes every pole along `axis` (0-based) in place.
pub fn hierarchize_dimension(grid: &mut Grid, axis: usize, variant: impl Into<KernelVariant>) -> Result<()> {
    dimension::<Forward>(grid, axis, variant.into())
}

/// Dehierarchizes every pole along `axis` (0-based) in place.
pub fn dehierarchize_dimension(grid: &mut Grid, axis: usize, variant: impl Into<KernelVariant>) -> Result<()> {
    dimension::<Inverse>(grid, axis, variant.into())
}

/// Transforms nodal values into hierarchical surpluses, one axis after the
/// other (`0..d` unless `order` is given).
pub fn hierarchize(grid: &mut Grid, variant: impl Into<KernelVariant>, order: Option<&[usize]>) -> Result<()> {
    let variant = variant.into();
    variant.check_layout(grid.layout())?;
    for axis in axis_order(grid.levels().dim(), order, Forward::reversed_axes())? {
        dimension::<Forward>(grid, axis, variant)?;
    }
    Ok(())
}

/// Transforms hierarchical surpluses back into nodal values.
pub fn dehierarchize(grid: &mut Grid, variant: impl Into<KernelVariant>) -> Result<()> {
    let variant = variant.into();
    variant.check_layout(grid.layout())?;
    for axis in axis_order(grid.levels().dim(), None, Inverse::reversed_axes())? {
        dimension::<Inverse>(grid, axis, variant)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::LevelVector;

    fn grid_for(tag: VariantTag, levels: &[u32], values: &[f64]) -> Grid {
        let l = LevelVector::new(levels.to_vec()).unwrap();
        Grid::from_row_major(l, tag.preferred_layout(), values).unwrap()
    }

    #[test]
    fn names_parse_back() {
        for tag in VariantTag::ALL {
            assert_eq!(tag.name().parse::<VariantTag>().unwrap(), tag);
        }
        assert_eq!("bfs_overvectorized".parse::<VariantTag>().unwrap(), VariantTag::BfsOverVectorized);
        assert!("simd".parse::<VariantTag>().is_err());
    }

    #[test]
    fn block_sizes_validated() {
        let v = KernelVariant::new(VariantTag::BfsVectorized);
        assert!(v.with_width(8).is_ok());
        assert!(v.with_width(3).is_err());
        assert!(v.with_unroll(32).is_err());
    }

    #[test]
    fn rows_of_ones() {
        for tag in VariantTag::ALL {
            let mut g = grid_for(tag, &[2, 2], &[1.0; 9]);
            hierarchize_dimension(&mut g, 0, tag).unwrap();
            assert_eq!(g.to_row_major(), [0.5, 1.0, 0.5].repeat(3), "{tag}");
            hierarchize_dimension(&mut g, 1, tag).unwrap();
            assert_eq!(
                g.to_row_major(),
                vec![0.25, 0.5, 0.25, 0.5, 1.0, 0.5, 0.25, 0.5, 0.25],
                "{tag}"
            );
        }
    }

    #[test]
    fn product_hat_is_single_surplus() {
        // 4 phi(x) * 4 phi(y) at the 3x3 grid points
        let hat = [2.0, 4.0, 2.0];
        let values: Vec<f64> = (0..9).map(|k| hat[k % 3] * hat[k / 3]).collect();
        for tag in VariantTag::ALL {
            let mut g = grid_for(tag, &[2, 2], &values);
            hierarchize(&mut g, tag, None).unwrap();
            let mut expect = vec![0.0; 9];
            expect[4] = 16.0;
            assert_eq!(g.to_row_major(), expect, "{tag}");
        }
    }

    #[test]
    fn single_point_axis_is_identity() {
        for tag in VariantTag::ALL {
            let values: Vec<f64> = (0..7).map(f64::from).collect();
            let mut g = grid_for(tag, &[1, 3], &values);
            hierarchize_dimension(&mut g, 0, tag).unwrap();
            assert_eq!(g.to_row_major(), values, "{tag}");
        }
    }

    #[test]
    fn layout_mismatch_names_requirement() {
        let mut g = Grid::zeros(LevelVector::new([3, 3]).unwrap(), LayoutKind::RowMajor).unwrap();
        let err = hierarchize(&mut g, VariantTag::BfsOverVectorized, None).unwrap_err();
        assert_eq!(
            err.to_string(),
            "variant BFS-OverVectorized requires layout bfs-padded, grid has row-major"
        );
    }

    #[test]
    fn bad_axis_order_rejected() {
        let mut g = Grid::zeros(LevelVector::new([2, 2]).unwrap(), LayoutKind::RowMajor).unwrap();
        assert!(hierarchize(&mut g, VariantTag::Ind, Some(&[0, 0])).is_err());
        assert!(hierarchize(&mut g, VariantTag::Ind, Some(&[1])).is_err());
        assert!(hierarchize_dimension(&mut g, 2, VariantTag::Ind).is_err());
        assert!(hierarchize(&mut g, VariantTag::Ind, Some(&[1, 0])).is_ok());
    }

    #[test]
    fn zero_grid_fixed_point() {
        for tag in VariantTag::ALL {
            let l = LevelVector::new([3, 2, 2]).unwrap();
            let mut g = Grid::zeros(l, tag.preferred_layout()).unwrap();
            hierarchize(&mut g, tag, None).unwrap();
            assert!(g.values().iter().all(|&v| v == 0.0));
            dehierarchize(&mut g, tag).unwrap();
            assert!(g.values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn root_surplus_dehierarchizes_to_tent() {
        let l = LevelVector::new([2, 3]).unwrap();
        for tag in VariantTag::ALL {
            let mut g = Grid::zeros(l.clone(), tag.preferred_layout()).unwrap();
            g.set(&[2, 4], 3.0).unwrap();
            dehierarchize(&mut g, tag).unwrap();
            let tent = |i: u64, level: u32| {
                let h = 1u64 << (level - 1);
                1.0 - (i.abs_diff(h) as f64) / h as f64
            };
            for i in 1..=3 {
                for j in 1..=7 {
                    let expect = 3.0 * tent(i, 2) * tent(j, 3);
                    assert_eq!(g.get(&[i, j]).unwrap(), expect, "{tag} ({i},{j})");
                }
            }
        }
    }
}
