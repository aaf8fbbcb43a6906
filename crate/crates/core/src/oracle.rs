//! Brute-force reference for the kernels.
//!
//! Surpluses are obtained by solving the dense hat-basis interpolation system
//! directly, without predecessor rules or level sweeps. A separate scalar
//! transform counts every floating-point addition and multiplication it
//! performs, for checking the analytic operation counts.

use crate::error::{Error, Result};
use crate::grid::{
    coordinates, for_each_multi_index, hierarchical_level, hierarchical_predecessors,
    within_level_index, Grid, LayoutKind, LevelVector,
};

/// Largest grid the dense solve accepts by default.
pub const DEFAULT_ORACLE_CAP: usize = 8192;

/// Piecewise linear hat `max(0, 1 - 2^level |x - c|)` centred at `c = (2j + 1) 2^-level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisFunction1D {
    pub level: u32,
    pub index: u64,
}

impl BasisFunction1D {
    /// Basis function attached to grid index `i` on an axis of level `axis_level`.
    pub fn of_point(axis_level: u32, i: u64) -> Self {
        Self { level: hierarchical_level(axis_level, i), index: within_level_index(i) }
    }

    pub fn center(&self) -> f64 {
        (2 * self.index + 1) as f64 / (1u64 << self.level) as f64
    }

    pub fn eval(&self, x: f64) -> f64 {
        let scale = (1u64 << self.level) as f64;
        (1.0 - scale * (x - self.center()).abs()).max(0.0)
    }
}

/// `table[a * n + b]` = value of the basis function of point `b + 1` at point `a + 1`.
fn axis_table(axis_level: u32) -> Vec<f64> {
    let n = (1usize << axis_level) - 1;
    let scale = (1u64 << axis_level) as f64;
    let mut table = vec![0.0; n * n];
    for a in 0..n {
        let x = (a + 1) as f64 / scale;
        for b in 0..n {
            table[a * n + b] = BasisFunction1D::of_point(axis_level, b as u64 + 1).eval(x);
        }
    }
    table
}

/// Row-major points sorted by the sum of their hierarchical levels.
///
/// A basis function is nonzero at another grid point only if that point is
/// strictly finer in some axis and not coarser in any, so in this order the
/// basis matrix is unit lower triangular.
fn level_order(levels: &LevelVector) -> Vec<(usize, Vec<usize>)> {
    let mut points = Vec::new();
    for_each_multi_index(levels, |idx| {
        points.push(idx.iter().map(|&i| i as usize - 1).collect::<Vec<_>>());
    });
    let mut order: Vec<(u32, usize, Vec<usize>)> = points
        .into_iter()
        .enumerate()
        .map(|(p, idx)| {
            let sum = idx
                .iter()
                .enumerate()
                .map(|(k, &i)| hierarchical_level(levels.level(k), i as u64 + 1))
                .sum();
            (sum, p, idx)
        })
        .collect();
    order.sort_by_key(|&(sum, p, _)| (sum, p));
    order.into_iter().map(|(_, p, idx)| (p, idx)).collect()
}

struct BasisTables {
    sizes: Vec<usize>,
    tables: Vec<Vec<f64>>,
}

impl BasisTables {
    fn new(levels: &LevelVector) -> Self {
        Self {
            sizes: (0..levels.dim()).map(|k| levels.points_on_axis(k)).collect(),
            tables: levels.levels().iter().map(|&l| axis_table(l)).collect(),
        }
    }

    /// Value of the basis function of point `q` at point `p`, 0-based multi-indices.
    #[inline]
    fn entry(&self, p: &[usize], q: &[usize]) -> f64 {
        let mut v = 1.0;
        for k in 0..p.len() {
            v *= self.tables[k][p[k] * self.sizes[k] + q[k]];
            if v == 0.0 {
                break;
            }
        }
        v
    }
}

fn check_cap(levels: &LevelVector, cap: usize) -> Result<usize> {
    let n = levels.num_points()?;
    if n > cap {
        return Err(Error::OracleCap { points: n, cap });
    }
    Ok(n)
}

/// Dense basis matrix for small grids, rows and columns in level order.
///
/// Returns the row-major point number of each position and the matrix,
/// stored row by row.
pub fn basis_matrix(levels: &LevelVector, cap: usize) -> Result<(Vec<usize>, Vec<f64>)> {
    let n = check_cap(levels, cap)?;
    let order = level_order(levels);
    let tables = BasisTables::new(levels);
    let mut m = vec![0.0; n * n];
    for (r, (_, p)) in order.iter().enumerate() {
        for (c, (_, q)) in order.iter().enumerate() {
            m[r * n + c] = tables.entry(p, q);
        }
    }
    Ok((order.into_iter().map(|(p, _)| p).collect(), m))
}

/// Surpluses (row-major) with the default size cap.
pub fn hierarchize_oracle(nodal: &Grid) -> Result<Vec<f64>> {
    hierarchize_oracle_with_cap(nodal, DEFAULT_ORACLE_CAP)
}

/// Solves `B alpha = v` for the hierarchical surpluses by forward substitution
/// in level order. `B[p][q]` is the tensor-product hat of point `q` at point `p`.
pub fn hierarchize_oracle_with_cap(nodal: &Grid, cap: usize) -> Result<Vec<f64>> {
    let levels = nodal.levels();
    check_cap(levels, cap)?;
    let v = nodal.to_row_major();
    let order = level_order(levels);
    let tables = BasisTables::new(levels);
    let mut alpha = vec![0.0; v.len()];
    for (r, (p, pi)) in order.iter().enumerate() {
        let mut acc = v[*p];
        for (q, qi) in &order[..r] {
            let b = tables.entry(pi, qi);
            if b != 0.0 {
                acc -= b * alpha[*q];
            }
        }
        alpha[*p] = acc;
    }
    Ok(alpha)
}

/// Value at `x` of the interpolant whose hierarchical surpluses are stored in `surpluses`.
pub fn evaluate_interpolant(surpluses: &Grid, x: &[f64]) -> f64 {
    let levels = surpluses.levels();
    assert_eq!(x.len(), levels.dim(), "point dimension mismatch");
    let mut sum = 0.0;
    for_each_multi_index(levels, |idx| {
        let mut w = 1.0;
        for (k, &i) in idx.iter().enumerate() {
            w *= BasisFunction1D::of_point(levels.level(k), i).eval(x[k]);
            if w == 0.0 {
                return;
            }
        }
        sum += w * surpluses.get(idx).expect("multi-index in range");
    });
    sum
}

/// Evaluates the interpolant at every grid point, row-major.
pub fn interpolant_at_grid_points(surpluses: &Grid) -> Vec<f64> {
    let levels = surpluses.levels();
    let mut x = vec![0.0; levels.dim()];
    let mut out = Vec::with_capacity(surpluses.num_points());
    for_each_multi_index(levels, |idx| {
        coordinates(levels, idx, &mut x);
        out.push(evaluate_interpolant(surpluses, &x));
    });
    out
}

/// Floating-point operations performed by an instrumented transform.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCount {
    pub additions: u64,
    pub multiplications: u64,
}

impl OpCount {
    pub fn flops(&self) -> u64 {
        self.additions + self.multiplications
    }
}

/// Hierarchizes a copy of `grid` with a plainly written scalar loop and counts
/// its floating-point operations.
///
/// Each `x -= 0.5 * p` is one addition and one multiplication; in reduced mode
/// `x -= 0.5 * (l + r)` is two additions and one multiplication. Index
/// arithmetic is not counted.
pub fn counted_hierarchize(grid: &Grid, reduced: bool) -> (Grid, OpCount) {
    let levels = grid.levels().clone();
    let mut v = grid.to_row_major();
    let mut count = OpCount::default();
    let mut stride = 1usize;
    for axis in 0..levels.dim() {
        let level = levels.level(axis);
        let n = levels.points_on_axis(axis);
        let block = stride * n;
        for start in (0..v.len()).step_by(block) {
            for o in 0..stride {
                let base = start + o;
                let at = |i: u64| base + (i as usize - 1) * stride;
                for lam in (2..=level).rev() {
                    let step = 1u64 << (level - lam);
                    for i in (step..=n as u64).step_by(2 * step as usize) {
                        let (l, r) = hierarchical_predecessors(level, i);
                        let x = at(i);
                        match (l, r) {
                            (Some(l), Some(r)) if reduced => {
                                v[x] -= 0.5 * (v[at(l)] + v[at(r)]);
                                count.additions += 2;
                                count.multiplications += 1;
                            }
                            _ => {
                                for p in [l, r].into_iter().flatten() {
                                    v[x] -= 0.5 * v[at(p)];
                                    count.additions += 1;
                                    count.multiplications += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        stride = block;
    }
    let out = Grid::from_row_major(levels, LayoutKind::RowMajor, &v)
        .expect("same size as input")
        .convert_layout(grid.layout());
    (out, count)
}

/// Largest `|a - b|` divided by the largest `|b|` (0 when both are all zero).
pub fn max_relative_deviation(actual: &[f64], expected: &[f64]) -> f64 {
    assert_eq!(actual.len(), expected.len());
    let scale = expected.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = actual
        .iter()
        .zip(expected)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if diff == 0.0 {
        0.0
    } else {
        diff / scale.max(f64::MIN_POSITIVE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::LayoutKind;
    use crate::kernels::{hierarchize, VariantTag};
    use proptest::prelude::*;

    fn lv(l: &[u32]) -> LevelVector {
        LevelVector::new(l.to_vec()).unwrap()
    }

    #[test]
    fn basis_function_values() {
        let root = BasisFunction1D { level: 1, index: 0 };
        assert_eq!(root.eval(0.5), 1.0);
        assert_eq!(root.eval(0.25), 0.5);
        assert_eq!(root.eval(0.0), 0.0);
        let f = BasisFunction1D::of_point(3, 3);
        assert_eq!((f.level, f.index, f.center()), (3, 1, 0.375));
    }

    #[test]
    fn oracle_examples() {
        let g = Grid::from_row_major(lv(&[2]), LayoutKind::RowMajor, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(hierarchize_oracle(&g).unwrap(), vec![0.0, 2.0, 2.0]);
        for d in 1..5 {
            let g = Grid::from_row_major(lv(&vec![1; d]), LayoutKind::RowMajor, &[2.5]).unwrap();
            assert_eq!(hierarchize_oracle(&g).unwrap(), vec![2.5]);
        }
        let hat = [1.0, 2.0, 3.0, 4.0, 3.0, 2.0, 1.0];
        let g = Grid::from_row_major(lv(&[3]), LayoutKind::RowMajor, &hat).unwrap();
        assert_eq!(hierarchize_oracle(&g).unwrap(), vec![0.0, 0.0, 0.0, 4.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn oracle_cap_enforced() {
        let g = Grid::zeros(lv(&[7, 7]), LayoutKind::RowMajor).unwrap();
        assert_eq!(
            hierarchize_oracle(&g).unwrap_err(),
            Error::OracleCap { points: 16129, cap: DEFAULT_ORACLE_CAP }
        );
    }

    #[test]
    fn interpolant_reproduces_nodal_values() {
        let g = Grid::random(lv(&[3, 2]), LayoutKind::RowMajor, 11).unwrap();
        let alpha = hierarchize_oracle(&g).unwrap();
        let s = Grid::from_row_major(lv(&[3, 2]), LayoutKind::RowMajor, &alpha).unwrap();
        let back = interpolant_at_grid_points(&s);
        assert!(max_relative_deviation(&back, &g.to_row_major()) <= 1e-12);
    }

    #[test]
    fn interpolant_examples() {
        let mut s = Grid::zeros(lv(&[1]), LayoutKind::RowMajor).unwrap();
        s.values_mut()[0] = 3.0;
        assert_eq!(evaluate_interpolant(&s, &[0.5]), 3.0);
        assert_eq!(evaluate_interpolant(&s, &[0.25]), 1.5);

        let mut ones = Grid::from_row_major(lv(&[2, 2]), LayoutKind::RowMajor, &[1.0; 9]).unwrap();
        hierarchize(&mut ones, VariantTag::Ind, None).unwrap();
        assert_eq!(evaluate_interpolant(&ones, &[0.25, 0.25]), 1.0);
    }

    #[test]
    fn basis_matrix_unit_lower_triangular() {
        for l in [&[3u32][..], &[2, 3], &[2, 2, 2], &[4, 2], &[3, 1, 2], &[5, 4]] {
            let (_, m) = basis_matrix(&lv(l), 512).unwrap();
            let n = (m.len() as f64).sqrt() as usize;
            for r in 0..n {
                assert_eq!(m[r * n + r], 1.0);
                assert!(m[r * n + r + 1..(r + 1) * n].iter().all(|&v| v == 0.0));
            }
        }
    }

    #[test]
    fn counts_for_level_three() {
        let g = Grid::random(lv(&[3]), LayoutKind::RowMajor, 0).unwrap();
        let (_, c) = counted_hierarchize(&g, false);
        assert_eq!((c.additions, c.multiplications), (8, 8));
        let (_, c) = counted_hierarchize(&g, true);
        assert_eq!((c.additions, c.multiplications), (8, 6));
        let g = Grid::random(lv(&[1, 1, 1]), LayoutKind::RowMajor, 0).unwrap();
        assert_eq!(counted_hierarchize(&g, false).1, OpCount::default());
    }

    #[test]
    fn relative_deviation() {
        assert_eq!(max_relative_deviation(&[0.0], &[0.0]), 0.0);
        assert_eq!(max_relative_deviation(&[1.0, 2.5], &[1.0, 2.0]), 0.25);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn counted_matches_kernel(levels in prop::collection::vec(1u32..5, 1..4), seed: u64) {
            let l = LevelVector::new(levels).unwrap();
            let g = Grid::random(l, LayoutKind::RowMajor, seed).unwrap();
            let (counted, _) = counted_hierarchize(&g, false);
            let mut k = g.clone();
            hierarchize(&mut k, VariantTag::Ind, None).unwrap();
            prop_assert_eq!(counted.checksum(), k.checksum());
        }

        #[test]
        fn oracle_matches_kernel(levels in prop::collection::vec(1u32..5, 1..4), seed: u64) {
            let l = LevelVector::new(levels).unwrap();
            let g = Grid::random(l, LayoutKind::RowMajor, seed).unwrap();
            let expect = hierarchize_oracle(&g).unwrap();
            let mut k = g.clone();
            hierarchize(&mut k, VariantTag::Ind, None).unwrap();
            prop_assert!(max_relative_deviation(&k.to_row_major(), &expect) <= 1e-10);
        }
    }
}
