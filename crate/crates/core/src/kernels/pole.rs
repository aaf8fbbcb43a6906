//! Scalar kernels over a single pole.

use super::sweep::{Forward, Inverse, Sweep};
use crate::grid::PoleOrder;

/// Pole stored in ascending index order at `base + (i - 1) * stride`.
///
/// Predecessor offsets come from index strides alone; the first and last
/// point of each level have a single predecessor and are peeled off.
#[inline]
pub(crate) fn natural<S: Sweep>(buf: &mut [f64], base: usize, stride: usize, level: u32, reduced: bool) {
    let n = (1usize << level) - 1;
    for lam in S::levels(level) {
        let step = 1usize << (level - lam);
        let d = step * stride;
        let first = base + (step - 1) * stride;
        let last = base + (n - step) * stride;
        buf[first] = S::update(buf[first], buf[first + d]);
        let mut o = first + 2 * d;
        while o < last {
            buf[o] = if reduced {
                S::update_pair(buf[o], buf[o - d], buf[o + d])
            } else {
                S::update(S::update(buf[o], buf[o - d]), buf[o + d])
            };
            o += 2 * d;
        }
        buf[last] = S::update(buf[last], buf[last - d]);
    }
}

/// Contiguous pole stored in level order (root first, or finest level first
/// with `REV`).
///
/// Points on level `lam` are contiguous and come in sibling pairs `2m, 2m + 1`
/// sharing parent `m` on level `lam - 1`. The outer predecessor of a pair is
/// found by stripping trailing zeros from its coordinate; the right one of a
/// pair is the left one of the next pair.
#[inline]
pub(crate) fn level_ordered<S: Sweep, const REV: bool>(line: &mut [f64], level: u32, reduced: bool) {
    debug_assert_eq!(line.len(), (1usize << level) - 1);
    let start = |lam: u32| {
        if REV {
            (1usize << level) - (1usize << lam)
        } else {
            (1usize << (lam - 1)) - 1
        }
    };
    let both = |x: f64, l: f64, r: f64| {
        if reduced {
            S::update_pair(x, l, r)
        } else {
            S::update(S::update(x, l), r)
        }
    };
    for lam in S::levels(level) {
        let base = start(lam);
        let parents = start(lam - 1);
        let pairs = 1usize << (lam - 2);
        // c counts in level-(lam - 1) units and is even, so it names a coarser point
        let ancestor = |c: usize| {
            let tz = c.trailing_zeros();
            start(lam - 1 - tz) + ((c >> tz) >> 1)
        };
        let mut outer_left: Option<f64> = None;
        for m in 0..pairs {
            let p = line[parents + m];
            let outer_right = (m + 1 < pairs).then(|| line[ancestor(2 * m + 2)]);
            let o = base + 2 * m;
            line[o] = match outer_left {
                Some(a) => both(line[o], a, p),
                None => S::update(line[o], p),
            };
            line[o + 1] = match outer_right {
                Some(b) => both(line[o + 1], p, b),
                None => S::update(line[o + 1], p),
            };
            outer_left = outer_right;
        }
    }
}

pub(crate) fn pole<S: Sweep>(values: &mut [f64], order: PoleOrder, level: u32, reduced: bool) {
    match order {
        PoleOrder::Natural => natural::<S>(values, 0, 1, level, reduced),
        PoleOrder::Bfs => level_ordered::<S, false>(values, level, reduced),
        PoleOrder::RevBfs => level_ordered::<S, true>(values, level, reduced),
    }
}

/// Hierarchizes one contiguous pole of `2^level - 1` values stored in `order`.
///
/// With `reduced`, two-predecessor points use `x - 0.5 * (left + right)`.
///
/// # Panics
/// If `values.len() != 2^level - 1`.
pub fn hierarchize_pole(values: &mut [f64], order: PoleOrder, level: u32, reduced: bool) {
    assert_eq!(values.len(), (1usize << level) - 1, "pole length must be 2^level - 1");
    pole::<Forward>(values, order, level, reduced);
}

/// Inverse of [`hierarchize_pole`].
///
/// # Panics
/// If `values.len() != 2^level - 1`.
pub fn dehierarchize_pole(values: &mut [f64], order: PoleOrder, level: u32) {
    assert_eq!(values.len(), (1usize << level) - 1, "pole length must be 2^level - 1");
    pole::<Inverse>(values, order, level, false);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid, LayoutKind, LevelVector};
    use proptest::prelude::*;

    const ORDERS: [PoleOrder; 3] = [PoleOrder::Natural, PoleOrder::Bfs, PoleOrder::RevBfs];

    fn layout_of(order: PoleOrder) -> LayoutKind {
        match order {
            PoleOrder::Natural => LayoutKind::RowMajor,
            PoleOrder::Bfs => LayoutKind::Bfs1,
            PoleOrder::RevBfs => LayoutKind::RevBfs1,
        }
    }

    /// Runs the pole kernel on `natural`-ordered input stored in `order` and
    /// returns the result back in natural order.
    fn run(natural: &[f64], order: PoleOrder, level: u32, reduced: bool, inverse: bool) -> Vec<f64> {
        let l = LevelVector::new([level]).unwrap();
        let mut g = Grid::from_row_major(l, layout_of(order), natural).unwrap();
        if inverse {
            dehierarchize_pole(g.values_mut(), order, level);
        } else {
            hierarchize_pole(g.values_mut(), order, level, reduced);
        }
        g.to_row_major()
    }

    #[test]
    fn level_two_example() {
        for order in ORDERS {
            assert_eq!(run(&[1.0, 2.0, 3.0], order, 2, false, false), vec![0.0, 2.0, 2.0]);
            assert_eq!(run(&[0.0, 2.0, 2.0], order, 2, false, true), vec![1.0, 2.0, 3.0]);
        }
    }

    #[test]
    fn hat_becomes_root_surplus() {
        let hat = [1.0, 2.0, 3.0, 4.0, 3.0, 2.0, 1.0];
        let surplus = [0.0, 0.0, 0.0, 4.0, 0.0, 0.0, 0.0];
        for order in ORDERS {
            for reduced in [false, true] {
                assert_eq!(run(&hat, order, 3, reduced, false), surplus);
            }
            assert_eq!(run(&surplus, order, 3, false, true), hat);
        }
    }

    #[test]
    fn single_point_untouched() {
        for order in ORDERS {
            assert_eq!(run(&[3.5], order, 1, false, false), vec![3.5]);
            assert_eq!(run(&[3.5], order, 1, false, true), vec![3.5]);
        }
    }

    #[test]
    fn strided_pole_matches_contiguous() {
        let v: Vec<f64> = (0..15).map(|k| (k as f64 * 0.37).sin()).collect();
        let mut contiguous = v.clone();
        hierarchize_pole(&mut contiguous, PoleOrder::Natural, 4, false);
        let mut strided = vec![f64::NAN; 15 * 3 + 1];
        for (k, &x) in v.iter().enumerate() {
            strided[1 + 3 * k] = x;
        }
        natural::<Forward>(&mut strided, 1, 3, 4, false);
        for (k, &x) in contiguous.iter().enumerate() {
            assert_eq!(strided[1 + 3 * k].to_bits(), x.to_bits());
        }
    }

    proptest! {
        #[test]
        fn orders_agree_bitwise_and_invert(level in 1u32..9, seed: u64) {
            let g = Grid::random(LevelVector::new([level]).unwrap(), LayoutKind::RowMajor, seed).unwrap();
            let v = g.to_row_major();
            let reference = run(&v, PoleOrder::Natural, level, false, false);
            for order in ORDERS {
                let h = run(&v, order, level, false, false);
                prop_assert!(h.iter().zip(&reference).all(|(a, b)| a.to_bits() == b.to_bits()));
                let back = run(&h, order, level, false, true);
                for (a, b) in back.iter().zip(&v) {
                    prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
                }
            }
        }
    }
}
