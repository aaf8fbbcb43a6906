//! One-dimensional hierarchical index arithmetic.
//!
//! Points on an axis of level `l` carry 1-based indices `i` in `1..2^l`, with
//! coordinate `i * 2^-l`. The hierarchical level of a point follows from the
//! number of trailing zero bits of its index, which makes predecessor and
//! level-order position computations a handful of integer operations.

/// Hierarchical level of index `i` on an axis of level `axis_level`.
#[inline]
pub fn hierarchical_level(axis_level: u32, i: u64) -> u32 {
    debug_assert!(i >= 1 && i < 1 << axis_level);
    axis_level - i.trailing_zeros()
}

/// Position of index `i` among the points of its own hierarchical level (0-based).
#[inline]
pub fn within_level_index(i: u64) -> u64 {
    debug_assert!(i >= 1);
    (i >> i.trailing_zeros()) >> 1
}

/// Left and right hierarchical predecessors of `i`.
///
/// Both are absent only for the root `2^(l-1)`; the outermost points of each
/// level have a single predecessor.
#[inline]
pub fn hierarchical_predecessors(axis_level: u32, i: u64) -> (Option<u64>, Option<u64>) {
    debug_assert!(i >= 1 && i < 1 << axis_level);
    let step = 1u64 << i.trailing_zeros();
    let left = (i > step).then(|| i - step);
    let right = (i + step < 1 << axis_level).then(|| i + step);
    (left, right)
}

/// Offset of `i` within a pole stored in level order, root first.
#[inline]
pub fn bfs_position(axis_level: u32, i: u64) -> u64 {
    let level = hierarchical_level(axis_level, i);
    ((1u64 << (level - 1)) - 1) + within_level_index(i)
}

/// Offset of `i` within a pole stored in reverse level order, finest level first.
#[inline]
pub fn rev_bfs_position(axis_level: u32, i: u64) -> u64 {
    let level = hierarchical_level(axis_level, i);
    ((1u64 << axis_level) - (1u64 << level)) + within_level_index(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Level-order traversal of the implicit binary tree over `1..2^l`, built
    /// by repeatedly splitting intervals rather than from bit tricks.
    fn level_order_oracle(axis_level: u32) -> Vec<u64> {
        let mut order = Vec::new();
        let mut frontier = vec![(0u64, 1u64 << axis_level)];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (lo, hi) in frontier {
                if hi - lo < 2 {
                    continue;
                }
                let mid = (lo + hi) / 2;
                order.push(mid);
                next.push((lo, mid));
                next.push((mid, hi));
            }
            frontier = next;
        }
        order
    }

    #[test]
    fn predecessor_examples() {
        assert_eq!(hierarchical_predecessors(3, 3), (Some(2), Some(4)));
        assert_eq!(hierarchical_predecessors(3, 1), (None, Some(2)));
        assert_eq!(hierarchical_predecessors(3, 4), (None, None));
        assert_eq!(hierarchical_predecessors(3, 7), (Some(6), None));
    }

    #[test]
    fn bfs_examples() {
        assert_eq!(bfs_position(3, 4), 0);
        assert_eq!(bfs_position(3, 3), 4);
        assert_eq!(bfs_position(3, 6), 2);
        assert_eq!(rev_bfs_position(3, 4), 6);
        assert_eq!(rev_bfs_position(3, 1), 0);
        assert_eq!(rev_bfs_position(3, 2), 4);
    }

    #[test]
    fn bfs_matches_level_order_oracle() {
        for l in 1..=10 {
            let order = level_order_oracle(l);
            for (pos, &i) in order.iter().enumerate() {
                assert_eq!(bfs_position(l, i), pos as u64, "l={l} i={i}");
            }
        }
    }

    #[test]
    fn positions_are_bijections() {
        for l in 1..=12u32 {
            let n = (1u64 << l) - 1;
            let mut seen_bfs = vec![false; n as usize];
            let mut seen_rev = vec![false; n as usize];
            for i in 1..=n {
                let b = bfs_position(l, i) as usize;
                let r = rev_bfs_position(l, i) as usize;
                assert!(!seen_bfs[b] && !seen_rev[r]);
                seen_bfs[b] = true;
                seen_rev[r] = true;
            }
            assert!(seen_bfs.iter().all(|&s| s) && seen_rev.iter().all(|&s| s));
        }
    }

    #[test]
    fn predecessors_are_nearest_coarser_points() {
        for l in 1..=10u32 {
            let n = (1u64 << l) - 1;
            for i in 1..=n {
                let li = hierarchical_level(l, i);
                let coarser = |j: &u64| hierarchical_level(l, *j) < li;
                let left = (1..i).rev().find(coarser);
                let right = (i + 1..=n).find(coarser);
                assert_eq!(hierarchical_predecessors(l, i), (left, right), "l={l} i={i}");
            }
        }
    }
}
