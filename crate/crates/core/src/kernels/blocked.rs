//! Kernels for axes >= 1 that process several adjacent poles at once.
//!
//! For any axis other than 0, neighbouring poles differ only in their axis-0
//! index and therefore sit next to each other in memory. All kernels here
//! walk a whole axis-0 line of such poles (`n_0` live entries starting at a
//! line base) and only differ in how many poles share one inner step.

use super::pole::natural;
use super::sweep::Sweep;
use crate::grid::{Grid, LevelVector};

/// Placement of the poles of one axis inside the buffer.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AxisGeometry {
    pub level: u32,
    /// Offset between consecutive indices on the axis.
    pub stride: usize,
    /// Live poles per line (axis-0 points).
    pub live: usize,
    line_len: usize,
    block: usize,
    blocks: usize,
}

impl AxisGeometry {
    pub fn new(grid: &Grid, axis: usize) -> Self {
        debug_assert!(axis >= 1);
        let levels: &LevelVector = grid.levels();
        let layout = grid.layout();
        let stride = layout.stride(levels, axis);
        let block = stride * levels.points_on_axis(axis);
        Self {
            level: levels.level(axis),
            stride,
            live: levels.points_on_axis(0),
            line_len: layout.line_len(levels),
            block,
            blocks: grid.values().len() / block,
        }
    }

    /// Buffer offsets of the first point of every line of poles.
    pub fn line_bases(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.blocks).flat_map(move |b| {
            (0..self.stride).step_by(self.line_len).map(move |m| b * self.block + m)
        })
    }

    /// Yields `(offset of point, has left, has right)` per point for one level,
    /// relative to the first point of the pole, plus the predecessor distance.
    fn points(&self, lam: u32) -> (usize, impl Iterator<Item = (usize, bool, bool)>) {
        let n = (1usize << self.level) - 1;
        let step = 1usize << (self.level - lam);
        let stride = self.stride;
        let it = (step..=n + 1 - step)
            .step_by(2 * step)
            .map(move |i| ((i - 1) * stride, i > step, i + step <= n));
        (step * stride, it)
    }
}

/// Disjoint views of a destination run and its predecessor runs `d` away.
#[inline(always)]
fn views(
    buf: &mut [f64],
    dst: usize,
    d: usize,
    len: usize,
    left: bool,
    right: bool,
) -> (&mut [f64], Option<&[f64]>, Option<&[f64]>) {
    debug_assert!(d >= len);
    let (head, tail) = buf.split_at_mut(dst);
    let (x, rest) = tail.split_at_mut(len);
    let l = left.then(|| &head[dst - d..dst - d + len]);
    let r = right.then(|| &rest[d - len..d]);
    (x, l, r)
}

#[inline(always)]
fn load<const W: usize>(buf: &[f64], o: usize) -> [f64; W] {
    buf[o..o + W].try_into().unwrap()
}

/// Every pole of the axis separately, strided.
pub(crate) fn scalar_poles<S: Sweep>(buf: &mut [f64], geo: &AxisGeometry, reduced: bool) {
    for base in geo.line_bases().collect::<Vec<_>>() {
        for k in 0..geo.live {
            natural::<S>(buf, base + k, geo.stride, geo.level, reduced);
        }
    }
}

/// `U` poles per inner step; absent predecessors skip the update.
pub(crate) fn unrolled<S: Sweep, const U: usize>(buf: &mut [f64], geo: &AxisGeometry) {
    for base in geo.line_bases().collect::<Vec<_>>() {
        let mut k = 0;
        while k + U <= geo.live {
            for lam in S::levels(geo.level) {
                let (d, points) = geo.points(lam);
                for (o, left, right) in points {
                    let dst = base + k + o;
                    if left {
                        for u in 0..U {
                            buf[dst + u] = S::update(buf[dst + u], buf[dst + u - d]);
                        }
                    }
                    if right {
                        for u in 0..U {
                            buf[dst + u] = S::update(buf[dst + u], buf[dst + u + d]);
                        }
                    }
                }
            }
            k += U;
        }
        for k in k..geo.live {
            natural::<S>(buf, base + k, geo.stride, geo.level, false);
        }
    }
}

/// `W` poles per inner step as one register-sized block; absent predecessors
/// are a zero operand.
pub(crate) fn vectorized<S: Sweep, const W: usize>(buf: &mut [f64], geo: &AxisGeometry) {
    for base in geo.line_bases().collect::<Vec<_>>() {
        let mut k = 0;
        while k + W <= geo.live {
            for lam in S::levels(geo.level) {
                let (d, points) = geo.points(lam);
                for (o, left, right) in points {
                    let dst = base + k + o;
                    let l = if left { load::<W>(buf, dst - d) } else { [0.0; W] };
                    let r = if right { load::<W>(buf, dst + d) } else { [0.0; W] };
                    let mut x = load::<W>(buf, dst);
                    for u in 0..W {
                        x[u] = S::update(S::update(x[u], l[u]), r[u]);
                    }
                    buf[dst..dst + W].copy_from_slice(&x);
                }
            }
            k += W;
        }
        for k in k..geo.live {
            natural::<S>(buf, base + k, geo.stride, geo.level, false);
        }
    }
}

#[inline(always)]
fn line_both<S: Sweep, const W: usize>(x: &mut [f64], l: &[f64], r: &[f64], reduced: bool) {
    let mut xs = x.chunks_exact_mut(W);
    let mut ls = l.chunks_exact(W);
    let mut rs = r.chunks_exact(W);
    for ((xb, lb), rb) in (&mut xs).zip(&mut ls).zip(&mut rs) {
        for u in 0..W {
            xb[u] = if reduced {
                S::update_pair(xb[u], lb[u], rb[u])
            } else {
                S::update(S::update(xb[u], lb[u]), rb[u])
            };
        }
    }
    for ((x, &l), &r) in xs.into_remainder().iter_mut().zip(ls.remainder()).zip(rs.remainder()) {
        *x = if reduced { S::update_pair(*x, l, r) } else { S::update(S::update(*x, l), r) };
    }
}

#[inline(always)]
fn line_one<S: Sweep, const W: usize>(x: &mut [f64], p: &[f64]) {
    let mut xs = x.chunks_exact_mut(W);
    let mut ps = p.chunks_exact(W);
    for (xb, pb) in (&mut xs).zip(&mut ps) {
        for u in 0..W {
            xb[u] = S::update(xb[u], pb[u]);
        }
    }
    for (x, &p) in xs.into_remainder().iter_mut().zip(ps.remainder()) {
        *x = S::update(*x, p);
    }
}

/// All `n_0` poles of a line in the innermost loop, blocked by `W`.
///
/// Without pre-branching, a missing predecessor is replaced by a line of zeros
/// so every point runs the same two-update loop. With pre-branching the
/// predecessor case is decided once per point for the whole line, which also
/// enables the reduced two-predecessor update.
pub(crate) fn over_vectorized<S: Sweep, const W: usize>(
    buf: &mut [f64],
    geo: &AxisGeometry,
    pre_branched: bool,
    reduced: bool,
) {
    let zeros = vec![0.0; geo.live];
    for base in geo.line_bases().collect::<Vec<_>>() {
        for lam in S::levels(geo.level) {
            let (d, points) = geo.points(lam);
            for (o, left, right) in points {
                let (x, l, r) = views(buf, base + o, d, geo.live, left, right);
                if !pre_branched {
                    line_both::<S, W>(x, l.unwrap_or(&zeros), r.unwrap_or(&zeros), false);
                    continue;
                }
                match (l, r) {
                    (Some(l), Some(r)) => line_both::<S, W>(x, l, r, reduced),
                    (Some(p), None) | (None, Some(p)) => line_one::<S, W>(x, p),
                    (None, None) => unreachable!("only the root lacks both predecessors"),
                }
            }
        }
    }
}
