/// Direction of a transform: which update is applied and in which level order.
///
/// Hierarchization walks levels finest to coarsest and subtracts half of each
/// predecessor; dehierarchization walks coarsest to finest and adds it back.
pub(crate) trait Sweep {
    fn update(x: f64, pred: f64) -> f64;

    /// Two-predecessor update with a single multiplication.
    fn update_pair(x: f64, left: f64, right: f64) -> f64;

    fn levels(axis_level: u32) -> impl Iterator<Item = u32>;

    /// Axis order used when the caller does not supply one.
    fn reversed_axes() -> bool;
}

pub(crate) struct Forward;

pub(crate) struct Inverse;

impl Sweep for Forward {
    #[inline(always)]
    fn update(x: f64, pred: f64) -> f64 {
        x - 0.5 * pred
    }

    #[inline(always)]
    fn update_pair(x: f64, left: f64, right: f64) -> f64 {
        x - 0.5 * (left + right)
    }

    fn levels(axis_level: u32) -> impl Iterator<Item = u32> {
        (2..=axis_level).rev()
    }

    fn reversed_axes() -> bool {
        false
    }
}

impl Sweep for Inverse {
    #[inline(always)]
    fn update(x: f64, pred: f64) -> f64 {
        x + 0.5 * pred
    }

    #[inline(always)]
    fn update_pair(x: f64, left: f64, right: f64) -> f64 {
        x + 0.5 * (left + right)
    }

    fn levels(axis_level: u32) -> impl Iterator<Item = u32> {
        2..=axis_level
    }

    fn reversed_axes() -> bool {
        true
    }
}
