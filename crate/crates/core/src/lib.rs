//! Hierarchization of combination technique grids.
//!
//! The crate transforms anisotropic full grids between nodal values and
//! hierarchical surpluses with a family of kernels that differ in memory
//! layout and blocking, checks them against a dense hat-basis oracle, and
//! provides the measurement side: analytic operation counts, a benchmark
//! sweep with CSV output and roofline plots.

pub mod combi;
pub mod costmodel;
pub mod error;
pub mod grid;
pub mod kernels;
pub mod oracle;
pub mod bench;

pub use error::{Error, Result};
pub use grid::{Grid, LayoutKind, LevelVector, PoleOrder};
pub use kernels::{dehierarchize, hierarchize, KernelVariant, VariantTag};
