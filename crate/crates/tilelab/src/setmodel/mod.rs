//! Finite models for measurable sets and band-limited functions on the torus.

mod grid;
mod set;

pub use grid::{indicator, GridFunction};
pub use set::{cantor_set, k_f, level_sets, DyadicSet, LevelSetFamily};
