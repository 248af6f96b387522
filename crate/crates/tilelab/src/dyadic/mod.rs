//! Dyadic geometry: time intervals on the torus, frequency intervals on the
//! integers, tiles, the partial order, dilations, adjoint supports, and
//! Calderon-Zygmund decompositions.
//!
//! Everything here is exact: interval endpoints are dyadic rationals and all
//! predicates are decided in integer arithmetic. Types are immutable after
//! construction and operations are pure.

mod cz;
mod interval;
mod rational;
mod tile;

pub use cz::cz_decompose;
pub use interval::{DyadicInterval, FrequencyInterval, RealInterval};
pub use rational::Dyadic;
pub use tile::{tile_leq, Tile};

/// Scale-separation filter: keep only tiles whose scales lie on a stride-10
/// ladder anchored at `base_scale`, so that any two distinct retained scales
/// have length ratio `<= 2^-10`.
pub fn scale_separated(scales: impl IntoIterator<Item = u32>, base_scale: u32) -> Vec<u32> {
    scales
        .into_iter()
        .filter(|k| *k >= base_scale && (*k - base_scale).is_multiple_of(10))
        .collect()
}
