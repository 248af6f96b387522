//! Dyadic tile combinatorics on the torus, the time-frequency regularization
//! of a measurable set, an FFT-discretized lacunary Carleson operator, and
//! executable verification suites for the inequalities these structures obey.

pub mod carleson;
pub mod dyadic;
pub mod parallel;
pub mod setmodel;
pub mod tfr;
pub mod tilealg;
pub mod verify;

use dyadic::DyadicInterval;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dyadic interval: level {level}, index {index}")]
    InvalidInterval { level: u32, index: u64 },
    #[error("empty real interval")]
    EmptyRealInterval,
    #[error("tile area mismatch: omega level {omega_level}, time level {time_level}")]
    TileAreaMismatch { omega_level: u32, time_level: u32 },
    #[error("tile too coarse for adjoint support: level {level} < 5")]
    TileTooCoarse { level: u32 },
    #[error("intervals not pairwise disjoint: {first:?}, {second:?}")]
    NotDisjoint {
        first: DyadicInterval,
        second: DyadicInterval,
    },
    #[error("interval {interval:?} not contained in the base")]
    NotInBase { interval: DyadicInterval },
    #[error("no Calderon-Zygmund decomposition exists for this input")]
    CzNoDecomposition,
    #[error("set has zero measure")]
    ZeroMeasure,
    #[error("grid level {level} out of range: {reason}")]
    GridLevel { level: u32, reason: String },
    #[error("level-set index k={k} out of range 1..={max}")]
    LevelSetIndex { k: u32, max: u32 },
    #[error("sequence is not lacunary: sum of first {k} terms exceeds cBar * n_{{k+1}}")]
    NotLacunary { k: usize },
    #[error("kernel taper invalid: {0}")]
    BadTaper(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("universe/forest mismatch: {0}")]
    Mismatch(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
