//! Area-one tiles `P = [ω, I]` and the partial order among them.

use super::interval::{DyadicInterval, FrequencyInterval, RealInterval};
use super::rational::Dyadic;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A time-frequency tile `P = [ω, I]` with `|ω| = |I|^{-1} = 2^k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Tile {
    pub omega: FrequencyInterval,
    pub interval: DyadicInterval,
}

impl Tile {
    pub fn new(omega: FrequencyInterval, interval: DyadicInterval) -> Result<Self> {
        if omega.level != interval.level {
            return Err(Error::TileAreaMismatch {
                omega_level: omega.level,
                time_level: interval.level,
            });
        }
        Ok(Tile { omega, interval })
    }

    /// Scale `k` of the tile: `|I| = 2^-k`.
    pub fn scale(&self) -> u32 {
        self.interval.level
    }

    /// The 0-frequency tile `R(I)` over the given time interval.
    pub fn zero_frequency(interval: DyadicInterval) -> Self {
        Tile {
            omega: FrequencyInterval::zero(interval.level),
            interval,
        }
    }

    pub fn is_zero_frequency(&self) -> bool {
        self.omega.contains_freq(0)
    }

    /// `Ĩ_P = 17 I_P`, unwrapped.
    pub fn itilde(&self) -> RealInterval {
        self.interval.to_real().dilate(Dyadic::from_int(17))
    }

    /// Partial order: `p <= q` iff `I_p ⊆ I_q` and `ω_p ⊇ ω_q`.
    pub fn leq(&self, other: &Tile) -> bool {
        other.interval.contains(&self.interval) && self.omega.contains(&other.omega)
    }

    pub fn comparable(&self, other: &Tile) -> bool {
        self.leq(other) || other.leq(self)
    }

    /// The adjoint support geometry of the tile: the 14 dyadic cells of
    /// length `|I_P|` making up
    /// `I_{P*} = [c - 17/2 |I|, c - 3/2 |I|] ∪ [c + 3/2 |I|, c + 17/2 |I|]`
    /// (torus-wrapped), together with `Ĩ_P = 17 I_P` (unwrapped).
    ///
    /// Fails when `|I_P| > 1/17` (scale `k <= 4`): the dilated support would
    /// self-overlap after wrapping mod 1.
    pub fn adjoint_support(&self) -> Result<([DyadicInterval; 14], RealInterval)> {
        let k = self.scale();
        if k < 5 {
            return Err(Error::TileTooCoarse { level: k });
        }
        let n = 1u64 << k;
        let idx = self.interval.index as i128;
        let mut cells = [DyadicInterval::UNIT; 14];
        // Left block: indices idx-8 .. idx-2; right block: idx+2 .. idx+8.
        for r in 0..7 {
            let left = idx - 8 + r as i128;
            let right = idx + 2 + r as i128;
            cells[r] = DyadicInterval {
                level: k,
                index: left.rem_euclid(n as i128) as u64,
            };
            cells[r + 7] = DyadicInterval {
                level: k,
                index: right.rem_euclid(n as i128) as u64,
            };
        }
        Ok((cells, self.itilde()))
    }
}

/// `tile_leq` as a free function, mirroring the order relation.
pub fn tile_leq(p: &Tile, q: &Tile) -> bool {
    p.leq(q)
}
