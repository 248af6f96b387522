//! Time intervals on the torus and frequency intervals on the integers.

use super::rational::Dyadic;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// The dyadic interval `[index * 2^-level, (index+1) * 2^-level) ⊂ [0,1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct DyadicInterval {
    pub level: u32,
    pub index: u64,
}

impl DyadicInterval {
    pub const UNIT: DyadicInterval = DyadicInterval { level: 0, index: 0 };

    pub fn new(level: u32, index: u64) -> Result<Self> {
        if level >= 64 || index >= (1u64 << level) {
            return Err(Error::InvalidInterval { level, index });
        }
        Ok(DyadicInterval { level, index })
    }

    pub fn lo(&self) -> Dyadic {
        Dyadic::new(self.index as i128, self.level)
    }

    pub fn hi(&self) -> Dyadic {
        Dyadic::new(self.index as i128 + 1, self.level)
    }

    pub fn len(&self) -> Dyadic {
        Dyadic::pow2(self.level as i32)
    }

    pub fn center(&self) -> Dyadic {
        Dyadic::new(2 * self.index as i128 + 1, self.level + 1)
    }

    pub fn parent(&self) -> Option<DyadicInterval> {
        if self.level == 0 {
            None
        } else {
            Some(DyadicInterval {
                level: self.level - 1,
                index: self.index / 2,
            })
        }
    }

    pub fn children(&self) -> [DyadicInterval; 2] {
        [
            DyadicInterval {
                level: self.level + 1,
                index: 2 * self.index,
            },
            DyadicInterval {
                level: self.level + 1,
                index: 2 * self.index + 1,
            },
        ]
    }

    /// Upper half `[c, hi)`.
    pub fn right_child(&self) -> DyadicInterval {
        self.children()[1]
    }

    pub fn contains(&self, other: &DyadicInterval) -> bool {
        other.level >= self.level && (other.index >> (other.level - self.level)) == self.index
    }

    pub fn contains_point(&self, x: Dyadic) -> bool {
        self.lo() <= x && x < self.hi()
    }

    pub fn strictly_contains(&self, other: &DyadicInterval) -> bool {
        self.contains(other) && self != other
    }

    pub fn disjoint(&self, other: &DyadicInterval) -> bool {
        !self.contains(other) && !other.contains(self)
    }

    pub fn to_real(&self) -> RealInterval {
        RealInterval {
            lo: self.lo(),
            hi: self.hi(),
        }
    }

    /// All level-`level` subcells, as a grid index range. Requires `level >= self.level`.
    pub fn cell_range(&self, level: u32) -> std::ops::Range<u64> {
        assert!(level >= self.level);
        let shift = level - self.level;
        (self.index << shift)..((self.index + 1) << shift)
    }
}

/// A half-open interval `[lo, hi)` with dyadic-rational endpoints; may extend
/// beyond `[0,1)` before torus wrap.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RealInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl RealInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<Self> {
        if lo >= hi {
            return Err(Error::EmptyRealInterval);
        }
        Ok(RealInterval { lo, hi })
    }

    pub fn len(&self) -> Dyadic {
        self.hi - self.lo
    }

    pub fn center(&self) -> Dyadic {
        (self.lo + self.hi).half()
    }

    pub fn contains(&self, other: &RealInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Containment of `other` in the *open* interval `(lo, hi)`, the reading
    /// used for dilations `bI := (c - b|I|/2, c + b|I|/2)`.
    pub fn open_contains(&self, other: &RealInterval) -> bool {
        self.lo < other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &RealInterval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    pub fn intersect(&self, other: &RealInterval) -> Option<RealInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo < hi).then_some(RealInterval { lo, hi })
    }

    /// The interval with the same center and length `b * len`.
    pub fn dilate(&self, b: Dyadic) -> RealInterval {
        assert!(b.is_positive(), "dilation factor must be positive");
        let c = self.center();
        let half = (b * self.len()).half();
        RealInterval {
            lo: c - half,
            hi: c + half,
        }
    }

    /// Decomposition into maximal dyadic intervals after wrapping mod 1.
    /// An interval of length >= 1 covers the whole torus.
    pub fn wrap_to_dyadic(&self) -> Vec<DyadicInterval> {
        if self.len() >= Dyadic::ONE {
            return vec![DyadicInterval::UNIT];
        }
        let shift = Dyadic::from_int(self.lo.floor());
        let lo = self.lo - shift;
        let hi = self.hi - shift;
        let mut out = Vec::new();
        if hi <= Dyadic::ONE {
            split_to_dyadic(lo, hi, &mut out);
        } else {
            split_to_dyadic(lo, Dyadic::ONE, &mut out);
            split_to_dyadic(Dyadic::ZERO, hi - Dyadic::ONE, &mut out);
        }
        out.sort_by_key(|x| x.lo());
        out
    }
}

/// Greedy split of `[lo, hi) ⊆ [0,1)` into maximal dyadic cells.
fn split_to_dyadic(lo: Dyadic, hi: Dyadic, out: &mut Vec<DyadicInterval>) {
    let mut cur = lo;
    while cur < hi {
        let mut level = cur.log2_denom();
        loop {
            let iv = DyadicInterval {
                level,
                index: cur.numer_at(level) as u64,
            };
            if iv.hi() <= hi {
                out.push(iv);
                cur = iv.hi();
                break;
            }
            level += 1;
        }
    }
}

/// The frequency interval `[index * 2^level, (index+1) * 2^level) ⊂ ℤ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct FrequencyInterval {
    pub level: u32,
    pub index: i64,
}

impl FrequencyInterval {
    pub fn new(level: u32, index: i64) -> Self {
        FrequencyInterval { level, index }
    }

    /// The 0-frequency interval `[0, 2^level)` at the given scale.
    pub fn zero(level: u32) -> Self {
        FrequencyInterval { level, index: 0 }
    }

    pub fn lo(&self) -> i128 {
        (self.index as i128) << self.level
    }

    pub fn hi(&self) -> i128 {
        (self.index as i128 + 1) << self.level
    }

    pub fn len(&self) -> i128 {
        1i128 << self.level
    }

    /// A frequency interval always has positive length `2^level`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains_freq(&self, m: i128) -> bool {
        self.lo() <= m && m < self.hi()
    }

    pub fn contains(&self, other: &FrequencyInterval) -> bool {
        self.lo() <= other.lo() && other.hi() <= self.hi()
    }

    pub fn intersects(&self, other: &FrequencyInterval) -> bool {
        self.lo() < other.hi() && other.lo() < self.hi()
    }

    /// True iff 0 lies in the `b`-fold dilation of this interval (`b` a
    /// positive integer): `|2*index + 1| < b`.
    pub fn dilation_contains_zero(&self, b: i128) -> bool {
        (2 * self.index as i128 + 1).abs() < b
    }
}
