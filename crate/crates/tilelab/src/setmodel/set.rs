//! Measurable sets as finite unions of dyadic cells at a fixed resolution.

use crate::dyadic::{Dyadic, DyadicInterval};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A set `F ⊆ [0,1)` given as a union of level-`level` dyadic cells.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DyadicSet {
    pub level: u32,
    pub cells: Vec<u64>,
}

impl DyadicSet {
    pub fn new(level: u32, mut cells: Vec<u64>) -> Result<Self> {
        if level >= 40 {
            return Err(Error::GridLevel {
                level,
                reason: "resolution too fine".into(),
            });
        }
        cells.sort_unstable();
        cells.dedup();
        if let Some(&last) = cells.last() {
            if last >= (1u64 << level) {
                return Err(Error::InvalidInterval { level, index: last });
            }
        }
        Ok(DyadicSet { level, cells })
    }

    pub fn empty(level: u32) -> Self {
        DyadicSet {
            level,
            cells: Vec::new(),
        }
    }

    pub fn full(level: u32) -> Self {
        DyadicSet {
            level,
            cells: (0..(1u64 << level)).collect(),
        }
    }

    pub fn from_intervals(level: u32, intervals: &[DyadicInterval]) -> Result<Self> {
        let mut cells = Vec::new();
        for iv in intervals {
            if iv.level > level {
                return Err(Error::GridLevel {
                    level,
                    reason: format!("interval at level {} finer than the set", iv.level),
                });
            }
            cells.extend(iv.cell_range(level));
        }
        DyadicSet::new(level, cells)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn measure(&self) -> Dyadic {
        Dyadic::new(self.cells.len() as i128, self.level)
    }

    pub fn contains_cell(&self, index: u64) -> bool {
        self.cells.binary_search(&index).is_ok()
    }

    /// Number of set cells inside the given dyadic interval.
    pub fn cells_in(&self, iv: &DyadicInterval) -> u64 {
        assert!(iv.level <= self.level);
        let range = iv.cell_range(self.level);
        let lo = self.cells.partition_point(|&c| c < range.start);
        let hi = self.cells.partition_point(|&c| c < range.end);
        (hi - lo) as u64
    }

    /// `|F ∩ I|` as an exact rational.
    pub fn measure_in(&self, iv: &DyadicInterval) -> Dyadic {
        Dyadic::new(self.cells_in(iv) as i128, self.level)
    }

    /// Exact density test `|F ∩ I| / |I| > 2^-k`.
    pub fn density_exceeds(&self, iv: &DyadicInterval, k: u32) -> bool {
        let count = self.cells_in(iv) as u128;
        (count << k) > (1u128 << (self.level - iv.level))
    }

    /// The same set re-expressed at a finer resolution.
    pub fn refine(&self, level: u32) -> Result<DyadicSet> {
        if level < self.level {
            return Err(Error::GridLevel {
                level,
                reason: "coarser than the set".into(),
            });
        }
        let shift = level - self.level;
        let mut cells = Vec::with_capacity(self.cells.len() << shift);
        for &c in &self.cells {
            cells.extend((c << shift)..((c + 1) << shift));
        }
        Ok(DyadicSet { level, cells })
    }

    pub fn intersect(&self, other: &DyadicSet) -> DyadicSet {
        let level = self.level.max(other.level);
        let a = self.refine(level).expect("refine up");
        let b = other.refine(level).expect("refine up");
        let cells = merge_sorted(&a.cells, &b.cells, true);
        DyadicSet { level, cells }
    }

    pub fn union(&self, other: &DyadicSet) -> DyadicSet {
        let level = self.level.max(other.level);
        let a = self.refine(level).expect("refine up");
        let b = other.refine(level).expect("refine up");
        let cells = merge_sorted(&a.cells, &b.cells, false);
        DyadicSet { level, cells }
    }

    /// `|F ∩ W|` for a wrapped real interval `W`, exact. `W` is intersected
    /// with the torus after wrapping mod 1.
    pub fn measure_in_wrapped(&self, w: &crate::dyadic::RealInterval) -> Dyadic {
        w.wrap_to_dyadic()
            .iter()
            .filter(|iv| iv.level <= self.level)
            .fold(Dyadic::ZERO, |acc, iv| acc + self.measure_in(iv))
    }

    /// Maximal dyadic intervals covering the set cells (greedy merge).
    pub fn to_intervals(&self) -> Vec<DyadicInterval> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.cells.len() {
            // Longest run of consecutive cells starting here.
            let start = self.cells[i];
            let mut end = start + 1;
            let mut j = i + 1;
            while j < self.cells.len() && self.cells[j] == end {
                end += 1;
                j += 1;
            }
            crate::dyadic::RealInterval::new(
                Dyadic::new(start as i128, self.level),
                Dyadic::new(end as i128, self.level),
            )
            .map(|r| out.extend(r.wrap_to_dyadic()))
            .expect("nonempty run");
            i = j;
        }
        out.sort();
        out
    }
}

fn merge_sorted(a: &[u64], b: &[u64], intersection: bool) -> Vec<u64> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                if !intersection {
                    out.push(a[i]);
                }
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                if !intersection {
                    out.push(b[j]);
                }
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    if !intersection {
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
    }
    out
}

/// The maximal dyadic intervals `I` with `|F ∩ I|/|I| > 2^-k`, together with
/// the measure of their union.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelSetFamily {
    pub k: u32,
    pub intervals: Vec<DyadicInterval>,
    pub union_measure: Dyadic,
}

/// `k_F = floor(log2(1/|F|)) + 1`.
pub fn k_f(f: &DyadicSet) -> Result<u32> {
    if f.is_empty() {
        return Err(Error::ZeroMeasure);
    }
    let count = f.cells.len() as u128;
    // Largest t with 2^t <= 2^level / count.
    let t = (0..=f.level)
        .rev()
        .find(|&t| count << t <= 1u128 << f.level)
        .unwrap_or(0);
    Ok(t + 1)
}

/// The Hardy-Littlewood level-set family at threshold `2^-k`.
pub fn level_sets(f: &DyadicSet, k: u32) -> Result<LevelSetFamily> {
    if f.is_empty() {
        return Err(Error::ZeroMeasure);
    }
    let max = k_f(f)?;
    if k < 1 || k > max {
        return Err(Error::LevelSetIndex { k, max });
    }
    let mut intervals = Vec::new();
    let mut stack = vec![DyadicInterval::UNIT];
    while let Some(iv) = stack.pop() {
        if f.density_exceeds(&iv, k) {
            intervals.push(iv);
        } else if iv.level < f.level {
            stack.extend(iv.children());
        }
    }
    intervals.sort();
    let union_measure = intervals
        .iter()
        .fold(Dyadic::ZERO, |acc, iv| acc + iv.len());
    Ok(LevelSetFamily {
        k,
        intervals,
        union_measure,
    })
}

/// The Cantor-type extremal set: stage 0 subdivides `[0,1)` into level-`s`
/// cells; each later stage keeps the right (upper) child of every interval
/// and subdivides it into `2^s` cells again. The result has measure `2^-N`.
pub fn cantor_set(big_n: u32, s: u32) -> Result<DyadicSet> {
    if big_n < 1 || s < 1 {
        return Err(Error::Precondition(
            "cantor_set requires N >= 1 and s >= 1".into(),
        ));
    }
    let final_level = s + big_n * (s + 1);
    if final_level >= 40 || (s as u64) * (big_n as u64 + 1) > 26 {
        return Err(Error::GridLevel {
            level: final_level,
            reason: "cantor_set overflow".into(),
        });
    }
    let mut intervals: Vec<DyadicInterval> = DyadicInterval::UNIT
        .cell_range(s)
        .map(|index| DyadicInterval { level: s, index })
        .collect();
    for _ in 0..big_n {
        let mut next = Vec::with_capacity(intervals.len() << s);
        for iv in &intervals {
            let rt = iv.right_child();
            next.extend(rt.cell_range(rt.level + s).map(|index| DyadicInterval {
                level: rt.level + s,
                index,
            }));
        }
        intervals = next;
    }
    DyadicSet::from_intervals(final_level, &intervals)
}
