//! Time-frequency regularization of a set: a labeled {U,L}* recursion that
//! turns the level-set families of `F` into nested collections of
//! zero-frequency tiles, plus the base/children structure on the result.

use crate::dyadic::{Dyadic, DyadicInterval, FrequencyInterval, Tile};
use crate::setmodel::{k_f, level_sets, DyadicSet};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A tile whose frequency interval is `[0, |I|^{-1})`; it is determined by
/// its time interval, so only that is stored.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ZeroFreqTile {
    pub interval: DyadicInterval,
}

impl ZeroFreqTile {
    pub fn new(interval: DyadicInterval) -> Self {
        ZeroFreqTile { interval }
    }

    pub fn omega(&self) -> FrequencyInterval {
        FrequencyInterval::zero(self.interval.level)
    }

    pub fn as_tile(&self) -> Tile {
        Tile::zero_frequency(self.interval)
    }
}

/// One node of the {U,L} recursion. `word` is the branch label (empty at the
/// root), `alpha` the threshold frequency selected from the node's input
/// (absent when the input was empty), `c_set` the selected intervals of
/// length `1/alpha`, and `tiles` the zero-frequency tiles over them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TfrNode {
    pub word: String,
    pub alpha: Option<u64>,
    pub c_set: Vec<DyadicInterval>,
    pub tiles: Vec<ZeroFreqTile>,
    pub child_u: Option<Box<TfrNode>>,
    pub child_l: Option<Box<TfrNode>>,
}

impl TfrNode {
    fn empty(word: String) -> Self {
        TfrNode {
            word,
            alpha: None,
            c_set: Vec::new(),
            tiles: Vec::new(),
            child_u: None,
            child_l: None,
        }
    }

    /// Depth-first traversal over this node and its descendants.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a TfrNode)) {
        visit(self);
        if let Some(u) = &self.child_u {
            u.walk(visit);
        }
        if let Some(l) = &self.child_l {
            l.walk(visit);
        }
    }

    pub fn nodes(&self) -> Vec<&TfrNode> {
        let mut out = Vec::new();
        self.walk(&mut |n| out.push(n));
        out
    }

    pub fn find(&self, word: &str) -> Option<&TfrNode> {
        self.nodes().into_iter().find(|n| n.word == word)
    }

    pub fn all_tiles(&self) -> Vec<ZeroFreqTile> {
        let mut out = Vec::new();
        self.walk(&mut |n| out.extend(n.tiles.iter().copied()));
        out
    }
}

/// The forest at density index `k`: one root tile and one recursion tree per
/// maximal interval of the level-`k` family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TfrForest {
    pub k: u32,
    pub roots: BTreeMap<DyadicInterval, TfrRoot>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TfrRoot {
    pub root_tile: ZeroFreqTile,
    pub tree: TfrNode,
}

impl TfrForest {
    /// Every tile of the forest, root tiles included.
    pub fn all_tiles(&self) -> Vec<ZeroFreqTile> {
        let mut out = Vec::new();
        for root in self.roots.values() {
            out.push(root.root_tile);
            out.extend(root.tree.all_tiles());
        }
        out
    }

    /// Tiles below a single root, the root tile included.
    fn tiles_under(&self, top: &DyadicInterval) -> Vec<ZeroFreqTile> {
        let root = &self.roots[top];
        let mut out = vec![root.root_tile];
        out.extend(root.tree.all_tiles());
        out
    }

    fn root_containing(&self, iv: &DyadicInterval) -> Option<&DyadicInterval> {
        self.roots.keys().find(|top| top.contains(iv))
    }
}

/// `(alpha, b, b_u, b_l)` as produced by one recursion step.
pub type TfrStepOutput = (
    u64,
    Vec<DyadicInterval>,
    Vec<DyadicInterval>,
    Vec<DyadicInterval>,
);

/// One pass of the central iterative body: select the threshold frequency by
/// the saturation rule, then split the input around it.
///
/// Returns `(alpha, b, b_u, b_l)` where `alpha` is the reciprocal of the
/// saturating size, `b` the dyadic intervals of that exact size containing a
/// member of `a`, and `b_u`/`b_l` the members of `a` strictly finer/coarser
/// than `alpha`.
pub fn tfr_step(a: &[DyadicInterval]) -> Result<TfrStepOutput> {
    if a.is_empty() {
        return Err(Error::EmptyInput(
            "tfr_step needs a nonempty interval family".into(),
        ));
    }
    for (i, x) in a.iter().enumerate() {
        for y in &a[i + 1..] {
            if !x.disjoint(y) {
                return Err(Error::NotDisjoint {
                    first: *x,
                    second: *y,
                });
            }
        }
    }

    // Work with numerators at the finest level present, so sums stay exact.
    let max_level = a.iter().map(|j| j.level).max().unwrap();
    let weight = |j: &DyadicInterval| 1u128 << (max_level - j.level);
    let total: u128 = a.iter().map(weight).sum();

    // Smallest size whose cumulative weight (from the finest size up) reaches
    // half the total.
    let mut levels: Vec<u32> = a.iter().map(|j| j.level).collect();
    levels.sort_unstable_by(|x, y| y.cmp(x)); // finest first
    levels.dedup();
    let mut acc = 0u128;
    let mut chosen = *levels.last().unwrap();
    for &lvl in &levels {
        acc += a
            .iter()
            .filter(|j| j.level == lvl)
            .map(weight)
            .sum::<u128>();
        if 2 * acc >= total {
            chosen = lvl;
            break;
        }
    }
    let alpha = 1u64 << chosen;

    let mut b: Vec<DyadicInterval> = a
        .iter()
        .filter(|j| j.level >= chosen)
        .map(|j| {
            let mut anc = *j;
            while anc.level > chosen {
                anc = anc.parent().expect("level > 0");
            }
            anc
        })
        .collect();
    b.sort_unstable();
    b.dedup();

    let b_u: Vec<_> = a.iter().filter(|j| j.level > chosen).copied().collect();
    let b_l: Vec<_> = a.iter().filter(|j| j.level < chosen).copied().collect();
    Ok((alpha, b, b_u, b_l))
}

fn build_node(word: String, a: &[DyadicInterval]) -> Result<TfrNode> {
    if a.is_empty() {
        return Ok(TfrNode::empty(word));
    }
    let (alpha, b, b_u, b_l) = tfr_step(a)?;
    let tiles = b.iter().map(|&j| ZeroFreqTile::new(j)).collect();
    let child_u = if b_u.is_empty() {
        None
    } else {
        Some(Box::new(build_node(format!("{word}U"), &b_u)?))
    };
    let child_l = if b_l.is_empty() {
        None
    } else {
        Some(Box::new(build_node(format!("{word}L"), &b_l)?))
    };
    Ok(TfrNode {
        word,
        alpha: Some(alpha),
        c_set: b,
        tiles,
        child_u,
        child_l,
    })
}

/// The recursion tree below one maximal interval `i` of the level-`k`
/// family: the root input is the part of the level-`(k-1)` family inside `i`.
pub fn tfr_build(f: &DyadicSet, k: u32, i: &DyadicInterval) -> Result<TfrNode> {
    if k < 2 {
        return Err(Error::Precondition("tfr_build needs k >= 2".into()));
    }
    let fam_k = level_sets(f, k)?;
    if !fam_k.intervals.contains(i) {
        return Err(Error::Precondition(format!(
            "{i:?} is not a maximal interval of the level-{k} family"
        )));
    }
    let fam_prev = level_sets(f, k - 1)?;
    let a: Vec<DyadicInterval> = fam_prev
        .intervals
        .iter()
        .filter(|j| i.contains(j))
        .copied()
        .collect();
    build_node(String::new(), &a)
}

/// Full regularization: one forest for every `k = 1 ..= k_F`. The `k = 1`
/// forest carries only the root tiles.
pub fn tfr_global(f: &DyadicSet) -> Result<Vec<TfrForest>> {
    if f.is_empty() {
        return Err(Error::ZeroMeasure);
    }
    let kf = k_f(f)?;
    let mut forests = Vec::with_capacity(kf as usize);
    for k in 1..=kf {
        let fam = level_sets(f, k)?;
        let mut roots = BTreeMap::new();
        for &i in &fam.intervals {
            let tree = if k == 1 {
                TfrNode::empty(String::new())
            } else {
                tfr_build(f, k, &i)?
            };
            roots.insert(
                i,
                TfrRoot {
                    root_tile: ZeroFreqTile::new(i),
                    tree,
                },
            );
        }
        forests.push(TfrForest { k, roots });
    }
    Ok(forests)
}

/// The base of `r`: the unique forest tile whose interval strictly contains
/// `I_r` and is minimal with that property. Root tiles have no base.
pub fn base_of(r: &ZeroFreqTile, forest: &TfrForest) -> Result<ZeroFreqTile> {
    let top = forest
        .root_containing(&r.interval)
        .ok_or_else(|| Error::Mismatch("tile lies under no root of the forest".into()))?;
    if r.interval == *top {
        return Err(Error::Precondition("root tiles have no base".into()));
    }
    forest
        .tiles_under(top)
        .into_iter()
        .filter(|c| c.interval.strictly_contains(&r.interval))
        .max_by_key(|c| c.interval.level) // finest strict container
        .ok_or_else(|| Error::Mismatch("tile not nested under the forest".into()))
}

/// All forest tiles whose base is `rbar`.
pub fn children_of(rbar: &ZeroFreqTile, forest: &TfrForest) -> Vec<ZeroFreqTile> {
    let Some(top) = forest.root_containing(&rbar.interval) else {
        return Vec::new();
    };
    forest
        .tiles_under(top)
        .into_iter()
        .filter(|c| base_of(c, forest).is_ok_and(|b| b == *rbar))
        .collect()
}

/// Frequencies attached to a node: those `n` lying in `ω_R` but not in
/// `ω_{R̲}` for a representative `R` of the node. The answer is checked to be
/// the same for every representative.
pub fn frequencies_of_node(freqs: &[i64], node: &TfrNode, forest: &TfrForest) -> Result<Vec<i64>> {
    if node.tiles.is_empty() {
        return Err(Error::EmptyInput("node has no tiles".into()));
    }
    let mut answer: Option<Vec<i64>> = None;
    for tile in &node.tiles {
        let hi = 1i64 << tile.interval.level;
        let lo = 1i64 << base_of(tile, forest)?.interval.level;
        let this: Vec<i64> = freqs
            .iter()
            .filter(|&&n| lo <= n && n < hi)
            .copied()
            .collect();
        match &answer {
            None => answer = Some(this),
            Some(prev) => {
                if *prev != this {
                    return Err(Error::Mismatch(
                        "frequency set differs between node representatives".into(),
                    ));
                }
            }
        }
    }
    Ok(answer.unwrap())
}

/// Total time length of the tiles in a node, exact.
pub fn node_length(node: &TfrNode) -> Dyadic {
    node.tiles
        .iter()
        .fold(Dyadic::ZERO, |acc, t| acc + t.interval.len())
}
