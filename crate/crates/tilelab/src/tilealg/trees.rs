//! Maximal-tree extraction, the (l, m, n)-graded tree families, and the
//! descending star-foliation into layers.

use super::universe::{classify_tiles, f_mass_partition, mass_partition, TileUniverse};
use crate::dyadic::{Dyadic, Tile};
use crate::setmodel::DyadicSet;
use crate::Result;
use serde::{Deserialize, Serialize};

/// A tree of tiles under one top, together with the grading labels it has
/// acquired: lacunary frequency index `l`, F-mass class `m`, mass class `n`,
/// and foliation layer `p`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeFamily {
    pub top: Tile,
    pub members: Vec<Tile>,
    pub freq_index: Option<usize>,
    pub f_mass_class: Option<u32>,
    pub mass_class: Option<u32>,
    pub layer: Option<u32>,
}

impl TreeFamily {
    pub fn invariants_hold(&self, universe: &[Tile]) -> bool {
        let under_top = self.members.iter().all(|p| p.leq(&self.top));
        let convex = universe.iter().all(|p| {
            let squeezed =
                self.members.iter().any(|a| a.leq(p)) && self.members.iter().any(|b| p.leq(b));
            !squeezed || self.members.contains(p)
        });
        under_top && convex
    }
}

/// Deterministic top order: larger |I_top| first, ties leftmost, then lowest
/// frequency.
fn top_order(a: &Tile, b: &Tile) -> std::cmp::Ordering {
    a.interval
        .level
        .cmp(&b.interval.level)
        .then(a.interval.index.cmp(&b.interval.index))
        .then(a.omega.index.cmp(&b.omega.index))
}

/// Split a tile family into maximal trees: repeatedly take the first
/// maximal tile in top order and sweep up everything below it.
pub fn tree_decompose(tiles: &[Tile]) -> Vec<TreeFamily> {
    let mut rest: Vec<Tile> = tiles.to_vec();
    rest.sort_by(top_order);
    let mut out = Vec::new();
    while !rest.is_empty() {
        // The first tile in top order not below any other remaining tile.
        let pos = rest
            .iter()
            .position(|p| !rest.iter().any(|q| q != p && p.leq(q)))
            .expect("a partial order on a finite set has maximal elements");
        let top = rest[pos];
        let (members, remaining): (Vec<Tile>, Vec<Tile>) =
            rest.into_iter().partition(|p| p.leq(&top));
        out.push(TreeFamily {
            top,
            members,
            freq_index: None,
            f_mass_class: None,
            mass_class: None,
            layer: None,
        });
        rest = remaining;
    }
    out
}

/// Wrapped grid-cell footprint of Ĩ_P; exact since the endpoints are dyadic.
fn itilde_cells(p: &Tile, grid_level: u32) -> DyadicSet {
    DyadicSet::from_intervals(grid_level, &p.itilde().wrap_to_dyadic())
        .expect("itilde endpoints are coarser than the grid")
}

/// Assign a foliation layer to every tree (all trees share one (l, n)
/// grading). Layer p selects the trees whose top Ĩ contains a point not
/// covered by any strictly larger remaining top, then absorbs every
/// remaining tree whose top Ĩ overlaps a selected one on a set of positive
/// measure without exceeding its size.
pub fn star_foliation(trees: &mut [TreeFamily], grid_level: u32) {
    let covers: Vec<DyadicSet> = trees
        .iter()
        .map(|t| itilde_cells(&t.top, grid_level))
        .collect();
    let mut layer = 1u32;
    loop {
        let active: Vec<usize> = (0..trees.len())
            .filter(|&i| trees[i].layer.is_none())
            .collect();
        if active.is_empty() {
            break;
        }
        let selected: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&i| {
                let len_i = trees[i].top.interval.level;
                let mut uncovered = covers[i].clone();
                for &j in &active {
                    if trees[j].top.interval.level < len_i {
                        // strictly larger top
                        uncovered = diff(&uncovered, &covers[j]);
                        if uncovered.is_empty() {
                            break;
                        }
                    }
                }
                !uncovered.is_empty()
            })
            .collect();
        assert!(
            !selected.is_empty(),
            "the largest remaining top is always selectable"
        );
        for &i in &active {
            let absorbed = selected.iter().any(|&s| {
                trees[i].top.interval.level >= trees[s].top.interval.level
                    && !covers[i].intersect(&covers[s]).is_empty()
            });
            if absorbed {
                trees[i].layer = Some(layer);
            }
        }
        layer += 1;
        assert!(layer <= 1 + grid_level + 2, "foliation failed to terminate");
    }
}

fn diff(a: &DyadicSet, b: &DyadicSet) -> DyadicSet {
    let b = b.refine(a.level).expect("same grid");
    let cells = a
        .cells
        .iter()
        .copied()
        .filter(|c| !b.contains_cell(*c))
        .collect();
    DyadicSet::new(a.level, cells).expect("subset of a valid set")
}

/// Max of Σ_P χ_{Ĩ_P} over the grid, for the tops of the given trees.
pub fn top_overlap(trees: &[TreeFamily], grid_level: u32) -> u32 {
    let mut counts = vec![0u32; 1 << grid_level];
    for t in trees {
        for c in itilde_cells(&t.top, grid_level).cells {
            counts[c as usize] += 1;
        }
    }
    counts.into_iter().max().unwrap_or(0)
}

/// Full grading pipeline: classify, split the separated tiles by lacunary
/// frequency into maximal trees, grade by F-mass and mass, re-extract
/// maximal trees per grade, and foliate each (l, n) group into layers.
pub fn foliate_universe(u: &TileUniverse) -> Result<Vec<TreeFamily>> {
    let cls = classify_tiles(u);
    let by_k = f_mass_partition(&cls.sep, &u.f)?;
    let mut leaves: Vec<TreeFamily> = Vec::new();
    for root in tree_decompose(&cls.sep) {
        // Frequency index: lowest lacunary term inside the top's ω.
        let l = u
            .seq
            .terms
            .iter()
            .position(|&n| root.top.omega.contains_freq(n as i128));
        for (&m, class) in &by_k {
            let row: Vec<Tile> = root
                .members
                .iter()
                .filter(|p| class.contains(p))
                .copied()
                .collect();
            if row.is_empty() {
                continue;
            }
            let (by_n, _zero_mass) = mass_partition(&row, u);
            for (n, family) in by_n {
                for subtree in tree_decompose(&family) {
                    leaves.push(TreeFamily {
                        freq_index: l,
                        f_mass_class: Some(m),
                        mass_class: Some(n),
                        ..subtree
                    });
                }
            }
        }
    }
    // Foliate per (l, n) group.
    let mut keys: Vec<(Option<usize>, Option<u32>)> = leaves
        .iter()
        .map(|t| (t.freq_index, t.mass_class))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    for key in keys {
        let idx: Vec<usize> = (0..leaves.len())
            .filter(|&i| (leaves[i].freq_index, leaves[i].mass_class) == key)
            .collect();
        let mut group: Vec<TreeFamily> = idx.iter().map(|&i| leaves[i].clone()).collect();
        star_foliation(&mut group, u.grid_level);
        for (slot, tree) in idx.into_iter().zip(group) {
            leaves[slot] = tree;
        }
    }
    Ok(leaves)
}

/// Σ |I_P| over the minimal adjoint-support cells of a tree, used by the
/// residual-density property of the F-mass classes.
pub fn tree_min_adjoint_cells(tree: &TreeFamily) -> Result<Vec<crate::dyadic::DyadicInterval>> {
    let finest = tree
        .members
        .iter()
        .map(|p| p.interval.level)
        .max()
        .unwrap_or(0);
    let mut out = Vec::new();
    for p in &tree.members {
        if p.interval.level == finest {
            let (cells, _) = p.adjoint_support()?;
            out.extend(cells);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Total time length of a tile family, exact.
pub fn total_length(tiles: &[Tile]) -> Dyadic {
    tiles
        .iter()
        .fold(Dyadic::ZERO, |acc, p| acc + p.interval.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::{DyadicInterval, FrequencyInterval};

    fn tile(k: u32, w: i64, i: u64) -> Tile {
        Tile::new(
            FrequencyInterval::new(k, w),
            DyadicInterval::new(k, i).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn chain_gives_one_tree() {
        // ω shrinks as I grows: a ≤-chain.
        let p1 = tile(7, 16, 3); // smallest I, widest ω = [2048, 2176)
        let p2 = tile(6, 32, 1); // ω = [2048, 2112)
        let p3 = tile(5, 64, 0); // top, ω = [2048, 2080)
        assert!(p1.leq(&p2) && p2.leq(&p3));
        let trees = tree_decompose(&[p1, p2, p3]);
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].top, p3);
        assert_eq!(trees[0].members.len(), 3);
        assert!(trees[0].invariants_hold(&[p1, p2, p3]));
    }

    #[test]
    fn disjoint_intervals_give_a_row() {
        let p1 = tile(5, 3, 2);
        let p2 = tile(5, 3, 9);
        let trees = tree_decompose(&[p1, p2]);
        assert_eq!(trees.len(), 2);
    }

    #[test]
    fn disjoint_tops_all_land_in_layer_one() {
        // Tops far apart: Ĩ's (17 |I|) at scale 6 span < 17/64, so indices
        // 0 and 32 stay disjoint.
        let mut trees: Vec<TreeFamily> = [tile(6, 5, 0), tile(6, 5, 32)]
            .iter()
            .map(|&top| TreeFamily {
                top,
                members: vec![top],
                freq_index: Some(1),
                f_mass_class: Some(1),
                mass_class: Some(0),
                layer: None,
            })
            .collect();
        star_foliation(&mut trees, 10);
        assert!(trees.iter().all(|t| t.layer == Some(1)));
        assert_eq!(top_overlap(&trees, 10), 1);
    }

    #[test]
    fn nested_tops_absorb_the_smaller() {
        // A big top and a smaller one inside its Ĩ: both get layer 1, the
        // smaller by absorption.
        let big = tile(5, 2, 4);
        let small = tile(8, 16, 36); // I ⊂ I_big, so Ĩ's overlap
        let mut trees: Vec<TreeFamily> = [big, small]
            .iter()
            .map(|&top| TreeFamily {
                top,
                members: vec![top],
                freq_index: Some(1),
                f_mass_class: Some(1),
                mass_class: Some(0),
                layer: None,
            })
            .collect();
        star_foliation(&mut trees, 10);
        assert_eq!(trees[0].layer, Some(1));
        assert_eq!(trees[1].layer, Some(1));
    }

    #[test]
    fn mixed_size_tops_all_get_layers() {
        let mut trees: Vec<TreeFamily> = [tile(6, 5, 0), tile(6, 5, 1), tile(7, 11, 64)]
            .iter()
            .map(|&top| TreeFamily {
                top,
                members: vec![top],
                freq_index: Some(1),
                f_mass_class: Some(1),
                mass_class: Some(0),
                layer: None,
            })
            .collect();
        star_foliation(&mut trees, 10);
        assert!(trees.iter().all(|t| t.layer.is_some()));
    }
}
