//! Combinatorial fuzz checks: packing of the sets E(P), foliation overlap,
//! the weighted tree L² inequality, the tree operator mass bound, and the
//! invariants of the regularization recursion.

use super::{Band, ExperimentReport, GoldenBands, RatioSample};
use crate::carleson::{
    build_kernel, e_of, tile_adjoint, tile_operator, LacunarySequence, Linearizer,
};
use crate::dyadic::{cz_decompose, Dyadic, DyadicInterval, FrequencyInterval, Tile};
use crate::setmodel::{DyadicSet, GridFunction};
use crate::tfr::{
    base_of, frequencies_of_node, node_length, tfr_global, tfr_step, TfrForest, TfrNode,
};
use crate::tilealg::{star_foliation, top_overlap, TreeFamily};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::Instant;

fn sum_lengths(a: &[DyadicInterval]) -> Dyadic {
    a.iter().fold(Dyadic::ZERO, |acc, j| acc + j.len())
}

/// Random antichains of tiles inside a random interval `I`: the sets `E(P)`
/// must be pairwise disjoint and their total measure can never exceed `|I|`
/// (exact dyadic arithmetic, no tolerance).
pub fn packing_check(trials: u32, seed: u64, golden: &GoldenBands) -> Result<ExperimentReport> {
    let started = Instant::now();
    let grid = 12u32;
    let band = golden.band("packing")?;
    let seq = LacunarySequence::powers_of_two(32).truncate_to_band(grid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 1usize << grid;
    let mut max_fill = 0.0f64;
    let mut violations = 0u64;
    for _ in 0..trials {
        let choice: Vec<usize> = (0..n).map(|_| rng.gen_range(0..seq.terms.len())).collect();
        let nfun = Linearizer::from_choice(grid, choice);
        let li = rng.gen_range(0..=2u32);
        let i = DyadicInterval::new(li, rng.gen_range(0..1u64 << li))?;
        let mut antichain: Vec<Tile> = Vec::new();
        for _ in 0..10 {
            let k = rng.gen_range(5..=grid - 2);
            let idx = (i.index << (k - li)) + rng.gen_range(0..1u64 << (k - li));
            let wmax = (1i64 << (grid - 1)) >> k;
            let omega = FrequencyInterval::new(k, rng.gen_range(0..wmax.max(1)));
            let p = Tile::new(omega, DyadicInterval::new(k, idx)?)?;
            if !antichain.iter().any(|q| p.comparable(q)) {
                antichain.push(p);
            }
        }
        let sets: Vec<DyadicSet> = antichain
            .iter()
            .map(|p| e_of(p, &nfun, &seq))
            .collect::<Result<_>>()?;
        for (a, x) in sets.iter().enumerate() {
            for y in &sets[a + 1..] {
                if !x.intersect(y).is_empty() {
                    violations += 1;
                }
            }
        }
        let total = sets.iter().fold(Dyadic::ZERO, |acc, s| acc + s.measure());
        if total > i.len() {
            violations += 1;
        }
        max_fill = max_fill.max(total.to_f64() / i.len().to_f64());
    }
    let ratios = vec![RatioSample {
        point: "max_fill".into(),
        value: max_fill,
    }];
    let mut params = BTreeMap::new();
    params.insert("trials".into(), trials.to_string());
    params.insert("seed".into(), seed.to_string());
    params.insert("grid".into(), grid.to_string());
    params.insert("violations".into(), violations.to_string());
    Ok(ExperimentReport::assemble(
        "packing",
        params,
        ratios,
        band,
        violations == 0,
        started,
    ))
}

fn zero_tile(k: u32, idx: u64) -> Tile {
    Tile::new(
        FrequencyInterval::zero(k),
        DyadicInterval {
            level: k,
            index: idx,
        },
    )
    .expect("area one by construction")
}

fn bare_tree(top: Tile) -> TreeFamily {
    TreeFamily {
        top,
        members: vec![top],
        freq_index: None,
        f_mass_class: None,
        mass_class: None,
        layer: None,
    }
}

/// Random top collections (separated two-scale universes and a three-scale
/// mode that deliberately plants nested triples of tops over a common
/// point), foliated; the layer-1 tops must never stack more than 100 deep.
pub fn foliation_overlap_check(
    trials: u32,
    seed: u64,
    golden: &GoldenBands,
) -> Result<ExperimentReport> {
    let started = Instant::now();
    let band = golden.band("foliation")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_overlap = 0u32;
    let mut max_layers = 0u32;
    let separated_trials = (trials / 20).max(1);
    for trial in 0..trials {
        let (scales, grid): (&[u32], u32) = if trial < separated_trials {
            (&[5, 15], 16)
        } else {
            (&[5, 8, 11], 13)
        };
        let mut tops: Vec<Tile> = Vec::new();
        if trial >= separated_trials && trial % 3 == 0 {
            // Adversarial: three tops of strictly decreasing size whose
            // dilated intervals all cover the same point.
            let i5 = rng.gen_range(0..32u64);
            let i8 = (i5 << 3) + rng.gen_range(0..8);
            let i11 = (i8 << 3) + rng.gen_range(0..8);
            tops.push(zero_tile(5, i5));
            tops.push(zero_tile(8, i8));
            tops.push(zero_tile(11, i11));
        }
        for &k in scales {
            let count = if k == 5 {
                rng.gen_range(0..=3)
            } else {
                rng.gen_range(0..=6)
            };
            for _ in 0..count {
                tops.push(zero_tile(k, rng.gen_range(0..1u64 << k)));
            }
        }
        tops.sort_unstable();
        tops.dedup_by_key(|p| p.interval);
        if tops.is_empty() {
            continue;
        }
        let mut trees: Vec<TreeFamily> = tops.into_iter().map(bare_tree).collect();
        star_foliation(&mut trees, grid);
        let layer1: Vec<TreeFamily> = trees
            .iter()
            .filter(|t| t.layer == Some(1))
            .cloned()
            .collect();
        max_overlap = max_overlap.max(top_overlap(&layer1, grid));
        max_layers = max_layers.max(trees.iter().filter_map(|t| t.layer).max().unwrap_or(0));
    }
    let ratios = vec![RatioSample {
        point: "max_overlap_layer1".into(),
        value: f64::from(max_overlap),
    }];
    let mut params = BTreeMap::new();
    params.insert("trials".into(), trials.to_string());
    params.insert("seed".into(), seed.to_string());
    params.insert("max_layers".into(), max_layers.to_string());
    Ok(ExperimentReport::assemble(
        "foliation",
        params,
        ratios,
        band,
        true,
        started,
    ))
}

/// A generated tree: top tile, members, and a selector that sends an exact
/// `2^-n` fraction of the grid cells under each member into its frequency
/// interval (all other cells point at a far-away sequence term).
struct TreeInstance {
    members: Vec<Tile>,
    top: Tile,
    nfun: Linearizer,
    far_level_cap: u32,
}

fn random_tree(rng: &mut impl Rng, grid: u32, seq: &LacunarySequence, n_mass: u32) -> TreeInstance {
    let k0 = 5u32;
    let idx0 = rng.gen_range(8..=(1u64 << k0) - 9);
    let i_top = DyadicInterval {
        level: k0,
        index: idx0,
    };
    // ω_top is the level-k0 cell holding the sequence term 2^(k0+3); members
    // at finer time scales get the longer containing cell, and the far term
    // (the value 2) lies outside every one of them.
    let freq = 1i64 << (k0 + 3);
    let j_freq = seq
        .terms
        .iter()
        .position(|&n| n == freq)
        .expect("term in band");
    let w_top = freq >> k0;
    let top = Tile::new(FrequencyInterval::new(k0, w_top), i_top).expect("area one");
    // Member scales are capped so an exact 2^-n fraction fits in each cell.
    let deepest = (grid - n_mass).min(k0 + 2).max(k0);
    let mut members = vec![top];
    for k in k0 + 1..=deepest {
        let omega = FrequencyInterval::new(k, (w_top << k0) >> k);
        for _ in 0..2 {
            let idx = (idx0 << (k - k0)) + rng.gen_range(0..1u64 << (k - k0));
            let p = Tile::new(
                omega,
                DyadicInterval {
                    level: k,
                    index: idx,
                },
            )
            .expect("area one");
            if !members.contains(&p) {
                members.push(p);
            }
        }
    }
    debug_assert!(members.iter().all(|p| p.leq(&top)));
    // Default index 0 = the term 2, never inside a member's ω.
    let stride = 1u64 << n_mass;
    let offset = rng.gen_range(0..stride);
    let mut choice = vec![0usize; 1 << grid];
    for t in i_top.cell_range(grid) {
        if t % stride == offset {
            choice[t as usize] = j_freq;
        }
    }
    TreeInstance {
        members,
        top,
        nfun: Linearizer::from_choice(grid, choice),
        far_level_cap: deepest,
    }
}

fn add_values(acc: &mut [Complex64], g: &GridFunction) {
    for (a, b) in acc.iter_mut().zip(g.values()) {
        *a += b;
    }
}

fn random_unit_linf(rng: &mut impl Rng, grid: u32) -> GridFunction {
    let n = 1usize << grid;
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let peak = raw.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-12);
    let vals: Vec<f64> = raw.iter().map(|v| v / peak).collect();
    GridFunction::from_real_values(grid, &vals).expect("grid in range")
}

/// The weighted tree inequality: random trees with verified mass `≤ 2^-n`,
/// random disjoint interval families refined from the stopping-time
/// decomposition of the top's dilated interval (so the Carleson-type side
/// condition holds with constant 1), weights `2^-k(I)`; the quotient
/// LHS / (2^-k 2^-2n |Ĩ_top| ‖g‖²_∞) must stay under the frozen constant.
pub fn main_lemma_check(trials: u32, seed: u64, golden: &GoldenBands) -> Result<ExperimentReport> {
    let started = Instant::now();
    let grid = 12u32;
    let band = golden.band("main_lemma")?;
    let seq = LacunarySequence::powers_of_two(32).truncate_to_band(grid);
    let kern = build_kernel(1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratios = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let n_mass = rng.gen_range(0..=4u32);
        let tree = random_tree(&mut rng, grid, &seq, n_mass);
        // Verify the mass hypothesis exactly: |E(P)| / |I_P| ≤ 2^-n for
        // every member, and record the true maximal mass.
        let mut max_mass = Dyadic::ZERO;
        for p in &tree.members {
            let e = e_of(p, &tree.nfun, &seq)?;
            let m = e.measure().to_f64() / p.interval.len().to_f64();
            if m > 2f64.powi(-(n_mass as i32)) + 1e-12 {
                return Err(Error::Mismatch(
                    "generated tree violates the mass bound".into(),
                ));
            }
            max_mass = max_mass.max(e.measure());
        }
        if max_mass.is_zero() {
            ratios.push(RatioSample {
                point: format!("trial={trial},empty"),
                value: 0.0,
            });
            continue;
        }
        // Minimal adjoint cells of the deepest members drive the stopping
        // decomposition of the top's dilated interval.
        let finest = tree.members.iter().map(|p| p.interval.level).max().unwrap();
        let mut min_cells: Vec<DyadicInterval> = Vec::new();
        for p in tree.members.iter().filter(|p| p.interval.level == finest) {
            let (cells, _) = p.adjoint_support()?;
            min_cells.extend(cells);
        }
        min_cells.sort_unstable();
        min_cells.dedup();
        let stopping = cz_decompose(&min_cells, tree.top.itilde())?;
        // Weighted family: disjoint dyadic descendants inside the stopping
        // cells, so each is contained in or disjoint from every cell; the
        // weights 2^-k(I) with k(I) >= k0 satisfy the side condition with
        // constant 1.
        let k0 = tree.top.scale();
        let mut family: Vec<(DyadicInterval, u32)> = Vec::new();
        for j in &stopping {
            let depth = rng.gen_range(0..=2u32).min(grid - j.level);
            let picks = rng.gen_range(1..=2u32).min(1 << depth);
            for _ in 0..picks {
                let idx = (j.index << depth) + rng.gen_range(0..1u64 << depth);
                let i = DyadicInterval {
                    level: j.level + depth,
                    index: idx,
                };
                if !family.iter().any(|(other, _)| !other.disjoint(&i)) {
                    family.push((i, k0 + rng.gen_range(0..=2u32)));
                }
            }
        }
        let g = random_unit_linf(&mut rng, grid);
        let mut acc = vec![Complex64::ZERO; 1 << grid];
        for p in &tree.members {
            add_values(&mut acc, &tile_adjoint(p, &g, &tree.nfun, &seq, &kern)?);
        }
        let len = acc.len() as f64;
        let mut lhs = 0.0f64;
        for (i, k_i) in &family {
            let local: f64 = i
                .cell_range(grid)
                .map(|t| acc[t as usize].norm_sqr())
                .sum::<f64>()
                / len;
            lhs += 2f64.powi(-(*k_i as i32)) * local;
        }
        let rhs = 2f64.powi(-(k0 as i32))
            * 4f64.powi(-(n_mass as i32))
            * tree.top.itilde().len().to_f64();
        ratios.push(RatioSample {
            point: format!("trial={trial},n={n_mass}"),
            value: lhs / rhs,
        });
    }
    let mut params = BTreeMap::new();
    params.insert("trials".into(), trials.to_string());
    params.insert("seed".into(), seed.to_string());
    params.insert("grid".into(), grid.to_string());
    Ok(ExperimentReport::assemble(
        "main_lemma",
        params,
        ratios,
        band,
        true,
        started,
    ))
}

/// L² mass decay of the tree operator: `‖T^𝔭 f‖₂ ≤ C·2^(-n/2)·‖f‖₂` over
/// generated trees whose members all carry mass exactly `2^-n`.
pub fn tree_l2_check(
    n_max: u32,
    trials: u32,
    seed: u64,
    golden: &GoldenBands,
) -> Result<ExperimentReport> {
    let started = Instant::now();
    let grid = 11u32;
    let band = golden.band("tree_l2")?;
    let seq = LacunarySequence::powers_of_two(32).truncate_to_band(grid);
    let kern = build_kernel(1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratios = Vec::new();
    for n in 0..=n_max {
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let tree = random_tree(&mut rng, grid, &seq, n);
            debug_assert!(tree.far_level_cap >= tree.top.scale());
            let f = random_unit_linf(&mut rng, grid);
            let mut acc = vec![Complex64::ZERO; 1 << grid];
            for p in &tree.members {
                add_values(&mut acc, &tile_operator(p, &f, &tree.nfun, &seq, &kern)?);
            }
            let tf = GridFunction::from_values(grid, acc)?;
            let ratio = tf.norm_l2() / (2f64.powf(-(f64::from(n)) / 2.0) * f.norm_l2());
            worst = worst.max(ratio);
        }
        ratios.push(RatioSample {
            point: format!("n={n}"),
            value: worst,
        });
    }
    let mut params = BTreeMap::new();
    params.insert("n_max".into(), n_max.to_string());
    params.insert("trials".into(), trials.to_string());
    params.insert("seed".into(), seed.to_string());
    params.insert("grid".into(), grid.to_string());
    Ok(ExperimentReport::assemble(
        "tree_l2", params, ratios, band, true, started,
    ))
}

/// Walk every subtree pair of a built node and record the worst two-level
/// length-decay quotient (it must stay ≤ 1/2).
fn decay_worst(node: &TfrNode, worst: &mut f64, violations: &mut u64) {
    let here = node_length(node).to_f64();
    if here > 0.0 {
        let mut frontier: Vec<&TfrNode> = Vec::new();
        for child in [&node.child_u, &node.child_l].into_iter().flatten() {
            for grand in [&child.child_u, &child.child_l].into_iter().flatten() {
                frontier.push(grand);
            }
        }
        // All strictly deeper descendants (depth ≥ 2) of this node.
        while let Some(d) = frontier.pop() {
            let q = node_length(d).to_f64() / here;
            if q > 0.5 + 1e-12 {
                *violations += 1;
            }
            *worst = worst.max(q);
            for child in [&d.child_u, &d.child_l].into_iter().flatten() {
                frontier.push(child);
            }
        }
    }
    for child in [&node.child_u, &node.child_l].into_iter().flatten() {
        decay_worst(child, worst, violations);
    }
}

/// Re-run the selection step over the recursion inputs and check the
/// saturation split: the strictly-finer branch carries at most half of the
/// input length.
fn split_worst(a: &[DyadicInterval], worst: &mut f64, violations: &mut u64) -> Result<()> {
    if a.is_empty() {
        return Ok(());
    }
    let (_, _, b_u, b_l) = tfr_step(a)?;
    let total = sum_lengths(a).to_f64();
    if total > 0.0 {
        let q = sum_lengths(&b_u).to_f64() / total;
        if q > 0.5 + 1e-12 {
            *violations += 1;
        }
        *worst = worst.max(q);
    }
    split_worst(&b_u, worst, violations)?;
    split_worst(&b_l, worst, violations)
}

fn node_words<'a>(node: &'a TfrNode, out: &mut Vec<&'a TfrNode>) {
    out.push(node);
    for child in [&node.child_u, &node.child_l].into_iter().flatten() {
        node_words(child, out);
    }
}

/// A node's frequency window, anchored at its structural base: the nearest
/// ancestor node whose tiles contain this node's tiles (reached by stripping
/// trailing L-edges and one U-edge from the word; the root tile otherwise).
/// The window is `[2^base_level, 2^node_level)` and is the same for every
/// tile of the node, unlike the per-tile window read off `base_of`, whose
/// minimal container may be a finer cousin tile for isolated representatives.
struct FreqWindow<'a> {
    base_level: u32,
    node_level: u32,
    node: &'a TfrNode,
}

fn collect_windows<'a>(node: &'a TfrNode, base_level: u32, out: &mut Vec<FreqWindow<'a>>) {
    let node_level = node.c_set.first().map(|j| j.level);
    if let Some(lvl) = node_level {
        out.push(FreqWindow {
            base_level,
            node_level: lvl,
            node,
        });
    }
    // A U-edge descends inside this node's tiles; an L-edge stays inside the
    // same structural base.
    if let Some(c) = &node.child_u {
        collect_windows(c, node_level.unwrap_or(base_level), out);
    }
    if let Some(c) = &node.child_l {
        collect_windows(c, base_level, out);
    }
}

/// Frequency containment: every node's frequency window contains the window
/// of every node in its L-subtree, and every tile's `base_of` interval is at
/// least as fine as the node's structural base (so the per-tile frequency
/// sets always sit inside the node window).
fn freq_containment(
    freqs: &[i64],
    forest: &TfrForest,
    tree: &TfrNode,
    root_level: u32,
    violations: &mut u64,
) {
    let mut windows = Vec::new();
    collect_windows(tree, root_level, &mut windows);
    for w in &windows {
        if w.node_level <= w.base_level {
            *violations += 1;
        }
        for t in &w.node.tiles {
            match base_of(t, forest) {
                Ok(b) if b.interval.level >= w.base_level => {}
                _ => *violations += 1,
            }
        }
        // Per-tile sets agree across representatives exactly when the
        // per-tile minimal containers share one level; when they do, the
        // common set must fill a sub-window of the structural one.
        if let Ok(own) = frequencies_of_node(freqs, w.node, forest) {
            let hi = 1i64 << w.node_level;
            let lo = 1i64 << w.base_level;
            if own.iter().any(|&f| f < lo || f >= hi) {
                *violations += 1;
            }
        }
        if let Some(lsub) = &w.node.child_l {
            let mut below = Vec::new();
            collect_windows(lsub, w.base_level, &mut below);
            for d in below {
                if d.base_level < w.base_level || d.node_level >= w.node_level {
                    *violations += 1;
                }
            }
        }
    }
}

/// Invariant fuzz over seeded random sets: node-uniform lengths, two-level
/// geometric length decay, the saturation split, frequency containment along
/// L-branches, base consistency, and containment of every tile under its
/// forest root.
pub fn tfr_invariant_check(sets: u32, seed: u64) -> Result<ExperimentReport> {
    let started = Instant::now();
    let level = 12u32;
    let freqs: Vec<i64> = (0..=level as i64).map(|j| 1 << j).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0u64;
    let mut worst_decay = 0.0f64;
    let mut worst_split = 0.0f64;
    for _ in 0..sets {
        let target = rng.gen_range(1..=6);
        let f = super::random_dyadic_set(&mut rng, level, target)?;
        let forests = tfr_global(&f)?;
        for forest in &forests {
            for (root, entry) in &forest.roots {
                let mut nodes = Vec::new();
                node_words(&entry.tree, &mut nodes);
                for node in &nodes {
                    // Uniform lengths at every node.
                    if node.c_set.windows(2).any(|w| w[0].level != w[1].level) {
                        violations += 1;
                    }
                    // Every tile sits inside its forest root.
                    if node.c_set.iter().any(|j| !root.contains(j)) {
                        violations += 1;
                    }
                    // Base consistency: every non-root tile has a strictly
                    // containing base inside the same root.
                    for t in &node.tiles {
                        match base_of(t, forest) {
                            Ok(b) => {
                                if !b.interval.strictly_contains(&t.interval) {
                                    violations += 1;
                                }
                            }
                            Err(_) => violations += 1,
                        }
                    }
                }
                decay_worst(&entry.tree, &mut worst_decay, &mut violations);
                freq_containment(&freqs, forest, &entry.tree, root.level, &mut violations);
            }
            if forest.k >= 2 {
                let prev = crate::setmodel::level_sets(&f, forest.k - 1)?;
                for root in forest.roots.keys() {
                    let a: Vec<DyadicInterval> = prev
                        .intervals
                        .iter()
                        .filter(|j| root.contains(j))
                        .copied()
                        .collect();
                    split_worst(&a, &mut worst_split, &mut violations)?;
                }
            }
        }
    }
    let ratios = vec![
        RatioSample {
            point: "worst_two_level_decay".into(),
            value: worst_decay,
        },
        RatioSample {
            point: "worst_saturation_split".into(),
            value: worst_split,
        },
    ];
    let mut params = BTreeMap::new();
    params.insert("sets".into(), sets.to_string());
    params.insert("seed".into(), seed.to_string());
    params.insert("level".into(), level.to_string());
    params.insert("violations".into(), violations.to_string());
    Ok(ExperimentReport::assemble(
        "tfr_invariants",
        params,
        ratios,
        Band { lo: 0.0, hi: 0.5 },
        violations == 0,
        started,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> GoldenBands {
        super::super::load_golden().unwrap()
    }

    #[test]
    fn packing_small_run_has_no_violations() {
        let rep = packing_check(50, 3, &golden()).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.ratios[0].value <= 1.0);
    }

    #[test]
    fn antichain_rejects_comparable_tiles() {
        let coarse = zero_tile(5, 0);
        let fine = Tile::new(
            FrequencyInterval::new(6, 0),
            DyadicInterval { level: 6, index: 1 },
        )
        .unwrap();
        assert!(fine.leq(&coarse) && fine.comparable(&coarse));
        let mut antichain = vec![coarse];
        if !antichain.iter().any(|q| fine.comparable(q)) {
            antichain.push(fine);
        }
        assert_eq!(antichain.len(), 1);
    }

    #[test]
    fn single_tree_foliates_to_one_layer() {
        let mut trees = vec![bare_tree(zero_tile(5, 7))];
        star_foliation(&mut trees, 10);
        assert_eq!(trees[0].layer, Some(1));
        assert_eq!(top_overlap(&trees, 10), 1);
    }

    #[test]
    fn foliation_small_run() {
        let rep = foliation_overlap_check(40, 5, &golden()).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn generated_tree_mass_is_exact() {
        let grid = 11;
        let seq = LacunarySequence::powers_of_two(32).truncate_to_band(grid);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..=4u32 {
            let tree = random_tree(&mut rng, grid, &seq, n);
            for p in &tree.members {
                let e = e_of(p, &tree.nfun, &seq).unwrap();
                let cells = 1u64 << (grid - p.interval.level);
                assert_eq!(e.cells.len() as u64, cells >> n, "n={n} p={p:?}");
            }
        }
    }

    #[test]
    fn main_lemma_small_run() {
        let rep = main_lemma_check(8, 11, &golden()).unwrap();
        assert_eq!(rep.ratios.len(), 8);
        for r in &rep.ratios {
            assert!(r.value.is_finite() && r.value >= 0.0);
        }
    }

    #[test]
    fn tree_l2_small_run() {
        let rep = tree_l2_check(2, 3, 13, &golden()).unwrap();
        assert_eq!(rep.ratios.len(), 3);
        for r in &rep.ratios {
            assert!(r.value > 0.0);
        }
    }

    #[test]
    fn tfr_invariants_small_run() {
        let rep = tfr_invariant_check(10, 17).unwrap();
        assert!(rep.pass, "{rep:?}");
        for r in &rep.ratios {
            assert!(r.value <= 0.5 + 1e-12, "{rep:?}");
        }
    }
}
