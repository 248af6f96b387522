//! Property-based fuzzing of the structural invariants: the tile partial
//! order, Calderon-Zygmund partitions, level-set nesting, E(P) partitions,
//! Walsh projections, Carleson domination, and maximal-tree extraction.

use proptest::prelude::*;
use tilelab::carleson::{
    carleson_sup, e_of, modulated_hilbert, walsh_partial_sum, LacunarySequence,
};
use tilelab::dyadic::{
    cz_decompose, Dyadic, DyadicInterval, FrequencyInterval, RealInterval, Tile,
};
use tilelab::setmodel::{k_f, level_sets, DyadicSet, GridFunction};
use tilelab::tilealg::tree_decompose;

fn arb_tile() -> impl Strategy<Value = Tile> {
    (5u32..=7, any::<u64>(), -16i64..16).prop_map(|(k, raw, w)| {
        let i = DyadicInterval::new(k, raw % (1 << k)).unwrap();
        Tile::new(FrequencyInterval::new(k, w), i).unwrap()
    })
}

fn arb_set(level: u32) -> impl Strategy<Value = DyadicSet> {
    prop::collection::btree_set(0u64..(1 << level), 1..=24)
        .prop_map(move |cells| DyadicSet::new(level, cells.into_iter().collect()).unwrap())
}

fn arb_grid(level: u32) -> impl Strategy<Value = GridFunction> {
    prop::collection::vec(-4.0f64..4.0, 1usize << level)
        .prop_map(move |v| GridFunction::from_real_values(level, &v).unwrap())
}

fn unit() -> RealInterval {
    RealInterval::new(Dyadic::ZERO, Dyadic::ONE).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tile_order_axioms(p in arb_tile(), q in arb_tile(), r in arb_tile()) {
        prop_assert!(p.leq(&p));
        if p.leq(&q) && q.leq(&p) {
            prop_assert_eq!(p, q);
        }
        if p.leq(&q) && q.leq(&r) {
            prop_assert!(p.leq(&r));
        }
    }

    #[test]
    fn cz_partitions_and_avoids_dilations(f in arb_set(6)) {
        // Uniform-length input family: cells of one level. (Mixed-size
        // families can make the decomposition non-existent; see the
        // CzNoDecomposition error path.)
        let a: Vec<DyadicInterval> =
            f.cells.iter().map(|&c| DyadicInterval::new(6, c).unwrap()).collect();
        let out = cz_decompose(&a, unit()).unwrap();
        // Partition of the unit torus: lengths add up and no two overlap.
        let total = out.iter().fold(Dyadic::ZERO, |acc, j| acc + j.len());
        prop_assert_eq!(total, Dyadic::ONE);
        for (i, x) in out.iter().enumerate() {
            for y in &out[i + 1..] {
                prop_assert!(x.disjoint(y));
            }
        }
        // The input family survives intact, and every filler cell J keeps
        // 2I away from J and 2J away from I for all inputs I.
        let two = Dyadic::from_int(2);
        for i in &a {
            prop_assert!(out.contains(i));
        }
        for j in out.iter().filter(|j| !a.contains(j)) {
            for i in &a {
                prop_assert!(!i.to_real().dilate(two).open_contains(&j.to_real()));
                prop_assert!(!j.to_real().dilate(two).open_contains(&i.to_real()));
            }
        }
    }

    #[test]
    fn level_sets_nest_and_obey_weak_bound(f in arb_set(8)) {
        let kf = k_f(&f).unwrap();
        let mut prev: Option<Vec<DyadicInterval>> = None;
        for k in 1..=kf {
            let fam = level_sets(&f, k).unwrap();
            // Maximality: the parent of a selected interval falls at or
            // below the threshold.
            for i in &fam.intervals {
                if let Some(parent) = i.parent() {
                    prop_assert!(!f.density_exceeds(&parent, k));
                }
            }
            // Weak-type bound for the union measure.
            prop_assert!(fam.union_measure <= Dyadic::pow2(-(k as i32)) * f.measure());
            if let Some(prev) = &prev {
                for i in prev {
                    prop_assert!(fam.intervals.iter().any(|j| j.strictly_contains(i)));
                }
            }
            prev = Some(fam.intervals.clone());
        }
    }

    #[test]
    fn e_sets_partition_the_tile_interval(idx in 0u64..32, choice_seed in any::<u64>()) {
        let grid = 10u32;
        let seq = LacunarySequence::powers_of_two(8);
        // An arbitrary measurable selector N(x), one term per grid cell.
        let choice: Vec<usize> = (0..1usize << grid)
            .map(|t| {
                (choice_seed.wrapping_add(t as u64).wrapping_mul(2654435761) % seq.terms.len() as u64)
                    as usize
            })
            .collect();
        let nfun = tilelab::carleson::Linearizer::from_choice(grid, choice);
        let k = 5u32;
        let i = DyadicInterval::new(k, idx).unwrap();
        let mut covered = 0u64;
        let mut seen: Vec<u64> = Vec::new();
        let max_w = (seq.terms.iter().max().unwrap() >> k) + 1;
        for w in 0..=max_w {
            let p = Tile::new(FrequencyInterval::new(k, w), i).unwrap();
            let e = e_of(&p, &nfun, &seq).unwrap();
            covered += e.cells.len() as u64;
            for c in &e.cells {
                prop_assert!(!seen.contains(c));
                seen.push(*c);
            }
        }
        prop_assert_eq!(covered, 1u64 << (grid - k));
    }

    #[test]
    fn walsh_partial_sum_is_a_projection(g in arb_grid(6), n in 0usize..64) {
        let once = walsh_partial_sum(&g, n);
        let twice = walsh_partial_sum(&once, n);
        for (a, b) in once.values().iter().zip(twice.values()) {
            prop_assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn carleson_sup_dominates_every_term(g in arb_grid(6)) {
        // The sup only ranges over terms inside the grid band.
        let seq = LacunarySequence::powers_of_two(5).truncate_to_band(6);
        let sup = carleson_sup(&g, &seq);
        for &n in &seq.terms {
            let h = modulated_hilbert(&g, n);
            for (s, v) in sup.values().iter().zip(h.values()) {
                prop_assert!(s.re + 1e-9 >= v.norm());
            }
        }
    }

    #[test]
    fn tree_decompose_partitions_into_valid_trees(tiles in prop::collection::btree_set(arb_tile(), 1..=20)) {
        let tiles: Vec<Tile> = tiles.into_iter().collect();
        let trees = tree_decompose(&tiles);
        let mut members: Vec<Tile> = trees.iter().flat_map(|t| t.members.clone()).collect();
        members.sort();
        let mut input = tiles.clone();
        input.sort();
        prop_assert_eq!(members, input);
        for t in &trees {
            prop_assert!(t.invariants_hold(&tiles));
        }
    }

    #[test]
    fn dyadic_arithmetic_is_exact(a in -1000i128..1000, ea in 0u32..20, b in -1000i128..1000, eb in 0u32..20) {
        let x = Dyadic::new(a, ea);
        let y = Dyadic::new(b, eb);
        prop_assert_eq!((x + y) - y, x);
        prop_assert_eq!(x + y, y + x);
        prop_assert_eq!((x * y).to_f64(), x.to_f64() * y.to_f64());
    }
}
