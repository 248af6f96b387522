//! Set resolution of the time-frequency plane at a fixed frequency: the
//! (R,1)- and (R,2)-families attached to the regularization tiles, the
//! F-free residue, and the covering property they satisfy together.

use super::universe::{classify_tiles, f_mass_partition, TileUniverse};
use crate::dyadic::{DyadicInterval, FrequencyInterval, Tile};
use crate::setmodel::{k_f, DyadicSet};
use crate::tfr::{base_of, TfrForest, ZeroFreqTile};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// The families attached to one forest index k.
#[derive(Clone, Debug, Default)]
pub struct KFamilies {
    pub k: u32,
    /// (R,1)-families, keyed by the root tile R(I).
    pub p1: BTreeMap<DyadicInterval, Vec<Tile>>,
    /// (R,2)-families, keyed by the non-root tile R.
    pub p2: BTreeMap<DyadicInterval, Vec<Tile>>,
}

#[derive(Clone, Debug)]
pub struct SetResolution {
    pub families: Vec<KFamilies>,
    /// 𝓟[F,0]: separated tiles whose Ĩ_P misses F entirely.
    pub f_free: Vec<Tile>,
}

fn omega_of(r: &ZeroFreqTile) -> FrequencyInterval {
    FrequencyInterval::zero(r.interval.level)
}

/// Positive-measure intersection of Ĩ_P with a torus interval, exact.
fn itilde_meets(p: &Tile, i: &DyadicInterval, grid_level: u32) -> bool {
    let cover = DyadicSet::from_intervals(grid_level, &p.itilde().wrap_to_dyadic())
        .expect("itilde endpoints live on the grid");
    cover.cells_in(i) > 0
}

/// Build every family of the resolution from a universe and the matching
/// regularization forests.
pub fn set_resolution(u: &TileUniverse, forests: &[TfrForest]) -> Result<SetResolution> {
    let kf = k_f(&u.f)?;
    if forests.len() != kf as usize || forests.iter().zip(1..).any(|(fo, k)| fo.k != k) {
        return Err(Error::Mismatch(
            "forests do not match the universe's set".into(),
        ));
    }
    let cls = classify_tiles(u);
    let by_k = f_mass_partition(&cls.sep, &u.f)?;
    let class_above = |k: u32| -> Vec<Tile> {
        by_k.iter()
            .filter(|&(&m, _)| m > k)
            .flat_map(|(_, v)| v.iter().copied())
            .collect()
    };

    let mut families = Vec::new();
    for forest in forests {
        let k = forest.k;
        let mut fam = KFamilies {
            k,
            ..Default::default()
        };
        if k == kf {
            families.push(fam);
            continue; // both families are empty in the limiting case
        }
        if k == 1 {
            for i in forest.roots.keys() {
                let omega_r = FrequencyInterval::zero(i.level);
                let low: Vec<Tile> = by_k
                    .iter()
                    .filter(|&(&m, _)| m <= 2)
                    .flat_map(|(_, v)| v.iter().copied())
                    .collect();
                fam.p1.insert(
                    *i,
                    low.iter()
                        .filter(|p| {
                            itilde_meets(p, i, u.grid_level) && p.omega.intersects(&omega_r)
                        })
                        .copied()
                        .collect(),
                );
                fam.p2.insert(
                    *i,
                    cls.sep
                        .iter()
                        .filter(|p| {
                            itilde_meets(p, i, u.grid_level) && !p.omega.intersects(&omega_r)
                        })
                        .copied()
                        .collect(),
                );
            }
            families.push(fam);
            continue;
        }
        // 1 < k < k_F.
        let deep = class_above(k);
        let next: Vec<Tile> = by_k.get(&(k + 1)).cloned().unwrap_or_default();
        for (i, root) in &forest.roots {
            let omega_root = omega_of(&root.root_tile);
            fam.p1.insert(
                *i,
                next.iter()
                    .filter(|p| itilde_meets(p, i, u.grid_level) && p.omega.intersects(&omega_root))
                    .copied()
                    .collect(),
            );
            for r in root.tree.all_tiles() {
                let omega_r = omega_of(&r);
                let omega_base = omega_of(&base_of(&r, forest)?);
                fam.p2.insert(
                    r.interval,
                    deep.iter()
                        .filter(|p| {
                            itilde_meets(p, i, u.grid_level)
                                && !p.omega.intersects(&omega_base)
                                && p.omega.intersects(&omega_r)
                        })
                        .copied()
                        .collect(),
                );
            }
        }
        families.push(fam);
    }

    let f_free = cls
        .sep
        .iter()
        .filter(|p| u.info(p).is_none_or(|t| t.itilde_f.is_zero()))
        .copied()
        .collect();
    Ok(SetResolution { families, f_free })
}

/// Tiles of the universe not reached by any right-hand family of the
/// covering identity (cluster, zero-frequency-adjacent, F-free, or some
/// family of the resolution). Empty means the covering holds.
pub fn coverage_gap(u: &TileUniverse, res: &SetResolution) -> Vec<Tile> {
    let cls = classify_tiles(u);
    u.tiles
        .iter()
        .map(|t| t.tile)
        .filter(|p| {
            if cls.cluster.contains(p) || cls.zero.contains(p) || res.f_free.contains(p) {
                return false;
            }
            !res.families.iter().any(|fam| {
                fam.p1.values().any(|v| v.contains(p)) || fam.p2.values().any(|v| v.contains(p))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carleson::{linearize, LacunarySequence};
    use crate::setmodel::indicator;
    use crate::tfr::tfr_global;
    use crate::tilealg::universe::UniverseOpts;

    fn setup(f: &DyadicSet, grid: u32) -> (TileUniverse, Vec<TfrForest>) {
        let seq = LacunarySequence::powers_of_two(grid - 2);
        let g = indicator(f, grid).unwrap();
        let nfun = linearize(&g, &seq);
        let u = TileUniverse::build(
            f,
            &seq,
            &nfun,
            UniverseOpts {
                k_min: 5,
                k_max: grid - 2,
                band_max: 1 << (grid - 2),
                scale_separated: false,
            },
        )
        .unwrap();
        let forests = tfr_global(f).unwrap();
        (u, forests)
    }

    #[test]
    fn limiting_case_k_f_is_empty() {
        let f = DyadicSet::from_intervals(8, &[DyadicInterval::new(2, 0).unwrap()]).unwrap();
        let (u, forests) = setup(&f, 9);
        let res = set_resolution(&u, &forests).unwrap();
        let last = res.families.last().unwrap();
        assert_eq!(last.k, k_f(&f).unwrap());
        assert!(last.p1.is_empty() && last.p2.is_empty());
    }

    #[test]
    fn same_node_tiles_share_their_two_family() {
        // F = [0,1/16) ∪ [1/4,5/16): the k=3 root holds two tiles of equal
        // length with a common base, so their (R,2)-families agree.
        let f = DyadicSet::from_intervals(
            8,
            &[
                DyadicInterval::new(4, 0).unwrap(),
                DyadicInterval::new(4, 4).unwrap(),
            ],
        )
        .unwrap();
        let (u, forests) = setup(&f, 9);
        let res = set_resolution(&u, &forests).unwrap();
        let fam = res.families.iter().find(|fam| fam.k == 3).unwrap();
        let a = &fam.p2[&DyadicInterval::new(3, 0).unwrap()];
        let b = &fam.p2[&DyadicInterval::new(3, 2).unwrap()];
        assert_eq!(a, b);
    }

    #[test]
    fn mismatched_set_is_rejected() {
        let f = DyadicSet::from_intervals(8, &[DyadicInterval::new(2, 0).unwrap()]).unwrap();
        let (u, _) = setup(&f, 9);
        let other = tfr_global(&DyadicSet::full(4)).unwrap();
        assert!(set_resolution(&u, &other).is_err());
    }

    #[test]
    fn coverage_identity_on_small_universe() {
        let f = DyadicSet::from_intervals(8, &[DyadicInterval::new(2, 0).unwrap()]).unwrap();
        let (u, forests) = setup(&f, 9);
        let res = set_resolution(&u, &forests).unwrap();
        let gap = coverage_gap(&u, &res);
        assert!(
            gap.is_empty(),
            "{} uncovered tiles, e.g. {:?}",
            gap.len(),
            gap.first()
        );
    }
}
