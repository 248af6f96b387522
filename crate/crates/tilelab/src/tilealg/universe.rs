//! The finite tile universe and its two gradings: the F-mass partition and
//! the mass classes.

use crate::carleson::{e_of, LacunarySequence, Linearizer};
use crate::dyadic::{Dyadic, DyadicInterval, FrequencyInterval, RealInterval, Tile};
use crate::setmodel::{k_f, level_sets, DyadicSet};
use crate::{Error, Result};
use std::collections::{BTreeMap, HashMap};

/// One tile together with the cached quantities every later stage needs.
#[derive(Clone, Debug)]
pub struct TileInfo {
    pub tile: Tile,
    /// Number of grid cells in E(P).
    pub e_cells: u64,
    /// |Ĩ_P ∩ F|, exact.
    pub itilde_f: Dyadic,
}

/// All tiles [ω, I] with scale in `[k_min, k_max]` and ω ⊆ [0, band_max),
/// against a fixed set F and linearizer N.
pub struct TileUniverse {
    pub f: DyadicSet,
    pub seq: LacunarySequence,
    pub nfun: Linearizer,
    pub grid_level: u32,
    pub scales: Vec<u32>,
    pub band_max: i64,
    pub tiles: Vec<TileInfo>,
    index: HashMap<Tile, usize>,
}

/// Universe shape: scale range, frequency band, optional separation filter.
#[derive(Clone, Copy, Debug)]
pub struct UniverseOpts {
    pub k_min: u32,
    pub k_max: u32,
    pub band_max: i64,
    /// Keep only every tenth scale, enforcing the standing convention that
    /// distinct tile scales differ by a factor of at least 2^10.
    pub scale_separated: bool,
}

impl TileUniverse {
    pub fn build(
        f: &DyadicSet,
        seq: &LacunarySequence,
        nfun: &Linearizer,
        opts: UniverseOpts,
    ) -> Result<TileUniverse> {
        let grid_level = nfun.grid_level;
        if opts.k_min < 5 || opts.k_max > grid_level.saturating_sub(2) || opts.k_min > opts.k_max {
            return Err(Error::Precondition(format!(
                "scale range [{}, {}] must lie in [5, {}]",
                opts.k_min,
                opts.k_max,
                grid_level.saturating_sub(2)
            )));
        }
        if opts.band_max < 1 || opts.band_max > 1i64 << (grid_level - 1) {
            return Err(Error::Precondition(
                "frequency band outside the grid band".into(),
            ));
        }
        let scales: Vec<u32> = if opts.scale_separated {
            crate::dyadic::scale_separated(opts.k_min..=opts.k_max, opts.k_min)
        } else {
            (opts.k_min..=opts.k_max).collect()
        };
        let f_fine = f.refine(grid_level)?;
        let mut tiles = Vec::new();
        for &k in &scales {
            let n_freq = (opts.band_max >> k).max(1);
            for fi in 0..n_freq {
                for ti in 0..1u64 << k {
                    let tile =
                        Tile::new(FrequencyInterval::new(k, fi), DyadicInterval::new(k, ti)?)?;
                    let e = e_of(&tile, nfun, seq)?;
                    let itilde_f = f_fine.measure_in_wrapped(&tile.itilde());
                    tiles.push(TileInfo {
                        tile,
                        e_cells: e.cells.len() as u64,
                        itilde_f,
                    });
                }
            }
        }
        let index = tiles.iter().enumerate().map(|(i, t)| (t.tile, i)).collect();
        Ok(TileUniverse {
            f: f.clone(),
            seq: seq.clone(),
            nfun: nfun.clone(),
            grid_level,
            scales,
            band_max: opts.band_max,
            tiles,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn info(&self, tile: &Tile) -> Option<&TileInfo> {
        self.index.get(tile).map(|&i| &self.tiles[i])
    }

    /// |E(P)| as an exact rational.
    pub fn e_measure(&self, tile: &Tile) -> Dyadic {
        let cells = self.info(tile).map_or(0, |t| t.e_cells);
        Dyadic::new(cells as i128, self.grid_level)
    }
}

/// The three-way split of the universe by frequency location.
#[derive(Clone, Debug, Default)]
pub struct TileClass {
    pub cluster: Vec<Tile>,
    pub sep: Vec<Tile>,
    pub zero: Vec<Tile>,
}

/// c(α) = 10(1 + ⌊1/(α−1)⌋), the cluster dilation constant.
pub fn cluster_constant(alpha: f64) -> i128 {
    assert!(alpha > 1.0, "growth ratio must exceed 1");
    10 * (1 + (1.0 / (alpha - 1.0)).floor() as i128)
}

/// Partition into cluster tiles (0 ∈ c(α)·ω), separated tiles (some n_j ∈ ω),
/// and the rest.
pub fn classify_tiles(u: &TileUniverse) -> TileClass {
    let c = cluster_constant(u.seq.alpha);
    let mut out = TileClass::default();
    for info in &u.tiles {
        let p = info.tile;
        if p.omega.dilation_contains_zero(c) {
            out.cluster.push(p);
        } else if u
            .seq
            .terms
            .iter()
            .any(|&n| p.omega.contains_freq(n as i128))
        {
            out.sep.push(p);
        } else {
            out.zero.push(p);
        }
    }
    out
}

/// 5Ĩ_P ⊂ 200I with |I_P| ≤ |I|, tested on the real line over the torus
/// translates of I.
pub fn f_mass_predicate(p: &Tile, i: &DyadicInterval) -> bool {
    if p.interval.level < i.level {
        return false; // |I_P| > |I|
    }
    let small = p.interval.to_real().dilate(Dyadic::from_int(85)); // 5 * 17
    let big = i.to_real().dilate(Dyadic::from_int(200));
    (-1..=1).any(|z| {
        let shift = Dyadic::from_int(z);
        let shifted = RealInterval::new(big.lo + shift, big.hi + shift).expect("nonempty");
        shifted.open_contains(&small)
    })
}

/// The inductive F-mass partition of the separated tiles: 𝓟^k collects the
/// residual tiles captured by the level-k family of F. Every tile is
/// captured by k = k_F at the latest, since that family contains the torus.
pub fn f_mass_partition(sep: &[Tile], f: &DyadicSet) -> Result<BTreeMap<u32, Vec<Tile>>> {
    let kf = k_f(f)?;
    let mut out = BTreeMap::new();
    let mut residual: Vec<Tile> = sep.to_vec();
    for k in 1..=kf {
        let fam = level_sets(f, k)?;
        let (captured, rest): (Vec<Tile>, Vec<Tile>) = residual
            .into_iter()
            .partition(|p| fam.intervals.iter().any(|i| f_mass_predicate(p, i)));
        out.insert(k, captured);
        residual = rest;
    }
    if !residual.is_empty() {
        return Err(Error::Mismatch(format!(
            "{} separated tiles escaped the F-mass partition",
            residual.len()
        )));
    }
    Ok(out)
}

/// A(P) = max |E(P′)|/|I_{P′}| over P′ ≥ P inside the same F-mass class.
pub fn mass(p: &Tile, class: &[Tile], u: &TileUniverse) -> Dyadic {
    let mut best = Dyadic::ZERO;
    for q in class {
        if p.leq(q) {
            // |E(Q)| / |I_Q| = (cells / 2^L) * 2^{k_Q}.
            let cells = u.info(q).map_or(0, |t| t.e_cells);
            let ratio = Dyadic::new(cells as i128, u.grid_level - q.scale());
            best = best.max(ratio);
        }
    }
    best
}

/// The mass class index: A ∈ (2^{−n−1}, 2^{−n}] ↦ n; zero mass ↦ None.
pub fn mass_class(a: Dyadic) -> Option<u32> {
    if a <= Dyadic::ZERO {
        return None;
    }
    let mut n = 0u32;
    let mut hi = Dyadic::ONE;
    loop {
        let lo = hi * Dyadic::new(1, 1);
        if a > lo && a <= hi {
            return Some(n);
        }
        hi = lo;
        n += 1;
        assert!(n < 128, "mass class out of range");
    }
}

/// n ↦ 𝓟_n within one F-mass class; zero-mass tiles land under None.
pub fn mass_partition(class: &[Tile], u: &TileUniverse) -> (BTreeMap<u32, Vec<Tile>>, Vec<Tile>) {
    let masses = crate::parallel::map_slice(class, |p| mass(p, class, u));
    let mut out: BTreeMap<u32, Vec<Tile>> = BTreeMap::new();
    let mut zero = Vec::new();
    for (p, a) in class.iter().zip(masses) {
        match mass_class(a) {
            Some(n) => out.entry(n).or_default().push(*p),
            None => zero.push(*p),
        }
    }
    (out, zero)
}
