//! The discretized lacunary Carleson operator: multiplier form of the
//! modulated Hilbert transform, the maximal operator and its linearization,
//! tile operators with their adjoints, and the Walsh analogue.

mod kernel;
mod walsh;

pub use kernel::{build_kernel, KernelFamily};
pub use walsh::{walsh_carleson, walsh_partial_sum};

use crate::dyadic::Tile;
use crate::setmodel::{DyadicSet, GridFunction};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// An increasing sequence of positive integer frequencies n_1 < n_2 < ⋯
/// subject to the advanced lacunarity condition Σ_{j≤k} n_j < c̄ · n_{k+1}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LacunarySequence {
    pub terms: Vec<i64>,
    /// Nominal growth ratio (n_j ≈ alpha^j); descriptive only.
    pub alpha: f64,
    pub c_bar: f64,
}

impl LacunarySequence {
    pub fn new(terms: Vec<i64>, alpha: f64, c_bar: f64) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyInput(
                "lacunary sequence needs at least one term".into(),
            ));
        }
        if terms[0] <= 0 {
            return Err(Error::NotLacunary { k: 0 });
        }
        let mut partial: i128 = 0;
        for k in 0..terms.len() - 1 {
            if terms[k + 1] <= terms[k] {
                return Err(Error::NotLacunary { k });
            }
            partial += terms[k] as i128;
            if partial as f64 >= c_bar * terms[k + 1] as f64 {
                return Err(Error::NotLacunary { k });
            }
        }
        Ok(LacunarySequence {
            terms,
            alpha,
            c_bar,
        })
    }

    /// n_j = 2^j for j = 1..=count.
    pub fn powers_of_two(count: u32) -> Self {
        let terms = (1..=count).map(|j| 1i64 << j).collect();
        LacunarySequence::new(terms, 2.0, 2.0).expect("powers of two are lacunary")
    }

    /// Terms that fit in the band of a level-`level` grid.
    pub fn truncate_to_band(&self, level: u32) -> LacunarySequence {
        let band = 1i64 << (level - 1);
        let terms: Vec<i64> = self.terms.iter().filter(|&&n| n < band).copied().collect();
        LacunarySequence {
            terms,
            alpha: self.alpha,
            c_bar: self.c_bar,
        }
    }
}

/// The modulated conjugate function: Fourier multiplier m ↦ −i·sgn(m − n),
/// with sgn(0) = 0. This is the discretization of convolution against
/// e^{2πin(x−y)} cot(π(x−y)).
pub fn modulated_hilbert(f: &GridFunction, n: i64) -> GridFunction {
    f.apply_multiplier(|m| Complex64::new(0.0, -((m - n).signum() as f64)))
}

fn hilbert_magnitudes(f: &GridFunction, seq: &LacunarySequence) -> Vec<Vec<f64>> {
    let seq = seq.truncate_to_band(f.level());
    crate::parallel::map_slice(&seq.terms, |&n| {
        modulated_hilbert(f, n)
            .values()
            .iter()
            .map(|v| v.norm())
            .collect()
    })
}

/// C f(x) = sup_j |H_{n_j} f(x)| pointwise on the grid.
pub fn carleson_sup(f: &GridFunction, seq: &LacunarySequence) -> GridFunction {
    let mags = hilbert_magnitudes(f, seq);
    let mut sup = vec![0.0f64; f.len()];
    for row in &mags {
        for (s, v) in sup.iter_mut().zip(row) {
            *s = s.max(*v);
        }
    }
    GridFunction::from_real_values(f.level(), &sup).expect("same length")
}

/// A measurable selector N(x) ∈ {n_j}: at grid point t the sup is attained
/// by term `choice[t]` (0-based index into the sequence; ties resolve to the
/// smallest index).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Linearizer {
    pub grid_level: u32,
    pub choice: Vec<usize>,
}

pub fn linearize(f: &GridFunction, seq: &LacunarySequence) -> Linearizer {
    let mags = hilbert_magnitudes(f, seq);
    assert!(!mags.is_empty(), "sequence has no term inside the band");
    let choice = (0..f.len())
        .map(|t| {
            // Smallest index attaining the sup; values within relative 1e-9
            // count as ties so FFT rounding noise cannot break determinism.
            let max = mags.iter().map(|row| row[t]).fold(0.0f64, f64::max);
            let cut = max - 1e-9 * max.max(1e-300);
            mags.iter().position(|row| row[t] >= cut).unwrap()
        })
        .collect();
    Linearizer {
        grid_level: f.level(),
        choice,
    }
}

impl Linearizer {
    /// A selector given directly (mainly for experiments with adversarial N).
    pub fn from_choice(grid_level: u32, choice: Vec<usize>) -> Self {
        assert_eq!(choice.len(), 1usize << grid_level);
        Linearizer { grid_level, choice }
    }

    /// The selected frequency at grid cell t.
    pub fn frequency_at(&self, t: u64, seq: &LacunarySequence) -> i64 {
        seq.terms[self.choice[t as usize]]
    }
}

/// E(P) = {x ∈ I_P : N(x) ∈ ω_P}, as a union of grid cells.
pub fn e_of(p: &Tile, nfun: &Linearizer, seq: &LacunarySequence) -> Result<DyadicSet> {
    if p.interval.level > nfun.grid_level {
        return Err(Error::GridLevel {
            level: nfun.grid_level,
            reason: format!(
                "tile at level {} finer than the linearizer grid",
                p.interval.level
            ),
        });
    }
    let cells = p
        .interval
        .cell_range(nfun.grid_level)
        .filter(|&t| p.omega.contains_freq(nfun.frequency_at(t, seq) as i128))
        .collect();
    DyadicSet::new(nfun.grid_level, cells)
}

fn wrap_unit(d: f64) -> f64 {
    // Wrap a torus displacement into [-1/2, 1/2).
    let r = d - d.round();
    if r >= 0.5 {
        r - 1.0
    } else {
        r
    }
}

/// T_P f(x) = [∫ e^{−2πiN(x)y} ψ_k(x−y) f(y) dy] χ_{E(P)}(x) by trapezoid
/// quadrature on the grid (the torus grid makes the rule exact-in-form).
pub fn tile_operator(
    p: &Tile,
    f: &GridFunction,
    nfun: &Linearizer,
    seq: &LacunarySequence,
    kern: &KernelFamily,
) -> Result<GridFunction> {
    let e = e_of(p, nfun, seq)?;
    let level = f.level();
    if level != nfun.grid_level {
        return Err(Error::Mismatch(
            "function and linearizer grids differ".into(),
        ));
    }
    let n = f.len();
    let k = p.scale();
    let mut out = vec![Complex64::ZERO; n];
    let vals = f.values();
    for &t in &e.cells {
        let x = t as f64 / n as f64;
        let nx = nfun.frequency_at(t, seq) as f64;
        let mut acc = Complex64::ZERO;
        for (tp, fv) in vals.iter().enumerate() {
            let y = tp as f64 / n as f64;
            let w = kern.psi_k(k, wrap_unit(x - y));
            if w != 0.0 {
                acc += Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * nx * y) * w * fv;
            }
        }
        out[t as usize] = acc / n as f64;
    }
    GridFunction::from_values(level, out)
}

/// T_P* g(y) = ∫_{E(P)} e^{2πiN(x)y} ψ_k(x−y) g(x) dx, the quadrature
/// adjoint of `tile_operator` on the same grid.
pub fn tile_adjoint(
    p: &Tile,
    g: &GridFunction,
    nfun: &Linearizer,
    seq: &LacunarySequence,
    kern: &KernelFamily,
) -> Result<GridFunction> {
    let e = e_of(p, nfun, seq)?;
    let level = g.level();
    if level != nfun.grid_level {
        return Err(Error::Mismatch(
            "function and linearizer grids differ".into(),
        ));
    }
    let n = g.len();
    let k = p.scale();
    let vals = g.values();
    let out = crate::parallel::map_range(0..n, |tp| {
        let y = tp as f64 / n as f64;
        let mut acc = Complex64::ZERO;
        for &t in &e.cells {
            let x = t as f64 / n as f64;
            let nx = nfun.frequency_at(t, seq) as f64;
            let w = kern.psi_k(k, wrap_unit(x - y));
            if w != 0.0 {
                acc += Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * nx * y)
                    * w
                    * vals[t as usize];
            }
        }
        acc / n as f64
    });
    GridFunction::from_values(level, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::{DyadicInterval, FrequencyInterval};

    fn mode(level: u32, m: i64) -> GridFunction {
        let n = 1usize << level;
        let vals = (0..n)
            .map(|t| {
                Complex64::from_polar(
                    1.0,
                    2.0 * std::f64::consts::PI * m as f64 * t as f64 / n as f64,
                )
            })
            .collect();
        GridFunction::from_values(level, vals).unwrap()
    }

    #[test]
    fn lacunarity_check() {
        assert!(LacunarySequence::new(vec![2, 4, 8, 16], 2.0, 2.0).is_ok());
        assert!(LacunarySequence::new(vec![2, 4, 5], 2.0, 2.0).is_ok()); // 2+4 < 2*5
        assert!(LacunarySequence::new(vec![1, 2, 3, 4], 1.5, 1.0).is_err()); // 1+2 >= 3
        assert!(LacunarySequence::new(vec![4, 2], 2.0, 2.0).is_err());
        assert!(LacunarySequence::new(vec![-1, 2], 2.0, 2.0).is_err());
    }

    #[test]
    fn hilbert_on_single_modes() {
        let l = 8;
        for (m, n, want) in [(7i64, 4i64, -1.0f64), (4, 4, 0.0), (2, 4, 1.0)] {
            let f = mode(l, m);
            let h = modulated_hilbert(&f, n);
            for (t, v) in h.values().iter().enumerate() {
                let expect = f.values()[t] * Complex64::new(0.0, want);
                assert!((v - expect).norm() < 1e-12, "m={m} n={n} t={t}");
            }
        }
    }

    #[test]
    fn sup_of_single_mode_is_one() {
        let f = mode(10, 5);
        let seq = LacunarySequence::powers_of_two(8);
        let c = carleson_sup(&f, &seq);
        for v in c.values() {
            assert!((v.re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sup_of_zero_is_zero() {
        let seq = LacunarySequence::powers_of_two(6);
        let c = carleson_sup(&GridFunction::zero(8), &seq);
        assert!(c.norm_linf() < 1e-15);
    }

    #[test]
    fn linearize_breaks_ties_low() {
        let seq = LacunarySequence::powers_of_two(6);
        let n = linearize(&mode(9, 5), &seq);
        assert!(n.choice.iter().all(|&j| j == 0));
        let n = linearize(&GridFunction::zero(9), &seq);
        assert!(n.choice.iter().all(|&j| j == 0));
    }

    #[test]
    fn linearizer_attains_the_sup() {
        let f = GridFunction::from_real_values(
            9,
            &(0..512)
                .map(|t| if t % 7 == 0 { 1.0 } else { -0.25 })
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let seq = LacunarySequence::powers_of_two(7);
        let c = carleson_sup(&f, &seq);
        let nfun = linearize(&f, &seq);
        for t in 0..512u64 {
            let h = modulated_hilbert(&f, nfun.frequency_at(t, &seq));
            assert!((h.values()[t as usize].norm() - c.values()[t as usize].re).abs() < 1e-9);
        }
    }

    #[test]
    fn e_of_cases() {
        let seq = LacunarySequence::powers_of_two(6);
        let grid = 8u32;
        let constant = Linearizer::from_choice(grid, vec![0; 256]); // N ≡ 2
                                                                    // ω = [4,8) misses n_1 = 2 entirely.
        let p = Tile::new(
            FrequencyInterval::new(2, 1),
            DyadicInterval::new(2, 1).unwrap(),
        )
        .unwrap();
        assert!(e_of(&p, &constant, &seq).unwrap().is_empty());
        // ω = [0,4) contains 2, so E(P) = I_P.
        let p = Tile::new(
            FrequencyInterval::new(2, 0),
            DyadicInterval::new(2, 1).unwrap(),
        )
        .unwrap();
        let e = e_of(&p, &constant, &seq).unwrap();
        assert_eq!(e.cells_in(&DyadicInterval::new(2, 1).unwrap()), 64);
        assert_eq!(e.cells.len(), 64);
    }

    #[test]
    fn e_of_rows_partition_the_interval() {
        // At a fixed scale, the tiles over one I with ω sweeping the band
        // split I according to N; their E(P) tile I exactly.
        let grid = 8u32;
        let seq = LacunarySequence::powers_of_two(7);
        let choice: Vec<usize> = (0..256).map(|t| (t * 31 % 6) as usize).collect();
        let nfun = Linearizer::from_choice(grid, choice);
        let iv = DyadicInterval::new(3, 5).unwrap();
        let mut total = 0u64;
        for w in 0..16 {
            let p = Tile::new(FrequencyInterval::new(3, w), iv).unwrap();
            total += e_of(&p, &nfun, &seq).unwrap().cells.len() as u64;
        }
        assert_eq!(total, 32); // 2^8 / 2^3 grid cells in I
    }

    #[test]
    fn tile_operator_support_and_adjoint() {
        let grid = 11u32;
        let seq = LacunarySequence::powers_of_two(9);
        let kern = build_kernel(4.0).unwrap();
        let f = {
            let vals: Vec<f64> = (0..1 << grid)
                .map(|t| ((t * t + 3) % 17) as f64 / 17.0)
                .collect();
            GridFunction::from_real_values(grid, &vals).unwrap()
        };
        let g = {
            let vals: Vec<f64> = (0..1 << grid)
                .map(|t| ((5 * t + 1) % 13) as f64 / 13.0 - 0.4)
                .collect();
            GridFunction::from_real_values(grid, &vals).unwrap()
        };
        let nfun = linearize(&f, &seq);
        let p = Tile::new(
            FrequencyInterval::new(5, 1),
            DyadicInterval::new(5, 11).unwrap(),
        )
        .unwrap();

        let tf = tile_operator(&p, &f, &nfun, &seq, &kern).unwrap();
        // supp T_P f ⊆ I_P.
        for (t, v) in tf.values().iter().enumerate() {
            if !p.interval.cell_range(grid).contains(&(t as u64)) {
                assert_eq!(v.norm(), 0.0);
            }
        }
        // supp T_P* g ⊆ I_{P*} (distance between 3/2 and 17/2 cells of |I_P| from the center).
        let tg = tile_adjoint(&p, &g, &nfun, &seq, &kern).unwrap();
        let (cells, itilde) = p.adjoint_support().unwrap();
        for (t, v) in tg.values().iter().enumerate() {
            if v.norm() > 1e-15 {
                let x = crate::dyadic::Dyadic::new(t as i128, grid);
                let inside = cells.iter().any(|c| c.contains_point(x));
                assert!(inside, "adjoint support leak at t={t}");
                let _ = &itilde;
            }
        }
        // <T_P f, g> = <f, T_P* g> under the same quadrature.
        let lhs = tf.inner(&g);
        let rhs = f.inner(&tg);
        assert!((lhs - rhs).norm() < 1e-10, "lhs={lhs} rhs={rhs}");
    }
}
