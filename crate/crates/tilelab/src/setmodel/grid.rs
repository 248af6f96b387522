//! Band-limited functions on the uniform `2^L` grid of the torus, kept
//! consistent between their sample and Fourier-coefficient views.

use super::set::DyadicSet;
use crate::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;
use std::f64::consts::PI;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_forward(data: &mut [Complex64]) {
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(data.len()));
    fft.process(data);
}

fn fft_inverse(data: &mut [Complex64]) {
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(data.len()));
    fft.process(data);
}

/// A complex function on the grid `x = t * 2^-L`, together with its Fourier
/// coefficients for frequencies `m ∈ [-2^{L-1}, 2^{L-1})`.
///
/// The two views satisfy `values[t] = Σ_m coeffs(m) e^{2πi m t / 2^L}`; every
/// constructor enforces this, so the pair is always DFT-consistent.
#[derive(Clone, Debug)]
pub struct GridFunction {
    level: u32,
    values: Vec<Complex64>,
    coeffs: Vec<Complex64>, // FFT layout: index i holds frequency i mod 2^L
}

impl GridFunction {
    pub fn from_values(level: u32, values: Vec<Complex64>) -> Result<Self> {
        check_len(level, values.len())?;
        let mut coeffs = values.clone();
        fft_forward(&mut coeffs);
        let n = values.len() as f64;
        for c in &mut coeffs {
            *c /= n;
        }
        Ok(GridFunction {
            level,
            values,
            coeffs,
        })
    }

    pub fn from_real_values(level: u32, values: &[f64]) -> Result<Self> {
        Self::from_values(
            level,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn from_coeffs(level: u32, coeffs: Vec<Complex64>) -> Result<Self> {
        check_len(level, coeffs.len())?;
        let mut values = coeffs.clone();
        fft_inverse(&mut values);
        Ok(GridFunction {
            level,
            values,
            coeffs,
        })
    }

    pub fn zero(level: u32) -> Self {
        let n = 1usize << level;
        GridFunction {
            level,
            values: vec![Complex64::ZERO; n],
            coeffs: vec![Complex64::ZERO; n],
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Coefficient for frequency `m ∈ [-2^{L-1}, 2^{L-1})`.
    pub fn coeff(&self, m: i64) -> Complex64 {
        let n = self.len() as i64;
        debug_assert!(-n / 2 <= m && m < n / 2);
        self.coeffs[m.rem_euclid(n) as usize]
    }

    /// Half-band limit: frequencies run over `[-band(), band())`.
    pub fn band(&self) -> i64 {
        (self.len() / 2) as i64
    }

    /// Apply a Fourier multiplier `m -> mu(m)` over the band.
    pub fn apply_multiplier(&self, mu: impl Fn(i64) -> Complex64) -> GridFunction {
        let n = self.len() as i64;
        let coeffs: Vec<Complex64> = (0..n)
            .map(|i| {
                let m = if i < n / 2 { i } else { i - n };
                self.coeffs[i as usize] * mu(m)
            })
            .collect();
        GridFunction::from_coeffs(self.level, coeffs).expect("same length")
    }

    /// Mean of |f| over the grid (the L¹ norm under trapezoid quadrature).
    pub fn norm_l1(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum::<f64>() / self.len() as f64
    }

    pub fn norm_l2(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.len() as f64).sqrt()
    }

    pub fn norm_linf(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `∫_F |f|` by quadrature, restricting to the cells of `F` (refined to
    /// the grid level).
    pub fn norm_l1_on(&self, set: &DyadicSet) -> f64 {
        let refined = set.refine(self.level).expect("set coarser than grid");
        refined
            .cells
            .iter()
            .map(|&t| self.values[t as usize].norm())
            .sum::<f64>()
            / self.len() as f64
    }

    /// `<f, g> = mean(f * conj(g))`.
    pub fn inner(&self, other: &GridFunction) -> Complex64 {
        assert_eq!(self.level, other.level);
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            / self.len() as f64
    }

    /// Max relative DFT inconsistency between the two views; zero up to
    /// rounding for every constructed function.
    pub fn consistency_error(&self) -> f64 {
        let mut values = self.coeffs.clone();
        fft_inverse(&mut values);
        let scale = self.values.iter().map(|v| v.norm()).fold(1e-300, f64::max);
        values
            .iter()
            .zip(&self.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale
    }
}

fn check_len(level: u32, len: usize) -> Result<()> {
    if !(1..=26).contains(&level) {
        return Err(Error::GridLevel {
            level,
            reason: "grid level out of range".into(),
        });
    }
    if len != 1usize << level {
        return Err(Error::GridLevel {
            level,
            reason: format!("expected 2^{level} samples, got {len}"),
        });
    }
    Ok(())
}

/// The band-limited indicator of `F` on the `2^L` grid. Fourier coefficients
/// are computed analytically from the interval endpoints
/// (`(e^{-2πimb} - e^{-2πima}) / (-2πim)` for `m != 0`), then truncated to the
/// band; the sample view is the inverse transform of those coefficients, so
/// band-truncation is the only approximation in play.
pub fn indicator(f: &DyadicSet, grid_level: u32) -> Result<GridFunction> {
    if grid_level < f.level {
        return Err(Error::GridLevel {
            level: grid_level,
            reason: "grid coarser than the set resolution".into(),
        });
    }
    let n = 1usize << grid_level;
    let mut coeffs = vec![Complex64::ZERO; n];
    coeffs[0] = Complex64::new(f.measure().to_f64(), 0.0);
    let endpoints: Vec<(f64, f64)> = f
        .to_intervals()
        .iter()
        .map(|iv| (iv.lo().to_f64(), iv.hi().to_f64()))
        .collect();
    let half = (n / 2) as i64;
    for m in (-half..half).filter(|&m| m != 0) {
        let mut c = Complex64::ZERO;
        for &(a, b) in &endpoints {
            let ea = Complex64::from_polar(1.0, -2.0 * PI * m as f64 * a);
            let eb = Complex64::from_polar(1.0, -2.0 * PI * m as f64 * b);
            c += (eb - ea) / Complex64::new(0.0, -2.0 * PI * m as f64);
        }
        coeffs[m.rem_euclid(n as i64) as usize] = c;
    }
    GridFunction::from_coeffs(grid_level, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::DyadicInterval;

    fn iv(level: u32, index: u64) -> DyadicInterval {
        DyadicInterval::new(level, index).unwrap()
    }

    #[test]
    fn indicator_of_full_torus_is_constant_one() {
        let f = DyadicSet::full(3);
        let g = indicator(&f, 8).unwrap();
        for v in g.values() {
            assert!((v - Complex64::ONE).norm() < 1e-12);
        }
        assert!((g.coeff(0) - Complex64::ONE).norm() < 1e-15);
        assert!(g.coeff(3).norm() < 1e-15);
    }

    #[test]
    fn indicator_of_empty_set_is_zero() {
        let g = indicator(&DyadicSet::empty(3), 8).unwrap();
        assert!(g.norm_linf() < 1e-15);
    }

    #[test]
    fn indicator_mean_equals_measure() {
        let f = DyadicSet::from_intervals(4, &[iv(1, 0)]).unwrap();
        let g = indicator(&f, 10).unwrap();
        assert!((g.coeff(0).re - 0.5).abs() < 1e-15);
        assert!(g.coeff(0).im.abs() < 1e-15);
    }

    #[test]
    fn views_stay_consistent() {
        let f = DyadicSet::from_intervals(5, &[iv(3, 1), iv(4, 9)]).unwrap();
        let g = indicator(&f, 10).unwrap();
        assert!(g.consistency_error() < 1e-10);
        let h = g.apply_multiplier(|m| Complex64::new(0.0, -(m.signum() as f64)));
        assert!(h.consistency_error() < 1e-10);
    }
}
