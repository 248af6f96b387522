//! The dyadic kernel decomposition 1/y = Σ_k 2^k ψ(2^k y).

use crate::{Error, Result};

/// Smooth even cutoff θ (1 on |y| ≤ 4, 0 on |y| ≥ 4 + taper, C^∞ in
/// between) and the odd bump ψ(y) = (θ(y) − θ(2y)) / y built from it. The
/// pieces 2^k ψ(2^k y) telescope back to θ(y)/y.
#[derive(Clone, Copy, Debug)]
pub struct KernelFamily {
    taper: f64,
}

fn smooth_step(t: f64) -> f64 {
    // C^∞ transition from 0 at t <= 0 to 1 at t >= 1.
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let h = |s: f64| (-1.0 / s).exp();
    h(t) / (h(t) + h(1.0 - t))
}

impl KernelFamily {
    pub fn theta(&self, y: f64) -> f64 {
        1.0 - smooth_step((y.abs() - 4.0) / self.taper)
    }

    pub fn psi(&self, y: f64) -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        (self.theta(y) - self.theta(2.0 * y)) / y
    }

    /// ψ_k(y) = 2^k ψ(2^k y).
    pub fn psi_k(&self, k: u32, y: f64) -> f64 {
        let s = (1u64 << k) as f64;
        s * self.psi(s * y)
    }

    /// Σ_{k=0..=kmax} ψ_k(y); equals θ(y)/y once 2^kmax |y| clears the taper.
    pub fn reconstruct(&self, kmax: u32, y: f64) -> f64 {
        (0..=kmax).map(|k| self.psi_k(k, y)).sum()
    }
}

/// Build the kernel family and verify its defining properties numerically.
pub fn build_kernel(taper_width: f64) -> Result<KernelFamily> {
    if !(taper_width > 0.0 && taper_width <= 4.0) || !taper_width.is_finite() {
        return Err(Error::BadTaper(format!(
            "taper width {taper_width} must lie in (0, 4] so that theta = 1 on |y| <= 4 and 0 on |y| >= 8"
        )));
    }
    let kern = KernelFamily { taper: taper_width };
    // supp ψ ⊆ {2 < |y| < 8} and oddness, on a sample grid.
    for i in 0..=4000 {
        let y = -10.0 + 20.0 * i as f64 / 4000.0;
        if (y.abs() <= 2.0 || y.abs() >= 8.0) && kern.psi(y).abs() > 1e-14 {
            return Err(Error::BadTaper(format!(
                "psi not supported in 2<|y|<8 at y={y}"
            )));
        }
        if (kern.psi(y) + kern.psi(-y)).abs() > 1e-14 {
            return Err(Error::BadTaper(format!("psi not odd at y={y}")));
        }
    }
    // Telescoping reconstruction on the dyadic range it must cover.
    let kmax = 13u32;
    for i in 1..=1000 {
        let y = i as f64 / 1000.0;
        if y >= 2.0_f64.powi(3 - kmax as i32) && y < 1.0 {
            let got = kern.reconstruct(kmax, y);
            if ((got - 1.0 / y) / (1.0 / y)).abs() > 1e-8 {
                return Err(Error::BadTaper(format!(
                    "reconstruction fails at y={y}: {got}"
                )));
            }
        }
    }
    Ok(kern)
}
