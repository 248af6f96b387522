//! Walsh partial sums (Paley enumeration) via the fast Walsh–Hadamard
//! transform, and the associated maximal operator.

use super::LacunarySequence;
use crate::setmodel::GridFunction;
use num_complex::Complex64;

/// In-place Walsh–Hadamard butterfly; natural (Hadamard) indexing, where
/// character m is t ↦ (−1)^{popcount(m & t)}.
fn fwht(data: &mut [Complex64]) {
    let n = data.len();
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (data[i], data[i + h]);
                data[i] = a + b;
                data[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

fn bit_reverse(m: usize, bits: u32) -> usize {
    m.reverse_bits() >> (usize::BITS - bits)
}

/// W_n f = Σ_{k=0..=n} <f, w_k> w_k, the n-th Walsh partial sum in Paley
/// order. Paley character k is natural character bitrev(k), so the
/// truncation keeps natural indices m with bitrev(m) <= n.
pub fn walsh_partial_sum(f: &GridFunction, n: usize) -> GridFunction {
    let len = f.len();
    assert!(n < len, "partial-sum order must be below the grid size");
    let bits = f.level();
    let mut data: Vec<Complex64> = f.values().to_vec();
    fwht(&mut data);
    let scale = 1.0 / len as f64;
    for (m, v) in data.iter_mut().enumerate() {
        if bit_reverse(m, bits) > n {
            *v = Complex64::ZERO;
        } else {
            *v *= scale;
        }
    }
    fwht(&mut data); // self-inverse up to the 1/len already applied
    GridFunction::from_values(f.level(), data).expect("same length")
}

/// sup_j |W_{n_j} f| pointwise, over the terms of `seq` below the grid size.
pub fn walsh_carleson(f: &GridFunction, seq: &LacunarySequence) -> GridFunction {
    let len = f.len() as i64;
    let terms: Vec<usize> = seq
        .terms
        .iter()
        .filter(|&&n| n < len)
        .map(|&n| n as usize)
        .collect();
    let partials = crate::parallel::map_slice(&terms, |&n| walsh_partial_sum(f, n));
    let mut sup = vec![0.0f64; f.len()];
    for p in &partials {
        for (s, v) in sup.iter_mut().zip(p.values()) {
            *s = s.max(v.norm());
        }
    }
    GridFunction::from_real_values(f.level(), &sup).expect("same length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::DyadicInterval;
    use crate::setmodel::{indicator, DyadicSet};

    fn chi(level: u32, index: u64, grid: u32) -> GridFunction {
        let iv = DyadicInterval::new(level, index).unwrap();
        let set = DyadicSet::from_intervals(grid, &[iv]).unwrap();
        let vals: Vec<f64> = (0..(1u64 << grid))
            .map(|t| if set.contains_cell(t) { 1.0 } else { 0.0 })
            .collect();
        GridFunction::from_real_values(grid, &vals).unwrap()
    }

    #[test]
    fn first_partial_sum_of_quarter_indicator() {
        // <f,w0> = <f,w1> = 1/4, so W_1 f = 1/2 on [0,1/2) and 0 after.
        let f = chi(2, 0, 6);
        let w = walsh_partial_sum(&f, 1);
        for (t, v) in w.values().iter().enumerate() {
            let want = if t < 32 { 0.5 } else { 0.0 };
            assert!((v.re - want).abs() < 1e-12, "t={t}");
            assert!(v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn full_order_reconstructs() {
        let vals: Vec<f64> = (0..64).map(|t| (t as f64).sin()).collect();
        let f = GridFunction::from_real_values(6, &vals).unwrap();
        let w = walsh_partial_sum(&f, 63);
        for (a, b) in w.values().iter().zip(f.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn order_zero_is_the_mean() {
        let f = chi(2, 1, 5);
        let w = walsh_partial_sum(&f, 0);
        for v in w.values() {
            assert!((v.re - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn dyadic_orders_are_conditional_expectations() {
        // W_{2^j - 1} averages over level-j dyadic cells.
        let set = DyadicSet::from_intervals(4, &[DyadicInterval::new(3, 5).unwrap()]).unwrap();
        let f = indicator(&set, 6).unwrap();
        for j in 0..=6u32 {
            let w = walsh_partial_sum(&f, (1 << j) - 1);
            let cells = 1usize << j;
            let width = 64 / cells;
            for c in 0..cells {
                let avg: Complex64 = f.values()[c * width..(c + 1) * width]
                    .iter()
                    .sum::<Complex64>()
                    / width as f64;
                for t in c * width..(c + 1) * width {
                    assert!((w.values()[t] - avg).norm() < 1e-10, "j={j} t={t}");
                }
            }
        }
    }

    #[test]
    fn partial_sum_is_a_projection() {
        let vals: Vec<f64> = (0..128).map(|t| ((3 * t) as f64).cos()).collect();
        let f = GridFunction::from_real_values(7, &vals).unwrap();
        for n in [0usize, 5, 17, 100] {
            let once = walsh_partial_sum(&f, n);
            let twice = walsh_partial_sum(&once, n);
            for (a, b) in once.values().iter().zip(twice.values()) {
                assert!((a - b).norm() < 1e-11);
            }
        }
    }
}
