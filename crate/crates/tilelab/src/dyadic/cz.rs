//! Calderon-Zygmund decomposition of an interval relative to a disjoint
//! collection of dyadic intervals.
//!
//! Given pairwise-disjoint dyadic `A` inside `base`, produce `A ∪ B` with
//! `B` the maximal collection of dyadic intervals such that
//!   1) `A ∪ B` partitions `base`,
//!   2) for any `I ∈ A`, `J ∈ B`: `2I ⊉ J` and `2J ⊉ I`,
//!   3) `B` is maximal under (1), (2).

use super::interval::{DyadicInterval, RealInterval};
use super::rational::Dyadic;
use crate::{Error, Result};

pub fn cz_decompose(a: &[DyadicInterval], base: RealInterval) -> Result<Vec<DyadicInterval>> {
    for (i, x) in a.iter().enumerate() {
        for y in &a[i + 1..] {
            if !x.disjoint(y) {
                return Err(Error::NotDisjoint {
                    first: *x,
                    second: *y,
                });
            }
        }
        if !base.contains(&x.to_real()) && base.len() < Dyadic::ONE {
            return Err(Error::NotInBase { interval: *x });
        }
    }

    let dilated: Vec<RealInterval> = a
        .iter()
        .map(|i| i.to_real().dilate(Dyadic::from_int(2)))
        .collect();

    let mut out = Vec::new();
    for root in base.wrap_to_dyadic() {
        descend(root, a, &dilated, &mut out)?;
    }
    out.sort_by_key(|x| x.lo());
    Ok(out)
}

fn descend(
    j: DyadicInterval,
    a: &[DyadicInterval],
    dilated: &[RealInterval],
    out: &mut Vec<DyadicInterval>,
) -> Result<()> {
    if a.contains(&j) {
        out.push(j);
        return Ok(());
    }
    if a.iter().any(|i| i.strictly_contains(&j)) {
        // An element of `a` spans several base cells; no partition exists.
        return Err(Error::CzNoDecomposition);
    }
    if a.iter().any(|i| j.strictly_contains(i)) {
        for child in j.children() {
            descend(child, a, dilated, out)?;
        }
        return Ok(());
    }
    // j is disjoint from every element of `a`.
    let jr = j.to_real();
    if dilated.iter().any(|d| d.open_contains(&jr)) {
        // Splitting cannot help: every descendant stays inside 2I.
        return Err(Error::CzNoDecomposition);
    }
    let j2 = jr.dilate(Dyadic::from_int(2));
    if a.iter().any(|i| j2.open_contains(&i.to_real())) {
        for child in j.children() {
            descend(child, a, dilated, out)?;
        }
        return Ok(());
    }
    out.push(j);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::DyadicInterval;

    fn iv(level: u32, index: u64) -> DyadicInterval {
        DyadicInterval::new(level, index).unwrap()
    }

    fn unit() -> RealInterval {
        DyadicInterval::UNIT.to_real()
    }

    #[test]
    fn single_quarter() {
        let out = cz_decompose(&[iv(2, 0)], unit()).unwrap();
        assert_eq!(out, vec![iv(2, 0), iv(2, 1), iv(1, 1)]);
    }

    #[test]
    fn empty_input_yields_base() {
        let out = cz_decompose(&[], unit()).unwrap();
        assert_eq!(out, vec![DyadicInterval::UNIT]);
    }

    #[test]
    fn full_partition_is_fixed() {
        let a: Vec<_> = (0..8).map(|i| iv(3, i)).collect();
        let out = cz_decompose(&a, unit()).unwrap();
        assert_eq!(out, a);
    }

    #[test]
    fn overlapping_input_rejected() {
        assert!(matches!(
            cz_decompose(&[iv(1, 0), iv(2, 0)], unit()),
            Err(Error::NotDisjoint { .. })
        ));
    }
}
