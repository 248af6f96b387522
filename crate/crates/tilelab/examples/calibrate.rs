//! One-time calibration sweep: runs every experiment at its contract
//! parameters and prints the observed ratio ranges, from which the bands in
//! `golden/bands.json` were frozen. Rerun with:
//!
//! ```text
//! cargo run --release -p tilelab --example calibrate
//! ```

use tilelab::carleson::LacunarySequence;
use tilelab::verify::{
    foliation_overlap_check, load_golden, lower_bound_experiment, main_lemma_check, packing_check,
    tfr_invariant_check, tree_l2_check, upper_bound_experiment, walsh_sharpness_experiment,
    zygmund_experiment, ExperimentReport, SetKind,
};

fn span(rep: &ExperimentReport) {
    let lo = rep
        .ratios
        .iter()
        .map(|r| r.value)
        .fold(f64::INFINITY, f64::min);
    let hi = rep
        .ratios
        .iter()
        .map(|r| r.value)
        .fold(f64::NEG_INFINITY, f64::max);
    println!(
        "{:<16} rows={:<4} min={:<12.6} max={:<12.6} runtime={}ms params={:?}",
        rep.name,
        rep.ratios.len(),
        lo,
        hi,
        rep.runtime_ms,
        rep.params
    );
}

fn main() {
    let golden = load_golden().expect("golden file");
    let seq = LacunarySequence::powers_of_two(32);

    span(&lower_bound_experiment(4, 10, 16, &seq, &golden).unwrap());
    span(&upper_bound_experiment(200, 14, 7, &golden).unwrap());
    span(&zygmund_experiment(3, 6, 1, 3, SetKind::Interval, &golden).unwrap());
    span(&zygmund_experiment(3, 6, 1, 3, SetKind::Cantor, &golden).unwrap());
    span(&main_lemma_check(200, 7, &golden).unwrap());
    span(&tree_l2_check(6, 50, 7, &golden).unwrap());
    span(&walsh_sharpness_experiment(4, 10, 16, &golden).unwrap());
    span(&packing_check(10_000, 7, &golden).unwrap());
    span(&foliation_overlap_check(1_000, 7, &golden).unwrap());
    span(&tfr_invariant_check(100, 7).unwrap());
}
