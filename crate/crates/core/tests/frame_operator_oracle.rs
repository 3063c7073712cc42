mod common;

use std::f64::consts::PI;

use common::{grid, rel_l2};
use gabor_core::frame_operator::{
    frame_operator_direct_nested, frame_operator_explicit_small_params, frame_operator_general,
    frame_operator_sinc_general, lemma_sum_closed, lemma_sum_partial,
};
use gabor_core::{CauchyTerm, Lattice, SampledFunction, WindowSpec, C64};
use proptest::prelude::*;

fn gaussian() -> SampledFunction {
    grid(12.0, 0.01, |t| C64::new((-PI * t * t).exp(), 0.0))
}

/// Errors of the nested direct sums against `closed` at `|n| ≤ 250, 500, 1000`, `|m| ≤ 50`.
fn direct_errors(spec: &WindowSpec, lattice: Lattice, f: &SampledFunction, closed: &SampledFunction) -> Vec<f64> {
    frame_operator_direct_nested(spec, lattice, f, 50, &[250, 500, 1000])
        .unwrap()
        .iter()
        .map(|o| rel_l2(&o.output, closed))
        .collect()
}

#[test]
fn small_params_form_matches_brute_force() {
    let spec = WindowSpec::cauchy_mod_sum(-0.5, vec![CauchyTerm::real(1.0, 0.0), CauchyTerm::real(-0.3, 1.0)]).unwrap();
    let l = Lattice::new(0.5, 1.0).unwrap();
    let f = gaussian();
    let closed = frame_operator_explicit_small_params(&spec, l, &f).unwrap();
    let errs = direct_errors(&spec, l, &f, &closed);
    assert!(errs[2] <= 1e-2 && errs[2] < errs[0], "{errs:?}");
}

#[test]
fn general_sinc_form_matches_brute_force() {
    let spec = WindowSpec::shifted_sinc(1.0, -0.5).unwrap();
    let l = Lattice::new(0.8, 1.0).unwrap();
    let f = gaussian();
    let closed = frame_operator_sinc_general(&f, -0.5, 0.8, 1.0, 1.0).unwrap();
    let errs = direct_errors(&spec, l, &f, &closed);
    assert!(errs[2] <= 5e-2 && errs[2] < errs[0], "{errs:?}");
}

#[test]
fn pairwise_form_matches_brute_force_past_the_small_parameter_range() {
    // α · spread = 1.35 > 1, outside the block form
    let spec = WindowSpec::cauchy_mod_sum(-0.4, vec![CauchyTerm::real(1.0, 0.0), CauchyTerm::real(0.25, 1.5)]).unwrap();
    let l = Lattice::new(0.9, 1.0).unwrap();
    let f = gaussian();
    assert!(frame_operator_explicit_small_params(&spec, l, &f).is_err());
    let closed = frame_operator_general(&spec, l, &f).unwrap();
    let errs = direct_errors(&spec, l, &f, &closed);
    assert!(errs[2] <= 2e-2 && errs[2] < errs[0], "{errs:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn lemma_tail_is_order_one_over_n(
        c in 0.0f64..0.99,
        x1 in -3.0f64..3.0,
        y1 in 0.1f64..1.0,
        x2 in -3.0f64..3.0,
        y2 in -1.0f64..-0.1,
    ) {
        let (z1, z2) = (C64::new(x1, y1), C64::new(x2, y2));
        let closed = lemma_sum_closed(c, z1, z2).unwrap();
        let scaled: Vec<f64> = [100u64, 1_000, 10_000]
            .iter()
            .map(|&n| (lemma_sum_partial(c, z1, z2, n) - closed).norm() * n as f64)
            .collect();
        let k = scaled[0].max(scaled[1]).max(1e-9);
        prop_assert!(scaled[2] <= 4.0 * k, "{scaled:?}");
    }
}
