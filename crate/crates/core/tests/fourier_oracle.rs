mod common;

use common::fourier_by_quadrature;
use gabor_core::{window_fourier, CauchyTerm, WindowSpec, C64};
use proptest::prelude::*;

fn close(spec: &WindowSpec, xi: f64) -> Result<(), String> {
    let exact = window_fourier(spec, xi);
    let quad = fourier_by_quadrature(spec, xi);
    let err = (exact - quad).norm();
    if err <= 1e-6 * exact.norm().max(1.0) {
        Ok(())
    } else {
        Err(format!("xi = {xi}: closed {exact}, quadrature {quad}"))
    }
}

#[test]
fn sinc_spectrum_matches_quadrature() {
    let spec = WindowSpec::shifted_sinc(2.0, -1.0).unwrap();
    for &xi in &[-1.5, -0.3, 0.2, 0.9, 1.6, 2.4, 3.0] {
        close(&spec, xi).unwrap();
    }
}

#[test]
fn pure_cauchy_is_one_sided() {
    let spec = WindowSpec::cauchy(-0.4).unwrap();
    for &xi in &[-2.0, -0.5, -0.1] {
        assert!(fourier_by_quadrature(&spec, xi).norm() < 1e-8);
    }
    close(&spec, 0.7).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cauchy_sums_match_quadrature(
        w in -1.0f64..-0.1,
        a1 in -0.6f64..0.6,
        a2 in -0.6f64..0.6,
        b1 in 0.2f64..1.5,
        gap in 0.3f64..1.5,
        xi in -2.0f64..4.0,
    ) {
        let b2 = b1 + gap;
        prop_assume!([0.0, b1, b2].iter().all(|b| (xi - b).abs() > 0.1));
        let spec = WindowSpec::cauchy_mod_sum(w, vec![
            CauchyTerm::real(1.0, 0.0),
            CauchyTerm::new(C64::new(a1, 0.2), b1),
            CauchyTerm::real(a2, b2),
        ]).unwrap();
        prop_assert!(close(&spec, xi).is_ok(), "{:?}", close(&spec, xi));
    }
}
