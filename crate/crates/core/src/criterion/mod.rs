//! The invertibility criterion for windows `P(t)/(t - iw)`: after normalising to
//! `β = 1`, `G(g; α, 1)` is a frame exactly when the matrices `L_ξ` are uniformly
//! bounded below over `ξ ∈ (0, 1/α)`.

mod lhs;
mod matrix;
mod segment;

pub use lhs::{criterion_lhs, LhsTruncation};
pub use matrix::{
    build_criterion_matrix, criterion_xis, dominance_certificate, reduce_shift, CriterionMatrix,
    DominanceCertificate, MatrixRow, ReducedShift, Truncation, Variant,
};
pub use segment::{apply_ak, circular_shift, CircularSegment};

use crate::error::Result;
use crate::estimate::{judge_trajectory, FrameEstimate, Method, Verdict};
use crate::linalg::extreme_eigenvalues;
use crate::window::{Lattice, WindowSpec};

const DENSITY_TOL: f64 = 1e-12;

/// Frame set membership predicted by the structure theorems for each window class.
pub fn classify_predicted(spec: &WindowSpec, lattice: Lattice) -> Verdict {
    let density = lattice.density();
    if density > 1.0 + DENSITY_TOL {
        return Verdict::NotFrame;
    }
    match spec {
        WindowSpec::Gaussian { .. } => {
            if density < 1.0 - DENSITY_TOL {
                Verdict::Frame
            } else {
                Verdict::NotFrame
            }
        }
        WindowSpec::ShiftedSinc { b, .. } => {
            if lattice.beta <= b * (1.0 + DENSITY_TOL) {
                Verdict::Frame
            } else {
                Verdict::NotFrame
            }
        }
        WindowSpec::CauchyModSum { .. } => match spec.hypothesis_margin() {
            Some(rho) if rho < 1.0 => Verdict::Frame,
            _ => Verdict::Unknown,
        },
    }
}

/// Whether `(α, β)` lies within `band` of a boundary of the predicted frame set.
pub fn in_boundary_band(spec: &WindowSpec, lattice: Lattice, band: f64) -> bool {
    if (lattice.density() - 1.0).abs() < band {
        return true;
    }
    matches!(spec.bandwidth(), Some(b) if (lattice.beta - b).abs() < band)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionConfig {
    /// Column counts of the successive sections.
    pub sizes: Vec<usize>,
    pub xi_count: usize,
    /// A section is singular when `σ_min ≤ rel_tol · σ_max`.
    pub rel_tol: f64,
    pub boundary_band: f64,
}

impl Default for CriterionConfig {
    fn default() -> Self {
        Self {
            sizes: vec![64, 128],
            xi_count: 64,
            rel_tol: 1e-8,
            boundary_band: 0.02,
        }
    }
}

/// Smallest and largest singular value of one criterion matrix.
pub fn criterion_singular_extremes(mat: &CriterionMatrix) -> Result<(f64, f64)> {
    let ext = extreme_eigenvalues(&mat.normal_matrix())?;
    let ax = mat.apply(&ext.min_vector);
    Ok((ax.norm() / ext.min_vector.norm(), ext.max.sqrt()))
}

/// Numerical verdict from the full criterion matrices over a low-discrepancy set of `ξ`.
///
/// The window is first rescaled so that `β = 1`. Bounds are the extreme singular values
/// over all sampled `ξ` at the finest section.
pub fn criterion_estimate(spec: &WindowSpec, lattice: Lattice, cfg: &CriterionConfig) -> FrameEstimate {
    if spec.cauchy_terms().is_none() {
        return FrameEstimate::inconclusive(Method::Criterion, "window is not of the form P(t)/(t - iw)");
    }
    if in_boundary_band(spec, lattice, cfg.boundary_band) {
        return FrameEstimate::inconclusive(Method::Criterion, "boundary");
    }
    match criterion_trajectory(spec, lattice, cfg) {
        Ok((lowers, upper)) => {
            let verdict = judge_trajectory(&lowers, upper, cfg.rel_tol);
            FrameEstimate {
                verdict,
                lower: lowers.last().copied(),
                upper: Some(upper),
                method: Method::Criterion,
                detail: format!("min singular value of L_xi over {} xi", cfg.xi_count),
                trajectory: lowers,
            }
        }
        Err(e) => FrameEstimate::inconclusive(Method::Criterion, e.to_string()),
    }
}

fn criterion_trajectory(spec: &WindowSpec, lattice: Lattice, cfg: &CriterionConfig) -> Result<(Vec<f64>, f64)> {
    let rescaled = spec.rescale(lattice.beta)?;
    let alpha = lattice.alpha * lattice.beta;
    let xis = criterion_xis(&rescaled.spec, alpha, cfg.xi_count);
    let mut lowers = Vec::new();
    let mut upper: f64 = 0.0;
    for &size in &cfg.sizes {
        let trunc = Truncation::centered(size);
        let mut lo = f64::INFINITY;
        for &xi in &xis {
            let mat = build_criterion_matrix(&rescaled.spec, alpha, xi, trunc, Variant::Full)?;
            let (s_min, s_max) = criterion_singular_extremes(&mat)?;
            lo = lo.min(s_min);
            upper = upper.max(s_max);
        }
        lowers.push(lo);
    }
    Ok((lowers, upper))
}

/// Whether some sampled `ξ` leaves a group of the full matrix without a pivot.
pub fn has_zero_column(spec: &WindowSpec, alpha: f64, xi_count: usize, size: usize) -> Result<bool> {
    for xi in criterion_xis(spec, alpha, xi_count) {
        let mat = build_criterion_matrix(spec, alpha, xi, Truncation::centered(size), Variant::Full)?;
        if !mat.missing_pivot_groups().is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::CauchyTerm;

    fn lattice(a: f64, b: f64) -> Lattice {
        Lattice::new(a, b).unwrap()
    }

    #[test]
    fn predicted_examples() {
        let sinc = WindowSpec::shifted_sinc(2.0, -1.0).unwrap();
        assert_eq!(classify_predicted(&sinc, lattice(0.4, 2.0)), Verdict::Frame);
        assert_eq!(classify_predicted(&sinc, lattice(0.4, 2.5)), Verdict::NotFrame);
        assert_eq!(classify_predicted(&sinc, lattice(0.4, 2.5)), Verdict::NotFrame);
        let g = WindowSpec::cauchy_mod_sum(-0.1, vec![CauchyTerm::real(1.0, 0.0), CauchyTerm::real(0.5, 1.0)])
            .unwrap();
        assert_eq!(classify_predicted(&g, lattice(0.9, 1.1)), Verdict::Frame);
        assert_eq!(classify_predicted(&g, lattice(1.0, 1.1)), Verdict::NotFrame);
        let big = WindowSpec::cauchy_mod_sum(-0.5, vec![CauchyTerm::real(1.0, 0.0), CauchyTerm::real(0.9, 1.0)])
            .unwrap();
        assert_eq!(classify_predicted(&big, lattice(0.5, 1.0)), Verdict::Unknown);
        let gauss = WindowSpec::gaussian(1.0).unwrap();
        assert_eq!(classify_predicted(&gauss, lattice(1.0, 1.0)), Verdict::NotFrame);
        assert_eq!(classify_predicted(&gauss, lattice(0.5, 1.0)), Verdict::Frame);
    }

    #[test]
    fn sinc_estimates() {
        let sinc = WindowSpec::shifted_sinc(2.0, -1.0).unwrap();
        let cfg = CriterionConfig {
            sizes: vec![32, 64],
            xi_count: 16,
            ..CriterionConfig::default()
        };
        assert_eq!(criterion_estimate(&sinc, lattice(0.4, 1.5), &cfg).verdict, Verdict::Frame);
        assert_eq!(criterion_estimate(&sinc, lattice(0.3, 2.7), &cfg).verdict, Verdict::NotFrame);
        assert_eq!(criterion_estimate(&sinc, lattice(1.2, 1.0), &cfg).verdict, Verdict::NotFrame);
        assert_eq!(criterion_estimate(&sinc, lattice(0.5, 2.0), &cfg).detail, "boundary");
    }

    #[test]
    fn zero_column_matches_bandwidth() {
        for &(b, expected) in &[(0.5, true), (0.9, true), (1.0, false), (1.7, false)] {
            let spec = WindowSpec::shifted_sinc(b, -0.5).unwrap();
            assert_eq!(has_zero_column(&spec, 0.6, 64, 16).unwrap(), expected, "b = {b}");
        }
    }
}
