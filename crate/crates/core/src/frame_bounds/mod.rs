//! Numerical frame bounds: eigenvalue extremes of sections of the fibre matrices of the
//! frame operator, and the Zak-transform test on the critical hyperbola `αβ = 1`.

mod fiber;
mod zak;

pub use fiber::{fiber_points, fiber_section, finite_section, preferred_side, section_extremes, FiniteSection, Side};
pub use zak::{zak_samples, zak_spectral, zak_transform, zak_value, ZakSamples};

use crate::criterion::in_boundary_band;
use crate::estimate::{judge_trajectory, FrameEstimate, Method, Verdict};
use crate::window::{Lattice, Window, WindowSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsConfig {
    /// `(half_rows, fibre points)` per refinement level.
    pub levels: Vec<(usize, usize)>,
    /// A section is singular when `λ_min ≤ rel_tol · λ_max`.
    pub rel_tol: f64,
    pub boundary_band: f64,
    /// Window values below this fraction of the peak are dropped.
    pub support_tol: f64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            levels: vec![(16, 8), (32, 16), (64, 32)],
            rel_tol: 1e-12,
            boundary_band: 0.02,
            support_tol: 1e-12,
        }
    }
}

/// Frame-bound estimate for any window with finite support in time or frequency at
/// `cfg.support_tol`. No boundary band is applied.
pub fn estimate_bounds_window<W: Window + ?Sized>(g: &W, lattice: Lattice, cfg: &BoundsConfig) -> FrameEstimate {
    let Some(side) = preferred_side(g, cfg.support_tol) else {
        return FrameEstimate::inconclusive(Method::FiniteSection, "window decays in neither time nor frequency");
    };
    let mut lowers = Vec::with_capacity(cfg.levels.len());
    let mut upper: f64 = 0.0;
    for &(half_rows, points) in &cfg.levels {
        match section_extremes(g, lattice, side, half_rows, points, cfg.support_tol) {
            Ok((lo, hi)) => {
                lowers.push(lo);
                upper = upper.max(hi);
            }
            Err(e) => return FrameEstimate::inconclusive(Method::FiniteSection, e.to_string()),
        }
    }
    let side_name = match side {
        Side::Time => "time",
        Side::Frequency => "frequency",
    };
    FrameEstimate {
        verdict: judge_trajectory(&lowers, upper, cfg.rel_tol),
        lower: lowers.last().copied(),
        upper: Some(upper),
        method: Method::FiniteSection,
        detail: format!("fibre sections, {side_name} side"),
        trajectory: lowers,
    }
}

/// Frame-bound estimate for a window spec; lattices within `cfg.boundary_band` of the
/// predicted frame-set boundary report Inconclusive.
pub fn estimate_bounds(spec: &WindowSpec, lattice: Lattice, cfg: &BoundsConfig) -> FrameEstimate {
    if let Err(e) = spec.validate() {
        return FrameEstimate::inconclusive(Method::FiniteSection, e.to_string());
    }
    if in_boundary_band(spec, lattice, cfg.boundary_band) {
        return FrameEstimate::inconclusive(Method::FiniteSection, "boundary");
    }
    estimate_bounds_window(spec, lattice, cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZakConfig {
    /// Grid sizes `n` of the `n × n` samplings.
    pub grids: Vec<usize>,
    pub rel_tol: f64,
    /// Truncation tolerance for the spectral route.
    pub support_tol: f64,
}

impl Default for ZakConfig {
    fn default() -> Self {
        Self {
            grids: vec![16, 32, 64],
            rel_tol: 1e-12,
            support_tol: 1e-15,
        }
    }
}

/// Frame test at `(α, 1/α)` from the extremes of `|Zg|²` on refining grids.
pub fn zak_criterion(spec: &WindowSpec, alpha: f64, cfg: &ZakConfig) -> FrameEstimate {
    if let Err(e) = spec.validate() {
        return FrameEstimate::inconclusive(Method::Zak, e.to_string());
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return FrameEstimate::inconclusive(Method::Zak, format!("alpha must be positive, got {alpha}"));
    }
    let mut lowers = Vec::with_capacity(cfg.grids.len());
    let mut upper: f64 = 0.0;
    let mut tail: f64 = 0.0;
    for &n in &cfg.grids {
        let samples = zak_samples(spec, alpha, n, cfg.support_tol);
        lowers.push(samples.min_abs().powi(2));
        upper = upper.max(samples.max_abs().powi(2));
        tail = tail.max(samples.tail);
    }
    let mut verdict = judge_trajectory(&lowers, upper, cfg.rel_tol);
    let min_abs = lowers.last().copied().unwrap_or(0.0).sqrt();
    let mut detail = "criterion-by-citation".to_string();
    if verdict == Verdict::Frame && tail > 0.1 * min_abs {
        verdict = Verdict::Inconclusive;
        detail.push_str("; slow Zak convergence");
    }
    FrameEstimate {
        verdict,
        lower: lowers.last().copied(),
        upper: Some(upper),
        method: Method::Zak,
        detail,
        trajectory: lowers,
    }
}
