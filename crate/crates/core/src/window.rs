//! Window functions `g(t) = P(t) / (t - iw)`, the imaginary-shifted sinc and the
//! Gaussian reference window, together with their Fourier transforms.
//!
//! Fourier transforms use `ĝ(ξ) = ∫ g(t) e^{-2πitξ} dt`.

use std::f64::consts::PI;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub type C64 = Complex<f64>;

/// Default relative level below which a window is treated as numerically zero
/// when computing effective supports.
pub const SUPPORT_TOL: f64 = 1e-18;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// One modulation `a_k e^{2πi b_k t}` of the numerator `P`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CauchyTerm {
    pub amplitude: C64,
    pub frequency: f64,
}

impl CauchyTerm {
    pub fn new(amplitude: C64, frequency: f64) -> Self {
        Self {
            amplitude,
            frequency,
        }
    }

    pub fn real(amplitude: f64, frequency: f64) -> Self {
        Self::new(C64::new(amplitude, 0.0), frequency)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WindowSpec {
    /// `(Σ_k a_k e^{2πi b_k t}) / (t - iw)` with `a_0 = 1`, `b_0 = 0`.
    CauchyModSum { w: f64, terms: Vec<CauchyTerm> },
    /// `(1 - e^{2πwb} e^{2πibt}) / (t - iw)`, the sinc `sin πb(t-iw) / (t-iw)`
    /// up to a fixed modulation and constant.
    ShiftedSinc { b: f64, w: f64 },
    /// `e^{-π (t/width)^2}`; only used as a reference window.
    Gaussian { width: f64 },
}

impl WindowSpec {
    pub fn cauchy_mod_sum(w: f64, terms: Vec<CauchyTerm>) -> Result<Self> {
        let spec = WindowSpec::CauchyModSum { w, terms };
        spec.validate()?;
        Ok(spec)
    }

    /// Single Cauchy kernel `1 / (t - iw)`.
    pub fn cauchy(w: f64) -> Result<Self> {
        Self::cauchy_mod_sum(w, vec![CauchyTerm::real(1.0, 0.0)])
    }

    pub fn shifted_sinc(b: f64, w: f64) -> Result<Self> {
        let spec = WindowSpec::ShiftedSinc { b, w };
        spec.validate()?;
        Ok(spec)
    }

    pub fn gaussian(width: f64) -> Result<Self> {
        let spec = WindowSpec::Gaussian { width };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WindowSpec::CauchyModSum { w, terms } => {
                if !(w.is_finite() && *w < 0.0) {
                    return Err(invalid("w", format!("must be negative, got {w}")));
                }
                let first = terms
                    .first()
                    .ok_or_else(|| invalid("term", "at least one term is required"))?;
                if (first.amplitude - C64::new(1.0, 0.0)).norm() > 1e-12 {
                    return Err(invalid("term[0]", "leading amplitude a_0 must be 1"));
                }
                if first.frequency != 0.0 {
                    return Err(invalid("term[0]", "leading frequency b_0 must be 0"));
                }
                for (k, pair) in terms.windows(2).enumerate() {
                    if !(pair[1].frequency > pair[0].frequency) {
                        return Err(invalid(
                            "term",
                            format!(
                                "frequencies must be strictly increasing (term[{}] = {} after {})",
                                k + 1,
                                pair[1].frequency,
                                pair[0].frequency
                            ),
                        ));
                    }
                }
                for t in terms {
                    if !(t.amplitude.re.is_finite()
                        && t.amplitude.im.is_finite()
                        && t.frequency.is_finite())
                    {
                        return Err(invalid("term", "non-finite value"));
                    }
                }
                Ok(())
            }
            WindowSpec::ShiftedSinc { b, w } => {
                if !(b.is_finite() && *b > 0.0) {
                    return Err(invalid("b", format!("must be positive, got {b}")));
                }
                if !(w.is_finite() && *w < 0.0) {
                    return Err(invalid("w", format!("must be negative, got {w}")));
                }
                Ok(())
            }
            WindowSpec::Gaussian { width } => {
                if !(width.is_finite() && *width > 0.0) {
                    return Err(invalid("width", format!("must be positive, got {width}")));
                }
                Ok(())
            }
        }
    }

    /// Imaginary shift `w` of the pole, if the window has one.
    pub fn pole_shift(&self) -> Option<f64> {
        match self {
            WindowSpec::CauchyModSum { w, .. } | WindowSpec::ShiftedSinc { w, .. } => Some(*w),
            WindowSpec::Gaussian { .. } => None,
        }
    }

    /// The window as `P(t)/(t - iw)`: the sinc expands into two terms.
    pub fn cauchy_terms(&self) -> Option<(f64, Vec<CauchyTerm>)> {
        match self {
            WindowSpec::CauchyModSum { w, terms } => Some((*w, terms.clone())),
            WindowSpec::ShiftedSinc { b, w } => Some((
                *w,
                vec![
                    CauchyTerm::real(1.0, 0.0),
                    CauchyTerm::real(-(2.0 * PI * w * b).exp(), *b),
                ],
            )),
            WindowSpec::Gaussian { .. } => None,
        }
    }

    /// `g(t)` at a complex argument.
    pub fn eval(&self, t: C64) -> Result<C64> {
        match self {
            WindowSpec::Gaussian { width } => {
                let u = t / *width;
                Ok((-PI * u * u).exp())
            }
            _ => {
                let (w, terms) = self.cauchy_terms().expect("cauchy-type window");
                let denom = t - I * w;
                if denom.norm() < 1e-12 * w.abs().max(1.0) {
                    return Err(Error::Pole { re: t.re, im: t.im });
                }
                let numer: C64 = terms
                    .iter()
                    .map(|term| term.amplitude * (2.0 * PI * I * term.frequency * t).exp())
                    .sum();
                Ok(numer / denom)
            }
        }
    }

    /// `g(t)` on the real line, where the pole can never be hit.
    pub fn eval_real(&self, t: f64) -> C64 {
        match self {
            WindowSpec::Gaussian { width } => C64::new((-PI * (t / width).powi(2)).exp(), 0.0),
            WindowSpec::ShiftedSinc { b, w } => {
                let numer = C64::new(1.0, 0.0) - (2.0 * PI * w * b).exp() * C64::cis(2.0 * PI * b * t);
                numer / C64::new(t, -w)
            }
            WindowSpec::CauchyModSum { w, terms } => {
                let numer: C64 = terms
                    .iter()
                    .map(|term| term.amplitude * C64::cis(2.0 * PI * term.frequency * t))
                    .sum();
                numer / C64::new(t, -w)
            }
        }
    }

    /// Closed-form `ĝ(ξ)`. At a jump of the spectrum the midpoint value is returned.
    pub fn fourier(&self, xi: f64) -> C64 {
        match self {
            WindowSpec::Gaussian { width } => {
                C64::new(width * (-PI * (width * xi).powi(2)).exp(), 0.0)
            }
            WindowSpec::ShiftedSinc { b, w } => {
                let weight = step(xi) - step(xi - b);
                if weight == 0.0 {
                    return C64::new(0.0, 0.0);
                }
                -2.0 * PI * I * weight * (2.0 * PI * w * xi).exp()
            }
            WindowSpec::CauchyModSum { .. } => {
                let (w, terms) = self.cauchy_terms().expect("cauchy-type window");
                let mut acc = C64::new(0.0, 0.0);
                for term in &terms {
                    let weight = step(xi - term.frequency);
                    if weight > 0.0 {
                        acc += term.amplitude * weight * (2.0 * PI * w * (xi - term.frequency)).exp();
                    }
                }
                -2.0 * PI * I * acc
            }
        }
    }

    /// `Σ_{k≥1} |a_k| e^{2π|w| b_k}`; the frame set is `{αβ ≤ 1}` when this is below one.
    pub fn hypothesis_margin(&self) -> Option<f64> {
        let (w, terms) = self.cauchy_terms()?;
        Some(
            terms
                .iter()
                .skip(1)
                .map(|t| t.amplitude.norm() * (2.0 * PI * w.abs() * t.frequency).exp())
                .sum(),
        )
    }

    /// Dilation `t ↦ g(t/β)`, returned as `amplitude · spec'(t)` together with
    /// the lattice map `(α, β) ↦ (αβ, 1)`.
    pub fn rescale(&self, beta: f64) -> Result<Rescaled> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(invalid("beta", format!("must be positive, got {beta}")));
        }
        let (spec, amplitude) = match self {
            WindowSpec::CauchyModSum { w, terms } => (
                WindowSpec::CauchyModSum {
                    w: beta * w,
                    terms: terms
                        .iter()
                        .map(|t| CauchyTerm::new(t.amplitude, t.frequency / beta))
                        .collect(),
                },
                beta,
            ),
            WindowSpec::ShiftedSinc { b, w } => (
                WindowSpec::ShiftedSinc {
                    b: b / beta,
                    w: beta * w,
                },
                beta,
            ),
            WindowSpec::Gaussian { width } => (WindowSpec::Gaussian { width: width * beta }, 1.0),
        };
        Ok(Rescaled {
            spec,
            amplitude,
            lattice_map: LatticeMap { beta },
        })
    }

    /// Largest spectral frequency for band-limited windows (the sinc).
    pub fn bandwidth(&self) -> Option<f64> {
        match self {
            WindowSpec::ShiftedSinc { b, .. } => Some(*b),
            _ => None,
        }
    }
}

/// Heaviside step with the midpoint convention at zero.
fn step(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x == 0.0 {
        0.5
    } else {
        0.0
    }
}

pub fn window_eval(spec: &WindowSpec, t: C64) -> Result<C64> {
    spec.eval(t)
}

pub fn window_fourier(spec: &WindowSpec, xi: f64) -> C64 {
    spec.fourier(xi)
}

pub fn hypothesis_margin(spec: &WindowSpec) -> Option<f64> {
    spec.hypothesis_margin()
}

pub fn rescale_window(spec: &WindowSpec, beta: f64) -> Result<Rescaled> {
    spec.rescale(beta)
}

/// `sin(πb(t - iw)) / (t - iw)`, the symmetric form of the shifted sinc.
///
/// It equals `(i/2) e^{-πbw} e^{-iπbt}` times the canonical [`WindowSpec::ShiftedSinc`]
/// window, so both share one frame set.
pub fn symmetric_sinc(b: f64, w: f64, t: C64) -> Result<C64> {
    let z = t - I * w;
    if z.norm() < 1e-12 * w.abs().max(1.0) {
        return Err(Error::Pole { re: t.re, im: t.im });
    }
    Ok((PI * b * z).sin() / z)
}

/// The modulation factor linking [`symmetric_sinc`] to the canonical sinc.
pub fn symmetric_sinc_factor(b: f64, w: f64, t: f64) -> C64 {
    0.5 * I * (-PI * b * w).exp() * C64::cis(-PI * b * t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub alpha: f64,
    pub beta: f64,
}

impl Lattice {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(invalid("alpha", format!("must be positive, got {alpha}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(invalid("beta", format!("must be positive, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn density(&self) -> f64 {
        self.alpha * self.beta
    }
}

/// `(α, β) ↦ (αβ, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeMap {
    pub beta: f64,
}

impl LatticeMap {
    pub fn apply(&self, lattice: Lattice) -> Lattice {
        Lattice {
            alpha: lattice.alpha * self.beta,
            beta: lattice.beta / self.beta,
        }
    }
}

/// Result of [`rescale_window`]: `g(t/β) = amplitude · spec(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rescaled {
    pub spec: WindowSpec,
    pub amplitude: f64,
    pub lattice_map: LatticeMap,
}

/// Anything that can be used as a window by the frame-bound estimators.
pub trait Window: Sync {
    fn value(&self, t: f64) -> C64;
    fn spectrum(&self, xi: f64) -> C64;
    /// Interval outside which `|g|` is below `tol` times its peak, if finite.
    fn time_support(&self, tol: f64) -> Option<(f64, f64)>;
    /// Same for `|ĝ|`.
    fn frequency_support(&self, tol: f64) -> Option<(f64, f64)>;
}

impl Window for WindowSpec {
    fn value(&self, t: f64) -> C64 {
        self.eval_real(t)
    }

    fn spectrum(&self, xi: f64) -> C64 {
        self.fourier(xi)
    }

    fn time_support(&self, tol: f64) -> Option<(f64, f64)> {
        match self {
            WindowSpec::Gaussian { width } => {
                let r = width * ((1.0 / tol).ln() / PI).sqrt();
                Some((-r, r))
            }
            _ => None,
        }
    }

    fn frequency_support(&self, tol: f64) -> Option<(f64, f64)> {
        match self {
            WindowSpec::Gaussian { width } => {
                let r = ((1.0 / tol).ln() / PI).sqrt() / width;
                Some((-r, r))
            }
            WindowSpec::ShiftedSinc { b, .. } => Some((0.0, *b)),
            WindowSpec::CauchyModSum { w, terms } => {
                let mass: f64 = terms
                    .iter()
                    .map(|t| t.amplitude.norm() * (2.0 * PI * w.abs() * t.frequency).exp())
                    .sum();
                let last = terms.last().map(|t| t.frequency).unwrap_or(0.0);
                let hi = (mass / tol).ln() / (2.0 * PI * w.abs());
                Some((0.0, hi.max(last)))
            }
        }
    }
}

/// The Fourier transform `ĝ` viewed as a window; `G(g; α, β)` is a frame
/// exactly when `G(ĝ; β, α)` is.
#[derive(Debug, Clone, Copy)]
pub struct FourierDual<'a, W: Window + ?Sized>(pub &'a W);

impl<W: Window + ?Sized> Window for FourierDual<'_, W> {
    fn value(&self, t: f64) -> C64 {
        self.0.spectrum(t)
    }

    fn spectrum(&self, xi: f64) -> C64 {
        self.0.value(-xi)
    }

    fn time_support(&self, tol: f64) -> Option<(f64, f64)> {
        self.0.frequency_support(tol)
    }

    fn frequency_support(&self, tol: f64) -> Option<(f64, f64)> {
        self.0.time_support(tol).map(|(lo, hi)| (-hi, -lo))
    }
}
