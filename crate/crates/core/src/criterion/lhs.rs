//! Direct evaluation of `Σ_m ∫₀^{1/α} |Σ_k a_k A_k G(t + m + b_k)|² dt`.

use crate::criterion::matrix::{cauchy_parts, reduce_shift};
use crate::criterion::segment::{apply_ak, CircularSegment};
use crate::error::{invalid, Error, Result};
use crate::sampled::{grid_steps, SampledFunction};
use crate::window::{WindowSpec, C64};

/// Range of `m` in the outer sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LhsTruncation {
    pub m_min: i64,
    pub m_max: i64,
}

impl LhsTruncation {
    /// Smallest range that sees every nonzero sample of `g`.
    pub fn covering(g: &SampledFunction, spec: &WindowSpec, alpha: f64) -> Result<Self> {
        let (lo, hi) = support(g).unwrap_or((0.0, 0.0));
        let reach = reach(spec, alpha)?;
        // row (m, t) reads G on [m, m + 1/α + reach)
        Ok(Self {
            m_min: (lo - reach - 1.0 / alpha).floor() as i64,
            m_max: hi.floor() as i64,
        })
    }
}

/// Largest forward offset `(l + 1)/α` at which a row reads `G`.
fn reach(spec: &WindowSpec, alpha: f64) -> Result<f64> {
    let (_, terms) = cauchy_parts(spec)?;
    let l_max = terms
        .iter()
        .map(|t| reduce_shift(t.frequency, alpha).l)
        .max()
        .unwrap_or(0);
    Ok((l_max + 1) as f64 / alpha)
}

fn support(g: &SampledFunction) -> Option<(f64, f64)> {
    let first = g.samples.iter().position(|z| z.norm() > 0.0)?;
    let last = g.samples.iter().rposition(|z| z.norm() > 0.0)?;
    Some((g.time(first), g.time(last)))
}

/// The criterion integral for a window normalised to `β = 1`.
///
/// `G` must live on a grid with `1/dt` an integer, the origin and every `b_k` on the
/// grid, and `1/α` a multiple of `dt`. Each `G(· + m + b_k)` restricted to `[0, 1/α)`
/// is a [`CircularSegment`]; the `t` integral is the rectangle rule on that segment.
pub fn criterion_lhs(
    g: &SampledFunction,
    spec: &WindowSpec,
    alpha: f64,
    trunc: LhsTruncation,
) -> Result<f64> {
    let (w, terms) = cauchy_parts(spec)?;
    if !(alpha > 0.0) {
        return Err(invalid("alpha", format!("must be positive, got {alpha}")));
    }
    let dt = g.dt;
    let p = 1.0 / alpha;
    let n = grid_steps(p, dt)? as usize;
    grid_steps(1.0, dt)?;
    grid_steps(g.t0, dt)?;
    for t in &terms {
        grid_steps(t.frequency, dt)?;
    }
    if let Some((lo, hi)) = support(g) {
        let need = LhsTruncation::covering(g, spec, alpha)?;
        if trunc.m_min > need.m_min || trunc.m_max < need.m_max {
            return Err(Error::SupportExceeded(format!(
                "support [{lo}, {hi}] needs m in [{}, {}], got [{}, {}]",
                need.m_min, need.m_max, trunc.m_min, trunc.m_max
            )));
        }
    } else {
        return Ok(0.0);
    }

    let reduced: Vec<_> = terms
        .iter()
        .map(|t| (t.amplitude, t.frequency, reduce_shift(t.frequency, alpha)))
        .collect();
    let mut total = 0.0;
    for m in trunc.m_min..=trunc.m_max {
        let mut acc = vec![C64::new(0.0, 0.0); n];
        for &(a, b_k, rs) in &reduced {
            let shift = m as f64 + b_k;
            let seg = CircularSegment::new(
                p,
                (0..n).map(|i| g.at_grid(i as f64 * dt + shift)).collect(),
            )?;
            let out = apply_ak(&seg, rs.b_star, w)?;
            for (s, v) in acc.iter_mut().zip(out.samples()) {
                *s += a * v;
            }
        }
        total += acc.iter().map(|z| z.norm_sqr()).sum::<f64>() * dt;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn bump(dt: f64) -> SampledFunction {
        SampledFunction::from_fn(-3.0, dt, (6.0 / dt) as usize + 1, |t| {
            if t.abs() < 2.5 {
                C64::new((1.0 - (t / 2.5).powi(2)).powi(3), 0.4 * t.sin())
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn pure_cauchy_unit_alpha_tiles() {
        let spec = WindowSpec::cauchy(-0.6).unwrap();
        let g = bump(0.01);
        let trunc = LhsTruncation::covering(&g, &spec, 1.0).unwrap();
        let lhs = criterion_lhs(&g, &spec, 1.0, trunc).unwrap();
        let energy: f64 = g.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * g.dt;
        assert!((lhs - energy).abs() <= 1e-12 * energy);
    }

    #[test]
    fn zero_function() {
        let spec = WindowSpec::shifted_sinc(1.0, -0.5).unwrap();
        let g = bump(0.01).scale(C64::new(0.0, 0.0));
        let trunc = LhsTruncation { m_min: -5, m_max: 5 };
        assert_eq!(criterion_lhs(&g, &spec, 0.5, trunc).unwrap(), 0.0);
    }

    #[test]
    fn narrow_truncation_is_rejected() {
        let spec = WindowSpec::cauchy(-1.0).unwrap();
        let g = bump(0.01);
        let trunc = LhsTruncation { m_min: 0, m_max: 1 };
        assert!(matches!(criterion_lhs(&g, &spec, 0.5, trunc), Err(Error::SupportExceeded(_))));
    }

    #[test]
    fn certificate_lower_bound_holds() {
        let spec = WindowSpec::cauchy_mod_sum(
            -0.1,
            vec![
                crate::window::CauchyTerm::real(1.0, 0.0),
                crate::window::CauchyTerm::real(0.5, 1.0),
            ],
        )
        .unwrap();
        let rho = spec.hypothesis_margin().unwrap();
        let g = bump(0.01).map(|t, z| z * C64::cis(2.0 * PI * 0.3 * t));
        for &alpha in &[0.5, 1.0] {
            let trunc = LhsTruncation::covering(&g, &spec, alpha).unwrap();
            let lhs = criterion_lhs(&g, &spec, alpha, trunc).unwrap();
            let energy: f64 = g.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * g.dt;
            assert!(lhs >= (1.0 - rho).powi(2) * energy);
        }
    }
}
