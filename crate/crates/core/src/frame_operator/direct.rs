//! Brute-force `Σ_{|m|≤M, |n|≤N} (f, g_{m,n}) g_{m,n}` on the grid of `f`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::sampled::SampledFunction;
use crate::window::{Lattice, WindowSpec, C64};

/// Warn when a boundary coefficient exceeds this fraction of the largest one.
const WARN_RATIO: f64 = 1e-6;
/// Translations handled per parallel task.
const CHUNK: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectTruncation {
    /// Modulations `|m| ≤ max_modulation`.
    pub max_modulation: u64,
    /// Translations `|n| ≤ max_shift`.
    pub max_shift: u64,
}

#[derive(Debug, Clone)]
pub struct DirectOutput {
    pub output: SampledFunction,
    pub truncation: DirectTruncation,
    pub warnings: Vec<String>,
}

struct Contribution {
    values: Vec<C64>,
    max_coef: f64,
    edge_m: f64,
}

/// Truncated frame operator applied to `f`.
pub fn frame_operator_direct(
    spec: &WindowSpec,
    lattice: Lattice,
    f: &SampledFunction,
    trunc: DirectTruncation,
) -> Result<DirectOutput> {
    let mut out = frame_operator_direct_nested(spec, lattice, f, trunc.max_modulation, &[trunc.max_shift])?;
    Ok(out.remove(0))
}

/// Partial sums for several translation cut-offs in one pass. Terms are added in order
/// of increasing `|n|`, so each result equals a separate call with that cut-off.
pub fn frame_operator_direct_nested(
    spec: &WindowSpec,
    lattice: Lattice,
    f: &SampledFunction,
    max_modulation: u64,
    shifts: &[u64],
) -> Result<Vec<DirectOutput>> {
    spec.validate()?;
    if shifts.is_empty() || shifts.windows(2).any(|p| p[0] >= p[1]) {
        return Err(invalid("shifts", "must be non-empty and strictly increasing"));
    }
    let (alpha, beta) = (lattice.alpha, lattice.beta);
    let len = f.len();
    let times: Vec<f64> = f.times().collect();
    let weights: Vec<f64> = (0..len)
        .map(|i| if i == 0 || i + 1 == len { 0.5 * f.dt } else { f.dt })
        .collect();
    let m_max = max_modulation as i64;
    let modes: Vec<i64> = (-m_max..=m_max).collect();
    // e^{2πiβmt_i}, row per mode
    let phases: Vec<Vec<C64>> = modes
        .iter()
        .map(|&m| times.iter().map(|&t| C64::cis(2.0 * PI * beta * m as f64 * t)).collect())
        .collect();

    let contribution = |n: i64| -> Contribution {
        let atom: Vec<C64> = times.iter().map(|&t| spec.eval_real(t - alpha * n as f64)).collect();
        let u: Vec<C64> = (0..len).map(|i| f.samples[i] * atom[i].conj() * weights[i]).collect();
        let mut band = vec![C64::new(0.0, 0.0); len];
        let mut max_coef: f64 = 0.0;
        let mut edge_m: f64 = 0.0;
        for (row, &m) in phases.iter().zip(&modes) {
            let c: C64 = u.iter().zip(row).map(|(a, e)| a * e.conj()).sum();
            max_coef = max_coef.max(c.norm());
            if m.abs() == m_max {
                edge_m = edge_m.max(c.norm());
            }
            for (b, e) in band.iter_mut().zip(row) {
                *b += c * e;
            }
        }
        let values = band.iter().zip(&atom).map(|(b, g)| b * g).collect();
        Contribution { values, max_coef, edge_m }
    };

    let mut outputs = Vec::with_capacity(shifts.len());
    let mut acc = vec![C64::new(0.0, 0.0); len];
    let mut max_coef: f64 = 0.0;
    let mut edge_m: f64 = 0.0;
    let mut lo: i64 = 0;
    for &shift in shifts {
        let hi = shift as i64;
        // 0, 1, -1, 2, -2, ... within this band
        let order: Vec<i64> = (lo..=hi)
            .flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
            .collect();
        let parts: Vec<(Vec<C64>, f64, f64, f64)> = order
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut sum = vec![C64::new(0.0, 0.0); len];
                let (mut mc, mut em, mut en) = (0.0f64, 0.0f64, 0.0f64);
                for &n in chunk {
                    let c = contribution(n);
                    for (s, v) in sum.iter_mut().zip(&c.values) {
                        *s += v;
                    }
                    mc = mc.max(c.max_coef);
                    em = em.max(c.edge_m);
                    if n.abs() == hi {
                        en = en.max(c.max_coef);
                    }
                }
                (sum, mc, em, en)
            })
            .collect();
        let mut edge_n: f64 = 0.0;
        for (sum, mc, em, en) in parts {
            for (a, v) in acc.iter_mut().zip(&sum) {
                *a += v;
            }
            max_coef = max_coef.max(mc);
            edge_m = edge_m.max(em);
            edge_n = edge_n.max(en);
        }
        let mut warnings = Vec::new();
        if edge_n > WARN_RATIO * max_coef {
            warnings.push(format!(
                "coefficients at |n| = {hi} reach {:.3e} of the maximum",
                edge_n / max_coef
            ));
        }
        if edge_m > WARN_RATIO * max_coef {
            warnings.push(format!(
                "coefficients at |m| = {m_max} reach {:.3e} of the maximum",
                edge_m / max_coef
            ));
        }
        outputs.push(DirectOutput {
            output: SampledFunction {
                t0: f.t0,
                dt: f.dt,
                samples: acc.clone(),
            },
            truncation: DirectTruncation {
                max_modulation,
                max_shift: shift,
            },
            warnings,
        });
        lo = hi + 1;
    }
    Ok(outputs)
}
