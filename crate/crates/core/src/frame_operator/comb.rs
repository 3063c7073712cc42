//! Convolution with `φ(s) Σ_m e^{2πimβs}`, realised through the Dirac comb
//! `Σ_m e^{2πimβs} = (1/β) Σ_j δ(s - j/β)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::sampled::{grid_steps, SampledFunction};
use crate::window::C64;

/// Samples below this fraction of the peak of `f` are skipped.
const NEGLIGIBLE: f64 = 1e-12;

type Envelope = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

#[derive(Clone)]
pub struct CombKernel {
    pub beta: f64,
    pub phi: Envelope,
}

impl CombKernel {
    pub fn new(beta: f64, phi: impl Fn(f64) -> C64 + Send + Sync + 'static) -> Self {
        Self {
            beta,
            phi: Arc::new(phi),
        }
    }
}

impl fmt::Debug for CombKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CombKernel").field("beta", &self.beta).finish_non_exhaustive()
    }
}

/// `x ↦ (1/β) Σ_j f(x - j/β) φ(j/β)` on the grid of `f`; `1/β` must be grid-aligned.
pub fn comb_convolve(f: &SampledFunction, kernel: &CombKernel) -> Result<SampledFunction> {
    comb_apply(f, kernel.beta, |s| (kernel.phi)(s))
}

pub(crate) fn comb_apply(f: &SampledFunction, beta: f64, phi: impl Fn(f64) -> C64) -> Result<SampledFunction> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid("beta", format!("must be positive, got {beta}")));
    }
    let stride = grid_steps(1.0 / beta, f.dt)?;
    if stride <= 0 {
        return Err(invalid("beta", "comb spacing is below the grid step"));
    }
    let stride = stride as usize;
    let n = f.len();
    let peak = f.max_abs();
    let mut out = f.zeros_like();
    if peak == 0.0 {
        return Ok(out);
    }
    let live: Vec<usize> = (0..n).filter(|&i| f.samples[i].norm() >= NEGLIGIBLE * peak).collect();
    let j_max = (n / stride + 1) as i64;
    for j in -j_max..=j_max {
        let weight = phi(j as f64 / beta) / beta;
        let offset = j * stride as i64;
        // out[i] += f[i - offset] φ(j/β) / β
        for &src in &live {
            let dst = src as i64 + offset;
            if dst >= 0 && (dst as usize) < n {
                out.samples[dst as usize] += f.samples[src] * weight;
            }
        }
    }
    Ok(out)
}

/// `post(x) · comb(pre · f, φ)(x)`.
pub(crate) fn comb_block(
    f: &SampledFunction,
    beta: f64,
    pre: impl Fn(f64) -> C64,
    phi: impl Fn(f64) -> C64,
    post: impl Fn(f64) -> C64,
) -> Result<SampledFunction> {
    let weighted = f.map(|t, z| pre(t) * z);
    Ok(comb_apply(&weighted, beta, phi)?.map(|x, z| post(x) * z))
}
