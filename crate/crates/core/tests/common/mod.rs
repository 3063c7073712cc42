//! Oracles shared by the integration tests. Nothing here calls the closed forms it is
//! used to check.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gabor_core::{SampledFunction, WindowSpec, C64};
use gauss_quad::GaussLegendre;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const HALF_WIDTH: f64 = 200.0;
const PANEL: f64 = 0.25;
const NODES: usize = 20;
const TAIL_TERMS: usize = 7;

/// `(w, [(a_k, b_k)])` with `g(t) = Σ a_k e^{2πi b_k t} / (t - iw)`, written out from
/// the window definitions.
pub fn pole_form(spec: &WindowSpec) -> (f64, Vec<(C64, f64)>) {
    match spec {
        WindowSpec::CauchyModSum { w, terms } => (*w, terms.iter().map(|t| (t.amplitude, t.frequency)).collect()),
        WindowSpec::ShiftedSinc { b, w } => (
            *w,
            vec![(C64::new(1.0, 0.0), 0.0), (C64::new(-(2.0 * PI * w * b).exp(), 0.0), *b)],
        ),
        WindowSpec::Gaussian { .. } => panic!("no pole form"),
    }
}

/// `∫_T^∞ e^{iλt} / (t - c) dt` by repeated integration by parts.
fn right_tail(lambda: f64, c: C64, t: f64) -> C64 {
    let il = C64::new(0.0, lambda);
    let d = C64::new(t, 0.0) - c;
    let mut fact = 1.0;
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..TAIL_TERMS {
        if j > 0 {
            fact *= j as f64;
        }
        acc += fact / (il * d).powu(j as u32 + 1);
    }
    -C64::cis(lambda * t) * acc
}

/// `ĝ(ξ) = ∫ g(t) e^{-2πiξt} dt`: composite Gauss–Legendre on `[-T, T]` plus the
/// asymptotic tails. Needs `ξ` away from every `b_k`.
pub fn fourier_by_quadrature(spec: &WindowSpec, xi: f64) -> C64 {
    let (w, terms) = pole_form(spec);
    for &(_, b) in &terms {
        assert!((xi - b).abs() >= 0.05, "xi = {xi} too close to the jump at {b}");
    }
    let rule = GaussLegendre::new(NonZeroUsize::new(NODES).unwrap());
    let panels = (2.0 * HALF_WIDTH / PANEL).round() as usize;
    let mut body = C64::new(0.0, 0.0);
    for p in 0..panels {
        let a = -HALF_WIDTH + p as f64 * PANEL;
        let mid = a + 0.5 * PANEL;
        for &(x, wt) in rule.as_node_weight_pairs() {
            let t = mid + 0.5 * PANEL * x;
            body += 0.5 * PANEL * wt * spec.eval_real(t) * C64::cis(-2.0 * PI * xi * t);
        }
    }
    let pole = C64::new(0.0, w);
    let tails: C64 = terms
        .iter()
        .map(|&(a, b)| {
            let lambda = 2.0 * PI * (b - xi);
            // ∫_{-∞}^{-T} e^{iλt}/(t - c) dt = -∫_T^∞ e^{-iλs}/(s + c) ds
            a * (right_tail(lambda, pole, HALF_WIDTH) - right_tail(-lambda, -pole, HALF_WIDTH))
        })
        .sum();
    body + tails
}

/// `(1/n) Σ_j x_j e^{-2πijk/n}`.
pub fn dft(x: &[C64]) -> Vec<C64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(j, &v)| v * C64::cis(-2.0 * PI * ((j * k) % n) as f64 / n as f64))
                .sum::<C64>()
                / n as f64
        })
        .collect()
}

/// Inverse of [`dft`].
pub fn idft(c: &[C64]) -> Vec<C64> {
    let n = c.len();
    (0..n)
        .map(|j| {
            c.iter()
                .enumerate()
                .map(|(k, &v)| v * C64::cis(2.0 * PI * ((j * k) % n) as f64 / n as f64))
                .sum()
        })
        .collect()
}

pub fn grid(half_width: f64, dt: f64, f: impl Fn(f64) -> C64) -> SampledFunction {
    SampledFunction::symmetric(half_width, dt, f)
}

/// A few complex Gaussian bumps with seeded centres, widths and amplitudes.
pub fn random_smooth(seed: u64, half_width: f64, dt: f64) -> SampledFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bumps: Vec<(C64, f64, f64)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            (
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(0.6..1.4),
            )
        })
        .collect();
    grid(half_width, dt, |t| {
        bumps
            .iter()
            .map(|&(a, c, s)| a * (-PI * ((t - c) / s).powi(2)).exp())
            .sum()
    })
}

/// Rectangle-rule `⟨f, g⟩ = ∫ f conj(g)` on a shared grid.
pub fn inner(f: &SampledFunction, g: &SampledFunction) -> C64 {
    assert_eq!(f.len(), g.len());
    f.samples
        .iter()
        .zip(&g.samples)
        .map(|(a, b)| a * b.conj())
        .sum::<C64>()
        * f.dt
}

pub fn norm(f: &SampledFunction) -> f64 {
    inner(f, f).re.sqrt()
}

/// `‖a - b‖ / ‖b‖` on a shared grid.
pub fn rel_l2(a: &SampledFunction, b: &SampledFunction) -> f64 {
    assert_eq!(a.len(), b.len());
    let diff: f64 = a.samples.iter().zip(&b.samples).map(|(x, y)| (x - y).norm_sqr()).sum();
    let base: f64 = b.samples.iter().map(|y| y.norm_sqr()).sum();
    (diff / base).sqrt()
}
