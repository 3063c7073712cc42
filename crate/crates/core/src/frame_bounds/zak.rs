//! Zak transform `Zg(x, ξ) = Σ_k g(x + αk) e^{-2πiαkξ}` on `[0, α) × [0, 1/α)`, with
//! `Zg(x + α, ξ) = e^{2πiαξ} Zg(x, ξ)` and `Zg(x, ξ + 1/α) = Zg(x, ξ)`.

use std::f64::consts::PI;

use crate::window::{Window, WindowSpec, C64};

/// Direct sum over `|k| ≤ trunc`, adding `±k` in pairs from the tail inwards.
pub fn zak_transform(spec: &WindowSpec, alpha: f64, x: f64, xi: f64, trunc: u64) -> C64 {
    let term = |k: f64| spec.eval_real(x + alpha * k) * C64::cis(-2.0 * PI * alpha * k * xi);
    let mut acc = C64::new(0.0, 0.0);
    for k in (1..=trunc).rev() {
        let k = k as f64;
        acc += term(k) + term(-k);
    }
    acc + term(0.0)
}

/// Poisson-summed form `(1/α) Σ_j ĝ(ξ + j/α) e^{2πix(ξ + j/α)}`, fast when `ĝ` decays.
/// Returns the value and the magnitude of the first omitted term on either side.
pub fn zak_spectral(g: &impl Window, alpha: f64, x: f64, xi: f64, tol: f64) -> Option<(C64, f64)> {
    let (lo, hi) = g.frequency_support(tol)?;
    let j_min = ((lo - xi) * alpha).floor() as i64 - 1;
    let j_max = ((hi - xi) * alpha).ceil() as i64 + 1;
    let term = |j: i64| {
        let nu = xi + j as f64 / alpha;
        g.spectrum(nu) * C64::cis(2.0 * PI * x * nu) / alpha
    };
    let value = (j_min..=j_max).map(term).sum();
    let tail = term(j_min - 1).norm().max(term(j_max + 1).norm());
    Some((value, tail))
}

/// `|Zg|` samples on the `n × n` grid `(iα/n, j/(αn))`.
#[derive(Debug, Clone)]
pub struct ZakSamples {
    pub alpha: f64,
    pub n: usize,
    /// `values[i][j] = Zg(iα/n, j/(αn))`.
    pub values: Vec<Vec<C64>>,
    /// Largest tail estimate over the grid.
    pub tail: f64,
}

impl ZakSamples {
    pub fn min_abs(&self) -> f64 {
        self.values.iter().flatten().fold(f64::INFINITY, |m, z| m.min(z.norm()))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// Truncation of the direct sum for windows that decay in time.
const DIRECT_TRUNC: u64 = 64;

/// Evaluates `Zg` by whichever route converges fast for this window.
pub fn zak_value(spec: &WindowSpec, alpha: f64, x: f64, xi: f64, tol: f64) -> (C64, f64) {
    if let Some(hit) = zak_spectral(spec, alpha, x, xi, tol) {
        if spec.time_support(tol).is_none() {
            return hit;
        }
    }
    let value = zak_transform(spec, alpha, x, xi, DIRECT_TRUNC);
    let edge = alpha * (DIRECT_TRUNC + 1) as f64;
    let tail = spec.eval_real(x + edge).norm().max(spec.eval_real(x - edge).norm());
    (value, tail)
}

pub fn zak_samples(spec: &WindowSpec, alpha: f64, n: usize, tol: f64) -> ZakSamples {
    let mut tail: f64 = 0.0;
    let values = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let x = i as f64 * alpha / n as f64;
                    let xi = j as f64 / (alpha * n as f64);
                    let (z, t) = zak_value(spec, alpha, x, xi, tol);
                    tail = tail.max(t);
                    z
                })
                .collect()
        })
        .collect();
    ZakSamples { alpha, n, values, tail }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::CauchyTerm;

    #[test]
    fn gaussian_zero_at_the_centre() {
        for &alpha in &[1.0, 0.8, 1.5] {
            let g = WindowSpec::gaussian(1.0).unwrap();
            let z = zak_transform(&g, alpha, alpha / 2.0, 1.0 / (2.0 * alpha), 40);
            assert!(z.norm() < 1e-14, "{alpha}: {z}");
            assert!(zak_transform(&g, alpha, 0.1, 0.2, 40).norm() > 1e-2);
        }
    }

    #[test]
    fn routes_agree() {
        let spec = WindowSpec::cauchy_mod_sum(-0.4, vec![CauchyTerm::real(1.0, 0.0), CauchyTerm::real(0.3, 0.6)]).unwrap();
        let (x, xi) = (0.37, 0.21);
        let (spectral, tail) = zak_spectral(&spec, 1.0, x, xi, 1e-14).unwrap();
        assert!(tail < 1e-12);
        let direct = zak_transform(&spec, 1.0, x, xi, 200_000);
        assert!((spectral - direct).norm() < 1e-4, "{spectral} {direct}");
        let gauss = WindowSpec::gaussian(1.2).unwrap();
        let (s, _) = zak_spectral(&gauss, 0.9, x, xi, 1e-16).unwrap();
        assert!((s - zak_transform(&gauss, 0.9, x, xi, 30)).norm() < 1e-12);
    }

    #[test]
    fn quasi_periodic_seams() {
        let spec = WindowSpec::shifted_sinc(1.5, -0.6).unwrap();
        let alpha = 0.8;
        for &(x, xi) in &[(0.1, 0.3), (0.5, 0.9), (0.77, 0.05)] {
            let (z, _) = zak_value(&spec, alpha, x, xi, 1e-14);
            let (shift_x, _) = zak_value(&spec, alpha, x + alpha, xi, 1e-14);
            let (shift_xi, _) = zak_value(&spec, alpha, x, xi + 1.0 / alpha, 1e-14);
            assert!((shift_x - C64::cis(2.0 * PI * alpha * xi) * z).norm() < 1e-6);
            assert!((shift_xi - z).norm() < 1e-6);
        }
    }

    #[test]
    fn linear_in_window() {
        // Z[g + a e^{2πib·} g](x, ξ) = Zg(x, ξ) + a e^{2πibx} Zg(x, ξ - b)
        let (w, a, b, alpha) = (-0.5, C64::new(0.4, -0.3), 0.7, 1.1);
        let base = WindowSpec::cauchy(w).unwrap();
        let sum = WindowSpec::cauchy_mod_sum(w, vec![CauchyTerm::real(1.0, 0.0), CauchyTerm::new(a, b)]).unwrap();
        for &(x, xi) in &[(0.3, 0.45), (0.05, 0.8)] {
            let z = |s: &WindowSpec, xi: f64| zak_value(s, alpha, x, xi, 1e-15).0;
            let expected = z(&base, xi) + a * C64::cis(2.0 * PI * b * x) * z(&base, xi - b);
            assert!((z(&sum, xi) - expected).norm() < 1e-12);
        }
    }
}
