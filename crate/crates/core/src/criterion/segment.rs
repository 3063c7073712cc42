//! Sampled elements of `L²(0, p)` with `p = 1/α`, and the shift operators acting on them.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::sampled::grid_steps;
use crate::window::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct CircularSegment {
    period: f64,
    samples: Vec<C64>,
}

impl CircularSegment {
    pub fn new(period: f64, samples: Vec<C64>) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(invalid("period", format!("must be positive, got {period}")));
        }
        if samples.len() < 2 {
            return Err(invalid("samples", "at least two samples are required"));
        }
        Ok(Self { period, samples })
    }

    /// Samples `f` at `j p / n` for `j < n`.
    pub fn from_fn(period: f64, n: usize, f: impl Fn(f64) -> C64) -> Result<Self> {
        let h = period / n as f64;
        Self::new(period, (0..n).map(|j| f(j as f64 * h)).collect())
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn step(&self) -> f64 {
        self.period / self.samples.len() as f64
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Rectangle-rule `∫₀^p |f|²`, exact for trigonometric polynomials of low degree.
    pub fn norm_sq(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.step()
    }

    /// Pointwise multiplication `M_f`.
    pub fn multiply(&self, f: impl Fn(f64) -> C64) -> Self {
        let h = self.step();
        Self {
            period: self.period,
            samples: self
                .samples
                .iter()
                .enumerate()
                .map(|(j, &z)| f(j as f64 * h) * z)
                .collect(),
        }
    }

    fn shift_steps(&self, b: f64) -> Result<usize> {
        if !(b >= 0.0 && b < self.period) {
            return Err(invalid(
                "b",
                format!("shift must lie in [0, {}), got {b}", self.period),
            ));
        }
        let s = grid_steps(b, self.step())?;
        if s as usize >= self.len() {
            return Err(Error::Misaligned {
                shift: b,
                step: self.step(),
            });
        }
        Ok(s as usize)
    }
}

/// `L_b f(x) = f(x - b)` on `[b, p)` and `f(x - b + p)` on `[0, b)`.
pub fn circular_shift(seg: &CircularSegment, b: f64) -> Result<CircularSegment> {
    let s = seg.shift_steps(b)?;
    let n = seg.len();
    let samples = (0..n).map(|j| seg.samples[(j + n - s) % n]).collect();
    Ok(CircularSegment {
        period: seg.period,
        samples,
    })
}

/// `A f = M_{e^{-2πwt}} L_{b*} M_{e^{2πwt}} f`: the circular shift with the weight
/// `e^{-2πw b*}` where `t ≥ b*` and `e^{-2πw(b* - p)}` where `t < b*`.
///
/// The left end `t = b*` takes the upper branch so that `b* = 0` is the identity.
pub fn apply_ak(seg: &CircularSegment, b_star: f64, w: f64) -> Result<CircularSegment> {
    if !(w < 0.0) {
        return Err(invalid("w", format!("must be negative, got {w}")));
    }
    let s = seg.shift_steps(b_star)?;
    let n = seg.len();
    let upper = (-2.0 * PI * w * b_star).exp();
    let lower = (-2.0 * PI * w * (b_star - seg.period)).exp();
    let samples = (0..n)
        .map(|j| {
            if j >= s {
                upper * seg.samples[j - s]
            } else {
                lower * seg.samples[j + n - s]
            }
        })
        .collect();
    Ok(CircularSegment {
        period: seg.period,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_segment(period: f64, n: usize, seed: u64) -> CircularSegment {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        CircularSegment::new(
            period,
            (0..n)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn zero_shift_is_identity() {
        let seg = random_segment(2.0, 40, 1);
        assert_eq!(circular_shift(&seg, 0.0).unwrap(), seg);
        assert_eq!(apply_ak(&seg, 0.0, -0.7).unwrap(), seg);
    }

    #[test]
    fn half_period_twice_is_identity() {
        let alpha = 0.8;
        let seg = random_segment(1.0 / alpha, 64, 2);
        let half = 0.5 / alpha;
        let twice = circular_shift(&circular_shift(&seg, half).unwrap(), half).unwrap();
        assert_eq!(twice, seg);
    }

    #[test]
    fn indicator_moves_by_half_period() {
        let alpha = 0.5;
        let p = 1.0 / alpha;
        let n = 64;
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let seg = CircularSegment::from_fn(p, n, |x| if x < p / 4.0 { one } else { zero }).unwrap();
        let shifted = circular_shift(&seg, p / 2.0).unwrap();
        let expected =
            CircularSegment::from_fn(p, n, |x| if x >= p / 2.0 && x < 0.75 * p { one } else { zero })
                .unwrap();
        assert_eq!(shifted, expected);
    }

    #[test]
    fn factorization_matches_piecewise_form() {
        let alpha = 0.7;
        let p = 1.0 / alpha;
        let n = 70;
        let w = -0.4;
        let seg = random_segment(p, n, 3);
        let b = 23.0 * p / n as f64;
        let direct = apply_ak(&seg, b, w).unwrap();
        let factored = circular_shift(&seg.multiply(|t| C64::new((2.0 * PI * w * t).exp(), 0.0)), b)
            .unwrap()
            .multiply(|t| C64::new((-2.0 * PI * w * t).exp(), 0.0));
        for (a, c) in direct.samples().iter().zip(factored.samples()) {
            assert!((a - c).norm() <= 1e-10 * a.norm().max(1.0));
        }
    }

    #[test]
    fn range_and_alignment_errors() {
        let seg = random_segment(2.0, 20, 4);
        assert!(circular_shift(&seg, 2.0).is_err());
        assert!(circular_shift(&seg, -0.1).is_err());
        assert!(matches!(circular_shift(&seg, 0.05), Err(Error::Misaligned { .. })));
        assert!(apply_ak(&seg, 0.1, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn shift_is_unitary_and_composes(s1 in 0usize..48, s2 in 0usize..48, seed in 0u64..500) {
            let p = 1.5;
            let n = 48;
            let h = p / n as f64;
            let seg = random_segment(p, n, seed);
            let once = circular_shift(&seg, s1 as f64 * h).unwrap();
            prop_assert!((once.norm_sq() - seg.norm_sq()).abs() <= 1e-12 * seg.norm_sq());
            let composed = circular_shift(&once, s2 as f64 * h).unwrap();
            let direct = circular_shift(&seg, ((s1 + s2) % n) as f64 * h).unwrap();
            prop_assert_eq!(composed, direct);
        }

        #[test]
        fn ak_norm_bound(s in 0usize..30, w in -1.0f64..-0.01, seed in 0u64..500) {
            let alpha = 1.25;
            let p = 1.0 / alpha;
            let seg = random_segment(p, 30, seed);
            let out = apply_ak(&seg, s as f64 * p / 30.0, w).unwrap();
            let bound = (2.0 * PI * w.abs() / alpha).exp();
            prop_assert!(out.norm_sq().sqrt() <= bound * seg.norm_sq().sqrt() * (1.0 + 1e-12));
        }
    }
}
