//! Uniformly sampled complex functions on the real line.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::window::C64;

/// Relative tolerance used when checking that a shift is a whole number of grid steps.
pub(crate) const ALIGN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub t0: f64,
    pub dt: f64,
    pub samples: Vec<C64>,
}

impl SampledFunction {
    pub fn new(t0: f64, dt: f64, samples: Vec<C64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(invalid("dt", format!("must be positive, got {dt}")));
        }
        if !t0.is_finite() {
            return Err(invalid("t0", "must be finite"));
        }
        if samples.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(invalid("samples", "non-finite sample"));
        }
        Ok(Self { t0, dt, samples })
    }

    /// Samples `f` at `t0 + i dt` for `i < n`.
    pub fn from_fn(t0: f64, dt: f64, n: usize, f: impl Fn(f64) -> C64) -> Self {
        let samples = (0..n).map(|i| f(t0 + i as f64 * dt)).collect();
        Self { t0, dt, samples }
    }

    /// Samples `f` on the grid `{k dt}` covering `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, dt: f64, f: impl Fn(f64) -> C64) -> Self {
        let k = (half_width / dt).round() as i64;
        Self::from_fn(-(k as f64) * dt, dt, (2 * k + 1) as usize, f)
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            t0: self.t0,
            dt: self.dt,
            samples: vec![C64::new(0.0, 0.0); self.samples.len()],
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.time(i))
    }

    /// Sample at the grid point `t`, or zero off the grid's range. `t` must lie on the grid.
    pub fn at_grid(&self, t: f64) -> C64 {
        let idx = ((t - self.t0) / self.dt).round();
        if idx < 0.0 || idx >= self.len() as f64 {
            C64::new(0.0, 0.0)
        } else {
            self.samples[idx as usize]
        }
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.len() == other.len()
            && (self.dt - other.dt).abs() <= 1e-12 * self.dt
            && (self.t0 - other.t0).abs() <= ALIGN_TOL * self.dt
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "({}, {}, {}) vs ({}, {}, {})",
                self.t0,
                self.dt,
                self.len(),
                other.t0,
                other.dt,
                other.len()
            )))
        }
    }

    /// Pointwise map keeping the grid.
    pub fn map(&self, f: impl Fn(f64, C64) -> C64) -> Self {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, &z)| f(self.time(i), z))
            .collect();
        Self {
            t0: self.t0,
            dt: self.dt,
            samples,
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|_, z| c * z)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            t0: self.t0,
            dt: self.dt,
            samples,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn norm_sq(&self) -> f64 {
        trapezoid(self.dt, self.samples.iter().map(|z| z.norm_sqr()))
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Trapezoidal `∫ f(t) e^{-2πitξ} dt` over the grid.
    pub fn fourier_at(&self, xi: f64) -> C64 {
        let n = self.len();
        let mut acc = C64::new(0.0, 0.0);
        for (i, z) in self.samples.iter().enumerate() {
            let weight = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
            acc += weight * z * C64::cis(-2.0 * PI * self.time(i) * xi);
        }
        acc * self.dt
    }
}

fn trapezoid(dt: f64, values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len();
    let mut acc = 0.0;
    for (i, v) in values.enumerate() {
        acc += if i == 0 || i + 1 == n { 0.5 * v } else { v };
    }
    acc * dt
}

/// Number of grid steps in `x`, failing unless `x` is a whole multiple of `dt`.
pub(crate) fn grid_steps(x: f64, dt: f64) -> Result<i64> {
    let q = x / dt;
    let k = q.round();
    if (q - k).abs() > ALIGN_TOL * q.abs().max(1.0) {
        return Err(Error::Misaligned { shift: x, step: dt });
    }
    Ok(k as i64)
}

/// `π_{x,ω} f (t) = e^{2πiωt} f(t - x)`. The grid moves with `f`, so `x` must be grid-aligned.
pub fn tf_shift(f: &SampledFunction, x: f64, omega: f64) -> Result<SampledFunction> {
    let k = grid_steps(x, f.dt)?;
    let t0 = f.t0 + k as f64 * f.dt;
    let samples = f
        .samples
        .iter()
        .enumerate()
        .map(|(i, &z)| C64::cis(2.0 * PI * omega * (t0 + i as f64 * f.dt)) * z)
        .collect();
    Ok(SampledFunction {
        t0,
        dt: f.dt,
        samples,
    })
}

/// Trapezoidal `∫ f conj(g)`.
pub fn inner_product(f: &SampledFunction, g: &SampledFunction) -> Result<C64> {
    f.check_grid(g)?;
    let n = f.len();
    let mut acc = C64::new(0.0, 0.0);
    for (i, (a, b)) in f.samples.iter().zip(&g.samples).enumerate() {
        let weight = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
        acc += weight * a * b.conj();
    }
    Ok(acc * f.dt)
}
