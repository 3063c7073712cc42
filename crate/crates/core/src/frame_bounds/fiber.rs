//! Fibre matrices of the frame operator. By the Walnut representation,
//! `Sf(x - j/β) = Σ_k M(x)_{jk} f(x - k/β)` with `M(x) = (1/β) P(x) P(x)ᴴ` and
//! `P(x)_{jn} = g(x - j/β - αn)`, so the optimal frame bounds are the extreme
//! eigenvalues of `M(x)` over `x ∈ [0, 1/β)`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::extreme_eigenvalues;
use crate::window::{FourierDual, Lattice, Window, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// Translates of `g` itself.
    Time,
    /// Translates of `ĝ` on the dual lattice `(β, α)`.
    Frequency,
}

/// The principal `(2K+1) × (2K+1)` section of `M(x)`.
#[derive(Debug, Clone)]
pub struct FiniteSection {
    pub side: Side,
    /// Lattice the fibre is taken for; the dual lattice on the frequency side.
    pub lattice: Lattice,
    pub point: f64,
    pub half_rows: usize,
    pub matrix: DMatrix<C64>,
}

impl FiniteSection {
    /// Largest deviation from Hermitian symmetry.
    pub fn asymmetry(&self) -> f64 {
        let m = &self.matrix;
        let mut worst: f64 = 0.0;
        for i in 0..m.nrows() {
            for j in 0..=i {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

/// Side on which the window decays fast enough to truncate the `n`-sum.
pub fn preferred_side<W: Window + ?Sized>(g: &W, tol: f64) -> Option<Side> {
    if g.time_support(tol).is_some() {
        Some(Side::Time)
    } else if g.frequency_support(tol).is_some() {
        Some(Side::Frequency)
    } else {
        None
    }
}

/// Section of the fibre at `point ∈ [0, 1/b)` for the window `h` on the lattice `(a, b)`.
pub fn fiber_section<W: Window + ?Sized>(
    h: &W,
    lattice: Lattice,
    point: f64,
    half_rows: usize,
    tol: f64,
) -> Result<DMatrix<C64>> {
    let (lo, hi) = h
        .time_support(tol)
        .ok_or_else(|| invalid("window", "no finite support at the requested tolerance"))?;
    let (a, b) = (lattice.alpha, lattice.beta);
    let k = half_rows as i64;
    let offset = |j: i64| point - j as f64 / b;
    let n_min = ((offset(k) - hi) / a).floor() as i64;
    let n_max = ((offset(-k) - lo) / a).ceil() as i64;
    let rows = 2 * half_rows + 1;
    // each row of P is a contiguous run of columns
    let runs: Vec<(i64, Vec<C64>)> = (-k..=k)
        .map(|j| {
            let base = offset(j);
            let first = ((base - hi) / a).floor().max(n_min as f64) as i64;
            let last = ((base - lo) / a).ceil().min(n_max as f64) as i64;
            let values = (first..=last)
                .map(|n| {
                    let s = base - a * n as f64;
                    if s >= lo && s <= hi {
                        h.value(s)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
                .collect();
            (first, values)
        })
        .collect();
    let mut m = DMatrix::<C64>::zeros(rows, rows);
    for r in 0..rows {
        for c in 0..=r {
            let (fr, vr) = &runs[r];
            let (fc, vc) = &runs[c];
            let start = (*fr).max(*fc);
            let end = (fr + vr.len() as i64).min(fc + vc.len() as i64);
            let mut acc = C64::new(0.0, 0.0);
            for n in start..end {
                acc += vr[(n - fr) as usize] * vc[(n - fc) as usize].conj();
            }
            acc /= b;
            m[(r, c)] = acc;
            m[(c, r)] = acc.conj();
        }
    }
    Ok(m)
}

/// Sections for `G(g; α, β)` on the chosen side.
pub fn finite_section<W: Window + ?Sized>(
    g: &W,
    lattice: Lattice,
    side: Side,
    point: f64,
    half_rows: usize,
    tol: f64,
) -> Result<FiniteSection> {
    let (matrix, fibre_lattice) = match side {
        Side::Time => (fiber_section(g, lattice, point, half_rows, tol)?, lattice),
        Side::Frequency => {
            let dual = Lattice::new(lattice.beta, lattice.alpha)?;
            (fiber_section(&FourierDual(g), dual, point, half_rows, tol)?, dual)
        }
    };
    Ok(FiniteSection {
        side,
        lattice: fibre_lattice,
        point,
        half_rows,
        matrix,
    })
}

/// Fibre points: `count` equispaced points of `[0, period)` shifted by a fixed irrational
/// fraction, so jumps of band-limited windows are not hit. Doubling `count` keeps the
/// previous points.
pub fn fiber_points(period: f64, count: usize) -> Vec<f64> {
    const OFFSET: f64 = 0.381_966_011_250_105_1 / 256.0;
    (0..count).map(|i| (OFFSET + i as f64 / count as f64) * period).collect()
}

/// `(λ_min, λ_max)` over the fibre points for one section size.
pub fn section_extremes<W: Window + ?Sized>(
    g: &W,
    lattice: Lattice,
    side: Side,
    half_rows: usize,
    points: usize,
    tol: f64,
) -> Result<(f64, f64)> {
    let period = match side {
        Side::Time => 1.0 / lattice.beta,
        Side::Frequency => 1.0 / lattice.alpha,
    };
    let extremes: Vec<(f64, f64)> = fiber_points(period, points)
        .into_par_iter()
        .map(|x| {
            let sec = finite_section(g, lattice, side, x, half_rows, tol)?;
            let ext = extreme_eigenvalues(&sec.matrix)?;
            Ok((ext.min, ext.max))
        })
        .collect::<Result<_>>()?;
    Ok(extremes
        .iter()
        .fold((f64::INFINITY, 0.0), |(lo, hi), &(a, b)| (lo.min(a), hi.max(b))))
}
