//! The criterion matrices coupling the values `x_c = G(ξ + c/α)` of a test function.
//!
//! A row is a pair `(m, t)` with `t + m = ξ + j/α`; `j` is the row's group. Term `k`
//! of the window puts `a_k e^{-2πw b*}` in column `j + l` when `t ≥ b*` and
//! `a_k e^{-2πw(b* - 1/α)}` in column `j + l + 1` otherwise, where `b_k = b* + l/α`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::window::{CauchyTerm, WindowSpec, C64};

const SNAP: f64 = 1e-9;
const ZERO_ENTRY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedShift {
    pub b_star: f64,
    pub l: u64,
}

/// Splits `b_k = b* + l/α` with `0 ≤ b* < 1/α`. Multiples of `1/α` within a relative
/// `1e-9` snap to `b* = 0`.
pub fn reduce_shift(b_k: f64, alpha: f64) -> ReducedShift {
    let p = 1.0 / alpha;
    let q = b_k * alpha;
    let l = (q + SNAP).floor().max(0.0);
    let b_star = (b_k - l * p).max(0.0);
    let b_star = if b_star < SNAP * p { 0.0 } else { b_star };
    ReducedShift {
        b_star,
        l: l as u64,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Every `t ∈ [0, 1/α)`: one row per integer `m`.
    Full,
    /// Only `t ∈ [0, 1)`: one row per group.
    Restricted,
}

/// Principal section: columns and row groups `col_min..=col_max`. Entries of retained
/// rows that fall outside the column range are clipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub col_min: i64,
    pub col_max: i64,
}

impl Truncation {
    pub fn new(col_min: i64, col_max: i64) -> Result<Self> {
        if col_max < col_min {
            return Err(invalid("trunc", "empty column range"));
        }
        Ok(Self { col_min, col_max })
    }

    /// `size` columns centred on zero.
    pub fn centered(size: usize) -> Self {
        let size = size.max(1) as i64;
        let col_min = -(size / 2);
        Self {
            col_min,
            col_max: col_min + size - 1,
        }
    }

    pub fn width(&self) -> usize {
        (self.col_max - self.col_min + 1) as usize
    }

    fn contains(&self, c: i64) -> bool {
        (self.col_min..=self.col_max).contains(&c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub m: i64,
    pub t: f64,
    pub group: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionMatrix {
    pub xi: f64,
    pub alpha: f64,
    pub variant: Variant,
    pub cols: Truncation,
    pub rows: Vec<MatrixRow>,
    /// Per-row sparse entries keyed by column.
    pub entries: Vec<BTreeMap<i64, C64>>,
}

impl CriterionMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.width()
    }

    pub fn get(&self, row: usize, col: i64) -> C64 {
        self.entries[row].get(&col).copied().unwrap_or_default()
    }

    pub fn nonzeros(&self, row: usize) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.entries[row]
            .iter()
            .filter(|(_, v)| v.norm() > ZERO_ENTRY)
            .map(|(&c, &v)| (c, v))
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(self.nrows(), self.ncols());
        for (r, row) in self.entries.iter().enumerate() {
            for (&c, &v) in row {
                out[(r, (c - self.cols.col_min) as usize)] = v;
            }
        }
        out
    }

    /// `Lᴴ L`, accumulated row by row.
    pub fn normal_matrix(&self) -> DMatrix<C64> {
        let n = self.ncols();
        let mut out = DMatrix::zeros(n, n);
        for row in &self.entries {
            let cells: Vec<(usize, C64)> = row
                .iter()
                .map(|(&c, &v)| ((c - self.cols.col_min) as usize, v))
                .collect();
            for &(i, vi) in &cells {
                for &(j, vj) in &cells {
                    out[(i, j)] += vi.conj() * vj;
                }
            }
        }
        out
    }

    /// `L x` for `x` indexed from `col_min`.
    pub fn apply(&self, x: &DVector<C64>) -> DVector<C64> {
        DVector::from_iterator(
            self.nrows(),
            self.entries.iter().map(|row| {
                row.iter()
                    .map(|(&c, &v)| v * x[(c - self.cols.col_min) as usize])
                    .sum::<C64>()
            }),
        )
    }

    /// Groups whose rows are all zero: the unknown `x_j` then has no pivot row.
    pub fn missing_pivot_groups(&self) -> Vec<i64> {
        let mut groups: BTreeMap<i64, bool> = BTreeMap::new();
        for (r, row) in self.rows.iter().enumerate() {
            let nonzero = self.nonzeros(r).next().is_some();
            *groups.entry(row.group).or_insert(false) |= nonzero;
        }
        groups
            .into_iter()
            .filter(|&(_, nonzero)| !nonzero)
            .map(|(g, _)| g)
            .collect()
    }

    /// Columns without any nonzero entry.
    pub fn zero_columns(&self) -> Vec<i64> {
        let mut seen = vec![false; self.ncols()];
        for r in 0..self.nrows() {
            for (c, _) in self.nonzeros(r) {
                seen[(c - self.cols.col_min) as usize] = true;
            }
        }
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| !s)
            .map(|(i, _)| self.cols.col_min + i as i64)
            .collect()
    }
}

pub(crate) fn cauchy_parts(spec: &WindowSpec) -> Result<(f64, Vec<CauchyTerm>)> {
    spec.cauchy_terms()
        .ok_or_else(|| invalid("spec", "criterion needs a window of the form P(t)/(t - iw)"))
}

/// Rows `(m, t)` of group `j`: `t = ξ + j p - m ∈ [0, p)`, optionally restricted to `t < 1`.
fn group_rows(xi: f64, p: f64, j: i64, variant: Variant) -> Vec<MatrixRow> {
    let u = xi + j as f64 * p;
    let hi = u.floor() as i64;
    let lo = match variant {
        Variant::Full => (u - p).floor() as i64 + 1,
        Variant::Restricted => hi,
    };
    (lo..=hi)
        .filter_map(|m| {
            let mut t = u - m as f64;
            if t.abs() < 1e-12 {
                t = 0.0;
            }
            (t >= 0.0 && t < p && (variant == Variant::Full || t < 1.0)).then_some(MatrixRow {
                m,
                t,
                group: j,
            })
        })
        .collect()
}

/// Builds `L_ξ` (Full) or `L'_ξ` (Restricted) for a window already normalised to `β = 1`.
pub fn build_criterion_matrix(
    spec: &WindowSpec,
    alpha: f64,
    xi: f64,
    trunc: Truncation,
    variant: Variant,
) -> Result<CriterionMatrix> {
    let (w, terms) = cauchy_parts(spec)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid("alpha", format!("must be positive, got {alpha}")));
    }
    let p = 1.0 / alpha;
    if !(xi > 0.0 && xi < p) {
        return Err(invalid("xi", format!("must lie in (0, {p}), got {xi}")));
    }
    let reduced: Vec<(C64, ReducedShift, f64)> = terms
        .iter()
        .map(|t| (t.amplitude, reduce_shift(t.frequency, alpha), t.frequency))
        .collect();

    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for j in trunc.col_min..=trunc.col_max {
        for row in group_rows(xi, p, j, variant) {
            let mut cells: BTreeMap<i64, C64> = BTreeMap::new();
            for &(a, rs, b_k) in &reduced {
                let upper = row.t >= rs.b_star || (rs.b_star - row.t).abs() < 1e-12;
                let (offset, weight) = if upper {
                    (0.0, (-2.0 * PI * w * rs.b_star).exp())
                } else {
                    (p, (-2.0 * PI * w * (rs.b_star - p)).exp())
                };
                let exact = alpha * (row.t + row.m as f64 + b_k - rs.b_star + offset - xi);
                let col = exact.round();
                if (exact - col).abs() > 10.0 * SNAP * exact.abs().max(1.0) {
                    return Err(Error::Precondition(format!(
                        "column index drifted: {exact} is not an integer"
                    )));
                }
                let col = col as i64;
                if trunc.contains(col) {
                    *cells.entry(col).or_default() += a * weight;
                }
            }
            rows.push(row);
            entries.push(cells);
        }
    }
    Ok(CriterionMatrix {
        xi,
        alpha,
        variant,
        cols: trunc,
        rows,
        entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominanceCertificate {
    pub rho: f64,
    pub lower_bound: f64,
    pub valid: bool,
}

/// Off-diagonal row-sum bound `ρ = Σ_{k≥1} |a_k| max(e^{-2πw b*}, e^{-2πw(b* - 1/α)})`.
pub fn dominance_certificate(spec: &WindowSpec, alpha: f64) -> Result<DominanceCertificate> {
    let (w, terms) = cauchy_parts(spec)?;
    let p = 1.0 / alpha;
    let rho: f64 = terms
        .iter()
        .skip(1)
        .map(|t| {
            let rs = reduce_shift(t.frequency, alpha);
            let upper = (-2.0 * PI * w * rs.b_star).exp();
            let lower = (-2.0 * PI * w * (rs.b_star - p)).exp();
            t.amplitude.norm() * upper.max(lower)
        })
        .sum();
    Ok(DominanceCertificate {
        rho,
        lower_bound: 1.0 - rho,
        valid: rho < 1.0,
    })
}

/// `count` points in `(0, 1/α)` from a shifted base-2 van der Corput sequence.
///
/// Prefixes are nested, and points within `1e-6` of the degenerate set (where some
/// `t` hits `0` or a `b*`) are nudged off it.
pub fn criterion_xis(spec: &WindowSpec, alpha: f64, count: usize) -> Vec<f64> {
    let p = 1.0 / alpha;
    let breaks: Vec<f64> = spec
        .cauchy_terms()
        .map(|(_, terms)| {
            terms
                .iter()
                .map(|t| reduce_shift(t.frequency, alpha).b_star)
                .collect()
        })
        .unwrap_or_default();
    let offset = 0.5 * (5f64.sqrt() - 1.0) / 256.0;
    (1..=count)
        .map(|i| {
            let mut xi = p * (van_der_corput(i as u64) + offset).fract();
            for _ in 0..8 {
                if !near_degenerate(xi, p, &breaks) {
                    break;
                }
                xi += 3e-6 * p;
            }
            xi.clamp(1e-6 * p, p * (1.0 - 1e-6))
        })
        .collect()
}

fn near_degenerate(xi: f64, p: f64, breaks: &[f64]) -> bool {
    // every row has t ≡ ξ + jp (mod 1); check the first few groups
    (0..32).any(|j| {
        let t = (xi + j as f64 * p).fract();
        std::iter::once(0.0)
            .chain(breaks.iter().map(|b| b.fract()))
            .any(|b| {
                let d = (t - b).abs();
                d < 1e-6 || (1.0 - d) < 1e-6
            })
    })
}

fn van_der_corput(mut i: u64) -> f64 {
    let mut out = 0.0;
    let mut scale = 0.5;
    while i > 0 {
        if i & 1 == 1 {
            out += scale;
        }
        i >>= 1;
        scale *= 0.5;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::min_singular_value;
    use crate::window::CauchyTerm;
    use proptest::prelude::*;

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_shift(5.0, 0.5), ReducedShift { b_star: 1.0, l: 2 });
        assert_eq!(reduce_shift(2.0, 0.5), ReducedShift { b_star: 0.0, l: 1 });
        assert_eq!(reduce_shift(0.0, 0.5), ReducedShift { b_star: 0.0, l: 0 });
        // 0.3 · (1/0.3) drifts in floating point
        assert_eq!(reduce_shift(1.0, 0.3).l, 0);
        assert_eq!(reduce_shift(10.0 / 3.0, 0.3).l, 1);
    }

    #[test]
    fn pure_cauchy_restricted_is_a_permutation() {
        let spec = WindowSpec::cauchy(-0.8).unwrap();
        for &alpha in &[0.3, 0.7, 1.0] {
            let m = build_criterion_matrix(&spec, alpha, 0.37, Truncation::centered(16), Variant::Restricted)
                .unwrap();
            let mut cols = Vec::new();
            for r in 0..m.nrows() {
                let nz: Vec<_> = m.nonzeros(r).collect();
                assert_eq!(nz.len(), 1);
                assert!((nz[0].1 - C64::new(1.0, 0.0)).norm() < 1e-15);
                cols.push(nz[0].0);
            }
            let n = cols.len();
            cols.sort();
            cols.dedup();
            assert_eq!(cols.len(), n);
        }
    }

    #[test]
    fn sinc_restricted_rows_have_two_entries() {
        let (b, w) = (2.0, -1.0);
        let spec = WindowSpec::shifted_sinc(b, w).unwrap();
        let alpha = 0.6;
        let rs = reduce_shift(b, alpha);
        let m = build_criterion_matrix(&spec, alpha, 0.81, Truncation::centered(32), Variant::Restricted)
            .unwrap();
        let up = -(2.0 * PI * w * (b - rs.b_star)).exp();
        let down = -(2.0 * PI * w * (b - rs.b_star + 1.0 / alpha)).exp();
        // rows whose second entry is not clipped
        for r in 0..m.nrows() - 4 {
            let nz: Vec<_> = m.nonzeros(r).collect();
            assert_eq!(nz.len(), 2, "row {r}");
            assert!((nz[0].1 - C64::new(1.0, 0.0)).norm() < 1e-14);
            let off = nz[1].1.re;
            assert!((off - up).abs() < 1e-14 || (off - down).abs() < 1e-14, "{off}");
        }
    }

    #[test]
    fn full_rows_per_group() {
        let spec = WindowSpec::shifted_sinc(1.3, -0.5).unwrap();
        for &alpha in &[0.3, 0.45, 0.8, 1.0] {
            let p: f64 = 1.0 / alpha;
            let m = build_criterion_matrix(&spec, alpha, 0.2 * p, Truncation::centered(20), Variant::Full)
                .unwrap();
            let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
            for row in &m.rows {
                *counts.entry(row.group).or_default() += 1;
                let back = (row.t + row.m as f64 - m.xi) / p;
                assert!((back - row.group as f64).abs() < 1e-9);
            }
            for (_, c) in counts {
                assert!(c == p.floor() as usize || c == p.ceil() as usize);
            }
        }
    }

    #[test]
    fn sinc_below_unit_bandwidth_loses_a_pivot() {
        let spec = WindowSpec::shifted_sinc(0.6, -0.5).unwrap();
        let alpha = 0.5;
        let m = build_criterion_matrix(&spec, alpha, 0.8, Truncation::centered(10), Variant::Full).unwrap();
        assert!(!m.missing_pivot_groups().is_empty());
        let m = build_criterion_matrix(&spec, alpha, 0.3, Truncation::centered(10), Variant::Full).unwrap();
        assert!(m.missing_pivot_groups().is_empty());
    }

    #[test]
    fn certificates() {
        let cauchy = WindowSpec::cauchy(-1.0).unwrap();
        let c = dominance_certificate(&cauchy, 0.5).unwrap();
        assert_eq!((c.rho, c.lower_bound, c.valid), (0.0, 1.0, true));

        let sinc = WindowSpec::shifted_sinc(2.0, -1.0).unwrap();
        assert!(dominance_certificate(&sinc, 0.6).unwrap().valid);
        assert!(!dominance_certificate(&sinc, 0.4).unwrap().valid);

        let g = WindowSpec::cauchy_mod_sum(-0.1, vec![CauchyTerm::real(1.0, 0.0), CauchyTerm::real(0.5, 1.0)])
            .unwrap();
        let margin = g.hypothesis_margin().unwrap();
        for &alpha in &[0.2, 0.5, 0.9, 1.0] {
            let c = dominance_certificate(&g, alpha).unwrap();
            assert!(c.valid && c.rho <= margin + 1e-15);
        }
    }

    /// Row dominance does not bound the smallest singular value when a term with
    /// `l = 0` folds onto the pivot column.
    #[test]
    fn row_dominance_is_not_an_l2_bound() {
        let g = WindowSpec::cauchy_mod_sum(-0.05, vec![CauchyTerm::real(1.0, 0.0), CauchyTerm::real(-0.8, 0.5)])
            .unwrap();
        let alpha = 0.7;
        let cert = dominance_certificate(&g, alpha).unwrap();
        assert!(cert.valid);
        let mut worst = f64::INFINITY;
        for xi in criterion_xis(&g, alpha, 16) {
            let m = build_criterion_matrix(&g, alpha, xi, Truncation::centered(64), Variant::Restricted).unwrap();
            worst = worst.min(min_singular_value(&m.to_dense()).unwrap());
        }
        assert!(worst < cert.lower_bound, "{worst} vs {}", cert.lower_bound);
    }

    #[test]
    fn xis_are_nested_and_inside() {
        let spec = WindowSpec::shifted_sinc(2.0, -1.0).unwrap();
        let a = criterion_xis(&spec, 0.7, 64);
        let b = criterion_xis(&spec, 0.7, 32);
        assert_eq!(&a[..32], &b[..]);
        assert!(a.iter().all(|&x| x > 0.0 && x < 1.0 / 0.7));
    }

    proptest! {
        #[test]
        fn reduce_reconstructs(b in 0.0f64..20.0, alpha in 0.1f64..2.0) {
            let rs = reduce_shift(b, alpha);
            prop_assert!(rs.b_star >= 0.0 && rs.b_star < 1.0 / alpha);
            prop_assert!((rs.b_star + rs.l as f64 / alpha - b).abs() < 1e-8 * b.max(1.0));
        }

        #[test]
        fn restricted_is_dominated_by_full(seed in 0u64..200, xi_frac in 0.01f64..0.99) {
            use rand::{Rng, SeedableRng};
            let spec = WindowSpec::cauchy_mod_sum(-0.3, vec![
                CauchyTerm::real(1.0, 0.0),
                CauchyTerm::new(C64::new(0.2, 0.1), 0.7),
                CauchyTerm::real(-0.1, 2.2),
            ]).unwrap();
            let alpha = 0.45;
            let xi = xi_frac / alpha;
            let trunc = Truncation::centered(24);
            let full = build_criterion_matrix(&spec, alpha, xi, trunc, Variant::Full).unwrap();
            let restricted = build_criterion_matrix(&spec, alpha, xi, trunc, Variant::Restricted).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let x = DVector::from_fn(trunc.width(), |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            prop_assert!(restricted.apply(&x).norm() <= full.apply(&x).norm() * (1.0 + 1e-12));
        }
    }
}
