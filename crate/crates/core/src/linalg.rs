//! Extremal eigenvalues of Hermitian matrices by Lanczos iteration, directly and on
//! the Cholesky-applied inverse.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::window::C64;

const START_SEED: u64 = 0x6761_626f_72;
const RITZ_TOL: f64 = 1e-11;

#[derive(Debug, Clone)]
pub struct Extremes {
    pub min: f64,
    pub max: f64,
    /// Unit eigenvector estimate for `min`.
    pub min_vector: DVector<C64>,
}

fn start_vector(n: usize) -> DVector<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let v = DVector::from_fn(n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Largest eigenpair of a Hermitian positive semidefinite operator of dimension `n`
/// by Lanczos with full reorthogonalisation.
///
/// Stops once the Ritz residual `|β_k s_k|` drops below `RITZ_TOL · θ`; the Krylov space
/// is exhausted after `n` steps, so the iteration always terminates.
fn lanczos_largest(n: usize, apply: impl Fn(&DVector<C64>) -> DVector<C64>) -> Result<(f64, DVector<C64>)> {
    let mut basis: Vec<DVector<C64>> = vec![start_vector(n)];
    let mut diag: Vec<f64> = Vec::new();
    let mut off: Vec<f64> = Vec::new();
    for j in 0..n {
        let mut w = apply(&basis[j]);
        diag.push(basis[j].dotc(&w).re);
        for _ in 0..2 {
            for q in &basis {
                let c = q.dotc(&w);
                w.axpy(-c, q, C64::new(1.0, 0.0));
            }
        }
        let beta = w.norm();
        if !beta.is_finite() {
            return Err(Error::NoConvergence { iterations: j + 1 });
        }
        let k = diag.len();
        let check = k % 4 == 0 || k == n || beta <= 1e-14 * diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        if check {
            let t = DMatrix::from_fn(k, k, |r, c| {
                if r == c {
                    diag[r]
                } else if r + 1 == c {
                    off[r]
                } else if c + 1 == r {
                    off[c]
                } else {
                    0.0
                }
            });
            let eig = nalgebra::SymmetricEigen::new(t);
            let (idx, theta) = eig
                .eigenvalues
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
            let s = eig.eigenvectors.column(idx);
            let residual = beta * s[k - 1].abs();
            if residual <= RITZ_TOL * theta.abs() || k == n || beta <= 1e-14 * theta.abs() {
                let mut v = DVector::zeros(n);
                for (q, &c) in basis.iter().zip(s.iter()) {
                    v.axpy(C64::new(c, 0.0), q, C64::new(1.0, 0.0));
                }
                return Ok((theta, v));
            }
        }
        off.push(beta);
        basis.push(w / C64::new(beta, 0.0));
    }
    Err(Error::NoConvergence { iterations: n })
}

/// Largest eigenvalue of a positive semidefinite Hermitian matrix.
pub fn largest_eigenvalue(h: &DMatrix<C64>) -> Result<f64> {
    if h.nrows() == 0 {
        return Ok(0.0);
    }
    Ok(lanczos_largest(h.nrows(), |x| h * x)?.0.max(0.0))
}

/// Matrices up to this size are diagonalised densely.
const DENSE_LIMIT: usize = 384;

/// Smallest and largest eigenvalues of a positive semidefinite Hermitian matrix.
///
/// Small matrices are diagonalised directly; larger ones go through
/// [`extreme_eigenvalues_iterative`].
pub fn extreme_eigenvalues(h: &DMatrix<C64>) -> Result<Extremes> {
    let n = h.nrows();
    assert_eq!(n, h.ncols(), "matrix must be square");
    if n == 0 || n > DENSE_LIMIT {
        return extreme_eigenvalues_iterative(h);
    }
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let (mut lo, mut hi) = (0, 0);
    for (i, &v) in eig.eigenvalues.iter().enumerate() {
        if v < eig.eigenvalues[lo] {
            lo = i;
        }
        if v > eig.eigenvalues[hi] {
            hi = i;
        }
    }
    if !eig.eigenvalues.iter().all(|v| v.is_finite()) {
        return Err(Error::NoConvergence { iterations: 0 });
    }
    Ok(Extremes {
        min: eig.eigenvalues[lo].max(0.0),
        max: eig.eigenvalues[hi].max(0.0),
        min_vector: eig.eigenvectors.column(lo).into_owned(),
    })
}

/// Lanczos variant of [`extreme_eigenvalues`]: the largest eigenvalue from Lanczos on
/// `h`, the smallest from Lanczos on `(h + εI)⁻¹` applied through a Cholesky factor, `ε`
/// a tiny multiple of the largest. The start vector is seeded, so results are
/// deterministic.
pub fn extreme_eigenvalues_iterative(h: &DMatrix<C64>) -> Result<Extremes> {
    let n = h.nrows();
    assert_eq!(n, h.ncols(), "matrix must be square");
    if n == 0 {
        return Ok(Extremes {
            min: 0.0,
            max: 0.0,
            min_vector: DVector::zeros(0),
        });
    }
    let max = largest_eigenvalue(h)?;
    if max == 0.0 {
        return Ok(Extremes {
            min: 0.0,
            max: 0.0,
            min_vector: start_vector(n),
        });
    }
    let eps = 1e-14 * max;
    let mut shifted = h.clone();
    for i in 0..n {
        shifted[(i, i)] += C64::new(eps, 0.0);
    }
    let chol = nalgebra::Cholesky::new(shifted).ok_or(Error::NotPositiveDefinite)?;
    let (theta, min_vector) = lanczos_largest(n, |x| chol.solve(x))?;
    Ok(Extremes {
        min: (1.0 / theta - eps).max(0.0),
        max,
        min_vector,
    })
}

/// Smallest singular value of `a` (any shape), via the normal matrix `aᴴa`.
///
/// The value is reported as `‖a x‖ / ‖x‖` for the converged vector, which keeps
/// accuracy for tiny singular values.
pub fn min_singular_value(a: &DMatrix<C64>) -> Result<f64> {
    Ok(singular_extremes(a)?.0)
}

/// `(σ_min, σ_max)` of `a`.
pub fn singular_extremes(a: &DMatrix<C64>) -> Result<(f64, f64)> {
    if a.ncols() == 0 {
        return Ok((0.0, 0.0));
    }
    if a.nrows() < a.ncols() {
        let normal = a.adjoint() * a;
        return Ok((0.0, largest_eigenvalue(&normal)?.sqrt()));
    }
    let normal = a.adjoint() * a;
    let ext = extreme_eigenvalues(&normal)?;
    let ax = a * &ext.min_vector;
    Ok((ax.norm() / ext.min_vector.norm(), ext.max.sqrt()))
}
