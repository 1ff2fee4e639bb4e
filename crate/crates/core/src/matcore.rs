//! Dense complex linear algebra used throughout the crate.
//!
//! Everything here is a pure function over [`CMatrix`]. Sizes never exceed
//! 81x81 (two qutrits realigned, or a 9-outcome probability table), so all
//! routines are dense and favour robustness over speed.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;

/// Entrywise tolerance on `|M - M^dagger|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Which tensor factor of a bipartite operator to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Builds a matrix from real entries in row-major order.
pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&v| c(v, 0.0)))
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.trace()
}

/// Largest entrywise modulus of `M - M^dagger`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Checks Hermiticity within [`HERMITIAN_TOL`] and returns the symmetrized
/// `(M + M^dagger) / 2`.
pub fn hermitize(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let deviation = hermitian_deviation(m);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok((m + m.adjoint()).scale(0.5))
}

/// Sum of singular values.
pub fn trace_norm<T>(m: &DMatrix<T>) -> Result<f64>
where
    T: ComplexField<RealField = f64>,
{
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "trace norm needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.clone().singular_values().iter().sum())
}

/// Kronecker product with `a`'s indices major.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

fn check_bipartite(rho: &CMatrix, da: usize, db: usize) -> Result<()> {
    let n = da * db;
    if da == 0 || db == 0 || rho.nrows() != n || rho.ncols() != n {
        return Err(Error::Dimension(format!(
            "operator is {}x{}, subsystem dimensions {da}x{db} need {n}x{n}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    Ok(())
}

/// Partial trace of a `(da*db)`-square operator, keeping `keep`.
pub fn partial_trace(rho: &CMatrix, keep: Subsystem, da: usize, db: usize) -> Result<CMatrix> {
    check_bipartite(rho, da, db)?;
    let out = match keep {
        Subsystem::First => CMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| rho[(i * db + k, j * db + k)]).sum()
        }),
        Subsystem::Second => CMatrix::from_fn(db, db, |k, l| {
            (0..da).map(|i| rho[(i * db + k, i * db + l)]).sum()
        }),
    };
    Ok(out)
}

/// Transpose on the second tensor factor.
pub fn partial_transpose(rho: &CMatrix, da: usize, db: usize) -> Result<CMatrix> {
    check_bipartite(rho, da, db)?;
    Ok(CMatrix::from_fn(da * db, da * db, |r, s| {
        let (i, k) = (r / db, r % db);
        let (j, l) = (s / db, s % db);
        rho[(i * db + l, j * db + k)]
    }))
}

/// Realigned matrix: entry `(i*da + j, k*db + l)` is `<i|<k| rho |j>|l>`.
///
/// The result is `da^2 x db^2`.
pub fn realign(rho: &CMatrix, da: usize, db: usize) -> Result<CMatrix> {
    check_bipartite(rho, da, db)?;
    Ok(CMatrix::from_fn(da * da, db * db, |r, s| {
        let (i, j) = (r / da, r % da);
        let (k, l) = (s / db, s % db);
        rho[(i * db + k, j * db + l)]
    }))
}

/// Inverse of [`realign`].
pub fn unrealign(r: &CMatrix, da: usize, db: usize) -> Result<CMatrix> {
    if r.nrows() != da * da || r.ncols() != db * db {
        return Err(Error::Dimension(format!(
            "realigned operator is {}x{}, expected {}x{}",
            r.nrows(),
            r.ncols(),
            da * da,
            db * db
        )));
    }
    Ok(CMatrix::from_fn(da * db, da * db, |p, q| {
        let (i, k) = (p / db, p % db);
        let (j, l) = (q / db, q % db);
        r[(i * da + j, k * db + l)]
    }))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigenvalues_hermitian(h: &CMatrix) -> Result<Vec<f64>> {
    let sym = hermitize(h)?;
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// `(algebraic min, algebraic max)` eigenvalue of a Hermitian matrix.
pub fn eig_range_hermitian(h: &CMatrix) -> Result<(f64, f64)> {
    let ev = eigenvalues_hermitian(h)?;
    Ok((ev[0], ev[ev.len() - 1]))
}

pub fn min_eigenvalue(h: &CMatrix) -> Result<f64> {
    eig_range_hermitian(h).map(|(lo, _)| lo)
}

/// Swap operator `F = sum_ij |i><j| (x) |j><i|` on `C^d (x) C^d`.
pub fn swap_operator(d: usize) -> CMatrix {
    let mut f = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = c(1.0, 0.0);
        }
    }
    f
}

/// `tr(rho (A (x) B))` without forming the Kronecker product.
pub fn expectation_product(rho: &CMatrix, a: &CMatrix, b: &CMatrix) -> Complex64 {
    let (da, db) = (a.nrows(), b.nrows());
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..da {
        for j in 0..da {
            let aji = a[(j, i)];
            if aji == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    acc += rho[(i * db + k, j * db + l)] * aji * b[(l, k)];
                }
            }
        }
    }
    acc
}
