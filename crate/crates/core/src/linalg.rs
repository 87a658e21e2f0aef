//! SVD-based numerical rank, minimum-norm solves and null spaces.
//!
//! Rank tests on measured data need a threshold below which singular values
//! count as zero. [`RankTolerance`] carries that policy so that every rank
//! taken for one decision uses the same threshold.

use faer::{Mat, MatRef};
use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Threshold policy for numerical rank decisions.
///
/// The default threshold is `rel_tol * sigma_max * max(rows, cols)`; a set
/// `abs_tol` replaces it outright.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankTolerance {
    pub rel_tol: f64,
    pub abs_tol: Option<f64>,
}

impl RankTolerance {
    pub const DEFAULT_REL_TOL: f64 = 1e-6;

    pub fn new(rel_tol: f64, abs_tol: Option<f64>) -> Result<Self> {
        if !(rel_tol.is_finite() && rel_tol > 0.0) {
            return Err(Error::InvalidTolerance(format!(
                "relative tolerance must be positive and finite, got {rel_tol}"
            )));
        }
        if let Some(abs) = abs_tol {
            if !(abs.is_finite() && abs > 0.0) {
                return Err(Error::InvalidTolerance(format!(
                    "absolute tolerance must be positive and finite, got {abs}"
                )));
            }
        }
        Ok(Self { rel_tol, abs_tol })
    }

    pub fn absolute(abs_tol: f64) -> Result<Self> {
        Self::new(Self::DEFAULT_REL_TOL, Some(abs_tol))
    }

    pub fn threshold(&self, sigma_max: f64, rows: usize, cols: usize) -> f64 {
        match self.abs_tol {
            Some(abs) => abs,
            None => self.rel_tol * sigma_max * rows.max(cols) as f64,
        }
    }

    /// Threshold for a matrix with the given (descending) singular values.
    pub fn threshold_for(&self, singular_values: &[f64], rows: usize, cols: usize) -> f64 {
        self.threshold(singular_values.first().copied().unwrap_or(0.0), rows, cols)
    }
}

impl Default for RankTolerance {
    fn default() -> Self {
        Self {
            rel_tol: Self::DEFAULT_REL_TOL,
            abs_tol: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericalRank {
    pub rank: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub threshold: f64,
}

/// Scalars the SVD backend accepts: `f64` and `Complex64`.
pub trait Scalar:
    ComplexField<RealField = f64> + Copy + faer::traits::ComplexField<Real = f64>
{
}

impl Scalar for f64 {}
impl Scalar for Complex64 {}

fn check_finite<T: Scalar>(m: &DMatrix<T>) -> Result<()> {
    if m.is_empty() {
        return Err(Error::Decomposition("empty matrix".into()));
    }
    if m.iter().any(|&x| !ComplexField::modulus(x).is_finite()) {
        return Err(Error::Decomposition("matrix has non-finite entries".into()));
    }
    Ok(())
}

fn to_faer<T: Scalar>(m: &DMatrix<T>) -> Mat<T> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer<T: Scalar>(m: MatRef<'_, T>) -> DMatrix<T> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// `m = U diag(s) V^H` with descending `s`; `U` and `V` are thin unless a
/// full `V` was requested.
struct Decomposition<T> {
    singular_values: Vec<f64>,
    u: DMatrix<T>,
    v: DMatrix<T>,
}

fn decompose<T: Scalar>(m: &DMatrix<T>, full: bool) -> Result<Decomposition<T>> {
    check_finite(m)?;
    let a = to_faer(m);
    let svd = if full { a.svd() } else { a.thin_svd() }
        .map_err(|e| Error::Decomposition(format!("SVD did not converge: {e:?}")))?;
    let singular_values = svd
        .S()
        .column_vector()
        .iter()
        .map(|&s| ComplexField::real(s))
        .collect();
    Ok(Decomposition {
        singular_values,
        u: from_faer(svd.U()),
        v: from_faer(svd.V()),
    })
}

/// Singular values in descending order.
pub fn singular_values<T: Scalar>(m: &DMatrix<T>) -> Result<Vec<f64>> {
    check_finite(m)?;
    to_faer(m)
        .singular_values()
        .map_err(|e| Error::Decomposition(format!("SVD did not converge: {e:?}")))
}

/// Number of singular values strictly above `threshold`.
pub fn count_above(singular_values: &[f64], threshold: f64) -> usize {
    singular_values.iter().filter(|&&s| s > threshold).count()
}

pub fn numerical_rank<T: Scalar>(m: &DMatrix<T>, tol: &RankTolerance) -> Result<NumericalRank> {
    let singular_values = singular_values(m)?;
    let threshold = tol.threshold_for(&singular_values, m.nrows(), m.ncols());
    Ok(NumericalRank {
        rank: count_above(&singular_values, threshold),
        singular_values,
        threshold,
    })
}

/// Rank of `m` against a threshold fixed by the caller.
pub fn rank_with_threshold<T: Scalar>(m: &DMatrix<T>, threshold: f64) -> Result<NumericalRank> {
    let singular_values = singular_values(m)?;
    Ok(NumericalRank {
        rank: count_above(&singular_values, threshold),
        singular_values,
        threshold,
    })
}

/// Minimum-norm least-squares solution of `m x = b`, discarding singular
/// values at or below `threshold`.
pub fn solve_min_norm<T: Scalar>(
    m: &DMatrix<T>,
    b: &DVector<T>,
    threshold: f64,
) -> Result<DVector<T>> {
    if b.len() != m.nrows() {
        return Err(Error::Decomposition(format!(
            "right-hand side has {} entries for a matrix with {} rows",
            b.len(),
            m.nrows()
        )));
    }
    let svd = decompose(m, false)?;
    let mut x = DVector::zeros(m.ncols());
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > threshold {
            let coefficient = svd.u.column(i).dotc(b).unscale(s);
            x.axpy(coefficient, &svd.v.column(i), T::one());
        }
    }
    Ok(x)
}

/// Orthonormal basis of the numerical null space of a real matrix.
///
/// Vectors are ordered by increasing singular value, so the first one is the
/// right singular vector of the smallest singular value. Directions beyond
/// the row count (wide matrices) carry singular value zero.
pub fn null_space(m: &DMatrix<f64>, threshold: f64) -> Result<Vec<DVector<f64>>> {
    let svd = decompose(m, true)?;
    let mut basis: Vec<(f64, DVector<f64>)> = (0..m.ncols())
        .map(|i| (svd.singular_values.get(i).copied().unwrap_or(0.0), i))
        .filter(|&(s, _)| s <= threshold)
        .map(|(s, i)| (s, svd.v.column(i).into_owned()))
        .collect();
    basis.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(basis.into_iter().map(|(_, v)| v).collect())
}
