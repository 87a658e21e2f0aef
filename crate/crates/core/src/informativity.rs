//! Informativity of input/output data for interpolation.
//!
//! The data `(U, Y)` is informative at `σ` when every order-`n` system that
//! explains it has one and the same transfer value `M` at `σ`. With
//! `γ = [1, σ, …, σ^n]ᵀ` this holds iff
//!
//! ```text
//! rank [H_n(U) 0 γ; H_n(Y) γ 0] = rank [H_n(U) 0; H_n(Y) γ]      (a)
//! rank [H_n(U) 0; H_n(Y) γ]     = rank [H_n(U); H_n(Y)] + 1     (b)
//! ```
//!
//! and `M` is then the last unknown of
//!
//! ```text
//! [H_n(U) 0; H_n(Y) -γ] [ξ; M] = [γ; 0].
//! ```
//!
//! All three ranks of a verdict are taken against one threshold, derived from
//! the data matrix `[H_n(U); H_n(Y)]` with the caller's [`RankTolerance`].
//! The `γ` columns are rescaled to the norm of that matrix first.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, RankTolerance};
use crate::signals::{hankel, DataSet};

/// `[1, σ, σ², …, σ^degree]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaVector {
    pub sigma: Complex64,
    pub entries: Vec<Complex64>,
}

impl GammaVector {
    pub fn degree(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn to_dvector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.entries)
    }
}

pub fn gamma(sigma: Complex64, degree: usize) -> GammaVector {
    let mut entries = Vec::with_capacity(degree + 1);
    let mut power = Complex64::new(1.0, 0.0);
    for _ in 0..=degree {
        entries.push(power);
        power *= sigma;
    }
    GammaVector { sigma, entries }
}

/// The linear system `[H_n(U) 0; H_n(Y) -γ] [ξ; M] = [γ; 0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct InclusionSystem {
    pub order: usize,
    pub sigma: Complex64,
    /// `(2n+2) × (T-n+2)`; the last column multiplies `M`.
    pub coefficient_matrix: DMatrix<Complex64>,
    /// Length `2n+2`.
    pub rhs: DVector<Complex64>,
}

impl InclusionSystem {
    /// Number of entries of `ξ`, i.e. `T-n+1`.
    pub fn xi_len(&self) -> usize {
        self.coefficient_matrix.ncols() - 1
    }

    pub fn residual(&self, xi: &DVector<Complex64>, m: Complex64) -> f64 {
        let mut x = xi.clone().insert_row(xi.len(), m);
        x = &self.coefficient_matrix * x - &self.rhs;
        x.norm()
    }
}

fn data_blocks(data: &DataSet, n: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let horizon = data.horizon();
    if horizon < n {
        return Err(Error::InsufficientData { order: n, horizon });
    }
    Ok((hankel(data.input(), n)?, hankel(data.output(), n)?))
}

/// `[H_n(U); H_n(Y)]`.
pub fn data_matrix(data: &DataSet, n: usize) -> Result<DMatrix<f64>> {
    let (hu, hy) = data_blocks(data, n)?;
    Ok(stack(&hu, &hy, &[]).map(|c| c.re))
}

/// Stacks `[hu; hy]` as a complex matrix and appends `extra` columns.
fn stack(hu: &DMatrix<f64>, hy: &DMatrix<f64>, extra: &[DVector<Complex64>]) -> DMatrix<Complex64> {
    let rows = hu.nrows() + hy.nrows();
    let base = hu.ncols();
    let mut m = DMatrix::zeros(rows, base + extra.len());
    for j in 0..base {
        for i in 0..hu.nrows() {
            m[(i, j)] = Complex64::new(hu[(i, j)], 0.0);
        }
        for i in 0..hy.nrows() {
            m[(hu.nrows() + i, j)] = Complex64::new(hy[(i, j)], 0.0);
        }
    }
    for (k, col) in extra.iter().enumerate() {
        m.set_column(base + k, col);
    }
    m
}

/// `[γ; 0]` or `[0; γ]` as a column of height `2n+2`.
fn gamma_column(g: &GammaVector, upper: bool, sign: f64) -> DVector<Complex64> {
    let len = g.entries.len();
    let offset = if upper { 0 } else { len };
    let mut col = DVector::zeros(2 * len);
    for (i, &e) in g.entries.iter().enumerate() {
        col[offset + i] = e * sign;
    }
    col
}

pub fn build_inclusion_system(
    data: &DataSet,
    n: usize,
    sigma: Complex64,
) -> Result<InclusionSystem> {
    let (hu, hy) = data_blocks(data, n)?;
    let g = gamma(sigma, n);
    Ok(InclusionSystem {
        order: n,
        sigma,
        coefficient_matrix: stack(&hu, &hy, &[gamma_column(&g, false, -1.0)]),
        rhs: gamma_column(&g, true, 1.0),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankTriple {
    /// `rank [H_n(U) 0 γ; H_n(Y) γ 0]`
    pub augmented: usize,
    /// `rank [H_n(U) 0; H_n(Y) γ]`
    pub extended: usize,
    /// `rank [H_n(U); H_n(Y)]`
    pub base: usize,
}

/// Outcome of the rank tests at one interpolation point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InformativityVerdict {
    #[serde(with = "crate::complex_json")]
    pub sigma: Complex64,
    pub informative: bool,
    #[serde(with = "crate::complex_json::option")]
    pub m: Option<Complex64>,
    /// Rank condition (a): `augmented == extended`.
    pub condition_a: bool,
    /// Rank condition (b): `extended == base + 1`.
    pub condition_b: bool,
    pub ranks: RankTriple,
    /// Singular-value threshold shared by the three ranks.
    #[serde(rename = "tolerance")]
    pub tolerance_used: f64,
    #[serde(skip)]
    pub diagnostics: VerdictDiagnostics,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerdictDiagnostics {
    pub augmented_singular_values: Vec<f64>,
    pub extended_singular_values: Vec<f64>,
    pub base_singular_values: Vec<f64>,
    /// `‖A [ξ; M] - b‖` of the recovered solution, when one was computed.
    pub residual: Option<f64>,
}

impl InformativityVerdict {
    /// Smallest gap, in ratio terms, between the threshold and the singular
    /// values on either side of it. Values near 1 flag marginal verdicts.
    pub fn threshold_margin(&self) -> f64 {
        let d = &self.diagnostics;
        [
            &d.augmented_singular_values,
            &d.extended_singular_values,
            &d.base_singular_values,
        ]
        .iter()
        .flat_map(|sv| sv.iter())
        .filter(|&&s| s > 0.0 && self.tolerance_used > 0.0)
        .map(|&s| {
            let r = s / self.tolerance_used;
            if r >= 1.0 {
                r
            } else {
                1.0 / r
            }
        })
        .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecoveredValue {
    pub m: Complex64,
    pub residual: f64,
}

/// Factor bringing `γ` to the norm of the data matrix. Ranks do not depend
/// on column scaling, but thresholded ranks do; without it the `γ` columns
/// are judged against the data's magnitude.
fn gamma_scale(g: &GammaVector, data_norm: f64) -> f64 {
    let norm = g.entries.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
    if data_norm > 0.0 {
        data_norm / norm
    } else {
        1.0 / norm
    }
}

/// Decides informativity at `sigma` and, when informative, recovers `M`.
pub fn is_informative(
    data: &DataSet,
    n: usize,
    sigma: Complex64,
    tol: &RankTolerance,
) -> Result<InformativityVerdict> {
    let (hu, hy) = data_blocks(data, n)?;

    let base_matrix = stack(&hu, &hy, &[]);
    let base_sv = linalg::singular_values(&base_matrix)?;
    let threshold = tol.threshold_for(&base_sv, base_matrix.nrows(), base_matrix.ncols());

    let g = gamma(sigma, n);
    let scale = gamma_scale(&g, base_sv[0]);
    let lower = gamma_column(&g, false, scale);
    let upper = gamma_column(&g, true, scale);

    let extended =
        linalg::rank_with_threshold(&stack(&hu, &hy, std::slice::from_ref(&lower)), threshold)?;
    let augmented =
        linalg::rank_with_threshold(&stack(&hu, &hy, &[lower.clone(), upper.clone()]), threshold)?;
    let ranks = RankTriple {
        augmented: augmented.rank,
        extended: extended.rank,
        base: linalg::count_above(&base_sv, threshold),
    };
    let condition_a = ranks.augmented == ranks.extended;
    let condition_b = ranks.extended == ranks.base + 1;

    let mut verdict = InformativityVerdict {
        sigma,
        informative: condition_a && condition_b,
        m: None,
        condition_a,
        condition_b,
        ranks,
        tolerance_used: threshold,
        diagnostics: VerdictDiagnostics {
            augmented_singular_values: augmented.singular_values,
            extended_singular_values: extended.singular_values,
            base_singular_values: base_sv,
            residual: None,
        },
    };
    if verdict.informative {
        // [ξ; M] solves the raw system iff [s ξ; M] solves the scaled one
        let scaled = InclusionSystem {
            order: n,
            sigma,
            coefficient_matrix: stack(&hu, &hy, &[-lower]),
            rhs: upper,
        };
        let recovered = solve_inclusion(&scaled, threshold)?;
        verdict.m = Some(recovered.m);
        verdict.diagnostics.residual = Some(recovered.residual / scale);
    }
    Ok(verdict)
}

/// Minimum-norm solution of the inclusion system with its residual checked
/// against the rank threshold.
fn solve_inclusion(system: &InclusionSystem, threshold: f64) -> Result<RecoveredValue> {
    let x = linalg::solve_min_norm(&system.coefficient_matrix, &system.rhs, threshold)?;
    let residual = (&system.coefficient_matrix * &x - &system.rhs).norm();
    // A perturbation of size `threshold` can make the system consistent with
    // solution `x`, leaving a residual of order threshold * ‖[x; 1]‖.
    let bound =
        10.0 * threshold * (1.0 + x.norm_squared()).sqrt() + 1e-10 * (1.0 + system.rhs.norm());
    if residual.is_nan() || residual > bound {
        return Err(Error::InconsistentSolve { residual, bound });
    }
    Ok(RecoveredValue {
        m: x[x.len() - 1],
        residual,
    })
}

/// Recovers the transfer value at `sigma` from data, failing when the data
/// does not determine it.
pub fn transfer_value_from_data(
    data: &DataSet,
    n: usize,
    sigma: Complex64,
    tol: &RankTolerance,
) -> Result<RecoveredValue> {
    let verdict = is_informative(data, n, sigma, tol)?;
    match (verdict.m, verdict.diagnostics.residual) {
        (Some(m), Some(residual)) => Ok(RecoveredValue { m, residual }),
        _ => Err(Error::NotInformative { sigma }),
    }
}

/// [`is_informative`] at each point, evaluated in parallel; output order
/// follows `sigmas`.
pub fn informative_sweep(
    data: &DataSet,
    n: usize,
    sigmas: &[Complex64],
    tol: &RankTolerance,
) -> Result<Vec<InformativityVerdict>> {
    sigmas
        .par_iter()
        .map(|&s| is_informative(data, n, s, tol))
        .collect()
}
