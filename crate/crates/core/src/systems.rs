//! SISO difference-equation models
//!
//! ```text
//! y_{t+n} + p_{n-1} y_{t+n-1} + … + p_0 y_t = q_n u_{t+n} + … + q_0 u_t
//! ```
//!
//! with the monic denominator `P(z) = z^n + p_{n-1} z^{n-1} + … + p_0` and
//! numerator `Q(z) = q_n z^n + … + q_0`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, RankTolerance};
use crate::signals::{hankel, hankel_trimmed, DataSet, TimeSeries};

/// Parameters `(p, q)` of an order-`n` difference equation.
///
/// Serialized as `{"n": int, "p": [...], "q": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct SystemParams {
    p: Vec<f64>,
    q: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    n: usize,
    p: Vec<f64>,
    q: Vec<f64>,
}

impl TryFrom<RawParams> for SystemParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        if raw.p.len() != raw.n {
            return Err(Error::InvalidModel(format!(
                "order {} needs {} denominator coefficients, got {}",
                raw.n,
                raw.n,
                raw.p.len()
            )));
        }
        Self::new(raw.p, raw.q)
    }
}

impl From<SystemParams> for RawParams {
    fn from(params: SystemParams) -> Self {
        Self {
            n: params.order(),
            p: params.p,
            q: params.q,
        }
    }
}

impl SystemParams {
    /// `p = [p_0, …, p_{n-1}]`, `q = [q_0, …, q_n]`; the order is `p.len()`.
    pub fn new(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if q.len() != p.len() + 1 {
            return Err(Error::InvalidModel(format!(
                "order {} needs {} numerator coefficients, got {}",
                p.len(),
                p.len() + 1,
                q.len()
            )));
        }
        if p.iter().chain(&q).any(|c| !c.is_finite()) {
            return Err(Error::InvalidModel("coefficients must be finite".into()));
        }
        Ok(Self { p, q })
    }

    /// Builds parameters from the row vector `[q, -p]` of length `2n+1`.
    pub fn from_parameter_row(row: &[f64]) -> Result<Self> {
        if row.len().is_multiple_of(2) {
            return Err(Error::InvalidModel(format!(
                "parameter row must have odd length 2n+1, got {}",
                row.len()
            )));
        }
        let n = row.len() / 2;
        Self::new(
            row[n + 1..].iter().map(|c| -c).collect(),
            row[..=n].to_vec(),
        )
    }

    pub fn order(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// The row vector `[q, -p]`.
    pub fn parameter_row(&self) -> Vec<f64> {
        self.q
            .iter()
            .copied()
            .chain(self.p.iter().map(|c| -c))
            .collect()
    }
}

/// Polynomial with complex coefficients in ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Degree implied by the coefficient count, zero leading terms included.
    pub fn nominal_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Index of the highest exactly-nonzero coefficient; `None` for the
    /// zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(|c| *c != Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `Σ |c_i| |z|^i`, the scale of the individual terms at `z`.
    pub fn term_magnitude(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }
}

/// Returns the denominator `P` (monic, degree `n`) and numerator `Q`.
pub fn poly_from_params(params: &SystemParams) -> (Polynomial, Polynomial) {
    let mut p = Polynomial::from_real(params.p());
    p.coeffs.push(Complex64::new(1.0, 0.0));
    (p, Polynomial::from_real(params.q()))
}

/// Solution set of `P(σ) M = Q(σ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TransferValue {
    Value {
        #[serde(with = "crate::complex_json")]
        m: Complex64,
    },
    /// `P(σ) = 0` and `Q(σ) ≠ 0`: no `M` solves the equation.
    Pole,
    /// `P(σ) = Q(σ) = 0`: every `M` solves the equation.
    Indeterminate,
}

impl TransferValue {
    pub fn value(&self) -> Option<Complex64> {
        match self {
            TransferValue::Value { m } => Some(*m),
            _ => None,
        }
    }
}

/// Default zero test for `P(σ)` and `Q(σ)`: `1e-10 (1 + |σ|^n)`.
pub fn default_poly_tolerance(order: usize, sigma: Complex64) -> f64 {
    1e-10 * (1.0 + sigma.norm().powi(order as i32))
}

pub fn eval_transfer(params: &SystemParams, sigma: Complex64) -> TransferValue {
    eval_transfer_with_tol(params, sigma, default_poly_tolerance(params.order(), sigma))
}

pub fn eval_transfer_with_tol(params: &SystemParams, sigma: Complex64, tol: f64) -> TransferValue {
    let (p, q) = poly_from_params(params);
    let (p_val, q_val) = (p.eval(sigma), q.eval(sigma));
    match (p_val.norm() > tol, q_val.norm() > tol) {
        (true, _) => TransferValue::Value { m: q_val / p_val },
        (false, true) => TransferValue::Pole,
        (false, false) => TransferValue::Indeterminate,
    }
}

/// Runs the recursion forward from `initial_output = [y_0, …, y_{n-1}]`.
pub fn simulate(
    params: &SystemParams,
    input: &TimeSeries,
    initial_output: &[f64],
) -> Result<TimeSeries> {
    let n = params.order();
    if initial_output.len() != n {
        return Err(Error::InitialConditionLength {
            expected: n,
            got: initial_output.len(),
        });
    }
    if input.len() < n {
        return Err(Error::InvalidData(format!(
            "input has {} samples, fewer than the model order {n}",
            input.len()
        )));
    }
    let u = input.samples();
    let mut y = Vec::with_capacity(u.len());
    y.extend_from_slice(initial_output);
    for t in n..u.len() {
        let base = t - n;
        let feedback: f64 = params
            .p()
            .iter()
            .enumerate()
            .map(|(i, p)| p * y[base + i])
            .sum();
        let drive: f64 = params
            .q()
            .iter()
            .enumerate()
            .map(|(i, q)| q * u[base + i])
            .sum();
        y.push(drive - feedback);
    }
    TimeSeries::new(y)
        .map_err(|_| Error::InvalidData("simulation diverged to non-finite values".into()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Consistency {
    pub explains: bool,
    /// Largest absolute entry of `[q, -p] [H_n(U); H̄_n(Y)] - [y_n … y_T]`.
    pub residual: f64,
}

/// `[H_n(U); H̄_n(Y)]`, the regressor whose row space the parameters act on.
pub fn regressor(data: &DataSet, n: usize) -> Result<DMatrix<f64>> {
    let horizon = data.horizon();
    if horizon < n {
        return Err(Error::InsufficientData { order: n, horizon });
    }
    let hu = hankel(data.input(), n)?;
    let hy = hankel_trimmed(data.output(), n)?;
    let cols = hu.ncols();
    let mut stacked = DMatrix::zeros(2 * n + 1, cols);
    stacked.rows_mut(0, n + 1).copy_from(&hu);
    stacked.rows_mut(n + 1, n).copy_from(&hy);
    Ok(stacked)
}

fn regression_target(data: &DataSet, n: usize) -> DVector<f64> {
    DVector::from_column_slice(&data.output().samples()[n..])
}

/// Checks whether `params` could have generated `data`.
pub fn explains_data(params: &SystemParams, data: &DataSet, tol: f64) -> Result<Consistency> {
    let n = params.order();
    let phi = regressor(data, n)?;
    let theta = DVector::from_vec(params.parameter_row());
    let fitted = phi.tr_mul(&theta);
    let residual = (fitted - regression_target(data, n)).amax();
    Ok(Consistency {
        explains: residual <= tol,
        residual,
    })
}

/// Minimum-norm parameters of order `n` fitting `data` in the least-squares
/// sense, with singular values thresholded by `tol`.
pub fn fit_min_norm(data: &DataSet, n: usize, tol: &RankTolerance) -> Result<SystemParams> {
    let phi_t = regressor(data, n)?.transpose();
    let sv = linalg::singular_values(&phi_t)?;
    let threshold = tol.threshold_for(&sv, phi_t.nrows(), phi_t.ncols());
    let theta = linalg::solve_min_norm(&phi_t, &regression_target(data, n), threshold)?;
    SystemParams::from_parameter_row(theta.as_slice())
}
