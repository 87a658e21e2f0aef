//! Minimal real rational interpolation through `(σ_j, M_j)` pairs.
//!
//! For a candidate order `r` the interpolation conditions
//! `b(σ_j) = M_j a(σ_j)` are linear in the coefficients of
//! `a(z) = a_0 + … + a_r z^r` and `b(z) = b_0 + … + b_r z^r`. Splitting every
//! complex condition into its real and imaginary parts gives a real
//! homogeneous system; a null vector with `a_r ≠ 0`, `a(σ_j) ≠ 0` and
//! coprime `a`, `b` is an interpolant of order `r`. Orders are tried from
//! zero upwards, so the first admissible one is minimal.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, RankTolerance};
use crate::systems::{eval_transfer, Polynomial, SystemParams, TransferValue};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpolationPair {
    #[serde(with = "crate::complex_json")]
    pub sigma: Complex64,
    #[serde(with = "crate::complex_json")]
    pub m: Complex64,
}

impl InterpolationPair {
    pub fn new(sigma: Complex64, m: Complex64) -> Self {
        Self { sigma, m }
    }
}

fn same_point(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-12 * (1.0 + a.norm().max(b.norm()))
}

/// Ordered interpolation pairs with pairwise distinct points.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<InterpolationPair>", into = "Vec<InterpolationPair>")]
pub struct PairSet {
    pairs: Vec<InterpolationPair>,
}

impl TryFrom<Vec<InterpolationPair>> for PairSet {
    type Error = Error;

    fn try_from(pairs: Vec<InterpolationPair>) -> Result<Self> {
        Self::new(pairs)
    }
}

impl From<PairSet> for Vec<InterpolationPair> {
    fn from(set: PairSet) -> Self {
        set.pairs
    }
}

impl PairSet {
    pub fn new(pairs: Vec<InterpolationPair>) -> Result<Self> {
        for (i, pair) in pairs.iter().enumerate() {
            let finite = [pair.sigma.re, pair.sigma.im, pair.m.re, pair.m.im]
                .iter()
                .all(|v| v.is_finite());
            if !finite {
                return Err(Error::InvalidPairSet(format!("pair {i} is not finite")));
            }
            if let Some(j) = pairs[..i]
                .iter()
                .position(|p| same_point(p.sigma, pair.sigma))
            {
                return Err(Error::InvalidPairSet(format!(
                    "pairs {j} and {i} share the point {}",
                    pair.sigma
                )));
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[InterpolationPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn find(&self, sigma: Complex64) -> Option<&InterpolationPair> {
        self.pairs.iter().find(|p| same_point(p.sigma, sigma))
    }

    pub fn is_conjugate_closed(&self) -> bool {
        self.pairs
            .iter()
            .all(|p| p.sigma.im == 0.0 || self.find(p.sigma.conj()).is_some())
    }

    /// Multiplies every value by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            pairs: self
                .pairs
                .iter()
                .map(|p| InterpolationPair::new(p.sigma, p.m * factor))
                .collect(),
        }
    }
}

/// Adds `(σ̄, M̄)` for every non-real point lacking its conjugate partner.
///
/// Fails when the pairs cannot come from a real system: a present partner
/// with a value other than `M̄`, or a non-real value at a real point.
pub fn conjugate_close(pairs: &PairSet, tol: f64) -> Result<PairSet> {
    let mut closed = pairs.pairs.clone();
    for pair in &pairs.pairs {
        if pair.sigma.im == 0.0 {
            if pair.m.im.abs() > tol {
                return Err(Error::NonRealPairSet(format!(
                    "value {} at real point {} is not real",
                    pair.m, pair.sigma.re
                )));
            }
            continue;
        }
        match pairs.find(pair.sigma.conj()) {
            Some(partner) if (partner.m - pair.m.conj()).norm() > tol => {
                return Err(Error::NonRealPairSet(format!(
                    "value {} at {} is not the conjugate of {} at {}",
                    partner.m, partner.sigma, pair.m, pair.sigma
                )));
            }
            Some(_) => {}
            None => closed.push(InterpolationPair::new(pair.sigma.conj(), pair.m.conj())),
        }
    }
    PairSet::new(closed)
}

/// A reduced-order model together with the pairs it was fitted to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct ReducedModel {
    pub params: SystemParams,
    pub source_pairs: PairSet,
    pub max_interp_error: f64,
}

#[derive(Serialize, Deserialize)]
struct RawModel {
    n: usize,
    p: Vec<f64>,
    q: Vec<f64>,
    r: usize,
    pairs: PairSet,
    max_interp_error: f64,
}

impl TryFrom<RawModel> for ReducedModel {
    type Error = Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        if raw.n != raw.r || raw.p.len() != raw.r {
            return Err(Error::InvalidModel(format!(
                "inconsistent order fields: n = {}, r = {}, {} denominator coefficients",
                raw.n,
                raw.r,
                raw.p.len()
            )));
        }
        Ok(Self {
            params: SystemParams::new(raw.p, raw.q)?,
            source_pairs: raw.pairs,
            max_interp_error: raw.max_interp_error,
        })
    }
}

impl From<ReducedModel> for RawModel {
    fn from(model: ReducedModel) -> Self {
        let r = model.order();
        Self {
            n: r,
            p: model.params.p().to_vec(),
            q: model.params.q().to_vec(),
            r,
            pairs: model.source_pairs,
            max_interp_error: model.max_interp_error,
        }
    }
}

impl ReducedModel {
    pub fn order(&self) -> usize {
        self.params.order()
    }
}

/// Real homogeneous system `[-M_j σ_j^i | σ_j^i]` acting on `[a; b]`, one
/// real row and one imaginary row per pair. Each condition is scaled to unit
/// norm so that no pair dominates the rank decision.
fn interpolation_matrix(pairs: &PairSet, r: usize) -> DMatrix<f64> {
    let k = pairs.len();
    let mut m = DMatrix::zeros(2 * k, 2 * r + 2);
    for (j, pair) in pairs.pairs.iter().enumerate() {
        let mut row = Vec::with_capacity(2 * r + 2);
        let mut power = Complex64::new(1.0, 0.0);
        for _ in 0..=r {
            row.push(power);
            power *= pair.sigma;
        }
        let mut coeffs: Vec<Complex64> = row.iter().map(|p| -pair.m * p).collect();
        coeffs.extend(row);
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for (i, c) in coeffs.iter().enumerate() {
            m[(2 * j, i)] = c.re / norm;
            m[(2 * j + 1, i)] = c.im / norm;
        }
    }
    m
}

/// Sylvester matrix of `a` and `b`, both taken with formal degree `r`.
fn sylvester(a: &[f64], b: &[f64]) -> DMatrix<f64> {
    let r = a.len() - 1;
    let size = 2 * r;
    let mut s = DMatrix::zeros(size, size);
    for shift in 0..r {
        for i in 0..=r {
            // descending powers, shifted right once per row
            s[(shift, shift + i)] = a[r - i];
            s[(r + shift, shift + i)] = b[r - i];
        }
    }
    s
}

/// Why a null vector was rejected as an interpolant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rejection {
    /// `a_r ≈ 0`: the candidate is improper at this order.
    Improper,
    /// `a(σ_j) ≈ 0` for some `j`.
    UnattainablePoint,
    /// `a` and `b` share a root.
    CommonFactor,
}

/// Checks a candidate `[a; b]` (coefficients ascending, each of length
/// `r+1`) against the admissibility rules, returning monic parameters.
pub fn admissible_candidate(
    candidate: &[f64],
    pairs: &PairSet,
    tol: &RankTolerance,
) -> std::result::Result<SystemParams, Rejection> {
    let r = candidate.len() / 2 - 1;
    let (a, b) = candidate.split_at(r + 1);
    let scale = candidate.iter().map(|c| c * c).sum::<f64>().sqrt();
    let zero_level = tol.threshold(1.0, 2 * r + 2, 2 * r + 2);

    if a[r].abs() <= zero_level * scale {
        return Err(Rejection::Improper);
    }
    let a_poly = Polynomial::from_real(a);
    for pair in pairs.pairs() {
        if a_poly.eval(pair.sigma).norm() <= zero_level * a_poly.term_magnitude(pair.sigma) {
            return Err(Rejection::UnattainablePoint);
        }
    }
    if r > 0 {
        let s = sylvester(a, b);
        let full = linalg::numerical_rank(&s, tol).map_err(|_| Rejection::CommonFactor)?;
        if full.rank < 2 * r {
            return Err(Rejection::CommonFactor);
        }
    }
    let lead = a[r];
    let p = a[..r].iter().map(|c| c / lead).collect();
    let q = b.iter().map(|c| c / lead).collect();
    SystemParams::new(p, q).map_err(|_| Rejection::Improper)
}

/// Null-space candidates `[a; b]` at order `r`, ordered by increasing
/// singular value.
pub fn candidates(pairs: &PairSet, r: usize, tol: &RankTolerance) -> Result<Vec<DVector<f64>>> {
    let k = interpolation_matrix(pairs, r);
    let sv = linalg::singular_values(&k)?;
    let threshold = tol.threshold_for(&sv, k.nrows(), k.ncols());
    linalg::null_space(&k, threshold)
}

/// Lowest-order real interpolant of a conjugate-closed pair set.
pub fn interpolate_minimal(
    pairs: &PairSet,
    r_max: usize,
    tol: &RankTolerance,
) -> Result<ReducedModel> {
    if !pairs.is_conjugate_closed() {
        return Err(Error::InvalidPairSet(
            "pair set is not conjugate-closed".into(),
        ));
    }
    if pairs.is_empty() {
        let params = SystemParams::new(vec![], vec![0.0])?;
        return Ok(ReducedModel {
            params,
            source_pairs: pairs.clone(),
            max_interp_error: 0.0,
        });
    }
    for r in 0..=r_max {
        for candidate in candidates(pairs, r, tol)? {
            if let Ok(params) = admissible_candidate(candidate.as_slice(), pairs, tol) {
                let report = verify_interpolation(&params, pairs, f64::INFINITY);
                return Ok(ReducedModel {
                    params,
                    source_pairs: pairs.clone(),
                    max_interp_error: report.max_error(),
                });
            }
        }
    }
    Err(Error::OrderBudgetExhausted { r_max })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PairOutcome {
    Error(f64),
    Pole,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub passed: bool,
    pub outcomes: Vec<PairOutcome>,
}

impl VerificationReport {
    /// Largest error over the pairs; infinite if the model has a pole or an
    /// indeterminate value at any of them.
    pub fn max_error(&self) -> f64 {
        self.outcomes
            .iter()
            .map(|o| match o {
                PairOutcome::Error(e) => *e,
                _ => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }
}

/// Checks `|M(σ_j) - M_j| <= tol` for every pair.
pub fn verify_interpolation(
    params: &SystemParams,
    pairs: &PairSet,
    tol: f64,
) -> VerificationReport {
    let outcomes: Vec<PairOutcome> = pairs
        .pairs()
        .iter()
        .map(|pair| match eval_transfer(params, pair.sigma) {
            TransferValue::Value { m } => PairOutcome::Error((m - pair.m).norm()),
            TransferValue::Pole => PairOutcome::Pole,
            TransferValue::Indeterminate => PairOutcome::Indeterminate,
        })
        .collect();
    let passed = outcomes
        .iter()
        .all(|o| matches!(o, PairOutcome::Error(e) if *e <= tol));
    VerificationReport { passed, outcomes }
}
