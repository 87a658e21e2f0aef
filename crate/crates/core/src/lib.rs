//! Data informativity for interpolation of discrete-time SISO systems.
//!
//! Given measured input/output samples of an unknown order-`n` difference
//! equation, this crate decides through Hankel-matrix rank tests whether the
//! data pins down the transfer-function value at a complex point `σ`,
//! recovers that value, and fits a minimal real rational interpolant
//! through the recovered `(σ, M)` pairs to obtain a reduced-order model.
//!
//! Module map:
//!
//! - [`signals`]: time series, CSV ingestion, Hankel matrices.
//! - [`systems`]: difference-equation models, transfer values, simulation.
//! - [`linalg`]: SVD-based numerical rank, min-norm solves, null spaces.
//! - [`informativity`]: the rank tests and transfer-value recovery.
//! - [`interpolation`]: minimal rational interpolation and verification.
//! - [`fixture`]: the built-in RL-circuit data set.

pub mod complex_json;
pub mod error;
pub mod fixture;
pub mod informativity;
pub mod interpolation;
pub mod linalg;
pub mod signals;
pub mod systems;

pub use error::{Error, Result};
pub use informativity::{
    build_inclusion_system, gamma, informative_sweep, is_informative, transfer_value_from_data,
    GammaVector, InclusionSystem, InformativityVerdict, RankTriple,
};
pub use interpolation::{
    conjugate_close, interpolate_minimal, verify_interpolation, InterpolationPair, PairSet,
    ReducedModel, VerificationReport,
};
pub use linalg::{numerical_rank, NumericalRank, RankTolerance};
pub use num_complex::Complex64;
pub use signals::{hankel, hankel_trimmed, load_csv, DataSet, TimeSeries};
pub use systems::{
    eval_transfer, explains_data, poly_from_params, simulate, Consistency, Polynomial,
    SystemParams, TransferValue,
};
