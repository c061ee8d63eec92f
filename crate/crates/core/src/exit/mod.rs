//! EXIT chart tooling: MI measurement, J-function, analytic check-node
//! curves, scattered-chart recording and check-profile matching.

pub mod cnd;
pub mod curve;
pub mod histogram;
pub mod mi;
pub mod scatter;

use thiserror::Error;

use crate::sim::SimError;

pub use cnd::{
    cnd_curve, cnd_curve_single, fraction_grid, match_profile, rank_profiles, CndProfile, CndTable,
    RankedProfile, TunnelSpec,
};
pub use curve::{extract_vnd_estimate, Curve, RidgeEstimator, DEFAULT_MIN_COUNT};
pub use histogram::{ExitHistogram, ExitRole};
pub use mi::{empirical_mi, j_function, j_inverse};
pub use scatter::{record_scattered, ExitTrajectory, ScatterConfig, ScatterResult, VndTap};

#[derive(Debug, Error)]
pub enum ExitError {
    #[error("empty input")]
    EmptyInput,
    #[error("{llrs} LLRs but {bits} bits")]
    LengthMismatch { llrs: usize, bits: usize },
    #[error("sigma must be finite and nonnegative, got {0}")]
    InvalidSigma(f64),
    #[error("mutual information {0} outside the valid range")]
    InvalidMi(f64),
    #[error("histogram needs at least one bin, got {0}")]
    InvalidBins(usize),
    #[error("histograms differ in role or bin count")]
    IncompatibleHistograms,
    #[error("no histogram column holds at least {min_count} points")]
    SparseHistogram { min_count: u64 },
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("scattered EXIT recording needs an LDPC code")]
    NoLdpcCode,
    #[error("CSV: {0}")]
    Csv(String),
    #[error(transparent)]
    Sim(#[from] SimError),
}
