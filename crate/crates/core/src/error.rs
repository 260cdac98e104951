use num_complex::Complex64;
use thiserror::Error;

use crate::spin::HalfInt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("spin magnitude must be positive, got 2j = {0}")]
    InvalidSpin(i32),

    #[error("projection 2m = {two_m} is outside [-{two_j}, {two_j}]")]
    ProjectionOutOfRange { two_j: i32, two_m: i32 },

    #[error("parity mismatch: 2m = {two_m} and 2j = {two_j} must both be even or both odd")]
    ParityMismatch { two_j: i32, two_m: i32 },

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("expected {expected} amplitudes for 2j = {two_j}, got {got}")]
    LengthMismatch {
        two_j: i32,
        expected: usize,
        got: usize,
    },

    #[error("dimension mismatch: 2j = {left} vs 2j = {right}")]
    DimensionMismatch { left: i32, right: i32 },

    #[error("state norm is {norm}, expected 1 (pass --normalize to rescale)")]
    NotNormalized { norm: f64 },

    #[error("non-finite value in input")]
    NonFinite,

    #[error("sphere point out of range: theta = {theta}, phi = {phi}")]
    PointOutOfRange { theta: f64, phi: f64 },

    #[error("expected {expected} star points for 2j = {two_j}, got {got}")]
    StarCount {
        two_j: i32,
        expected: usize,
        got: usize,
    },

    #[error("alpha = {0} is outside (0, pi); use probability for the stabilized form")]
    AlphaOutOfDomain(f64),

    #[error("root finder did not converge ({} finite roots, {at_infinity} at infinity)", roots.len())]
    NonConvergence {
        roots: Vec<Complex64>,
        at_infinity: usize,
    },

    #[error("k = {k} out of range for 2S = {two_s}")]
    InvalidOrder { two_s: i32, k: i32 },

    #[error("sampled polynomial is not q * (degree-{k} polynomial)^2 (mismatch {mismatch:e}); raw fit {raw_fit:?}")]
    NotPerfectSquare {
        k: usize,
        mismatch: f64,
        raw_fit: Vec<f64>,
    },

    #[error("invalid scan grid: {0}")]
    InvalidGrid(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn projection(two_j: HalfInt, two_m: HalfInt) -> Option<Error> {
        let (j, m) = (two_j.doubled(), two_m.doubled());
        if (j - m).rem_euclid(2) != 0 {
            Some(Error::ParityMismatch { two_j: j, two_m: m })
        } else if m.abs() > j {
            Some(Error::ProjectionOutOfRange { two_j: j, two_m: m })
        } else {
            None
        }
    }
}
