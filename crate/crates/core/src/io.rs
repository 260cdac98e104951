//! File formats: JSON state and star files, CSV for series and matrices.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scan::ScanSeries;
use crate::spin::{HalfInt, SpinState};
use crate::stellar::{SpherePoint, StarSet};
use crate::transition::TransitionMatrix;

/// Norm tolerance for state files read without `--normalize`.
pub const FILE_NORM_TOLERANCE: f64 = 1e-9;

/// `{"two_j": 1, "amplitudes": [[re, im], ...]}`, amplitudes ordered `m = +j ... -j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub two_j: i32,
    pub amplitudes: Vec<[f64; 2]>,
}

/// `{"two_j": 2, "points": [{"theta": .., "phi": ..}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarFile {
    pub two_j: i32,
    pub points: Vec<SpherePoint>,
}

impl From<&SpinState> for StateFile {
    fn from(state: &SpinState) -> Self {
        StateFile {
            two_j: state.two_j().doubled(),
            amplitudes: state.amplitudes().iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl From<&StarSet> for StarFile {
    fn from(stars: &StarSet) -> Self {
        StarFile {
            two_j: stars.two_j().doubled(),
            points: stars.points().to_vec(),
        }
    }
}

impl StateFile {
    /// Validates into a state. Without `normalize` the norm must already be
    /// within [`FILE_NORM_TOLERANCE`] of one; the result is rescaled exactly.
    pub fn into_state(self, normalize: bool) -> Result<SpinState> {
        let two_j = HalfInt::spin(self.two_j)?;
        let amplitudes: Vec<Complex64> = self
            .amplitudes
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        let state = SpinState::normalize(two_j, amplitudes.clone())?;
        if !normalize {
            let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > FILE_NORM_TOLERANCE {
                return Err(Error::NotNormalized { norm });
            }
        }
        Ok(state)
    }
}

impl StarFile {
    pub fn into_stars(self) -> Result<StarSet> {
        StarSet::new(HalfInt::spin(self.two_j)?, self.points)
    }
}

pub fn parse_state(text: &str, normalize: bool) -> Result<SpinState> {
    serde_json::from_str::<StateFile>(text)?.into_state(normalize)
}

pub fn parse_stars(text: &str) -> Result<StarSet> {
    serde_json::from_str::<StarFile>(text)?.into_stars()
}

pub fn parse_state_file(path: &Path, normalize: bool) -> Result<SpinState> {
    parse_state(&std::fs::read_to_string(path)?, normalize)
}

pub fn parse_star_file(path: &Path) -> Result<StarSet> {
    parse_stars(&std::fs::read_to_string(path)?)
}

pub fn state_json(state: &SpinState) -> String {
    serde_json::to_string(&StateFile::from(state)).expect("state serializes")
}

pub fn stars_json(stars: &StarSet) -> String {
    serde_json::to_string(&StarFile::from(stars)).expect("stars serialize")
}

/// 17 significant digits, scientific notation, `-0` written as `0`.
pub fn format_number(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

/// `alpha,p` followed by one row per grid point.
pub fn write_series_csv<W: Write>(series: &ScanSeries, mut out: W) -> Result<()> {
    writeln!(out, "alpha,p")?;
    for (a, p) in series.alphas.iter().zip(&series.values) {
        writeln!(out, "{},{}", format_number(*a), format_number(*p))?;
    }
    Ok(())
}

/// Several series sharing one grid; one column per series labelled by `2S`.
pub fn write_family_csv<W: Write>(family: &[ScanSeries], mut out: W) -> Result<()> {
    let Some(first) = family.first() else {
        return Err(Error::InvalidGrid("empty family".into()));
    };
    write!(out, "alpha")?;
    for s in family {
        if s.alphas != first.alphas {
            return Err(Error::InvalidGrid(
                "family series on different grids".into(),
            ));
        }
        write!(out, ",p_two_s_{}", s.two_j.doubled())?;
    }
    writeln!(out)?;
    for (i, a) in first.alphas.iter().enumerate() {
        write!(out, "{}", format_number(*a))?;
        for s in family {
            write!(out, ",{}", format_number(s.values[i]))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Header `m_row\m_col,<m>...`; each row starts with its `m'` label.
pub fn write_matrix_csv<W: Write>(matrix: &TransitionMatrix, mut out: W) -> Result<()> {
    write!(out, "m_row\\m_col")?;
    for m in matrix.two_j.projections() {
        write!(out, ",{m}")?;
    }
    writeln!(out)?;
    for (mp, row) in matrix.two_j.projections().zip(&matrix.rows) {
        write!(out, "{mp}")?;
        for p in row {
            write!(out, ",{}", format_number(*p))?;
        }
        writeln!(out)?;
    }
    Ok(())
}
