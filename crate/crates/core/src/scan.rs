//! Probability series over a grid of angles, for single `(j, m, m')`
//! families and for whole families of spins at a fixed offset `k = S - m`.

use crate::error::{Error, Result};
use crate::spin::HalfInt;
use crate::transition::{probability, TransitionSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSeries {
    pub two_j: HalfInt,
    pub two_m: HalfInt,
    pub two_mp: HalfInt,
    pub alphas: Vec<f64>,
    pub values: Vec<f64>,
}

/// Uniform grid of `steps` points including both endpoints.
pub fn uniform_grid(alpha_min: f64, alpha_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 steps, got {steps}"
        )));
    }
    if !alpha_min.is_finite() || !alpha_max.is_finite() || alpha_min >= alpha_max {
        return Err(Error::InvalidGrid(format!(
            "need alpha_min < alpha_max, got [{alpha_min}, {alpha_max}]"
        )));
    }
    let last = (steps - 1) as f64;
    let mut grid: Vec<f64> = (0..steps)
        .map(|i| alpha_min + (alpha_max - alpha_min) * (i as f64 / last))
        .collect();
    grid[steps - 1] = alpha_max;
    Ok(grid)
}

pub fn scan_alpha(
    two_j: i32,
    two_m: i32,
    two_mp: i32,
    alpha_min: f64,
    alpha_max: f64,
    steps: usize,
) -> Result<ScanSeries> {
    let spec = TransitionSpec::new(two_j, two_m, two_mp, alpha_min)?;
    let alphas = uniform_grid(alpha_min, alpha_max, steps)?;
    Ok(series_on(spec, alphas))
}

fn series_on(spec: TransitionSpec, alphas: Vec<f64>) -> ScanSeries {
    let values = alphas
        .iter()
        .map(|&a| probability(&spec.with_alpha(a)))
        .collect();
    ScanSeries {
        two_j: spec.two_j,
        two_m: spec.two_m,
        two_mp: spec.two_mp,
        alphas,
        values,
    }
}

/// One series per spin with `m = m' = S - k`, all on the same grid.
pub fn family_scan(
    two_s_list: &[i32],
    k: usize,
    alpha_min: f64,
    alpha_max: f64,
    steps: usize,
) -> Result<Vec<ScanSeries>> {
    let alphas = uniform_grid(alpha_min, alpha_max, steps)?;
    two_s_list
        .iter()
        .map(|&two_s| {
            let two_m = two_s - 2 * k as i32;
            if two_m < 0 {
                return Err(Error::InvalidOrder { two_s, k: k as i32 });
            }
            let spec = TransitionSpec::new(two_s, two_m, two_m, alpha_min)?;
            Ok(series_on(spec, alphas.clone()))
        })
        .collect()
}

/// The `k = 0` envelope `P(S) = cos^(4S)(alpha/2)` at one angle, ordered by
/// increasing `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    pub alpha: f64,
    pub two_s: Vec<i32>,
    pub values: Vec<f64>,
}

impl Envelope {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] < w[0])
    }
}

pub fn envelope_check(two_s_list: &[i32], alpha: f64) -> Result<Envelope> {
    if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
        return Err(Error::AlphaOutOfDomain(alpha));
    }
    let mut two_s: Vec<i32> = two_s_list.to_vec();
    two_s.sort_unstable();
    two_s.dedup();
    let values = two_s
        .iter()
        .map(|&s| TransitionSpec::new(s, s, s, alpha).map(|spec| probability(&spec)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Envelope {
        alpha,
        two_s,
        values,
    })
}
