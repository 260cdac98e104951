//! Numeric derivation of the polynomial structure of the matching
//! probability for the families `m = m' = S - k`:
//!
//! ```text
//! P(alpha) = q_k cos^(4(S-k))(alpha/2) Psi(cos alpha)^2,   deg Psi = k
//! ```
//!
//! The prefactor is fixed at `q_k = 4^-k`. Any positive `q` admits a fit, so
//! the hypothesis shows up in whether `Psi` comes out with the expected
//! (integer) coefficients rather than in the residual.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spin::HalfInt;
use crate::transition::{probability, TransitionSpec};

/// Largest admissible reconstruction or perfect-square mismatch.
pub const FIT_TOLERANCE: f64 = 1e-9;
/// Fit nodes are Chebyshev points in `[-NODE_SPAN, NODE_SPAN]` of `x = cos alpha`.
pub const NODE_SPAN: f64 = 0.95;
pub const VALIDATION_POINTS: usize = 181;
/// Validation covers `alpha` in `[0, VALIDATION_MAX_ALPHA]`. Near `alpha = pi`
/// the factor `cos^(4(S-k))(alpha/2)` has a zero (or, for `k > S`, a pole) and
/// the pointwise comparison loses all relative precision.
pub const VALIDATION_MAX_ALPHA: f64 = 0.9 * PI;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsiFit {
    pub two_s: HalfInt,
    pub k: usize,
    pub q: f64,
    /// Coefficients of `Psi` in `x = cos alpha`, constant term first.
    pub psi_coeffs: Vec<f64>,
    pub residual: f64,
}

impl PsiFit {
    fn envelope_power(&self) -> i32 {
        envelope_power(self.two_s, self.k)
    }

    pub fn psi(&self, x: f64) -> f64 {
        self.psi_coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// `q cos^(4(S-k))(alpha/2) Psi(cos alpha)^2`.
    pub fn reconstruct(&self, alpha: f64) -> f64 {
        self.q * (alpha / 2.0).cos().powi(self.envelope_power()) * self.psi(alpha.cos()).powi(2)
    }
}

fn envelope_power(two_s: HalfInt, k: usize) -> i32 {
    2 * two_s.doubled() - 4 * k as i32
}

fn chebyshev_nodes(count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| NODE_SPAN * (PI * (i as f64 + 0.5) / count as f64).cos())
        .collect()
}

/// Least-degree interpolant through `(xs, ys)`, constant term first.
fn interpolate(xs: &[f64], ys: &[f64]) -> Option<Vec<f64>> {
    let n = xs.len();
    let vandermonde = DMatrix::from_fn(n, n, |i, p| xs[i].powi(p as i32));
    let rhs = DVector::from_column_slice(ys);
    vandermonde
        .lu()
        .solve(&rhs)
        .map(|v| v.iter().copied().collect())
}

/// Square root of a degree-`2k` polynomial by matching coefficients from the
/// leading term down. Returns the root with positive leading coefficient and
/// the relative mismatch on the unmatched lower coefficients.
fn polynomial_sqrt(coeffs: &[f64]) -> Option<(Vec<f64>, f64)> {
    let k = (coeffs.len() - 1) / 2;
    let lead = coeffs[2 * k];
    if lead <= 0.0 {
        return None;
    }
    let mut root = vec![0.0; k + 1];
    root[k] = lead.sqrt();
    for t in (0..k).rev() {
        let cross: f64 = (t + 1..k).map(|a| root[a] * root[k + t - a]).sum();
        root[t] = (coeffs[k + t] - cross) / (2.0 * root[k]);
    }
    let scale = coeffs.iter().map(|c| c.abs()).fold(1.0, f64::max);
    let mismatch = (0..k)
        .map(|i| {
            let square: f64 = (0..=i).map(|a| root[a] * root[i - a]).sum();
            (square - coeffs[i]).abs()
        })
        .fold(0.0, f64::max)
        / scale;
    Some((root, mismatch))
}

/// Fits `P(alpha) / cos^(4(S-k))(alpha/2)` for `m = m' = S - k` by a
/// degree-`2k` polynomial in `cos alpha` and factors it as `4^-k Psi^2`.
pub fn derive_psi_coefficients(two_s: HalfInt, k: usize) -> Result<PsiFit> {
    let two_s = HalfInt::spin(two_s.doubled())?;
    if k > two_s.doubled() as usize {
        return Err(Error::InvalidOrder {
            two_s: two_s.doubled(),
            k: k as i32,
        });
    }
    let two_m = two_s.doubled() - 2 * k as i32;
    let base = TransitionSpec::new(two_s.doubled(), two_m, two_m, 0.0)?;
    let power = envelope_power(two_s, k);

    let xs = chebyshev_nodes(2 * k + 1);
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let alpha = x.acos();
            probability(&base.with_alpha(alpha)) / (alpha / 2.0).cos().powi(power)
        })
        .collect();
    let raw_fit = interpolate(&xs, &ys).ok_or(Error::NotPerfectSquare {
        k,
        mismatch: f64::INFINITY,
        raw_fit: Vec::new(),
    })?;

    let q = 4f64.powi(-(k as i32));
    let scaled: Vec<f64> = raw_fit.iter().map(|c| c / q).collect();
    let (psi_coeffs, mismatch) = match polynomial_sqrt(&scaled) {
        Some(found) => found,
        None => {
            return Err(Error::NotPerfectSquare {
                k,
                mismatch: f64::INFINITY,
                raw_fit,
            })
        }
    };
    if mismatch > FIT_TOLERANCE {
        return Err(Error::NotPerfectSquare {
            k,
            mismatch,
            raw_fit,
        });
    }

    let mut fit = PsiFit {
        two_s,
        k,
        q,
        psi_coeffs,
        residual: 0.0,
    };
    fit.residual = (0..VALIDATION_POINTS)
        .map(|i| {
            let alpha = VALIDATION_MAX_ALPHA * i as f64 / (VALIDATION_POINTS - 1) as f64;
            (fit.reconstruct(alpha) - probability(&base.with_alpha(alpha))).abs()
        })
        .fold(0.0, f64::max);
    if fit.residual > FIT_TOLERANCE {
        return Err(Error::NotPerfectSquare {
            k,
            mismatch: fit.residual,
            raw_fit,
        });
    }
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn spin_half_ground_branch() {
        let fit = derive_psi_coefficients(HalfInt::from_doubled(1), 0).unwrap();
        assert_eq!(fit.q, 1.0);
        assert!(close(&fit.psi_coeffs, &[1.0], 1e-12));
    }

    #[test]
    fn spin_one_middle_projection() {
        // cos^2 alpha = (1/4) (2 cos alpha)^2
        let fit = derive_psi_coefficients(HalfInt::from_doubled(2), 1).unwrap();
        assert_eq!(fit.q, 0.25);
        assert!(
            close(&fit.psi_coeffs, &[0.0, 2.0], 1e-10),
            "{:?}",
            fit.psi_coeffs
        );
    }

    #[test]
    fn spin_three_halves_middle_projection() {
        // 3 cos^2(a/2) - 2 = (3 cos a - 1) / 2
        let fit = derive_psi_coefficients(HalfInt::from_doubled(3), 1).unwrap();
        assert_eq!(fit.q, 0.25);
        assert!(
            close(&fit.psi_coeffs, &[-1.0, 3.0], 1e-10),
            "{:?}",
            fit.psi_coeffs
        );
        assert!(fit.residual <= FIT_TOLERANCE);
    }

    #[test]
    fn order_beyond_two_s_is_rejected() {
        assert!(matches!(
            derive_psi_coefficients(HalfInt::from_doubled(2), 3),
            Err(Error::InvalidOrder { .. })
        ));
    }

    #[test]
    fn sqrt_detects_non_squares() {
        let (root, mismatch) = polynomial_sqrt(&[1.0, 2.0, 1.0]).unwrap();
        assert!(close(&root, &[1.0, 1.0], 1e-15) && mismatch == 0.0);
        let (_, mismatch) = polynomial_sqrt(&[3.0, 2.0, 1.0]).unwrap();
        assert!(mismatch > 0.1);
        assert!(polynomial_sqrt(&[1.0, 0.0, -1.0]).is_none());
    }

    #[test]
    fn all_small_families_fit() {
        for two_s in 1..=8 {
            for k in 0..=two_s.min(4) as usize {
                let fit = derive_psi_coefficients(HalfInt::from_doubled(two_s), k)
                    .unwrap_or_else(|e| panic!("2S={two_s} k={k}: {e}"));
                assert!(fit.residual <= FIT_TOLERANCE);
                assert_eq!(fit.psi_coeffs.len(), k + 1);
            }
        }
    }
}
