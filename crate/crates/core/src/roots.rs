//! Complex polynomial roots.
//!
//! Coefficients are given highest degree first, `a_0 z^n + a_1 z^(n-1) + ... + a_n`,
//! matching the order of the Majorana polynomial. Leading coefficients that
//! vanish relative to the largest one are counted as roots at infinity.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// `|a| <= LEADING_ZERO_THRESHOLD * max|a|` marks a leading coefficient as zero.
pub const LEADING_ZERO_THRESHOLD: f64 = 1e-13;
/// Relative step size at which an Aberth iterate counts as converged.
pub const RELATIVE_TOLERANCE: f64 = 1e-13;
pub const MAX_ITERATIONS: usize = 200;
/// Distance under which two roots are treated as one repeated root.
pub const CLUSTER_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootMethod {
    /// Degree 0 or 1 after stripping; no iteration needed.
    Direct,
    Aberth {
        iterations: usize,
    },
    Companion,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Roots {
    pub finite: Vec<Complex64>,
    pub at_infinity: usize,
    pub method: RootMethod,
}

impl Roots {
    /// Groups finite roots lying within `tol` of each other, returning each
    /// cluster's mean and its size.
    pub fn clusters(&self, tol: f64) -> Vec<(Complex64, usize)> {
        let mut groups: Vec<Vec<Complex64>> = Vec::new();
        for &z in &self.finite {
            match groups
                .iter_mut()
                .find(|g| g.iter().any(|w| (w - z).norm() <= tol))
            {
                Some(g) => g.push(z),
                None => groups.push(vec![z]),
            }
        }
        groups
            .into_iter()
            .map(|g| {
                let n = g.len();
                (g.iter().sum::<Complex64>() / n as f64, n)
            })
            .collect()
    }
}

/// Number of leading coefficients that are zero relative to the largest.
pub fn leading_zeros(coeffs: &[Complex64]) -> usize {
    let max = coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max);
    coeffs
        .iter()
        .take_while(|a| a.norm() <= LEADING_ZERO_THRESHOLD * max)
        .count()
}

/// Finds all roots of `coeffs` (highest degree first).
pub fn find_roots(coeffs: &[Complex64]) -> Result<Roots> {
    if coeffs
        .iter()
        .any(|a| !a.re.is_finite() || !a.im.is_finite())
    {
        return Err(Error::NonFinite);
    }
    if coeffs.iter().all(|a| a.norm() == 0.0) {
        return Err(Error::ZeroVector);
    }
    let at_infinity = leading_zeros(coeffs);
    let reduced = &coeffs[at_infinity..];
    // exact zeros at the low end are roots at the origin
    let at_origin = reduced.iter().rev().take_while(|a| a.norm() == 0.0).count();
    let reduced = &reduced[..reduced.len() - at_origin];
    let mut finite = vec![Complex64::new(0.0, 0.0); at_origin];

    let degree = reduced.len() - 1;
    let method = match degree {
        0 => RootMethod::Direct,
        1 => {
            finite.push(-reduced[1] / reduced[0]);
            RootMethod::Direct
        }
        _ => match aberth(reduced) {
            Ok((found, iterations)) => {
                finite.extend(found);
                RootMethod::Aberth { iterations }
            }
            Err(partial) => match companion_roots(reduced) {
                Some(found) => {
                    finite.extend(found);
                    RootMethod::Companion
                }
                None => {
                    finite.extend(partial);
                    return Err(Error::NonConvergence {
                        roots: finite,
                        at_infinity,
                    });
                }
            },
        },
    };
    Ok(Roots {
        finite,
        at_infinity,
        method,
    })
}

/// Evaluates `p(z)` and `p'(z)` by Horner's rule together with the running
/// bound `sum |a_k| |z|^k` used for the rounding-error test.
fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let r = z.norm();
    let mut p = coeffs[0];
    let mut dp = Complex64::new(0.0, 0.0);
    let mut bound = coeffs[0].norm();
    for a in &coeffs[1..] {
        dp = dp * z + p;
        p = p * z + a;
        bound = bound * r + a.norm();
    }
    (p, dp, bound)
}

fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    // geometric mean of the root moduli
    let radius = (coeffs[n].norm() / coeffs[0].norm()).powf(1.0 / n as f64);
    let radius = if radius.is_finite() && radius > 0.0 {
        radius
    } else {
        1.0
    };
    (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect()
}

/// Aberth–Ehrlich iteration with per-root freezing. On failure returns the
/// last iterates.
fn aberth(coeffs: &[Complex64]) -> std::result::Result<(Vec<Complex64>, usize), Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let noise = 4.0 * n as f64 * f64::EPSILON;
    let mut z = initial_guesses(coeffs);
    let mut done = vec![false; n];

    for iteration in 1..=MAX_ITERATIONS {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp, bound) = horner(coeffs, z[i]);
            if p.norm() <= noise * bound {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&k| k != i)
                .map(|k| (z[i] - z[k]).inv())
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                // p' vanished or two iterates collided; nudge and retry
                let nudge = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += nudge;
                continue;
            }
            z[i] -= step;
            if step.norm() <= RELATIVE_TOLERANCE * z[i].norm() {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok((z, iteration));
        }
    }
    Err(z)
}

/// Eigenvalues of the companion matrix of `coeffs` via complex Schur form.
pub(crate) fn companion_roots(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[0];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        m[(0, k)] = -coeffs[k + 1] / lead;
    }
    for k in 1..n {
        m[(k, k - 1)] = Complex64::new(1.0, 0.0);
    }
    let schur = Schur::try_new(m, f64::EPSILON, 30 * n.max(10))?;
    let (_, t) = schur.unpack();
    let roots: Vec<Complex64> = (0..n).map(|k| t[(k, k)]).collect();
    roots
        .iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
        .then_some(roots)
}
