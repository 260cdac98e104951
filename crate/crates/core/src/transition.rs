//! Matching probability of two oriented spin-j states whose quantization
//! axes differ by the angle `alpha`.
//!
//! The probability is the squared Wigner small-d element
//! `|<j, m'| exp(-i alpha J_y) |j, m>|^2`. It is evaluated three ways:
//!
//! * [`probability`]: the finite sum in `cos(alpha/2)` and `sin(alpha/2)`,
//!   valid for every `alpha`;
//! * [`f1`] and [`f2`]: the literal prefactor/tangent-sum split, which is
//!   singular at `alpha = pi`;
//! * [`probability_oracle`]: the matrix exponential of `J_y` built from
//!   ladder coefficients and diagonalized numerically.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factorial::{factorial, ln_factorial};
use crate::spin::HalfInt;

/// Quantum numbers and relative angle of a pair of oriented states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionSpec {
    pub two_j: HalfInt,
    pub two_m: HalfInt,
    pub two_mp: HalfInt,
    pub alpha: f64,
}

impl TransitionSpec {
    pub fn new(two_j: i32, two_m: i32, two_mp: i32, alpha: f64) -> Result<Self> {
        let j = HalfInt::spin(two_j)?;
        for m in [two_m, two_mp] {
            if let Some(err) = Error::projection(j, HalfInt::from_doubled(m)) {
                return Err(err);
            }
        }
        if !alpha.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(TransitionSpec {
            two_j: j,
            two_m: HalfInt::from_doubled(two_m),
            two_mp: HalfInt::from_doubled(two_mp),
            alpha,
        })
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        TransitionSpec { alpha, ..self }
    }

    fn numbers(&self) -> Numbers {
        let (j, m, mp) = (
            self.two_j.doubled(),
            self.two_m.doubled(),
            self.two_mp.doubled(),
        );
        Numbers {
            j_plus_m: ((j + m) / 2) as u64,
            j_minus_m: ((j - m) / 2) as u64,
            j_plus_mp: ((j + mp) / 2) as u64,
            j_minus_mp: ((j - mp) / 2) as u64,
            m_minus_mp: (m - mp) / 2,
        }
    }
}

/// The integer combinations `j +- m`, `j +- m'` and `m - m'`.
#[derive(Clone, Copy)]
struct Numbers {
    j_plus_m: u64,
    j_minus_m: u64,
    j_plus_mp: u64,
    j_minus_mp: u64,
    m_minus_mp: i32,
}

impl Numbers {
    /// Summation range where every factorial argument is non-negative.
    fn range(&self) -> std::ops::RangeInclusive<u64> {
        let lo = self.m_minus_mp.max(0) as u64;
        let hi = self.j_plus_m.min(self.j_minus_mp);
        lo..=hi
    }

    /// The four factorial arguments in the denominator of term `r`.
    fn denominator(&self, r: u64) -> [u64; 4] {
        [
            r,
            (r as i64 - self.m_minus_mp as i64) as u64,
            self.j_plus_m - r,
            self.j_minus_mp - r,
        ]
    }

    fn numerator(&self) -> [u64; 4] {
        [
            self.j_plus_m,
            self.j_minus_m,
            self.j_plus_mp,
            self.j_minus_mp,
        ]
    }

    fn small(&self) -> bool {
        self.numerator().iter().all(|&n| n <= 20)
    }
}

fn sign(r: u64) -> f64 {
    if r.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(cos(alpha/2))^(4j) (j+m)! (j-m)! (j+m')! (j-m')!`.
pub fn f1(spec: &TransitionSpec) -> f64 {
    let c = (spec.alpha / 2.0).cos();
    if c == 0.0 {
        return 0.0;
    }
    let n = spec.numbers();
    let log_fact: f64 = n.numerator().iter().map(|&k| ln_factorial(k)).sum();
    (2.0 * f64::from(spec.two_j.doubled()) * c.abs().ln() + log_fact).exp()
}

/// `sum_r (-1)^r tan(alpha/2)^(2r - m + m') / (r! (r-m+m')! (j+m-r)! (j-m'-r)!)`,
/// defined only for `alpha` in `(0, pi)`.
pub fn f2(spec: &TransitionSpec) -> Result<f64> {
    if !(spec.alpha > 0.0 && spec.alpha < PI) {
        return Err(Error::AlphaOutOfDomain(spec.alpha));
    }
    let t = (spec.alpha / 2.0).tan();
    let n = spec.numbers();
    Ok(n.range()
        .map(|r| {
            let power = 2 * r as i32 - n.m_minus_mp;
            let denom: f64 = n.denominator(r).iter().map(|&k| factorial(k)).product();
            sign(r) * t.powi(power) / denom
        })
        .sum())
}

fn weight(n: &Numbers, r: u64) -> f64 {
    if n.small() {
        let num: f64 = n.numerator().iter().map(|&k| factorial(k)).product();
        let den: f64 = n.denominator(r).iter().map(|&k| factorial(k)).product();
        num.sqrt() / den
    } else {
        let num: f64 = n.numerator().iter().map(|&k| ln_factorial(k)).sum();
        let den: f64 = n.denominator(r).iter().map(|&k| ln_factorial(k)).sum();
        (0.5 * num - den).exp()
    }
}

/// Rotation amplitude from the cos/sin power sum. Agrees with
/// `d^j_{m'm}(alpha)` up to an overall sign.
pub fn amplitude(spec: &TransitionSpec) -> f64 {
    let (s, c) = (spec.alpha / 2.0).sin_cos();
    let n = spec.numbers();
    let two_j = spec.two_j.doubled();
    n.range()
        .map(|r| {
            let cos_power = two_j - 2 * r as i32 + n.m_minus_mp;
            let sin_power = 2 * r as i32 - n.m_minus_mp;
            sign(r) * weight(&n, r) * c.powi(cos_power) * s.powi(sin_power)
        })
        .sum()
}

/// Matching probability, stable for any `alpha`.
pub fn probability(spec: &TransitionSpec) -> f64 {
    amplitude(spec).powi(2)
}

/// The literal product `f1 * f2^2`, for `alpha` in `(0, pi)`.
pub fn probability_literal(spec: &TransitionSpec) -> Result<f64> {
    Ok(f1(spec) * f2(spec)?.powi(2))
}

/// `J_y` in the `m = +j ... -j` basis.
pub fn jy_matrix(two_j: HalfInt) -> DMatrix<Complex64> {
    let dim = two_j.multiplicity();
    let j = two_j.value();
    let mut jy = DMatrix::<Complex64>::zeros(dim, dim);
    for r in 1..dim {
        // column r holds m = j - r; row r - 1 holds m + 1
        let m = j - r as f64;
        let ladder = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
        jy[(r - 1, r)] = Complex64::new(0.0, -ladder / 2.0);
        jy[(r, r - 1)] = Complex64::new(0.0, ladder / 2.0);
    }
    jy
}

/// `exp(-i alpha J_y)` by eigendecomposition of the Hermitian `J_y`.
pub fn rotation_oracle(two_j: HalfInt, alpha: f64) -> Result<DMatrix<Complex64>> {
    HalfInt::spin(two_j.doubled())?;
    let eig = jy_matrix(two_j).symmetric_eigen();
    let vectors = &eig.eigenvectors;
    let phases = DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|l| Complex64::from_polar(1.0, -alpha * l)),
    );
    Ok(vectors * phases * vectors.adjoint())
}

/// `|<j, m'| exp(-i alpha J_y) |j, m>|^2` from [`rotation_oracle`].
pub fn probability_oracle(spec: &TransitionSpec) -> Result<f64> {
    let u = rotation_oracle(spec.two_j, spec.alpha)?;
    let row = spec.two_j.index_of(spec.two_mp)?;
    let col = spec.two_j.index_of(spec.two_m)?;
    Ok(u[(row, col)].norm_sqr())
}

/// Textbook closed forms for `j <= 3/2` with `m = m'`; `None` elsewhere.
pub fn closed_form(spec: &TransitionSpec) -> Option<f64> {
    if spec.two_m != spec.two_mp {
        return None;
    }
    let c2 = (spec.alpha / 2.0).cos().powi(2);
    match (spec.two_j.doubled(), spec.two_m.doubled().abs()) {
        (1, 1) => Some(c2),
        (2, 2) => Some(c2.powi(2)),
        (2, 0) => Some(spec.alpha.cos().powi(2)),
        (3, 3) => Some(c2.powi(3)),
        (3, 1) => Some(c2 * (3.0 * c2 - 2.0).powi(2)),
        _ => None,
    }
}

/// All matching probabilities for one `j` and `alpha`; row `m'`, column `m`,
/// both ordered `+j ... -j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    pub two_j: HalfInt,
    pub alpha: f64,
    pub rows: Vec<Vec<f64>>,
}

impl TransitionMatrix {
    pub fn row_sums(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.rows.len())
            .map(|k| self.rows.iter().map(|r| r[k]).sum())
            .collect()
    }
}

pub fn transition_matrix(two_j: HalfInt, alpha: f64) -> Result<TransitionMatrix> {
    let j = HalfInt::spin(two_j.doubled())?;
    let rows = j
        .projections()
        .map(|mp| {
            j.projections()
                .map(|m| {
                    TransitionSpec::new(j.doubled(), m.doubled(), mp.doubled(), alpha)
                        .map(|s| probability(&s))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransitionMatrix {
        two_j: j,
        alpha,
        rows,
    })
}
