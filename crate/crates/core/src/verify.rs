//! The invariant suite run by `majorana verify`. Each check compares two
//! independent routes, or an implementation against a known identity, and
//! reports its worst deviation next to the tolerance it was held to.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::Result;
use crate::psi::{derive_psi_coefficients, FIT_TOLERANCE};
use crate::roots;
use crate::scan::{envelope_check, scan_alpha};
use crate::spin::{HalfInt, SpinState};
use crate::stellar::{
    self, majorana_coefficients, normalization_weights, weighted_coefficients, zeta_to_sphere,
    SpherePoint,
};
use crate::transition::{
    closed_form, probability, probability_literal, rotation_oracle, transition_matrix,
    TransitionSpec,
};

pub const DEFAULT_SEED: u64 = 20240101;
pub const DEFAULT_MAX_TWO_J: i32 = 12;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Upper bound on `2j` for the oracle-equivalence, stochasticity and
    /// localization checks. The other checks run at fixed sizes.
    pub max_two_j: i32,
    pub seed: u64,
    /// Optional tolerance floor. It can only loosen the built-in tolerances.
    pub tol: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_two_j: DEFAULT_MAX_TWO_J,
            seed: DEFAULT_SEED,
            tol: None,
        }
    }
}

impl VerifyConfig {
    fn tolerance(&self, default: f64) -> f64 {
        self.tol.map_or(default, |t| t.max(default))
    }

    fn seed_for(&self, check: u64, index: u64) -> u64 {
        self.seed.wrapping_add(check << 32).wrapping_add(index)
    }
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] check {:>2} {}: worst {:.3e} (tol {:.1e}){}{}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.worst,
            self.tolerance,
            if self.detail.is_empty() { "" } else { "; " },
            self.detail
        )
    }
}

/// Running maximum of a deviation with the case that produced it.
struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Worst {
            value: 0.0,
            at: String::new(),
        }
    }

    fn record(&mut self, value: f64, at: impl FnOnce() -> String) {
        // NaN must register as a failure
        if value > self.value || value.is_nan() {
            self.value = value;
            self.at = at();
        }
    }

    fn report(self, id: u8, name: &'static str, tolerance: f64) -> CheckReport {
        CheckReport {
            id,
            name,
            passed: self.value <= tolerance,
            worst: self.value,
            tolerance,
            detail: if self.at.is_empty() {
                String::new()
            } else {
                format!("worst at {}", self.at)
            },
        }
    }
}

fn failed(id: u8, name: &'static str, tolerance: f64, err: impl fmt::Display) -> CheckReport {
    CheckReport {
        id,
        name,
        passed: false,
        worst: f64::INFINITY,
        tolerance,
        detail: err.to_string(),
    }
}

fn grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn pairs(two_j: i32) -> impl Iterator<Item = (i32, i32)> {
    let j = HalfInt::from_doubled(two_j);
    j.projections()
        .flat_map(move |m| j.projections().map(move |mp| (m.doubled(), mp.doubled())))
}

/// The `(2j, 2m)` families with closed forms, `m = m' >= 0`. Each is also
/// checked at `m = m' < 0`.
pub const CLOSED_FORM_CASES: [(i32, i32); 5] = [(1, 1), (2, 2), (2, 0), (3, 3), (3, 1)];

pub fn check_closed_forms(config: &VerifyConfig) -> Result<CheckReport> {
    let tol = config.tolerance(1e-12);
    let mut worst = Worst::new();
    let signed = CLOSED_FORM_CASES
        .iter()
        .flat_map(|&(j, m)| [(j, m), (j, -m)]);
    for (two_j, two_m) in signed {
        for alpha in grid(1001, 0.0, TAU) {
            let spec = TransitionSpec::new(two_j, two_m, two_m, alpha)?;
            let Some(closed) = closed_form(&spec) else {
                return Ok(failed(
                    1,
                    "closed forms",
                    tol,
                    format!("no closed form for 2j={two_j} 2m={two_m}"),
                ));
            };
            let d = (closed - probability(&spec)).abs();
            worst.record(d, || format!("2j={two_j} 2m={two_m} alpha={alpha:.4}"));
        }
    }
    Ok(worst.report(1, "closed forms", tol))
}

pub fn check_oracle(config: &VerifyConfig) -> Result<CheckReport> {
    let tol = config.tolerance(1e-10);
    let mut worst = Worst::new();
    for two_j in 1..=config.max_two_j {
        let j = HalfInt::spin(two_j)?;
        for alpha in grid(181, 0.0, TAU) {
            let u = rotation_oracle(j, alpha)?;
            for (m, mp) in pairs(two_j) {
                let spec = TransitionSpec::new(two_j, m, mp, alpha)?;
                let oracle = u[(
                    j.index_of(HalfInt::from_doubled(mp))?,
                    j.index_of(HalfInt::from_doubled(m))?,
                )]
                    .norm_sqr();
                let d = (probability(&spec) - oracle).abs();
                worst.record(d, || format!("2j={two_j} 2m={m} 2m'={mp} alpha={alpha:.4}"));
            }
        }
    }
    Ok(worst.report(2, "rotation oracle", tol))
}

pub fn check_literal(config: &VerifyConfig) -> Result<CheckReport> {
    let tol = config.tolerance(1e-12);
    let mut worst = Worst::new();
    let n = 181;
    let alphas: Vec<f64> = (0..n)
        .map(|i| 0.01 + (PI - 0.02) * (i as f64 + 0.5) / n as f64)
        .collect();
    for two_j in 1..=8 {
        for (m, mp) in pairs(two_j) {
            for &alpha in &alphas {
                let spec = TransitionSpec::new(two_j, m, mp, alpha)?;
                let d = (probability_literal(&spec)? - probability(&spec)).abs();
                worst.record(d, || format!("2j={two_j} 2m={m} 2m'={mp} alpha={alpha:.4}"));
            }
        }
    }
    Ok(worst.report(3, "literal F1*F2^2", tol))
}

/// `binomial(n, k)` from Pascal's triangle in integers.
pub fn pascal_binomial(n: usize, k: usize) -> f64 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row[k] as f64
}

fn root_points(coeffs: &[Complex64]) -> Result<(Vec<SpherePoint>, usize)> {
    let r = roots::find_roots(coeffs)?;
    Ok((
        r.finite.iter().map(|&z| zeta_to_sphere(z)).collect(),
        r.at_infinity,
    ))
}

pub fn check_weights(config: &VerifyConfig) -> Result<CheckReport> {
    let tol_weights = config.tolerance(1e-12);
    let tol_roots = config.tolerance(1e-9);
    let mut weights = Worst::new();
    for two_s in 1..=40 {
        let w = normalization_weights(HalfInt::spin(two_s)?)?;
        for (r, x) in w.iter().enumerate() {
            let b = pascal_binomial(two_s as usize, r);
            weights.record((x * x - b).abs() / b, || format!("2S={two_s} r={r}"));
        }
    }
    let mut roots = Worst::new();
    for i in 0..50u64 {
        let two_j = 1 + (i % 10) as i32;
        let state = SpinState::random(HalfInt::spin(two_j)?, config.seed_for(4, i))?;
        let (a, inf_a) = root_points(majorana_coefficients(&state).coeffs())?;
        let (b, inf_b) = root_points(&weighted_coefficients(&state)?)?;
        let d = if inf_a != inf_b {
            f64::INFINITY
        } else {
            stellar::match_distance(&a, &b).unwrap_or(f64::INFINITY)
        };
        roots.record(d, || format!("2j={two_j} sample {i}"));
    }
    let passed = weights.value <= tol_weights && roots.value <= tol_roots;
    Ok(CheckReport {
        id: 4,
        name: "weight recursion and conventions",
        passed,
        worst: weights.value.max(roots.value),
        tolerance: tol_weights.max(tol_roots),
        detail: format!(
            "binomial rel {:.3e} (tol {:.0e}); root multiset {:.3e} (tol {:.0e})",
            weights.value, tol_weights, roots.value, tol_roots
        ),
    })
}

pub fn check_round_trip(config: &VerifyConfig) -> Result<CheckReport> {
    let tol = config.tolerance(1e-8);
    let mut worst = Worst::new();
    for two_j in 1..=16 {
        for i in 0..100u64 {
            let state = SpinState::random(HalfInt::spin(two_j)?, config.seed_for(5, i))?;
            let back = stellar::state_from_stars(&stellar::stars(&state)?)?;
            let deficit = 1.0 - state.fidelity(&back)?;
            worst.record(deficit, || format!("2j={two_j} sample {i}"));
        }
    }
    Ok(worst.report(5, "stellar round trip (1 - fidelity)", tol))
}

/// `exp(-i alpha J_y) |state>`.
pub fn rotate_state(state: &SpinState, alpha: f64) -> Result<SpinState> {
    let u = rotation_oracle(state.two_j(), alpha)?;
    let v = &u * DVector::from_column_slice(state.amplitudes());
    SpinState::normalize(state.two_j(), v.iter().copied().collect())
}

pub fn check_covariance(config: &VerifyConfig) -> Result<CheckReport> {
    let tol = config.tolerance(1e-6);
    let mut worst = Worst::new();
    for two_j in 1..=8 {
        for &alpha in &[0.3, 1.0, 2.5] {
            for i in 0..20u64 {
                let state = SpinState::random(HalfInt::spin(two_j)?, config.seed_for(6, i))?;
                let rigid = stellar::stars(&state)?.rotate_y(alpha);
                let rotated = stellar::stars(&rotate_state(&state, alpha)?)?;
                let d = stellar::match_distance(rigid.points(), rotated.points())
                    .unwrap_or(f64::INFINITY);
                worst.record(d, || format!("2j={two_j} alpha={alpha} sample {i}"));
            }
        }
    }
    Ok(worst.report(6, "SU(2) covariance", tol))
}

pub fn check_stochastic(config: &VerifyConfig) -> Result<CheckReport> {
    let tol = config.tolerance(1e-10);
    let mut worst = Worst::new();
    for two_j in 1..=config.max_two_j {
        for alpha in grid(19, 0.0, TAU) {
            let t = transition_matrix(HalfInt::spin(two_j)?, alpha)?;
            for s in t.row_sums().into_iter().chain(t.column_sums()) {
                worst.record((s - 1.0).abs(), || format!("2j={two_j} alpha={alpha:.4}"));
            }
        }
    }
    Ok(worst.report(7, "doubly stochastic matrix", tol))
}

pub fn check_psi(config: &VerifyConfig) -> Result<CheckReport> {
    let tol = config.tolerance(FIT_TOLERANCE);
    let mut worst = Worst::new();
    for two_s in 1..=8 {
        for k in 0..=two_s.min(4) as usize {
            match derive_psi_coefficients(HalfInt::spin(two_s)?, k) {
                Ok(fit) => worst.record(fit.residual, || format!("2S={two_s} k={k}")),
                Err(e) => {
                    return Ok(failed(
                        8,
                        "psi factorization",
                        tol,
                        format!("2S={two_s} k={k}: {e}"),
                    ))
                }
            }
        }
    }
    // S = 3/2, k = 1 must be proportional to 3 cos(alpha) - 1
    let fit = derive_psi_coefficients(HalfInt::spin(3)?, 1)?;
    let ratio = fit.psi_coeffs[0] / fit.psi_coeffs[1];
    worst.record((ratio + 1.0 / 3.0).abs(), || "2S=3 k=1 shape".into());
    Ok(worst.report(8, "psi factorization", tol))
}

pub fn check_envelope(config: &VerifyConfig) -> Result<CheckReport> {
    let tol = config.tolerance(1e-12);
    let family: Vec<i32> = (1..=16).collect();
    for &alpha in &[0.3, FRAC_PI_2, 2.5] {
        let env = envelope_check(&family, alpha)?;
        if !env.is_strictly_decreasing() {
            return Ok(failed(
                9,
                "envelope and localization",
                tol,
                format!("not decreasing at alpha={alpha}"),
            ));
        }
    }
    let mut worst = Worst::new();
    let env = envelope_check(&family, FRAC_PI_2)?;
    for (two_s, p) in env.two_s.iter().zip(&env.values) {
        worst.record((p - 0.5f64.powi(*two_s)).abs(), || {
            format!("envelope 2S={two_s}")
        });
    }
    for two_j in 1..=config.max_two_j {
        for m in HalfInt::spin(two_j)?.projections() {
            let s = scan_alpha(two_j, m.doubled(), m.doubled(), 0.0, TAU, 2)?;
            for (a, p) in s.alphas.iter().zip(&s.values) {
                worst.record((p - 1.0).abs(), || {
                    format!("2j={two_j} 2m={} alpha={a:.4}", m.doubled())
                });
            }
        }
    }
    Ok(worst.report(9, "envelope and localization", tol))
}

pub type Check = fn(&VerifyConfig) -> Result<CheckReport>;

pub const CHECKS: [(u8, &str, Check); 9] = [
    (1, "closed forms", check_closed_forms),
    (2, "rotation oracle", check_oracle),
    (3, "literal F1*F2^2", check_literal),
    (4, "weight recursion and conventions", check_weights),
    (5, "stellar round trip", check_round_trip),
    (6, "SU(2) covariance", check_covariance),
    (7, "doubly stochastic matrix", check_stochastic),
    (8, "psi factorization", check_psi),
    (9, "envelope and localization", check_envelope),
];

/// Runs every check. Errors inside a check become failed reports.
pub fn run_all(config: &VerifyConfig) -> Vec<CheckReport> {
    CHECKS
        .iter()
        .map(|&(id, name, check)| check(config).unwrap_or_else(|e| failed(id, name, f64::NAN, e)))
        .collect()
}
