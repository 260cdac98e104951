//! Factorials for the Wigner-type sums. Values up to 20! are exact in `u64`
//! and convert to `f64` with a single rounding; above that we go through
//! log space.

const EXACT_LIMIT: u64 = 20;

fn exact(n: u64) -> u64 {
    (1..=n).product()
}

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    if n <= EXACT_LIMIT {
        return (exact(n) as f64).ln();
    }
    let tail: f64 = (EXACT_LIMIT + 1..=n).map(|k| (k as f64).ln()).sum();
    (exact(EXACT_LIMIT) as f64).ln() + tail
}

/// `n!` as a float, exact for `n <= 20`.
pub fn factorial(n: u64) -> f64 {
    if n <= EXACT_LIMIT {
        exact(n) as f64
    } else {
        ln_factorial(n).exp()
    }
}

/// `sqrt(a! * b!)`, computed in log space once either argument leaves the
/// exact range.
pub fn sqrt_factorial_product(a: u64, b: u64) -> f64 {
    if a <= EXACT_LIMIT && b <= EXACT_LIMIT {
        (factorial(a) * factorial(b)).sqrt()
    } else {
        (0.5 * (ln_factorial(a) + ln_factorial(b))).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values_are_exact() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
        assert_eq!(factorial(20), 2_432_902_008_176_640_000.0);
    }

    #[test]
    fn log_space_continues_smoothly() {
        let direct = factorial(20) * 21.0 * 22.0;
        let rel = (factorial(22) - direct).abs() / direct;
        assert!(rel < 1e-14, "rel = {rel}");
        let rel = (sqrt_factorial_product(30, 2) - (ln_factorial(30).exp() * 2.0).sqrt()).abs()
            / sqrt_factorial_product(30, 2);
        assert!(rel < 1e-13);
    }
}
