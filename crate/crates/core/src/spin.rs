//! Exact half-integer quantum numbers and pure spin-j state vectors.
//!
//! Amplitudes are stored with index `r` corresponding to `m = j - r`, so the
//! first entry is the `m = +j` component.

use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `sum |C_r|^2 = 1` for every constructed state.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// A half-integer stored as twice its value, so `j = 3/2` is `HalfInt(3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_doubled(doubled: i32) -> Self {
        HalfInt(doubled)
    }

    /// A spin magnitude `j`; requires `2j >= 1`.
    pub fn spin(doubled: i32) -> Result<Self> {
        if doubled < 1 {
            return Err(Error::InvalidSpin(doubled));
        }
        Ok(HalfInt(doubled))
    }

    pub const fn doubled(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// `2j + 1`, the dimension of the spin-j multiplet.
    pub fn multiplicity(self) -> usize {
        self.0 as usize + 1
    }

    /// Projections `m = +j, j-1, ..., -j` in amplitude order.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let j = self.0;
        (0..=j).map(move |r| HalfInt(j - 2 * r))
    }

    /// Amplitude index of projection `m` within this multiplet.
    pub fn index_of(self, m: HalfInt) -> Result<usize> {
        if let Some(err) = Error::projection(self, m) {
            return Err(err);
        }
        Ok(((self.0 - m.0) / 2) as usize)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// A normalized pure state of a spin-j system.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinState {
    two_j: HalfInt,
    amplitudes: Vec<Complex64>,
}

fn norm(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

impl SpinState {
    /// Wraps amplitudes that are already normalized within [`NORM_TOLERANCE`].
    pub fn new(two_j: HalfInt, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_shape(two_j, &amplitudes)?;
        let n = norm(&amplitudes);
        if (n * n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(SpinState { two_j, amplitudes })
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalize(two_j: HalfInt, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_shape(two_j, &amplitudes)?;
        // pre-scale by the largest modulus so the norm cannot overflow
        let largest = amplitudes.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if largest == 0.0 {
            return Err(Error::ZeroVector);
        }
        let scaled: Vec<Complex64> = amplitudes.into_iter().map(|c| c / largest).collect();
        let n = norm(&scaled);
        let amplitudes = scaled.into_iter().map(|c| c / n).collect();
        Ok(SpinState { two_j, amplitudes })
    }

    fn check_shape(two_j: HalfInt, amplitudes: &[Complex64]) -> Result<()> {
        HalfInt::spin(two_j.doubled())?;
        let expected = two_j.multiplicity();
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch {
                two_j: two_j.doubled(),
                expected,
                got: amplitudes.len(),
            });
        }
        if amplitudes
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// The basis vector `|j, m>`.
    pub fn basis(two_j: HalfInt, two_m: HalfInt) -> Result<Self> {
        HalfInt::spin(two_j.doubled())?;
        let index = two_j.index_of(two_m)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); two_j.multiplicity()];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(SpinState { two_j, amplitudes })
    }

    /// Draws a state from a seeded standard complex normal and normalizes
    /// it, which is uniform on the unit sphere of the state space.
    pub fn random(two_j: HalfInt, seed: u64) -> Result<Self> {
        HalfInt::spin(two_j.doubled())?;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let amplitudes: Vec<Complex64> = (0..two_j.multiplicity())
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        Self::normalize(two_j, amplitudes)
    }

    pub fn two_j(&self) -> HalfInt {
        self.two_j
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude `C_m`.
    pub fn amplitude(&self, two_m: HalfInt) -> Result<Complex64> {
        Ok(self.amplitudes[self.two_j.index_of(two_m)?])
    }

    /// `<self|other> = sum conj(a_r) b_r`.
    pub fn inner(&self, other: &SpinState) -> Result<Complex64> {
        if self.two_j != other.two_j {
            return Err(Error::DimensionMismatch {
                left: self.two_j.doubled(),
                right: other.two_j.doubled(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|`.
    pub fn fidelity(&self, other: &SpinState) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_vectors() {
        let up = SpinState::basis(HalfInt(1), HalfInt(1)).unwrap();
        assert_eq!(up.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        let zero = SpinState::basis(HalfInt(2), HalfInt(0)).unwrap();
        assert_eq!(zero.amplitudes(), &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn basis_rejects_bad_projection() {
        assert!(matches!(
            SpinState::basis(HalfInt(2), HalfInt(3)),
            Err(Error::ParityMismatch { .. })
        ));
        assert!(matches!(
            SpinState::basis(HalfInt(2), HalfInt(4)),
            Err(Error::ProjectionOutOfRange { .. })
        ));
        assert!(matches!(
            SpinState::basis(HalfInt(0), HalfInt(0)),
            Err(Error::InvalidSpin(0))
        ));
    }

    #[test]
    fn normalize_examples() {
        let s = SpinState::normalize(HalfInt(1), vec![c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        let s = SpinState::normalize(HalfInt(1), vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for a in s.amplitudes() {
            assert!((a - c(h, 0.0)).norm() < 1e-15);
        }
        assert!((s.norm() - 1.0).abs() < 1e-14);
        assert!(matches!(
            SpinState::normalize(HalfInt(1), vec![c(0.0, 0.0); 2]),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn normalize_survives_extreme_magnitudes() {
        let s = SpinState::normalize(HalfInt(1), vec![c(1e300, 0.0), c(1e300, 0.0)]).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
        let s = SpinState::normalize(HalfInt(1), vec![c(0.0, 1e-320), c(0.0, 0.0)]).unwrap();
        assert!((s.amplitudes()[0] - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn new_requires_unit_norm() {
        assert!(SpinState::new(HalfInt(1), vec![c(2.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(matches!(
            SpinState::new(HalfInt(2), vec![c(1.0, 0.0)]),
            Err(Error::LengthMismatch {
                expected: 3,
                got: 1,
                ..
            })
        ));
    }

    #[test]
    fn inner_products() {
        let up = SpinState::basis(HalfInt(1), HalfInt(1)).unwrap();
        let down = SpinState::basis(HalfInt(1), HalfInt(-1)).unwrap();
        assert_eq!(up.inner(&down).unwrap(), c(0.0, 0.0));
        let plus = SpinState::normalize(HalfInt(1), vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let ip = plus.inner(&up).unwrap();
        assert!((ip - c(std::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        let other = SpinState::basis(HalfInt(2), HalfInt(0)).unwrap();
        assert!(matches!(
            up.inner(&other),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_states_are_reproducible() {
        let a = SpinState::random(HalfInt(5), 42).unwrap();
        let b = SpinState::random(HalfInt(5), 42).unwrap();
        assert_eq!(a.amplitudes().len(), 6);
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < NORM_TOLERANCE);
    }

    #[test]
    fn distinct_seeds_give_distinct_states() {
        for seed in 0..100u64 {
            let a = SpinState::random(HalfInt(3), seed).unwrap();
            let b = SpinState::random(HalfInt(3), seed + 1000).unwrap();
            assert!(a.fidelity(&b).unwrap() < 1.0 - 1e-6);
        }
    }

    #[test]
    fn basis_orthogonality() {
        for two_j in 1..=10 {
            let j = HalfInt(two_j);
            let basis: Vec<_> = j
                .projections()
                .map(|m| SpinState::basis(j, m).unwrap())
                .collect();
            for (i, a) in basis.iter().enumerate() {
                for (k, b) in basis.iter().enumerate() {
                    let ip = a.inner(b).unwrap().norm();
                    if i == k {
                        assert_eq!(ip, 1.0);
                    } else {
                        assert!(ip <= 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(HalfInt(3).to_string(), "3/2");
        assert_eq!(HalfInt(-1).to_string(), "-1/2");
        assert_eq!(HalfInt(4).to_string(), "2");
    }

    proptest::proptest! {
        #[test]
        fn self_inner_product_is_one(two_j in 1i32..=20, seed in 0u64..10_000) {
            let s = SpinState::random(HalfInt(two_j), seed).unwrap();
            let ip = s.inner(&s).unwrap();
            proptest::prop_assert!(ip.im.abs() <= 1e-15);
            proptest::prop_assert!((ip.re - 1.0).abs() <= NORM_TOLERANCE);
        }
    }
}
