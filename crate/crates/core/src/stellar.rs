//! The Majorana map between spin-j states and multisets of `2j` points on
//! the unit sphere.
//!
//! A state with amplitudes `C_m` is sent to the polynomial
//!
//! ```text
//! p(z) = sum_r a_r z^(2S - r),   a_r = (-1)^r C_(S-r) / sqrt((2S - r)! r!)
//! ```
//!
//! whose roots, pulled back by the stereographic map `z = tan(theta/2) e^(i phi)`,
//! are the stars. `z = 0` is the north pole `theta = 0`; a vanishing leading
//! coefficient is a root at infinity and lands on the south pole `theta = pi`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factorial::sqrt_factorial_product;
use crate::roots::{self, Roots};
use crate::spin::{HalfInt, SpinState};

/// Modulus under which an amplitude is not used to fix the global phase.
const PHASE_THRESHOLD: f64 = 1e-10;

/// The weights `N_r^{(S)}` of the generalized Majorana polynomial, from the
/// recursion `N_r^{(S)} = sqrt(N_(r-1)^{(S-1/2)}^2 + N_r^{(S-1/2)}^2)` with
/// ones on the boundary, seeded with `[1, 1]` at `S = 1/2`.
pub fn normalization_weights(two_s: HalfInt) -> Result<Vec<f64>> {
    HalfInt::spin(two_s.doubled())?;
    let mut row: Vec<f64> = vec![1.0, 1.0];
    for _ in 1..two_s.doubled() {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(1.0);
        for r in 1..row.len() {
            next.push(row[r - 1].hypot(row[r]));
        }
        next.push(1.0);
        row = next;
    }
    Ok(row)
}

/// Coefficients `a_0 ... a_2S` of a Majorana polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct MajoranaPolynomial {
    two_s: HalfInt,
    coeffs: Vec<Complex64>,
}

impl MajoranaPolynomial {
    pub fn two_s(&self) -> HalfInt {
        self.two_s
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Degree after removing leading zero coefficients, i.e. the number of
    /// finite roots.
    pub fn effective_degree(&self) -> usize {
        self.two_s.doubled() as usize - roots::leading_zeros(&self.coeffs)
    }

    pub fn roots_at_infinity(&self) -> usize {
        roots::leading_zeros(&self.coeffs)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
    }
}

/// Builds the Majorana polynomial of `state`.
pub fn majorana_coefficients(state: &SpinState) -> MajoranaPolynomial {
    let two_s = state.two_j();
    let n = two_s.doubled() as u64;
    let coeffs = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(r, c)| {
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            c * (sign / sqrt_factorial_product(n - r as u64, r as u64))
        })
        .collect();
    MajoranaPolynomial { two_s, coeffs }
}

/// Coefficients `(-1)^r N_r C_(S-r)` of the generalized form, which equal the
/// Majorana coefficients times `sqrt((2S)!)`.
pub fn weighted_coefficients(state: &SpinState) -> Result<Vec<Complex64>> {
    let weights = normalization_weights(state.two_j())?;
    Ok(state
        .amplitudes()
        .iter()
        .zip(weights)
        .enumerate()
        .map(|(r, (c, w))| if r % 2 == 0 { c * w } else { -c * w })
        .collect())
}

pub fn find_roots(poly: &MajoranaPolynomial) -> Result<Roots> {
    roots::find_roots(&poly.coeffs)
}

/// A point on the unit sphere in polar coordinates.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpherePoint {
    pub theta: f64,
    pub phi: f64,
}

impl SpherePoint {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !(0.0..TAU).contains(&phi) {
            return Err(Error::PointOutOfRange { theta, phi });
        }
        Ok(SpherePoint { theta, phi })
    }

    pub fn from_cartesian(v: [f64; 3]) -> Self {
        let [x, y, z] = v;
        let theta = x.hypot(y).atan2(z);
        let phi = if x == 0.0 && y == 0.0 {
            0.0
        } else {
            wrap_phi(y.atan2(x))
        };
        SpherePoint { theta, phi }
    }

    pub fn to_cartesian(self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Great-circle distance, accurate for nearby points.
    pub fn distance(self, other: SpherePoint) -> f64 {
        let a = self.to_cartesian();
        let b = other.to_cartesian();
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        (cross[0].hypot(cross[1]).hypot(cross[2])).atan2(dot)
    }

    /// Rigid rotation by `alpha` about the y-axis.
    pub fn rotate_y(self, alpha: f64) -> Self {
        let [x, y, z] = self.to_cartesian();
        let (s, c) = alpha.sin_cos();
        Self::from_cartesian([c * x + s * z, y, -s * x + c * z])
    }
}

fn wrap_phi(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Inverse stereographic projection, `z = tan(theta/2) e^(i phi)`.
pub fn zeta_to_sphere(zeta: Complex64) -> SpherePoint {
    if zeta.norm() == 0.0 {
        return SpherePoint {
            theta: 0.0,
            phi: 0.0,
        };
    }
    SpherePoint {
        theta: 2.0 * zeta.norm().atan(),
        phi: wrap_phi(zeta.arg()),
    }
}

/// Stereographic projection; `None` stands for the point at infinity.
pub fn sphere_to_zeta(point: SpherePoint) -> Option<Complex64> {
    if point.theta >= PI {
        return None;
    }
    Some(Complex64::from_polar((point.theta / 2.0).tan(), point.phi))
}

/// Majorana stars of a spin-j state: exactly `2j` sphere points, sorted by
/// `(theta, phi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StarSet {
    two_j: HalfInt,
    points: Vec<SpherePoint>,
}

impl StarSet {
    pub fn new(two_j: HalfInt, mut points: Vec<SpherePoint>) -> Result<Self> {
        HalfInt::spin(two_j.doubled())?;
        let expected = two_j.doubled() as usize;
        if points.len() != expected {
            return Err(Error::StarCount {
                two_j: two_j.doubled(),
                expected,
                got: points.len(),
            });
        }
        for p in &points {
            SpherePoint::new(p.theta, p.phi)?;
        }
        sort_points(&mut points);
        Ok(StarSet { two_j, points })
    }

    pub fn two_j(&self) -> HalfInt {
        self.two_j
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    pub fn rotate_y(&self, alpha: f64) -> StarSet {
        let mut points: Vec<_> = self.points.iter().map(|p| p.rotate_y(alpha)).collect();
        sort_points(&mut points);
        StarSet {
            two_j: self.two_j,
            points,
        }
    }
}

fn sort_points(points: &mut [SpherePoint]) {
    points.sort_by(|a, b| a.theta.total_cmp(&b.theta).then(a.phi.total_cmp(&b.phi)));
}

pub fn stars(state: &SpinState) -> Result<StarSet> {
    let poly = majorana_coefficients(state);
    let roots = find_roots(&poly)?;
    let mut points: Vec<SpherePoint> = roots.finite.iter().map(|&z| zeta_to_sphere(z)).collect();
    points.extend(std::iter::repeat_n(
        SpherePoint {
            theta: PI,
            phi: 0.0,
        },
        roots.at_infinity,
    ));
    sort_points(&mut points);
    Ok(StarSet {
        two_j: state.two_j(),
        points,
    })
}

/// Reconstructs the state whose stars are `star_set`, up to global phase.
/// The phase is fixed so the first amplitude above `1e-10` in modulus is
/// real and positive.
///
/// Each star contributes the factor `cos(theta/2) z - sin(theta/2) e^(i phi)`,
/// which is `cos(theta/2) (z - z_k)` for a finite root and a constant for the
/// south pole, so poles lower the degree without a separate code path.
pub fn state_from_stars(star_set: &StarSet) -> Result<SpinState> {
    let two_s = star_set.two_j();
    let n = two_s.doubled() as usize;
    if star_set.points.is_empty() {
        return Err(Error::StarCount {
            two_j: two_s.doubled(),
            expected: n,
            got: 0,
        });
    }
    // highest degree first
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for p in &star_set.points {
        let (s, c) = (p.theta / 2.0).sin_cos();
        let lead = Complex64::new(c, 0.0);
        let tail = -Complex64::from_polar(s, p.phi);
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, a) in coeffs.iter().enumerate() {
            next[k] += a * lead;
            next[k + 1] += a * tail;
        }
        coeffs = next;
    }
    let amplitudes: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(r, a)| {
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            a * (sign * sqrt_factorial_product((n - r) as u64, r as u64))
        })
        .collect();
    let state = SpinState::normalize(two_s, amplitudes)?;
    Ok(fix_phase(state))
}

fn fix_phase(state: SpinState) -> SpinState {
    let Some(pivot) = state
        .amplitudes()
        .iter()
        .find(|c| c.norm() > PHASE_THRESHOLD)
    else {
        return state;
    };
    let rotation = pivot.conj() / pivot.norm();
    let amplitudes = state.amplitudes().iter().map(|c| c * rotation).collect();
    SpinState::normalize(state.two_j(), amplitudes).expect("phase rotation keeps a non-zero vector")
}

/// Pairs two equal-size point multisets so the summed great-circle distance
/// is minimal and returns the largest distance in that pairing.
pub fn match_distance(a: &[SpherePoint], b: &[SpherePoint]) -> Option<f64> {
    let n = a.len();
    if n != b.len() || n > 20 {
        return None;
    }
    let dist: Vec<Vec<f64>> = a
        .iter()
        .map(|p| b.iter().map(|q| p.distance(*q)).collect())
        .collect();
    // dp over subsets of b: (total, max) for the first popcount(mask) points of a
    let full = 1usize << n;
    let mut best = vec![(f64::INFINITY, 0.0f64); full];
    best[0] = (0.0, 0.0);
    for mask in 0..full {
        let (total, worst) = best[mask];
        if !total.is_finite() {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i == n {
            continue;
        }
        for (k, d) in dist[i].iter().enumerate() {
            if mask & (1 << k) == 0 {
                let next = mask | (1 << k);
                let candidate = (total + d, worst.max(*d));
                if candidate.0 < best[next].0 {
                    best[next] = candidate;
                }
            }
        }
    }
    Some(best[full - 1].1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn binomial(n: usize, k: usize) -> f64 {
        // Pascal's triangle, independent of the weight recursion above
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

    #[test]
    fn weights_small_cases() {
        assert_eq!(
            normalization_weights(HalfInt::from_doubled(1)).unwrap(),
            vec![1.0, 1.0]
        );
        let w = normalization_weights(HalfInt::from_doubled(2)).unwrap();
        assert_eq!(w[0], 1.0);
        assert!((w[1] - 2f64.sqrt()).abs() < 1e-15);
        let w = normalization_weights(HalfInt::from_doubled(3)).unwrap();
        assert!((w[1] - 3f64.sqrt()).abs() < 1e-15 && (w[2] - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn weights_square_to_binomials() {
        for two_s in 1..=40 {
            let w = normalization_weights(HalfInt::from_doubled(two_s)).unwrap();
            for (r, x) in w.iter().enumerate() {
                let b = binomial(two_s as usize, r);
                assert!((x * x - b).abs() <= 1e-12 * b, "2S={two_s} r={r}");
            }
        }
    }

    #[test]
    fn coefficients_of_basis_states() {
        let up = SpinState::basis(HalfInt::from_doubled(1), HalfInt::from_doubled(1)).unwrap();
        let p = majorana_coefficients(&up);
        assert_eq!(p.coeffs(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.effective_degree(), 1);

        let zero = SpinState::basis(HalfInt::from_doubled(2), HalfInt::from_doubled(0)).unwrap();
        let p = majorana_coefficients(&zero);
        assert_eq!(p.coeffs(), &[c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.effective_degree(), 1);
        assert_eq!(p.roots_at_infinity(), 1);
        let r = find_roots(&p).unwrap();
        assert_eq!(r.finite, vec![c(0.0, 0.0)]);
        assert_eq!(r.at_infinity, 1);

        let down = SpinState::basis(HalfInt::from_doubled(2), HalfInt::from_doubled(-2)).unwrap();
        let p = majorana_coefficients(&down);
        assert!((p.coeffs()[2] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert_eq!(p.effective_degree(), 0);
        assert_eq!(find_roots(&p).unwrap().at_infinity, 2);
    }

    #[test]
    fn stereographic_examples() {
        assert_eq!(
            zeta_to_sphere(c(0.0, 0.0)),
            SpherePoint {
                theta: 0.0,
                phi: 0.0
            }
        );
        let p = zeta_to_sphere(c(1.0, 0.0));
        assert!((p.theta - FRAC_PI_2).abs() < 1e-15 && p.phi == 0.0);
        let p = zeta_to_sphere(c(0.0, 1.0));
        assert!((p.theta - FRAC_PI_2).abs() < 1e-15 && (p.phi - FRAC_PI_2).abs() < 1e-15);
        let p = zeta_to_sphere(c(-1.0, -1e-300));
        assert!(p.phi < TAU);

        assert_eq!(
            sphere_to_zeta(SpherePoint {
                theta: 0.0,
                phi: 2.0
            }),
            Some(c(0.0, 0.0))
        );
        let z = sphere_to_zeta(SpherePoint {
            theta: FRAC_PI_2,
            phi: 0.0,
        })
        .unwrap();
        assert!((z - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(
            sphere_to_zeta(SpherePoint {
                theta: PI,
                phi: 0.0
            }),
            None
        );
    }

    #[test]
    fn stars_of_simple_states() {
        let up = SpinState::basis(HalfInt::from_doubled(1), HalfInt::from_doubled(1)).unwrap();
        assert_eq!(
            stars(&up).unwrap().points(),
            &[SpherePoint {
                theta: 0.0,
                phi: 0.0
            }]
        );

        let zero = SpinState::basis(HalfInt::from_doubled(2), HalfInt::from_doubled(0)).unwrap();
        assert_eq!(
            stars(&zero).unwrap().points(),
            &[
                SpherePoint {
                    theta: 0.0,
                    phi: 0.0
                },
                SpherePoint {
                    theta: PI,
                    phi: 0.0
                }
            ]
        );

        let plus =
            SpinState::normalize(HalfInt::from_doubled(1), vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let s = stars(&plus).unwrap();
        assert!((s.points()[0].theta - FRAC_PI_2).abs() < 1e-15);
        assert!(s.points()[0].phi.abs() < 1e-15);
    }

    #[test]
    fn extreme_projections_sit_on_the_poles() {
        for two_j in 1..=12 {
            let j = HalfInt::from_doubled(two_j);
            let top = stars(&SpinState::basis(j, j).unwrap()).unwrap();
            assert!(top.points().iter().all(|p| p.theta == 0.0));
            let bottom =
                stars(&SpinState::basis(j, HalfInt::from_doubled(-two_j)).unwrap()).unwrap();
            assert!(bottom.points().iter().all(|p| p.theta == PI));
            assert_eq!(bottom.points().len(), two_j as usize);
        }
    }

    #[test]
    fn reconstruct_simple_states() {
        let one = StarSet::new(
            HalfInt::from_doubled(1),
            vec![SpherePoint {
                theta: 0.0,
                phi: 0.0,
            }],
        )
        .unwrap();
        assert_eq!(
            state_from_stars(&one).unwrap().amplitudes(),
            &[c(1.0, 0.0), c(0.0, 0.0)]
        );

        let two = StarSet::new(
            HalfInt::from_doubled(2),
            vec![
                SpherePoint {
                    theta: PI,
                    phi: 0.0,
                },
                SpherePoint {
                    theta: 0.0,
                    phi: 0.0,
                },
            ],
        )
        .unwrap();
        let s = state_from_stars(&two).unwrap();
        for (a, b) in s.amplitudes().iter().zip([0.0, 1.0, 0.0]) {
            assert!((a - c(b, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn star_set_validation() {
        assert!(matches!(
            StarSet::new(
                HalfInt::from_doubled(2),
                vec![SpherePoint {
                    theta: 0.0,
                    phi: 0.0
                }]
            ),
            Err(Error::StarCount {
                expected: 2,
                got: 1,
                ..
            })
        ));
        assert!(StarSet::new(
            HalfInt::from_doubled(1),
            vec![SpherePoint {
                theta: 4.0,
                phi: 0.0
            }]
        )
        .is_err());
        assert!(StarSet::new(
            HalfInt::from_doubled(1),
            vec![SpherePoint {
                theta: 1.0,
                phi: TAU
            }]
        )
        .is_err());
    }

    #[test]
    fn generalized_form_is_rescaled_majorana_form() {
        for seed in 0..20 {
            let s = SpinState::random(HalfInt::from_doubled(7), seed).unwrap();
            let scale = crate::factorial::factorial(7).sqrt();
            let a = majorana_coefficients(&s);
            let b = weighted_coefficients(&s).unwrap();
            for (x, y) in a.coeffs().iter().zip(&b) {
                assert!((x * scale - y).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn matching_handles_permutations() {
        let pts: Vec<_> = (0..6)
            .map(|k| SpherePoint {
                theta: 0.3 + 0.4 * k as f64,
                phi: 0.5 * k as f64,
            })
            .collect();
        let mut shuffled = pts.clone();
        shuffled.reverse();
        assert_eq!(match_distance(&pts, &shuffled), Some(0.0));
        assert!(match_distance(&pts, &pts[1..]).is_none());
    }

    proptest::proptest! {
        #[test]
        fn sphere_round_trip(theta in 0.0f64..(PI - 1e-6), phi in 0.0f64..TAU) {
            let z = sphere_to_zeta(SpherePoint { theta, phi }).unwrap();
            let back = zeta_to_sphere(z);
            proptest::prop_assert!((back.theta - theta).abs() <= 1e-12);
            if theta > 1e-6 {
                let dphi = (back.phi - phi).abs();
                proptest::prop_assert!(dphi.min(TAU - dphi) <= 1e-12);
            }
        }

        #[test]
        fn star_count_is_two_j(two_j in 1i32..=16, seed in 0u64..1000) {
            let s = SpinState::random(HalfInt::from_doubled(two_j), seed).unwrap();
            proptest::prop_assert_eq!(stars(&s).unwrap().points().len(), two_j as usize);
        }

        #[test]
        fn round_trip_fidelity(two_j in 1i32..=16, seed in 0u64..1000) {
            let s = SpinState::random(HalfInt::from_doubled(two_j), seed).unwrap();
            let back = state_from_stars(&stars(&s).unwrap()).unwrap();
            proptest::prop_assert!(s.fidelity(&back).unwrap() >= 1.0 - 1e-8);
        }
    }
}
