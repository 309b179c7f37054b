//! Geometry of the coefficient space `R^N`.
//!
//! A set of N observables linear in momentum and position is fixed by two
//! vectors `a, b ∈ R^N`: observable j has the phase-space row `(a_j, b_j)`.
//! All commutation structure reduces to the antisymmetric matrix of signed
//! parallelogram areas `A_jk = a_j b_k - a_k b_j`, and every uncertainty
//! bound depends on the single number `|a∧b|`, the area of the parallelogram
//! spanned by `a` and `b` in coefficient space.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the three algebraically equal incompatibility routes.
pub const ROUTE_AGREEMENT_TOL: f64 = 1e-12;

/// The two coefficient vectors defining N observables `a_j p + b_j q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PairRepr", into = "PairRepr")]
pub struct CoefficientPair {
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PairRepr {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TryFrom<PairRepr> for CoefficientPair {
    type Error = Error;
    fn try_from(r: PairRepr) -> Result<Self> {
        CoefficientPair::new(r.a, r.b)
    }
}

impl From<CoefficientPair> for PairRepr {
    fn from(p: CoefficientPair) -> Self {
        PairRepr { a: p.a, b: p.b }
    }
}

impl CoefficientPair {
    /// Builds a pair, requiring equal lengths >= 2 and finite entries.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() || a.len() < 2 {
            return Err(Error::BadPairShape {
                a_len: a.len(),
                b_len: b.len(),
            });
        }
        if a.iter().chain(b.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteCoefficients);
        }
        Ok(Self { a, b })
    }

    /// Unit-length rows at the given phase-space angles: row j is
    /// `(cos θ_j, sin θ_j)`.
    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        let a = angles.iter().map(|t| t.cos()).collect();
        let b = angles.iter().map(|t| t.sin()).collect();
        Self::new(a, b)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Phase-space row `(a_j, b_j)` of observable j.
    pub fn row(&self, j: usize) -> (f64, f64) {
        (self.a[j], self.b[j])
    }

    pub fn norm_a_sq(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum()
    }

    pub fn norm_b_sq(&self) -> f64 {
        self.b.iter().map(|x| x * x).sum()
    }

    pub fn dot(&self) -> f64 {
        self.a.iter().zip(&self.b).map(|(x, y)| x * y).sum()
    }

    /// Scales both coefficient vectors by `s`; the incompatibility scales
    /// by `s^2`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            a: self.a.iter().map(|x| s * x).collect(),
            b: self.b.iter().map(|x| s * x).collect(),
        }
    }

    /// Scales each phase-space row `(a_j, b_j)` by its own factor. Scaling
    /// every row by `√λ` multiplies the incompatibility by `λ`, which is the
    /// effect of rescaling all observables by a common factor.
    pub fn row_scaled(&self, factors: &[f64]) -> Result<Self> {
        if factors.len() != self.n() {
            return Err(Error::BadRowScaleLength);
        }
        let a = self.a.iter().zip(factors).map(|(x, c)| x * c).collect();
        let b = self.b.iter().zip(factors).map(|(x, c)| x * c).collect();
        Self::new(a, b)
    }
}

/// Antisymmetric matrix of pairwise signed areas `A_jk = a_j b_k - a_k b_j`.
///
/// Entries are filled from the upper triangle and mirrored with a sign flip,
/// so `A = -A^T` holds exactly, not merely up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl AntisymmetricMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, j: usize, k: usize) -> f64 {
        self.entries[j * self.n + k]
    }

    /// Rows as nested vectors (row-major), e.g. for serialization.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|j| self.entries[j * self.n..(j + 1) * self.n].to_vec())
            .collect()
    }

    /// Squared Frobenius norm `Tr(AᵀA)`.
    pub fn frobenius_sq(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum()
    }

    /// Sum of squared entries strictly above the diagonal.
    pub fn upper_triangle_sq(&self) -> f64 {
        let mut s = 0.0;
        for j in 0..self.n {
            for k in (j + 1)..self.n {
                let v = self.entry(j, k);
                s += v * v;
            }
        }
        s
    }
}

/// Pairwise commutator areas of the observables defined by `pair`.
pub fn commutator_matrix(pair: &CoefficientPair) -> AntisymmetricMatrix {
    let n = pair.n();
    let mut entries = vec![0.0; n * n];
    for j in 0..n {
        for k in (j + 1)..n {
            let v = pair.a[j] * pair.b[k] - pair.a[k] * pair.b[j];
            entries[j * n + k] = v;
            entries[k * n + j] = -v;
        }
    }
    AntisymmetricMatrix { n, entries }
}

/// Degree of incompatibility `|a∧b| = sqrt(|a|²|b|² - (a·b)²)`.
///
/// Debug builds assert that the Lagrange form agrees with the pairwise-area
/// sum and with the Frobenius norm of the commutator matrix.
pub fn incompatibility(pair: &CoefficientPair) -> f64 {
    let (lagrange, pairwise, frobenius) = incompatibility_routes(pair);
    debug_assert!(
        routes_agree(lagrange, pairwise, frobenius, pair),
        "incompatibility routes disagree: lagrange={lagrange}, pairwise={pairwise}, frobenius={frobenius}"
    );
    lagrange
}

fn routes_agree(lagrange: f64, pairwise: f64, frobenius: f64, pair: &CoefficientPair) -> bool {
    // Cancellation in |a|²|b|² - (a·b)² is bounded by eps * |a|²|b|², so the
    // comparison scale for the squared values is the Gram product.
    let scale = (pair.norm_a_sq() * pair.norm_b_sq()).max(1.0);
    let tol = ROUTE_AGREEMENT_TOL * scale;
    let (l2, p2, f2) = (lagrange * lagrange, pairwise * pairwise, frobenius * frobenius);
    (l2 - p2).abs() <= tol && (l2 - f2).abs() <= tol && (p2 - f2).abs() <= tol
}

/// All three equivalent incompatibility computations:
/// `(Lagrange, pairwise-area sum, Frobenius)`.
pub fn incompatibility_routes(pair: &CoefficientPair) -> (f64, f64, f64) {
    let gram = pair.norm_a_sq() * pair.norm_b_sq() - pair.dot() * pair.dot();
    let lagrange = gram.max(0.0).sqrt();

    let mut pairwise_sq = 0.0;
    for j in 0..pair.n() {
        for k in 0..j {
            let area = pair.a[j] * pair.b[k] - pair.a[k] * pair.b[j];
            pairwise_sq += area * area;
        }
    }
    let pairwise = pairwise_sq.sqrt();

    let frobenius = (0.5 * commutator_matrix(pair).frobenius_sq()).sqrt();
    (lagrange, pairwise, frobenius)
}

/// Regular polygon of N phase-space rows on a circle of radius R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolygonSpec {
    n: usize,
    radius: f64,
}

impl PolygonSpec {
    pub fn new(n: usize, radius: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::PolygonTooSmall(n));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::BadRadius(radius));
        }
        Ok(Self { n, radius })
    }

    /// Polygon with the canonical circumradius `1/sqrt(sin(2π/N))`, which
    /// makes every adjacent pair of observables canonical.
    pub fn canonical(n: usize) -> Result<Self> {
        Self::new(n, canonical_circumradius(n)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Vertex angle `φ_j = 2π(j-1)/N` (zero-based `j`).
    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n as f64
    }

    pub fn angles(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.angle(j)).collect()
    }

    /// Geometric area of the polygon in the phase-space plane,
    /// `N R² sin(2π/N) / 2`. At the canonical radius this is exactly `N/2`,
    /// i.e. N adjacent triangles of area 1/2 each.
    pub fn phase_space_area(&self) -> f64 {
        0.5 * self.n as f64 * self.radius * self.radius * (TAU / self.n as f64).sin()
    }

    /// Signed area of the parallelogram spanned by two adjacent vertices,
    /// `R² sin(2π/N)`; equal to 1 at the canonical radius.
    pub fn adjacent_area(&self) -> f64 {
        self.radius * self.radius * (TAU / self.n as f64).sin()
    }
}

/// Circumradius making adjacent polygon observables canonical pairs
/// (`A_{j,j+1} = 1`). Only defined for N >= 3, where `sin(2π/N) > 0`.
pub fn canonical_circumradius(n: usize) -> Result<f64> {
    if n <= 2 {
        return Err(Error::NoCanonicalRadius(n));
    }
    Ok(1.0 / (TAU / n as f64).sin().sqrt())
}

/// Coefficient pair of a regular polygon: `a_j = R cos φ_j`, `b_j = R sin φ_j`.
///
/// The result satisfies `|a|² = |b|² = N R²/2` and `a·b = 0`, hence its
/// incompatibility is `N R²/2`. Note that N = 2 places the two rows
/// antipodally (angles 0 and π), a degenerate collinear arrangement with zero
/// incompatibility; the canonical momentum/position pair is the separate
/// arrangement with angles {0, π/2}.
pub fn regular_polygon(spec: &PolygonSpec) -> CoefficientPair {
    let r = spec.radius;
    let a = (0..spec.n).map(|j| r * spec.angle(j).cos()).collect();
    let b = (0..spec.n).map(|j| r * spec.angle(j).sin()).collect();
    CoefficientPair { a, b }
}

/// Squared incompatibility of unit-length rows at the given angles,
/// `Inc² = Σ_{j>k} sin²(θ_j - θ_k)`.
pub fn incompatibility_objective(angles: &[f64]) -> f64 {
    let mut s = 0.0;
    for j in 0..angles.len() {
        for k in 0..j {
            let d = (angles[j] - angles[k]).sin();
            s += d * d;
        }
    }
    s
}

/// Outcome of the maximal-incompatibility search.
#[derive(Debug, Clone, Serialize)]
pub struct MaximizationResult {
    /// Best angles found; the first angle is pinned to 0 to quotient the
    /// global phase-space rotation.
    pub angles: Vec<f64>,
    /// Incompatibility at the best angles (`sqrt` of the objective).
    pub value: f64,
    /// Theoretical bound N/2 for unit-length rows.
    pub bound: f64,
    /// `bound - value`; nonnegative up to rounding.
    pub gap: f64,
    /// Whether the search reached the bound within `1e-6`.
    pub converged: bool,
    pub restarts: usize,
}

/// Multi-start ascent of `Inc²` over unit-circle arrangements of N rows.
///
/// Restarts run in parallel; per-restart seeds are derived from `seed`, so
/// the result is deterministic for a given `(seed, restarts)`.
pub fn maximize_incompatibility(n: usize, seed: u64, restarts: usize) -> Result<MaximizationResult> {
    if n < 2 {
        return Err(Error::BadPairShape { a_len: n, b_len: n });
    }
    let restarts = restarts.max(1);
    let mut seeder = ChaCha8Rng::seed_from_u64(seed);
    let restart_seeds: Vec<u64> = (0..restarts).map(|_| seeder.gen()).collect();

    let best = restart_seeds
        .into_par_iter()
        .enumerate()
        .map(|(idx, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let mut angles: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * TAU).collect();
            angles[0] = 0.0;
            let objective = ascend(&mut angles);
            (idx, angles, objective)
        })
        .reduce_with(|x, y| {
            // Deterministic tie-break on the restart index.
            if y.2 > x.2 || (y.2 == x.2 && y.0 < x.0) {
                y
            } else {
                x
            }
        })
        .expect("at least one restart");

    let (_, angles, objective) = best;
    let value = objective.sqrt();
    let bound = n as f64 / 2.0;
    Ok(MaximizationResult {
        angles,
        value,
        bound,
        gap: bound - value,
        converged: value >= bound - 1e-6,
        restarts,
    })
}

/// Gradient ascent with a multiplicative step adaptation; `angles[0]` is held
/// at 0. Returns the final objective value.
fn ascend(angles: &mut [f64]) -> f64 {
    let n = angles.len();
    let mut value = incompatibility_objective(angles);
    let mut step = 0.1;
    let mut grad = vec![0.0; n];
    for _ in 0..20_000 {
        for j in 1..n {
            grad[j] = (0..n)
                .filter(|&k| k != j)
                .map(|k| (2.0 * (angles[j] - angles[k])).sin())
                .sum();
        }
        let gmax = grad[1..].iter().fold(0.0_f64, |m, g| m.max(g.abs()));
        if gmax < 1e-13 {
            break;
        }
        let mut improved = false;
        while step > 1e-16 {
            let trial: Vec<f64> = angles
                .iter()
                .zip(&grad)
                .map(|(t, g)| (t + step * g).rem_euclid(TAU))
                .collect();
            let trial_value = incompatibility_objective(&trial);
            if trial_value > value {
                angles.copy_from_slice(&trial);
                value = trial_value;
                step *= 1.3;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    angles[0] = 0.0;
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn commutator_matrix_of_canonical_pq() {
        let pair = CoefficientPair::new(vec![1.0, 0.0], vec![0.0, 1.0]).unwrap();
        let m = commutator_matrix(&pair);
        assert_eq!(m.rows(), vec![vec![0.0, 1.0], vec![-1.0, 0.0]]);
    }

    #[test]
    fn commutator_matrix_of_canonical_pentagon_has_unit_adjacent_areas() {
        let spec = PolygonSpec::canonical(5).unwrap();
        let pair = regular_polygon(&spec);
        let m = commutator_matrix(&pair);
        for j in 0..5 {
            assert_relative_eq!(m.entry(j, (j + 1) % 5), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn commutator_matrix_of_collinear_pair_vanishes() {
        let pair = CoefficientPair::new(vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]).unwrap();
        let m = commutator_matrix(&pair);
        assert!(m.rows().iter().flatten().all(|&x| x == 0.0));
        assert_eq!(incompatibility(&pair), 0.0);
    }

    #[test]
    fn incompatibility_of_unit_square() {
        let pair = CoefficientPair::new(vec![1.0, 0.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(incompatibility(&pair), 1.0);
    }

    #[test]
    fn incompatibility_of_unit_circle_heptagon_is_n_over_two() {
        let pair = regular_polygon(&PolygonSpec::new(7, 1.0).unwrap());
        assert_relative_eq!(incompatibility(&pair), 3.5, epsilon = 1e-12);
    }

    #[test]
    fn incompatibility_of_canonical_pentagon_matches_polygon_formula() {
        // N R² / 2 with R² = 1/sin(2π/5); the *geometric* pentagon area is
        // the different number N/2 = 5/2.
        let spec = PolygonSpec::canonical(5).unwrap();
        let pair = regular_polygon(&spec);
        let expected = 2.5 / (TAU / 5.0).sin();
        assert_relative_eq!(incompatibility(&pair), expected, epsilon = 1e-12);
        assert_relative_eq!(spec.phase_space_area(), 2.5, epsilon = 1e-14);
    }

    #[test]
    fn incompatibility_matches_pairwise_area_oracle_in_r6() {
        // Brute-force double loop over all row pairs, written independently
        // of the library routes.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a: Vec<f64> = (0..6).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
            let b: Vec<f64> = (0..6).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
            let mut oracle = 0.0;
            for j in 0..6 {
                for k in 0..j {
                    oracle += (a[j] * b[k] - a[k] * b[j]).powi(2);
                }
            }
            let pair = CoefficientPair::new(a, b).unwrap();
            assert_relative_eq!(
                incompatibility(&pair).powi(2),
                oracle,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn regular_polygon_n2_is_degenerate_antipodal() {
        let pair = regular_polygon(&PolygonSpec::new(2, 1.0).unwrap());
        assert_relative_eq!(pair.a()[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(pair.a()[1], -1.0, epsilon = 1e-15);
        assert!(pair.b()[0].abs() < 1e-15 && pair.b()[1].abs() < 1e-15);
        assert!(incompatibility(&pair) < 1e-15);
    }

    #[test]
    fn regular_polygon_n4_unit_circle() {
        let pair = regular_polygon(&PolygonSpec::new(4, 1.0).unwrap());
        let eps = 1e-15;
        for (got, want) in pair.a().iter().zip([1.0, 0.0, -1.0, 0.0]) {
            assert_relative_eq!(*got, want, epsilon = eps);
        }
        for (got, want) in pair.b().iter().zip([0.0, 1.0, 0.0, -1.0]) {
            assert_relative_eq!(*got, want, epsilon = eps);
        }
        assert_relative_eq!(incompatibility(&pair), 2.0, epsilon = 1e-13);
    }

    #[test]
    fn regular_polygon_balances_lengths_and_orthogonality() {
        // The antipodal N = 2 polygon is degenerate and excluded; the length
        // identities need N >= 3.
        for n in 3..=9 {
            let r = 1.0 + 0.3 * n as f64;
            let spec = PolygonSpec::new(n, r).unwrap();
            let pair = regular_polygon(&spec);
            let expected = n as f64 * r * r / 2.0;
            assert_relative_eq!(pair.norm_a_sq(), expected, max_relative = 1e-13);
            assert_relative_eq!(pair.norm_b_sq(), expected, max_relative = 1e-13);
            assert!(pair.dot().abs() <= 1e-13 * expected);
            assert_relative_eq!(incompatibility(&pair), expected, max_relative = 1e-13);
        }
    }

    #[test]
    fn canonical_circumradius_values() {
        assert_relative_eq!(canonical_circumradius(4).unwrap(), 1.0, epsilon = 1e-15);
        let r3 = canonical_circumradius(3).unwrap();
        let tau3 = 1.0 / (TAU / 3.0).sin();
        assert_relative_eq!(r3 * r3, tau3, epsilon = 1e-14);
        assert_relative_eq!(tau3, 1.1547005383792517, epsilon = 1e-12);
        let r5 = canonical_circumradius(5).unwrap();
        assert_relative_eq!(r5, 1.0 / (TAU / 5.0).sin().sqrt(), epsilon = 1e-15);
        assert!(matches!(
            canonical_circumradius(2),
            Err(Error::NoCanonicalRadius(2))
        ));
    }

    #[test]
    fn objective_matches_known_triangle_value() {
        let obj = incompatibility_objective(&[0.0, TAU / 6.0, TAU / 3.0]);
        assert_relative_eq!(obj, 2.25, epsilon = 1e-13);
        assert_eq!(incompatibility_objective(&[0.7, 0.7, 0.7, 0.7]), 0.0);
    }

    #[test]
    fn objective_equals_incompatibility_of_unit_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let angles: Vec<f64> = (0..5).map(|_| rng.gen::<f64>() * TAU).collect();
            let pair = CoefficientPair::from_angles(&angles).unwrap();
            assert_relative_eq!(
                incompatibility_objective(&angles),
                incompatibility(&pair).powi(2),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn maximizer_reaches_bound_for_small_n() {
        let r = maximize_incompatibility(2, 7, 16).unwrap();
        assert!(r.converged, "gap = {}", r.gap);
        assert_relative_eq!(r.value, 1.0, epsilon = 1e-9);
        // Angle reaches ±π/2 modulo reflection.
        let d = (r.angles[1] - std::f64::consts::FRAC_PI_2).abs();
        let d2 = (r.angles[1] - 3.0 * std::f64::consts::FRAC_PI_2).abs();
        assert!(d < 1e-6 || d2 < 1e-6, "angle = {}", r.angles[1]);

        let r = maximize_incompatibility(3, 7, 16).unwrap();
        assert_relative_eq!(r.value, 1.5, epsilon = 1e-9);
        let r = maximize_incompatibility(6, 7, 32).unwrap();
        assert_relative_eq!(r.value, 3.0, epsilon = 1e-7);
    }

    #[test]
    fn maximizer_is_deterministic_per_seed() {
        let x = maximize_incompatibility(4, 99, 8).unwrap();
        let y = maximize_incompatibility(4, 99, 8).unwrap();
        assert_eq!(x.angles, y.angles);
        assert_eq!(x.value, y.value);
    }

    #[test]
    fn scaling_laws() {
        let pair = CoefficientPair::new(vec![1.0, 0.5, -0.25], vec![0.0, 2.0, 1.0]).unwrap();
        let base = incompatibility(&pair);
        let whole = incompatibility(&pair.scaled(3.0));
        assert_relative_eq!(whole, 9.0 * base, max_relative = 1e-13);
        // Scaling every row by √λ multiplies Inc by λ.
        let lam = 2.7_f64;
        let rows = vec![lam.sqrt(); 3];
        let scaled = pair.row_scaled(&rows).unwrap();
        assert_relative_eq!(incompatibility(&scaled), lam * base, max_relative = 1e-13);
    }

    #[test]
    fn pair_validation() {
        assert!(CoefficientPair::new(vec![1.0], vec![1.0]).is_err());
        assert!(CoefficientPair::new(vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(CoefficientPair::new(vec![1.0, f64::NAN], vec![1.0, 2.0]).is_err());
        assert!(PolygonSpec::new(1, 1.0).is_err());
        assert!(PolygonSpec::new(5, 0.0).is_err());
    }
}
