//! Deterministic seeded samplers for Monte-Carlo scans.
//!
//! Scans derive one child seed per item from a master seed, so results are
//! reproducible and independent of parallel scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffspace::{incompatibility, CoefficientPair};
use crate::states::{GaussianState, MixtureState};
use crate::transforms::{apply_map, SymplecticMap};

/// Child seeds derived from a master seed.
pub fn derive_seeds(master: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..count).map(|_| rng.gen()).collect()
}

/// Standard normal via Box–Muller.
pub fn standard_normal(rng: &mut impl Rng) -> f64 {
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.gen::<f64>();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

/// Coefficient pair with i.i.d. standard normal entries.
pub fn random_pair(rng: &mut impl Rng, n: usize) -> CoefficientPair {
    let a = (0..n).map(|_| standard_normal(rng)).collect();
    let b = (0..n).map(|_| standard_normal(rng)).collect();
    CoefficientPair::new(a, b).expect("n >= 2 with finite entries")
}

/// Pair resampled until its incompatibility is well away from zero.
pub fn random_nondegenerate_pair(rng: &mut impl Rng, n: usize) -> CoefficientPair {
    loop {
        let pair = random_pair(rng, n);
        let scale = (pair.norm_a_sq() * pair.norm_b_sq()).sqrt();
        if incompatibility(&pair) > 1e-3 * scale.max(1e-12) {
            return pair;
        }
    }
}

/// Random symplectic map: rotation ∘ squeeze ∘ gauge with parameters drawn
/// from the given ranges.
pub fn random_map(rng: &mut impl Rng, gauge_max: f64, squeeze_max: f64) -> SymplecticMap {
    let g = rng.gen_range(-gauge_max..gauge_max);
    let log_gamma = rng.gen_range(-squeeze_max.ln()..squeeze_max.ln());
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    SymplecticMap::rotation(theta)
        .compose(&SymplecticMap::squeeze(log_gamma.exp()).expect("nonzero"))
        .compose(&SymplecticMap::gauge(g))
}

/// Admissible Gaussian state: a randomly squeezed, gauged, rotated and
/// displaced thermal state. `det Σ = (1+2n̄)² ħ²/4 ≥ ħ²/4` is preserved by
/// the unit-determinant map.
pub fn random_admissible_gaussian(rng: &mut impl Rng, hbar: f64) -> GaussianState {
    let occupancy = rng.gen_range(0.0..3.0);
    let scale = (1.0 + 2.0 * occupancy) * hbar / 2.0;
    let thermal = GaussianState::from_variances(hbar, scale, scale, 0.0).expect("admissible");
    let moved = apply_map(&thermal, &random_map(rng, 2.0, 2.0));
    GaussianState::new(
        hbar,
        [
            2.0 * hbar.sqrt() * standard_normal(rng),
            2.0 * hbar.sqrt() * standard_normal(rng),
        ],
        moved.cov(),
    )
    .expect("admissible")
}

/// Pure Gaussian tame enough to sample on the default grid without boundary
/// leakage at any quadrature angle (mild squeezing and shear, no
/// displacement): the largest covariance eigenvalue stays below ~2.5 ħ.
pub fn random_pure_gaussian_on_grid(rng: &mut impl Rng, hbar: f64) -> GaussianState {
    let ground = crate::states::ground_state(hbar).expect("hbar > 0");
    apply_map(&ground, &random_map(rng, 0.8, 1.5))
}

/// Random finite Gaussian mixture with up to `max_components` components.
pub fn random_mixture(rng: &mut impl Rng, hbar: f64, max_components: usize) -> MixtureState {
    let k = rng.gen_range(2..=max_components.max(2));
    let mut weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    // Compensate rounding so the weights sum to 1 exactly.
    let drift: f64 = 1.0 - weights.iter().sum::<f64>();
    weights[0] += drift;
    let components = (0..k).map(|_| random_admissible_gaussian(rng, hbar)).collect();
    MixtureState::new(weights, components).expect("valid mixture")
}

/// Parameters in the domain of the linear bound: `μ, ν > 0`, `μν > λ²`.
pub fn random_linear_params(rng: &mut impl Rng) -> (f64, f64, f64) {
    let mu: f64 = rng.gen_range(0.1..5.0);
    let nu: f64 = rng.gen_range(0.1..5.0);
    let lambda = rng.gen_range(-0.95..0.95) * (mu * nu).sqrt();
    (mu, nu, lambda)
}

/// Complex superposition coefficients over `levels` oscillator states,
/// normalized to unit norm.
pub fn random_hermite_coefficients(rng: &mut impl Rng, levels: usize) -> Vec<Complex64> {
    let mut coeffs: Vec<Complex64> = (0..levels)
        .map(|_| Complex64::new(standard_normal(rng), standard_normal(rng)))
        .collect();
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    coeffs.iter_mut().for_each(|c| *c /= norm);
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_are_stable() {
        assert_eq!(derive_seeds(7, 3), derive_seeds(7, 3));
        assert_ne!(derive_seeds(7, 3), derive_seeds(8, 3));
    }

    #[test]
    fn sampled_states_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let s = random_admissible_gaussian(&mut rng, 1.0);
            assert!(s.purity_defect() >= -1e-12);
            let m = random_mixture(&mut rng, 1.0, 4).moments();
            assert!(m.purity_defect() >= -1e-12);
        }
    }

    #[test]
    fn sampled_linear_params_stay_in_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let (mu, nu, lambda) = random_linear_params(&mut rng);
            assert!(mu > 0.0 && nu > 0.0 && mu * nu > lambda * lambda);
        }
    }

    #[test]
    fn grid_friendly_gaussians_fit_the_default_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let grid = crate::states::Grid::default_for(1.0).unwrap();
        for _ in 0..100 {
            let s = random_pure_gaussian_on_grid(&mut rng, 1.0);
            crate::states::gaussian_grid(&s, &grid).expect("no leakage");
        }
    }
}
