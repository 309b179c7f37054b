//! Quadrature probability densities, differential entropies, and the
//! entropic bounds they obey.
//!
//! The quadrature at angle φ is `p̂_φ = p̂ cos φ + q̂ sin φ`, so φ = 0 is
//! momentum and φ = π/2 is position. Its probability density is obtained by
//! fractionally Fourier-transforming the position wavefunction by the angle
//! `π/2 - φ`. Entropies are Shannon differential entropies in nats with the
//! dimensionless density `√ħ ρ` inside the logarithm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frft::fractional_fourier;
use crate::hermite;
use crate::moments::BoundReport;
use crate::states::{check_boundary_decay, GridWavefunction};

/// Densities this far below zero are rounding noise and are clamped.
const NEGATIVE_CLAMP: f64 = -1e-14;
/// Allowed deviation of `Σ ρ dr` from 1.
const DISTRIBUTION_NORM_TOL: f64 = 1e-9;

/// Lower bound `ln(eπ)` of the position/momentum entropy sum.
pub fn hirschman_bound() -> f64 {
    1.0 + std::f64::consts::PI.ln()
}

/// Probability density of one quadrature on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureDistribution {
    density: Vec<f64>,
    r_min: f64,
    dr: f64,
    /// Quadrature angle φ in `[0, 2π)`.
    angle: f64,
}

impl QuadratureDistribution {
    /// Validates normalization and nonnegativity (entries above the rounding
    /// clamp), then renormalizes exactly.
    pub fn new(mut density: Vec<f64>, r_min: f64, dr: f64, angle: f64) -> Result<Self> {
        if !(dr.is_finite() && dr > 0.0 && r_min.is_finite()) {
            return Err(Error::BadGridSpacing);
        }
        for rho in &mut density {
            if !rho.is_finite() || *rho < NEGATIVE_CLAMP {
                return Err(Error::NegativeDensity(*rho));
            }
            if *rho < 0.0 {
                *rho = 0.0;
            }
        }
        let total: f64 = density.iter().sum::<f64>() * dr;
        if (total - 1.0).abs() > DISTRIBUTION_NORM_TOL {
            return Err(Error::DistributionNotNormalized((total - 1.0).abs()));
        }
        let scale = 1.0 / total;
        density.iter_mut().for_each(|rho| *rho *= scale);
        Ok(Self {
            density,
            r_min,
            dr,
            angle: angle.rem_euclid(std::f64::consts::TAU),
        })
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn len(&self) -> usize {
        self.density.len()
    }

    pub fn is_empty(&self) -> bool {
        self.density.is_empty()
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn point(&self, k: usize) -> f64 {
        self.r_min + k as f64 * self.dr
    }

    pub fn mean(&self) -> f64 {
        self.density
            .iter()
            .enumerate()
            .map(|(k, rho)| self.point(k) * rho * self.dr)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.density
            .iter()
            .enumerate()
            .map(|(k, rho)| {
                let d = self.point(k) - mean;
                d * d * rho * self.dr
            })
            .sum()
    }

    /// L¹ distance to another distribution on the same grid.
    pub fn l1_distance(&self, other: &QuadratureDistribution) -> f64 {
        self.density
            .iter()
            .zip(&other.density)
            .map(|(a, b)| (a - b).abs() * self.dr)
            .sum()
    }
}

/// Probability density of `p̂ cos φ + q̂ sin φ`, sampled on the state's own
/// grid. Rejects states whose rotated wavefunction leaks past the grid edge.
pub fn rotate_quadrature(psi: &GridWavefunction, phi: f64) -> Result<QuadratureDistribution> {
    let hbar = psi.hbar();
    let root = hbar.sqrt();
    let scale = hbar.powf(0.25);
    let dimensionless: Vec<_> = psi.samples().iter().map(|z| z * scale).collect();
    let rotated = fractional_fourier(
        &dimensionless,
        psi.grid().q_min() / root,
        psi.grid().dq() / root,
        std::f64::consts::FRAC_PI_2 - phi,
    );
    check_boundary_decay(&rotated, psi.grid(), hbar)?;
    let density: Vec<f64> = rotated.iter().map(|z| z.norm_sqr() / root).collect();
    QuadratureDistribution::new(density, psi.grid().q_min(), psi.grid().dq(), phi)
}

/// Reference implementation of [`rotate_quadrature`] through the oscillator
/// eigenbasis: expand in eigenfunctions up to `n_max`, attach the rotation
/// phases `e^{-i n (π/2 - φ)}`, and resynthesize. Exact for states spanned
/// by the kept levels; much slower than the chirp path.
pub fn rotate_quadrature_eigenbasis(
    psi: &GridWavefunction,
    phi: f64,
    n_max: usize,
) -> Result<QuadratureDistribution> {
    use num_complex::Complex64;
    let hbar = psi.hbar();
    let root = hbar.sqrt();
    let grid = psi.grid();
    let xs: Vec<f64> = grid.points().iter().map(|q| q / root).collect();
    let table = hermite::eigenfunction_table(n_max, &xs);
    let dx = grid.dq() / root;
    let scale = hbar.powf(0.25);

    let coeffs: Vec<Complex64> = table
        .iter()
        .map(|row| {
            row.iter()
                .zip(psi.samples())
                .map(|(h, z)| h * z * scale * dx)
                .sum()
        })
        .collect();
    let t = std::f64::consts::FRAC_PI_2 - phi;
    let mut rotated = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (n, c) in coeffs.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -(n as f64) * t);
        let weight = c * phase;
        for (k, h) in table[n].iter().enumerate() {
            rotated[k] += weight * h;
        }
    }
    let density: Vec<f64> = rotated.iter().map(|z| z.norm_sqr() / root).collect();
    QuadratureDistribution::new(density, grid.q_min(), grid.dq(), phi)
}

/// Differential Shannon entropy `-Σ ρ ln(√ħ ρ) dr` in nats, with
/// `0·ln 0 := 0`.
pub fn shannon_entropy(dist: &QuadratureDistribution, hbar: f64) -> f64 {
    let root = hbar.sqrt();
    dist.density()
        .iter()
        .map(|&rho| {
            if rho <= 0.0 {
                0.0
            } else {
                -rho * (root * rho.max(1e-300)).ln() * dist.dr()
            }
        })
        .sum()
}

/// Position/momentum entropy sum against `ln(eπ)`; a proved inequality, so
/// `satisfied` is expected on every valid state.
pub fn hirschman_check(psi: &GridWavefunction) -> Result<BoundReport> {
    let hbar = psi.hbar();
    let s_q = shannon_entropy(&rotate_quadrature(psi, std::f64::consts::FRAC_PI_2)?, hbar);
    let s_p = shannon_entropy(&rotate_quadrature(psi, 0.0)?, hbar);
    Ok(BoundReport::evaluate(
        "hirschman",
        s_q + s_p,
        hirschman_bound(),
        1e-9,
    ))
}

/// Variance–entropy bound for one quadrature:
/// `Δ²p_φ ≥ (ħ/2eπ) e^{2S_φ}`, saturated exactly by Gaussian states.
pub fn variance_entropy_check(psi: &GridWavefunction, phi: f64) -> Result<BoundReport> {
    let hbar = psi.hbar();
    let dist = rotate_quadrature(psi, phi)?;
    let entropy = shannon_entropy(&dist, hbar);
    let rhs = hbar / (2.0 * std::f64::consts::E * std::f64::consts::PI) * (2.0 * entropy).exp();
    Ok(BoundReport::evaluate(
        "variance_entropy",
        dist.variance(),
        rhs,
        1e-9,
    ))
}

/// Entropies of N quadratures and the margin of `(2/N) Σ S_j` over `ln(eπ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub angles: Vec<f64>,
    pub entropies: Vec<f64>,
    /// `(2/N) Σ_j S_j`.
    pub mean2: f64,
    /// `ln(eπ)`.
    pub bound: f64,
    pub satisfied: bool,
    /// `mean2 - bound`.
    pub margin: f64,
    /// Whether the angles are the homogeneous polygon set; the conjectured
    /// bound is stated only for that case.
    pub polygon: bool,
}

/// Polygon quadrature angles `φ_j = 2π(j-1)/N`. The pair N = 2 uses the
/// orthogonal arrangement `{0, π/2}` instead of the degenerate antipodal
/// polygon.
pub fn polygon_angles(n: usize) -> Vec<f64> {
    if n == 2 {
        vec![0.0, std::f64::consts::FRAC_PI_2]
    } else {
        (0..n)
            .map(|j| std::f64::consts::TAU * j as f64 / n as f64)
            .collect()
    }
}

/// Scans the N polygon quadratures of a state and reports the margin of the
/// conjectured entropy bound. N = 2 reproduces the position/momentum pair.
pub fn polygon_entropy_scan(psi: &GridWavefunction, n: usize) -> Result<EntropyReport> {
    if n < 2 {
        return Err(Error::PolygonTooSmall(n));
    }
    entropy_scan(psi, &polygon_angles(n), true)
}

/// Entropy scan over an arbitrary list of quadrature angles. Non-polygon
/// angle sets are labelled `polygon: false`: the bound `ln(eπ)` is only
/// conjectured for the homogeneous arrangement, so their margin is
/// informational.
pub fn entropy_scan_angles(psi: &GridWavefunction, angles: &[f64]) -> Result<EntropyReport> {
    if angles.len() < 2 {
        return Err(Error::PolygonTooSmall(angles.len()));
    }
    let reference = polygon_angles(angles.len());
    let polygon = angles
        .iter()
        .zip(&reference)
        .all(|(a, b)| (a - b).abs() < 1e-12);
    entropy_scan(psi, angles, polygon)
}

fn entropy_scan(psi: &GridWavefunction, angles: &[f64], polygon: bool) -> Result<EntropyReport> {
    let hbar = psi.hbar();
    let entropies: Vec<f64> = angles
        .iter()
        .map(|&phi| Ok(shannon_entropy(&rotate_quadrature(psi, phi)?, hbar)))
        .collect::<Result<_>>()?;
    let mean2 = 2.0 * entropies.iter().sum::<f64>() / angles.len() as f64;
    let bound = hirschman_bound();
    let margin = mean2 - bound;
    Ok(EntropyReport {
        angles: angles.to_vec(),
        entropies,
        mean2,
        bound,
        satisfied: margin >= -1e-9,
        margin,
        polygon,
    })
}

/// Two-link chain connecting the variance product to the entropy sum over
/// the N polygon quadratures:
/// `Π Δ²r_j ≥ (ħ/2eπ)^N e^{2ΣS_j}` (per-factor variance–entropy bounds) and
/// `(ħ/2eπ)^N e^{2ΣS_j} ≥ (ħ/2)^N` (the entropic bound again).
pub fn entropic_product_consistency(
    psi: &GridWavefunction,
    n: usize,
) -> Result<(BoundReport, BoundReport)> {
    if n < 2 {
        return Err(Error::PolygonTooSmall(n));
    }
    let hbar = psi.hbar();
    let mut product = 1.0;
    let mut entropy_sum = 0.0;
    for phi in polygon_angles(n) {
        let dist = rotate_quadrature(psi, phi)?;
        product *= dist.variance();
        entropy_sum += shannon_entropy(&dist, hbar);
    }
    let factor = hbar / (2.0 * std::f64::consts::E * std::f64::consts::PI);
    let middle = factor.powi(n as i32) * (2.0 * entropy_sum).exp();
    let floor = (hbar / 2.0).powi(n as i32);
    Ok((
        BoundReport::evaluate("product_vs_entropy", product, middle, 1e-9),
        BoundReport::evaluate("entropy_vs_floor", middle, floor, 1e-9),
    ))
}
