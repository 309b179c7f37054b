//! State representations carrying second moments and, for non-Gaussian
//! states, full position wavefunctions on a uniform grid.
//!
//! Position and momentum both carry dimension `√ħ`; `ħ` is an explicit field
//! everywhere (default 1 at the tool level). Covariance matrices are ordered
//! `[[Δ²p, C_pq], [C_pq, Δ²q]]` and must satisfy the admissibility condition
//! `det Σ ≥ ħ²/4` (equality for pure Gaussian states).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft_util::{angular_frequency, fft_forward, fft_inverse};
use crate::hermite;

/// Absolute slack on `det Σ - ħ²/4` so numerically pure states are admitted.
pub const ADMISSIBILITY_SLACK: f64 = 1e-12;
/// Allowed deviation of `Σ|ψ|² dq` from 1.
pub const NORMALIZATION_TOL: f64 = 1e-10;
/// Edge amplitude must stay below this fraction of the peak amplitude.
pub const BOUNDARY_DECAY: f64 = 1e-8;
pub const DEFAULT_GRID_LEN: usize = 2048;
/// Default grid halfwidth in units of `√ħ`.
pub const DEFAULT_GRID_HALFWIDTH: f64 = 16.0;

/// Gaussian state (or the second-moment record of any state): phase-space
/// mean `(p̄, q̄)` and covariance `[[Δ²p, C_pq], [C_pq, Δ²q]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    hbar: f64,
    mean: [f64; 2],
    cov: [[f64; 2]; 2],
}

impl GaussianState {
    pub fn new(hbar: f64, mean: [f64; 2], cov: [[f64; 2]; 2]) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::BadHbar(hbar));
        }
        let flat = [mean[0], mean[1], cov[0][0], cov[0][1], cov[1][0], cov[1][1]];
        if flat.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotSymmetricPositive);
        }
        let scale = cov[0][0].abs().max(cov[1][1].abs()).max(1.0);
        if (cov[0][1] - cov[1][0]).abs() > 1e-12 * scale || cov[0][0] <= 0.0 || cov[1][1] <= 0.0 {
            return Err(Error::NotSymmetricPositive);
        }
        let c = 0.5 * (cov[0][1] + cov[1][0]);
        let sym = [[cov[0][0], c], [c, cov[1][1]]];
        let det = sym[0][0] * sym[1][1] - c * c;
        let bound = hbar * hbar / 4.0;
        if det < bound - ADMISSIBILITY_SLACK {
            return Err(Error::Inadmissible { det, bound });
        }
        Ok(Self {
            hbar,
            mean,
            cov: sym,
        })
    }

    /// Zero-mean state from its three second moments.
    pub fn from_variances(hbar: f64, var_p: f64, var_q: f64, cov_pq: f64) -> Result<Self> {
        Self::new(hbar, [0.0, 0.0], [[var_p, cov_pq], [cov_pq, var_q]])
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mean(&self) -> [f64; 2] {
        self.mean
    }

    pub fn mean_p(&self) -> f64 {
        self.mean[0]
    }

    pub fn mean_q(&self) -> f64 {
        self.mean[1]
    }

    pub fn cov(&self) -> [[f64; 2]; 2] {
        self.cov
    }

    pub fn var_p(&self) -> f64 {
        self.cov[0][0]
    }

    pub fn var_q(&self) -> f64 {
        self.cov[1][1]
    }

    pub fn cov_pq(&self) -> f64 {
        self.cov[0][1]
    }

    pub fn det_cov(&self) -> f64 {
        self.cov[0][0] * self.cov[1][1] - self.cov[0][1] * self.cov[0][1]
    }

    /// `det Σ - ħ²/4`; zero for pure Gaussian states.
    pub fn purity_defect(&self) -> f64 {
        self.det_cov() - self.hbar * self.hbar / 4.0
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        self.purity_defect().abs() <= tol * self.hbar * self.hbar
    }
}

/// Oscillator ground state: zero mean, `Σ = (ħ/2) I`.
pub fn ground_state(hbar: f64) -> Result<GaussianState> {
    GaussianState::from_variances(hbar, hbar / 2.0, hbar / 2.0, 0.0)
}

/// Uniform position grid `q_k = q_min + k dq`, `k = 0..len`, with `len` a
/// power of two.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    q_min: f64,
    dq: f64,
    len: usize,
}

impl Grid {
    pub fn new(q_min: f64, dq: f64, len: usize) -> Result<Self> {
        if len < 256 || !len.is_power_of_two() {
            return Err(Error::BadGridLength(len));
        }
        if !(dq.is_finite() && dq > 0.0 && q_min.is_finite()) {
            return Err(Error::BadGridSpacing);
        }
        Ok(Self { q_min, dq, len })
    }

    /// Grid spanning `[-halfwidth, halfwidth)` with `len` samples.
    pub fn symmetric(halfwidth: f64, len: usize) -> Result<Self> {
        if !(halfwidth.is_finite() && halfwidth > 0.0) {
            return Err(Error::BadGridSpacing);
        }
        Self::new(-halfwidth, 2.0 * halfwidth / len as f64, len)
    }

    /// Default grid: 2048 samples over `[-16√ħ, 16√ħ)`.
    pub fn default_for(hbar: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::BadHbar(hbar));
        }
        Self::symmetric(DEFAULT_GRID_HALFWIDTH * hbar.sqrt(), DEFAULT_GRID_LEN)
    }

    pub fn q_min(&self) -> f64 {
        self.q_min
    }

    pub fn dq(&self) -> f64 {
        self.dq
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, k: usize) -> f64 {
        self.q_min + k as f64 * self.dq
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|k| self.point(k)).collect()
    }

    /// Distance from the origin to the nearer grid edge.
    pub fn edge_distance(&self) -> f64 {
        (-self.q_min).min(self.point(self.len - 1) + self.dq)
    }
}

/// Complex position-space samples of a pure state on a [`Grid`].
///
/// Construction enforces normalization (`Σ|ψ|² dq = 1` within 1e-10) and
/// boundary decay (edge amplitude below `1e-8` of the peak), so downstream
/// transforms may assume both.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    grid: Grid,
    hbar: f64,
    samples: Vec<Complex64>,
}

impl GridWavefunction {
    pub fn new(grid: Grid, hbar: f64, samples: Vec<Complex64>) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::BadHbar(hbar));
        }
        if samples.len() != grid.len() {
            return Err(Error::BadGridLength(samples.len()));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteSamples);
        }
        let norm_sq: f64 = samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dq();
        if (norm_sq - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized((norm_sq - 1.0).abs()));
        }
        check_boundary_decay(&samples, &grid, hbar)?;
        Ok(Self {
            grid,
            hbar,
            samples,
        })
    }

    /// Rescales the samples to unit norm, then validates.
    pub fn normalized(grid: Grid, hbar: f64, mut samples: Vec<Complex64>) -> Result<Self> {
        let norm_sq: f64 = samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dq();
        if !(norm_sq.is_finite() && norm_sq > 0.0) {
            return Err(Error::EmptyCoefficients);
        }
        let scale = 1.0 / norm_sq.sqrt();
        for z in &mut samples {
            *z *= scale;
        }
        Self::new(grid, hbar, samples)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn position_density(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm_sqr()).collect()
    }
}

pub(crate) fn check_boundary_decay(samples: &[Complex64], grid: &Grid, hbar: f64) -> Result<()> {
    let peak = samples.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let edge = samples[0].norm().max(samples[samples.len() - 1].norm());
    if peak == 0.0 {
        return Err(Error::EmptyCoefficients);
    }
    let ratio = edge / peak;
    if ratio >= BOUNDARY_DECAY {
        return Err(Error::BoundaryLeakage {
            ratio,
            suggest: 1.5 * grid.edge_distance() / hbar.sqrt(),
        });
    }
    Ok(())
}

/// Normalized superposition `Σ c_n φ_n(q)` of oscillator eigenfunctions.
///
/// The grid must reach at least `±(√(2 n_max + 1) + 6)√ħ` so that the highest
/// level has decayed below the boundary threshold.
pub fn hermite_superposition(
    coeffs: &[Complex64],
    grid: &Grid,
    hbar: f64,
) -> Result<GridWavefunction> {
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::BadHbar(hbar));
    }
    if coeffs.is_empty() || coeffs.iter().all(|c| c.norm_sqr() == 0.0) {
        return Err(Error::EmptyCoefficients);
    }
    let n_max = coeffs.len() - 1;
    let need = ((2.0 * n_max as f64 + 1.0).sqrt() + 6.0) * hbar.sqrt();
    if grid.edge_distance() < need {
        return Err(Error::GridTooNarrow {
            level: n_max,
            need: need / hbar.sqrt(),
        });
    }
    let root_hbar = hbar.sqrt();
    let xs: Vec<f64> = grid.points().iter().map(|q| q / root_hbar).collect();
    let table = hermite::eigenfunction_table(n_max, &xs);
    let scale = hbar.powf(-0.25);
    let samples: Vec<Complex64> = (0..grid.len())
        .map(|k| {
            let mut z = Complex64::new(0.0, 0.0);
            for (n, c) in coeffs.iter().enumerate() {
                z += c * table[n][k];
            }
            z * scale
        })
        .collect();
    GridWavefunction::normalized(*grid, hbar, samples)
}

/// Samples of a *pure* Gaussian state on a grid.
///
/// The quadratic form is fixed by the second moments: with
/// `a = 1/(4Δ²q) - i C_pq/(2ħΔ²q)` the wavefunction
/// `ψ(q) ∝ exp(-a (q-q̄)² + i p̄ q/ħ)` reproduces `(Δ²p, Δ²q, C_pq)` exactly
/// when `det Σ = ħ²/4`.
pub fn gaussian_grid(state: &GaussianState, grid: &Grid) -> Result<GridWavefunction> {
    let hbar = state.hbar();
    let defect = state.purity_defect();
    if defect.abs() > 1e-9 * hbar * hbar {
        return Err(Error::NotPure {
            det: state.det_cov(),
            pure: hbar * hbar / 4.0,
        });
    }
    let var_q = state.var_q();
    let a_re = 1.0 / (4.0 * var_q);
    let a_im = -state.cov_pq() / (2.0 * hbar * var_q);
    let (p0, q0) = (state.mean_p(), state.mean_q());
    let samples: Vec<Complex64> = grid
        .points()
        .iter()
        .map(|&q| {
            let d = q - q0;
            let phase = -a_im * d * d + p0 * q / hbar;
            Complex64::from_polar((-a_re * d * d).exp(), phase)
        })
        .collect();
    GridWavefunction::normalized(*grid, hbar, samples)
}

/// Momentum-space samples on the dual grid `p_j = (j - M/2) dp`,
/// `dp = 2πħ/(M dq)`, together with `dp`.
pub(crate) fn momentum_samples(psi: &GridWavefunction) -> (Vec<Complex64>, f64) {
    let m = psi.grid.len();
    let dq = psi.grid.dq();
    let hbar = psi.hbar;
    let dp = std::f64::consts::TAU * hbar / (m as f64 * dq);
    // With the alternating sign twist, FFT bin j holds the Fourier integral
    // at p_j = (j - M/2) dp.
    let mut buf: Vec<Complex64> = psi
        .samples
        .iter()
        .enumerate()
        .map(|(k, z)| if k % 2 == 0 { *z } else { -*z })
        .collect();
    fft_forward(&mut buf);
    let amp = dq / (std::f64::consts::TAU * hbar).sqrt();
    let q_min = psi.grid.q_min();
    for (j, z) in buf.iter_mut().enumerate() {
        let p = (j as f64 - m as f64 / 2.0) * dp;
        *z *= Complex64::from_polar(amp, -p * q_min / hbar);
    }
    (buf, dp)
}

/// Second moments of a grid state: `Δ²q` by quadrature, `Δ²p` from the FFT
/// momentum density, and `C_pq` from `Re ∫ ψ* q (-iħ∂_q) ψ dq - ⟨q⟩⟨p⟩` with
/// spectral differentiation.
pub fn grid_moments(psi: &GridWavefunction) -> Result<GaussianState> {
    let grid = psi.grid;
    let dq = grid.dq();
    let hbar = psi.hbar;

    let density = psi.position_density();
    let mean_q: f64 = density
        .iter()
        .enumerate()
        .map(|(k, rho)| grid.point(k) * rho * dq)
        .sum();
    let var_q: f64 = density
        .iter()
        .enumerate()
        .map(|(k, rho)| {
            let d = grid.point(k) - mean_q;
            d * d * rho * dq
        })
        .sum();

    let (phat, dp) = momentum_samples(psi);
    let m = grid.len();
    let mut mean_p = 0.0;
    let mut m2_p = 0.0;
    for (j, z) in phat.iter().enumerate() {
        let p = (j as f64 - m as f64 / 2.0) * dp;
        let w = z.norm_sqr() * dp;
        mean_p += p * w;
        m2_p += p * p * w;
    }
    let var_p = m2_p - mean_p * mean_p;

    // Spectral derivative: (p̂ψ)_k = IFFT[ ħκ_j FFT(ψ)_j ]_k.
    let mut buf = psi.samples.clone();
    fft_forward(&mut buf);
    for (j, z) in buf.iter_mut().enumerate() {
        *z *= hbar * angular_frequency(j, m, dq);
    }
    fft_inverse(&mut buf);
    let corr: f64 = psi
        .samples
        .iter()
        .zip(&buf)
        .enumerate()
        .map(|(k, (z, pz))| (z.conj() * grid.point(k) * pz).re * dq)
        .sum();
    let cov_pq = corr - mean_q * mean_p;

    GaussianState::new(hbar, [mean_p, mean_q], [[var_p, cov_pq], [cov_pq, var_q]])
}

/// Momentum-gauge unitary on the grid: multiplies the momentum representation
/// by `e^{-i g p²/(2ħ)}`, which sends the moments `(p, q) → (p, q + g p)`.
pub fn gauge_grid(psi: &GridWavefunction, g: f64) -> Result<GridWavefunction> {
    let m = psi.grid.len();
    let dq = psi.grid.dq();
    let hbar = psi.hbar;
    let mut buf = psi.samples.clone();
    fft_forward(&mut buf);
    for (j, z) in buf.iter_mut().enumerate() {
        let p = hbar * angular_frequency(j, m, dq);
        *z *= Complex64::from_polar(1.0, -g * p * p / (2.0 * hbar));
    }
    fft_inverse(&mut buf);
    GridWavefunction::normalized(psi.grid, hbar, buf)
}

/// Phase-space rotation unitary on the grid; the moments of the result
/// follow the rotation map `(p, q) → (p cos θ + q sin θ, -p sin θ + q cos θ)`.
pub fn rotate_grid(psi: &GridWavefunction, theta: f64) -> Result<GridWavefunction> {
    let hbar = psi.hbar;
    let root = hbar.sqrt();
    let scale = hbar.powf(0.25);
    let dimensionless: Vec<Complex64> = psi.samples.iter().map(|z| z * scale).collect();
    let out = crate::frft::fractional_fourier(
        &dimensionless,
        psi.grid.q_min() / root,
        psi.grid.dq() / root,
        -theta,
    );
    let samples = out.into_iter().map(|z| z / scale).collect();
    GridWavefunction::normalized(psi.grid, hbar, samples)
}

/// Rigid phase-space translation of a grid state. The position shift must be
/// a whole number of grid steps; the momentum shift is a phase factor.
pub fn translate_grid(psi: &GridWavefunction, dp: f64, dq_shift: f64) -> Result<GridWavefunction> {
    let step = psi.grid.dq();
    let steps = (dq_shift / step).round();
    if (steps * step - dq_shift).abs() > 1e-9 * step.max(dq_shift.abs()) {
        return Err(Error::FractionalShift {
            shift: dq_shift,
            step,
        });
    }
    let steps = steps as i64;
    let m = psi.grid.len() as i64;
    let mut shifted = vec![Complex64::new(0.0, 0.0); psi.grid.len()];
    for k in 0..m {
        let src = k - steps;
        if (0..m).contains(&src) {
            shifted[k as usize] = psi.samples[src as usize];
        }
    }
    let hbar = psi.hbar;
    for (k, z) in shifted.iter_mut().enumerate() {
        *z *= Complex64::from_polar(1.0, dp * psi.grid.point(k) / hbar);
    }
    GridWavefunction::normalized(psi.grid, hbar, shifted)
}

/// Finite convex mixture of Gaussian states sharing one `ħ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureState {
    weights: Vec<f64>,
    components: Vec<GaussianState>,
}

impl MixtureState {
    pub fn new(weights: Vec<f64>, components: Vec<GaussianState>) -> Result<Self> {
        if components.is_empty() || weights.len() != components.len() {
            return Err(Error::EmptyMixture);
        }
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) || (sum - 1.0).abs() > 1e-12 {
            return Err(Error::BadWeights(sum));
        }
        let hbar = components[0].hbar();
        if components.iter().any(|c| c.hbar() != hbar) {
            return Err(Error::MixedHbar);
        }
        Ok(Self {
            weights,
            components,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[GaussianState] {
        &self.components
    }

    pub fn hbar(&self) -> f64 {
        self.components[0].hbar()
    }

    /// Exact second-moment record of the mixture: first moments average, and
    /// `⟨A²⟩ = Σ_k w_k ⟨A²⟩_k` before recentering.
    pub fn moments(&self) -> GaussianState {
        let mut mean = [0.0, 0.0];
        for (w, c) in self.weights.iter().zip(&self.components) {
            mean[0] += w * c.mean_p();
            mean[1] += w * c.mean_q();
        }
        let mut m2_p = 0.0;
        let mut m2_q = 0.0;
        let mut m_pq = 0.0;
        for (w, c) in self.weights.iter().zip(&self.components) {
            m2_p += w * (c.var_p() + c.mean_p() * c.mean_p());
            m2_q += w * (c.var_q() + c.mean_q() * c.mean_q());
            m_pq += w * (c.cov_pq() + c.mean_p() * c.mean_q());
        }
        let var_p = m2_p - mean[0] * mean[0];
        let var_q = m2_q - mean[1] * mean[1];
        let cov = m_pq - mean[0] * mean[1];
        GaussianState::new(self.hbar(), mean, [[var_p, cov], [cov, var_q]])
            .expect("mixtures of admissible states are admissible")
    }
}

/// Any state the tool can read or write.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRepr", into = "StateRepr")]
pub enum State {
    Gaussian(GaussianState),
    Grid(GridWavefunction),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum StateRepr {
    Gaussian {
        hbar: f64,
        mean: [f64; 2],
        cov: [[f64; 2]; 2],
    },
    Grid {
        hbar: f64,
        q_min: f64,
        dq: f64,
        re: Vec<f64>,
        im: Vec<f64>,
    },
}

impl TryFrom<StateRepr> for State {
    type Error = Error;
    fn try_from(r: StateRepr) -> Result<Self> {
        match r {
            StateRepr::Gaussian { hbar, mean, cov } => {
                Ok(State::Gaussian(GaussianState::new(hbar, mean, cov)?))
            }
            StateRepr::Grid {
                hbar,
                q_min,
                dq,
                re,
                im,
            } => {
                if re.len() != im.len() {
                    return Err(Error::BadGridLength(im.len()));
                }
                let grid = Grid::new(q_min, dq, re.len())?;
                let samples = re
                    .into_iter()
                    .zip(im)
                    .map(|(x, y)| Complex64::new(x, y))
                    .collect();
                Ok(State::Grid(GridWavefunction::new(grid, hbar, samples)?))
            }
        }
    }
}

impl From<State> for StateRepr {
    fn from(s: State) -> Self {
        match s {
            State::Gaussian(g) => StateRepr::Gaussian {
                hbar: g.hbar(),
                mean: g.mean(),
                cov: g.cov(),
            },
            State::Grid(w) => StateRepr::Grid {
                hbar: w.hbar(),
                q_min: w.grid().q_min(),
                dq: w.grid().dq(),
                re: w.samples().iter().map(|z| z.re).collect(),
                im: w.samples().iter().map(|z| z.im).collect(),
            },
        }
    }
}
