//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by constructors and operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("coefficient vectors must have equal length >= 2 (got {a_len} and {b_len})")]
    BadPairShape { a_len: usize, b_len: usize },

    #[error("coefficient entries must be finite")]
    NonFiniteCoefficients,

    #[error("row scale factors must match the number of observables")]
    BadRowScaleLength,

    #[error("a polygon needs at least 2 vertices (got {0})")]
    PolygonTooSmall(usize),

    #[error("polygon circumradius must be positive and finite (got {0})")]
    BadRadius(f64),

    #[error("adjacent observables cannot form canonical pairs for N = {0}; the canonical circumradius needs N >= 3")]
    NoCanonicalRadius(usize),

    #[error("hbar must be positive and finite (got {0})")]
    BadHbar(f64),

    #[error("squeeze factor must be nonzero and finite (got {0})")]
    BadSqueeze(f64),

    #[error("covariance matrix must be symmetric with positive diagonal")]
    NotSymmetricPositive,

    #[error("covariance is inadmissible: det = {det:.6e} < (hbar/2)^2 = {bound:.6e}")]
    Inadmissible { det: f64, bound: f64 },

    #[error("linear bound needs mu, nu > 0 and mu*nu > lambda^2 (got mu={mu}, nu={nu}, lambda={lambda})")]
    BadLinearParams { mu: f64, nu: f64, lambda: f64 },

    #[error("compatible set: the coefficient vectors are collinear, no standard form exists")]
    CompatibleSet,

    #[error("the concatenated pairwise bound is only defined for N > 2 (got {0})")]
    NeedsThreeObservables(usize),

    #[error("grid length must be a power of two >= 256 (got {0})")]
    BadGridLength(usize),

    #[error("grid spacing must be positive and finite")]
    BadGridSpacing,

    #[error("wavefunction is not normalized: |norm^2 - 1| = {0:.3e}")]
    NotNormalized(f64),

    #[error("wavefunction samples must be finite")]
    NonFiniteSamples,

    #[error("boundary leakage: edge amplitude is {ratio:.3e} of the peak; enlarge the grid halfwidth (suggest >= {suggest:.1} in units of sqrt(hbar))")]
    BoundaryLeakage { ratio: f64, suggest: f64 },

    #[error("grid too narrow for excitation level {level}: need halfwidth >= {need:.2} in units of sqrt(hbar)")]
    GridTooNarrow { level: usize, need: f64 },

    #[error("empty or all-zero coefficient list")]
    EmptyCoefficients,

    #[error("state is not pure: det(cov) = {det:.6e}, pure value = {pure:.6e}")]
    NotPure { det: f64, pure: f64 },

    #[error("mixture weights must be nonnegative and sum to 1 (sum = {0})")]
    BadWeights(f64),

    #[error("mixture components must share the same hbar")]
    MixedHbar,

    #[error("mixture must have at least one component")]
    EmptyMixture,

    #[error("position shift {shift} is not a whole number of grid steps (dq = {step})")]
    FractionalShift { shift: f64, step: f64 },

    #[error("distribution is not normalized: |sum*dr - 1| = {0:.3e}")]
    DistributionNotNormalized(f64),

    #[error("distribution has a negative entry ({0:.3e})")]
    NegativeDensity(f64),

    #[error("constrained minimization did not converge: residual {residual:.3e} after {iterations} iterations")]
    KktNotConverged { residual: f64, iterations: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
