//! Observables linear in position and momentum: coefficient-space geometry,
//! uncertainty bound verification, symplectic reductions, and entropic scans
//! on grid wavefunctions.
//!
//! The crate is organized around the coefficient pair `(a, b) ∈ R^N × R^N`:
//! [`coeffspace`] measures its incompatibility `|a∧b|`, [`transforms`]
//! reduces it to standard form and builds extremal Gaussian states,
//! [`moments`] checks every variance-based bound, and [`entropy`] evaluates
//! quadrature densities and differential entropies through a fractional
//! Fourier transform.

pub mod coeffspace;
pub mod entropy;
pub mod error;
mod fft_util;
pub mod frft;
pub mod hermite;
pub mod moments;
pub mod sample;
pub mod states;
pub mod transforms;

pub use coeffspace::{
    canonical_circumradius, commutator_matrix, incompatibility, incompatibility_objective,
    maximize_incompatibility, regular_polygon, AntisymmetricMatrix, CoefficientPair,
    MaximizationResult, PolygonSpec,
};
pub use entropy::{
    entropic_product_consistency, hirschman_bound, hirschman_check, polygon_entropy_scan,
    rotate_quadrature, shannon_entropy, variance_entropy_check, EntropyReport,
    QuadratureDistribution,
};
pub use error::{Error, Result};
pub use moments::{
    am_gm_chain_check, commutator_form_bound, concavity_check, kkt_cross_check, linear_ur_check,
    pairwise_concatenated_bound, product_check, sum_check, variances, BoundReport, KktReport,
    VarianceVector, DEFAULT_TOL,
};
pub use states::{
    gaussian_grid, grid_moments, ground_state, hermite_superposition, GaussianState, Grid,
    GridWavefunction, MixtureState, State,
};
pub use transforms::{
    apply_map, coefficient_action, extremal_state, standard_form, translate, MapKind,
    StandardFormResult, SymplecticMap, Translation,
};
