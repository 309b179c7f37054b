//! Variance calculus for the r-observables and all variance-based bound
//! checks: the linear combination bound, the sum and product bounds, the
//! commutator and pairwise-concatenated forms, the mean chain, and variance
//! concavity on mixtures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeffspace::{commutator_matrix, incompatibility, CoefficientPair};
use crate::error::{Error, Result};
use crate::states::{GaussianState, MixtureState};

/// Default saturation/satisfaction tolerance for bound reports.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Outcome of checking one inequality `lhs ≥ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs/rhs`, `+∞` when `rhs = 0` (compatible sets make the bound trivial).
    pub ratio: f64,
    pub satisfied: bool,
    pub saturated: bool,
    pub tol: f64,
}

impl BoundReport {
    /// Evaluates `lhs ≥ rhs` with slack `tol·max(1, |rhs|)`; `saturated`
    /// flags equality within the same slack.
    pub fn evaluate(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = tol * rhs.abs().max(1.0);
        Self {
            name: name.into(),
            lhs,
            rhs,
            ratio: if rhs == 0.0 { f64::INFINITY } else { lhs / rhs },
            satisfied: lhs >= rhs - slack,
            saturated: (lhs - rhs).abs() <= slack,
            tol,
        }
    }
}

/// Variances of the N observables, in units of `ħ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceVector(Vec<f64>);

impl VarianceVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn product(&self) -> f64 {
        self.0.iter().product()
    }
}

/// Per-observable variances `Δ²r_j = a_j² Δ²p + b_j² Δ²q + 2 a_j b_j C_pq`,
/// i.e. the quadratic form `(a_j, b_j) Σ (a_j, b_j)ᵀ`.
pub fn variances(moments: &GaussianState, pair: &CoefficientPair) -> VarianceVector {
    let (vp, vq, c) = (moments.var_p(), moments.var_q(), moments.cov_pq());
    VarianceVector(
        (0..pair.n())
            .map(|j| {
                let (a, b) = pair.row(j);
                a * a * vp + b * b * vq + 2.0 * a * b * c
            })
            .collect(),
    )
}

/// Sum bound: `Σ_j Δ²r_j ≥ ħ |a∧b|`. Holds for every admissible state.
pub fn sum_check(moments: &GaussianState, pair: &CoefficientPair, tol: f64) -> BoundReport {
    let lhs = variances(moments, pair).sum();
    let rhs = moments.hbar() * incompatibility(pair);
    BoundReport::evaluate("sum", lhs, rhs, tol)
}

/// Product bound: `Π_j Δ²r_j ≥ (ħ |a∧b| / N)^N`.
pub fn product_check(moments: &GaussianState, pair: &CoefficientPair, tol: f64) -> BoundReport {
    let lhs = variances(moments, pair).product();
    let n = pair.n() as f64;
    let rhs = (moments.hbar() * incompatibility(pair) / n).powi(pair.n() as i32);
    BoundReport::evaluate("product", lhs, rhs, tol)
}

/// Linear combination bound:
/// `μ Δ²p + ν Δ²q + 2λ C_pq ≥ ħ √(μν - λ²)` for `μ, ν > 0`, `μν > λ²`.
pub fn linear_ur_check(
    moments: &GaussianState,
    mu: f64,
    nu: f64,
    lambda: f64,
    tol: f64,
) -> Result<BoundReport> {
    let disc = mu * nu - lambda * lambda;
    if !(mu > 0.0 && nu > 0.0 && disc > 0.0) {
        return Err(Error::BadLinearParams { mu, nu, lambda });
    }
    let lhs = mu * moments.var_p() + nu * moments.var_q() + 2.0 * lambda * moments.cov_pq();
    let rhs = moments.hbar() * disc.sqrt();
    Ok(BoundReport::evaluate("linear", lhs, rhs, tol))
}

/// Sum-bound value expressed through the pairwise commutators:
/// `sqrt(Σ_{j>k} |ħ A_jk|²)`, equal to `ħ |a∧b|`.
pub fn commutator_form_bound(pair: &CoefficientPair, hbar: f64) -> f64 {
    let m = commutator_matrix(pair);
    let mut sum = 0.0;
    for j in 0..pair.n() {
        for k in 0..j {
            let c = hbar * m.entry(j, k);
            sum += c * c;
        }
    }
    sum.sqrt()
}

/// Weaker bound assembled from the pairwise inequalities:
/// `(1/(N-1)) Σ_{j>k} ħ |A_jk|`. Strictly below the commutator form for
/// N > 2 whenever any area is nonzero.
pub fn pairwise_concatenated_bound(pair: &CoefficientPair, hbar: f64) -> Result<f64> {
    if pair.n() <= 2 {
        return Err(Error::NeedsThreeObservables(pair.n()));
    }
    let m = commutator_matrix(pair);
    let mut sum = 0.0;
    for j in 0..pair.n() {
        for k in 0..j {
            sum += (hbar * m.entry(j, k)).abs();
        }
    }
    Ok(sum / (pair.n() as f64 - 1.0))
}

/// The two links of the mean chain:
/// arithmetic mean ≥ geometric mean, and geometric mean ≥ `ħ|a∧b|/N`.
pub fn am_gm_chain_check(
    moments: &GaussianState,
    pair: &CoefficientPair,
    tol: f64,
) -> (BoundReport, BoundReport) {
    let vars = variances(moments, pair);
    let n = pair.n() as f64;
    let arithmetic = vars.sum() / n;
    let geometric = vars.product().powf(1.0 / n);
    let bound = moments.hbar() * incompatibility(pair) / n;
    (
        BoundReport::evaluate("am_gm", arithmetic, geometric, tol),
        BoundReport::evaluate("gm_bound", geometric, bound, tol),
    )
}

/// Numeric validation of the constrained product minimum.
#[derive(Debug, Clone, Serialize)]
pub struct KktReport {
    pub n: usize,
    /// Constraint level `c` in `Σ x_j ≥ c`.
    pub c: f64,
    pub minimizer: Vec<f64>,
    pub numeric_min: f64,
    /// Analytic stationary value `(c/N)^N`.
    pub expected_min: f64,
    /// Worst relative spread of the stationarity multipliers
    /// `∂(Πx)/∂x_j` across j.
    pub kkt_residual: f64,
    pub iterations: usize,
    pub starts: usize,
}

/// Finds the positive stationary point of `Π x_j` under the active
/// constraint `Σ x_j = c` by projected multiplicative updates
/// `x_j ← c·√x_j / Σ√x_i`, whose unique positive fixed point is the
/// all-equal solution. Verifies the stationarity conditions at convergence
/// and that all `starts` random initializations agree.
pub fn kkt_cross_check(c: f64, n: usize, starts: usize, seed: u64) -> Result<KktReport> {
    assert!(c > 0.0 && n >= 2);
    let starts = starts.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<KktReport> = None;
    for _ in 0..starts {
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 0.05).collect();
        let scale = c / x.iter().sum::<f64>();
        x.iter_mut().for_each(|v| *v *= scale);

        let mut iterations = 0;
        for it in 0..200 {
            iterations = it + 1;
            let roots: Vec<f64> = x.iter().map(|v| v.sqrt()).collect();
            let norm = c / roots.iter().sum::<f64>();
            let next: Vec<f64> = roots.iter().map(|r| r * norm).collect();
            let delta = x
                .iter()
                .zip(&next)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0_f64, f64::max);
            x = next;
            if delta < 1e-15 * c {
                break;
            }
        }

        // Stationarity: the partial derivatives Π_{i≠j} x_i must all equal
        // the multiplier.
        let product: f64 = x.iter().product();
        let grads: Vec<f64> = x.iter().map(|v| product / v).collect();
        let kappa = grads.iter().sum::<f64>() / n as f64;
        let residual = grads
            .iter()
            .map(|g| (g - kappa).abs() / kappa)
            .fold(0.0_f64, f64::max);
        if residual > 1e-10 {
            return Err(Error::KktNotConverged {
                residual,
                iterations,
            });
        }
        let report = KktReport {
            n,
            c,
            minimizer: x,
            numeric_min: product,
            expected_min: (c / n as f64).powi(n as i32),
            kkt_residual: residual,
            iterations,
            starts,
        };
        match &best {
            Some(b) => {
                let drift = b
                    .minimizer
                    .iter()
                    .zip(&report.minimizer)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0_f64, f64::max);
                if drift > 1e-8 * c {
                    return Err(Error::KktNotConverged {
                        residual: drift,
                        iterations,
                    });
                }
            }
            None => best = Some(report),
        }
    }
    Ok(best.expect("at least one start"))
}

/// KKT validation at the constraint level induced by a coefficient pair,
/// `c = ħ |a∧b|`.
pub fn kkt_cross_check_pair(
    pair: &CoefficientPair,
    hbar: f64,
    starts: usize,
    seed: u64,
) -> Result<KktReport> {
    let c = hbar * incompatibility(pair);
    if c <= 0.0 {
        return Err(Error::CompatibleSet);
    }
    kkt_cross_check(c, pair.n(), starts, seed)
}

/// Variance concavity on a mixture: for every observable and for their sum,
/// the mixture variance dominates the weighted component variances. Returns
/// the report with the smallest margin (absolute slack `1e-12`).
pub fn concavity_check(mixture: &MixtureState, pair: &CoefficientPair) -> BoundReport {
    let mixed = variances(&mixture.moments(), pair);
    let parts: Vec<VarianceVector> = mixture
        .components()
        .iter()
        .map(|c| variances(c, pair))
        .collect();

    let mut worst: Option<BoundReport> = None;
    let mut consider = |name: String, lhs: f64, rhs: f64| {
        let report = BoundReport {
            name,
            lhs,
            rhs,
            ratio: if rhs == 0.0 { f64::INFINITY } else { lhs / rhs },
            satisfied: lhs >= rhs - 1e-12,
            saturated: (lhs - rhs).abs() <= 1e-12,
            tol: 1e-12,
        };
        let margin = report.lhs - report.rhs;
        let replace = match &worst {
            Some(w) => margin < w.lhs - w.rhs,
            None => true,
        };
        if replace {
            worst = Some(report);
        }
    };

    for j in 0..pair.n() {
        let avg: f64 = mixture
            .weights()
            .iter()
            .zip(&parts)
            .map(|(w, v)| w * v.values()[j])
            .sum();
        consider(format!("concavity_r{}", j + 1), mixed.values()[j], avg);
    }
    let avg_sum: f64 = mixture
        .weights()
        .iter()
        .zip(&parts)
        .map(|(w, v)| w * v.sum())
        .sum();
    consider("concavity_sum".to_string(), mixed.sum(), avg_sum);

    worst.expect("pair has at least two observables")
}
