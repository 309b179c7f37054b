//! Symplectic phase-space maps, the standard-form reduction of the
//! commutation relations, and extremal-state construction.
//!
//! A [`SymplecticMap`] acts on the moment vector `(p, q)` by a 2×2 matrix of
//! unit determinant. Its induced action on a coefficient pair replaces `p̂`
//! and `q̂` by `a` and `b` in the same linear relations, which preserves the
//! incompatibility because `a'∧b' = det(M) a∧b`.

use serde::{Deserialize, Serialize};

use crate::coeffspace::{incompatibility, CoefficientPair};
use crate::error::{Error, Result};
use crate::states::GaussianState;

/// Originating parameters of a symplectic map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapKind {
    Gauge { g: f64 },
    Squeeze { gamma: f64 },
    Rotation { theta: f64 },
    Composite,
}

/// 2×2 unit-determinant matrix acting on the `(p, q)` moment vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticMap {
    m: [[f64; 2]; 2],
    kind: MapKind,
}

impl SymplecticMap {
    /// Momentum-gauge shear: `(p, q) → (p, q + g p)`.
    pub fn gauge(g: f64) -> Self {
        Self {
            m: [[1.0, 0.0], [g, 1.0]],
            kind: MapKind::Gauge { g },
        }
    }

    /// Axis squeeze: `(p, q) → (γ p, q/γ)`. The multiplicative factor γ
    /// relates to the exponential generator parameter by `γ = e^{γ_gen}`.
    pub fn squeeze(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma != 0.0) {
            return Err(Error::BadSqueeze(gamma));
        }
        Ok(Self {
            m: [[gamma, 0.0], [0.0, 1.0 / gamma]],
            kind: MapKind::Squeeze { gamma },
        })
    }

    /// Phase-space rotation: `(p, q) → (p cos ϑ + q sin ϑ, -p sin ϑ + q cos ϑ)`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            m: [[c, s], [-s, c]],
            kind: MapKind::Rotation { theta },
        }
    }

    pub fn identity() -> Self {
        Self::gauge(0.0)
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.m
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &SymplecticMap) -> SymplecticMap {
        let a = self.m;
        let b = other.m;
        let mut m = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        let map = SymplecticMap {
            m,
            kind: MapKind::Composite,
        };
        debug_assert!((map.det() - 1.0).abs() < 1e-12);
        map
    }

    pub fn inverse(&self) -> SymplecticMap {
        // det = 1, so the inverse is the adjugate.
        let m = self.m;
        SymplecticMap {
            m: [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]],
            kind: match self.kind {
                MapKind::Gauge { g } => MapKind::Gauge { g: -g },
                MapKind::Squeeze { gamma } => MapKind::Squeeze { gamma: 1.0 / gamma },
                MapKind::Rotation { theta } => MapKind::Rotation { theta: -theta },
                MapKind::Composite => MapKind::Composite,
            },
        }
    }
}

/// Propagates a Gaussian state: `mean' = M mean`, `Σ' = M Σ Mᵀ`. Purity is
/// preserved since `det M = 1`.
pub fn apply_map(state: &GaussianState, map: &SymplecticMap) -> GaussianState {
    let m = map.m;
    let mean = state.mean();
    let new_mean = [
        m[0][0] * mean[0] + m[0][1] * mean[1],
        m[1][0] * mean[0] + m[1][1] * mean[1],
    ];
    let s = state.cov();
    // M Σ
    let mut ms = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            ms[i][j] = m[i][0] * s[0][j] + m[i][1] * s[1][j];
        }
    }
    // (M Σ) Mᵀ
    let mut cov = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            cov[i][j] = ms[i][0] * m[j][0] + ms[i][1] * m[j][1];
        }
    }
    // Symmetrize exactly; roundoff may split the off-diagonal.
    let c = 0.5 * (cov[0][1] + cov[1][0]);
    cov[0][1] = c;
    cov[1][0] = c;
    GaussianState::new(state.hbar(), new_mean, cov)
        .expect("unit-determinant maps preserve admissibility")
}

/// Induced action on coefficient vectors:
/// `(a, b) → (m00 a + m01 b, m10 a + m11 b)`.
///
/// Gauge: `(a, b + g a)`; squeeze: `(γ a, b/γ)`; rotation mixes both rows.
/// The incompatibility is invariant in every case.
pub fn coefficient_action(pair: &CoefficientPair, map: &SymplecticMap) -> CoefficientPair {
    let m = map.m;
    let a: Vec<f64> = pair
        .a()
        .iter()
        .zip(pair.b())
        .map(|(x, y)| m[0][0] * x + m[0][1] * y)
        .collect();
    let b: Vec<f64> = pair
        .a()
        .iter()
        .zip(pair.b())
        .map(|(x, y)| m[1][0] * x + m[1][1] * y)
        .collect();
    CoefficientPair::new(a, b).expect("linear action preserves shape")
}

/// Rigid phase-space displacement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Translation {
    pub dp: f64,
    pub dq: f64,
}

/// Shifts the means and leaves every second moment untouched.
pub fn translate(state: &GaussianState, t: &Translation) -> GaussianState {
    GaussianState::new(
        state.hbar(),
        [state.mean_p() + t.dp, state.mean_q() + t.dq],
        state.cov(),
    )
    .expect("translation preserves the covariance")
}

/// Result of reducing a coefficient pair to standard form.
///
/// `reduced` holds `(√|a∧b| e₁, √|a∧b| e₂)`; `rotation` is the orthogonal
/// N×N matrix applied last; `gauge_g` and `squeeze_gamma` are the parameters
/// of the first two steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StandardFormRepr", into = "StandardFormRepr")]
pub struct StandardFormResult {
    pub reduced: CoefficientPair,
    pub rotation: Vec<Vec<f64>>,
    pub gauge_g: f64,
    pub squeeze_gamma: f64,
}

#[derive(Serialize, Deserialize)]
struct StandardFormRepr {
    reduced_a: Vec<f64>,
    reduced_b: Vec<f64>,
    rotation: Vec<Vec<f64>>,
    gauge_g: f64,
    squeeze_gamma: f64,
}

impl TryFrom<StandardFormRepr> for StandardFormResult {
    type Error = Error;
    fn try_from(r: StandardFormRepr) -> Result<Self> {
        Ok(Self {
            reduced: CoefficientPair::new(r.reduced_a, r.reduced_b)?,
            rotation: r.rotation,
            gauge_g: r.gauge_g,
            squeeze_gamma: r.squeeze_gamma,
        })
    }
}

impl From<StandardFormResult> for StandardFormRepr {
    fn from(r: StandardFormResult) -> Self {
        Self {
            reduced_a: r.reduced.a().to_vec(),
            reduced_b: r.reduced.b().to_vec(),
            rotation: r.rotation,
            gauge_g: r.gauge_g,
            squeeze_gamma: r.squeeze_gamma,
        }
    }
}

impl StandardFormResult {
    /// Undoes the reduction: inverse rotation, inverse squeeze, inverse
    /// gauge, recovering the original pair up to rounding.
    pub fn reconstruct(&self) -> CoefficientPair {
        let n = self.reduced.n();
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        // Rᵀ x: rows of R are the basis vectors, so Rᵀ has them as columns.
        for i in 0..n {
            for (j, row) in self.rotation.iter().enumerate() {
                a[i] += row[i] * self.reduced.a()[j];
                b[i] += row[i] * self.reduced.b()[j];
            }
        }
        let g = self.squeeze_gamma;
        for i in 0..n {
            a[i] /= g;
            b[i] *= g;
        }
        for i in 0..n {
            b[i] -= self.gauge_g * a[i];
        }
        CoefficientPair::new(a, b).expect("reconstruction preserves shape")
    }

    /// Largest entry of `RᵀR - I`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.rotation.len();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let mut dot = 0.0;
                for row in &self.rotation {
                    dot += row[i] * row[j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

const DEGENERACY_THRESHOLD: f64 = 1e-12;
const PARALLEL_SEED_THRESHOLD: f64 = 1e-8;

/// Reduces the commutation relations to standard form: gauge to orthogonal
/// vectors, squeeze to equal lengths `√|a∧b|`, then rotate the pair onto the
/// first two basis directions via Gram–Schmidt completion.
pub fn standard_form(pair: &CoefficientPair) -> Result<StandardFormResult> {
    let inc = incompatibility(pair);
    if inc <= DEGENERACY_THRESHOLD {
        return Err(Error::CompatibleSet);
    }
    let n = pair.n();

    // Gauge to a rectangle: g⊥ = -a·b/|a|².
    let gauge_g = -pair.dot() / pair.norm_a_sq();
    let a_perp = pair.a().to_vec();
    let b_perp: Vec<f64> = pair
        .b()
        .iter()
        .zip(&a_perp)
        .map(|(y, x)| y + gauge_g * x)
        .collect();

    // Squeeze to equal lengths √(|a⊥||b⊥|) = √|a∧b|.
    let len_a = a_perp.iter().map(|x| x * x).sum::<f64>().sqrt();
    let len_b = b_perp.iter().map(|x| x * x).sum::<f64>().sqrt();
    let squeeze_gamma = (len_b / len_a).sqrt();
    let a_eq: Vec<f64> = a_perp.iter().map(|x| x * squeeze_gamma).collect();
    let b_eq: Vec<f64> = b_perp.iter().map(|x| x / squeeze_gamma).collect();

    // Rotation with rows (e_a, e_b, Gram–Schmidt completion) maps e_a → e₁
    // and e_b → e₂.
    let common = (len_a * len_b).sqrt();
    let e_a: Vec<f64> = a_eq.iter().map(|x| x / common).collect();
    let e_b: Vec<f64> = b_eq.iter().map(|x| x / common).collect();
    let rotation = orthonormal_completion(e_a, e_b, n);

    let rotate = |v: &[f64]| -> Vec<f64> {
        rotation
            .iter()
            .map(|row| row.iter().zip(v).map(|(r, x)| r * x).sum())
            .collect()
    };
    let reduced = CoefficientPair::new(rotate(&a_eq), rotate(&b_eq))?;

    Ok(StandardFormResult {
        reduced,
        rotation,
        gauge_g,
        squeeze_gamma,
    })
}

/// Completes two orthonormal vectors to an orthonormal basis of `R^n`,
/// seeding with standard basis vectors in index order and skipping seeds that
/// are nearly parallel to the span already chosen.
fn orthonormal_completion(e_a: Vec<f64>, e_b: Vec<f64>, n: usize) -> Vec<Vec<f64>> {
    let mut basis = vec![normalize(e_a)];
    basis.push(normalize(project_out(e_b, &basis)));
    let mut seed = 0;
    while basis.len() < n && seed < n {
        let mut v = vec![0.0; n];
        v[seed] = 1.0;
        seed += 1;
        // Two projection passes keep the basis orthonormal well below 1e-11.
        let w = project_out(project_out(v, &basis), &basis);
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > PARALLEL_SEED_THRESHOLD {
            basis.push(w.into_iter().map(|x| x / norm).collect());
        }
    }
    debug_assert_eq!(basis.len(), n);
    basis
}

fn project_out(mut v: Vec<f64>, basis: &[Vec<f64>]) -> Vec<f64> {
    for u in basis {
        let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        for (x, u_i) in v.iter_mut().zip(u) {
            *x -= dot * u_i;
        }
    }
    v
}

fn normalize(v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// Gaussian state minimizing `μ Δ²p + ν Δ²q + 2λ C_pq`: a gauged, squeezed
/// ground state with covariance
/// `Σ = ħ/(2√(μν-λ²)) [[ν, -λ], [-λ, μ]]`.
///
/// The construction composes the moment-level squeeze `γ = √(ν/√(μν-λ²))`
/// and gauge `g = -λ/ν`; the gauge sign is opposite to the unitary's
/// generator parameter because moments transform inversely to operators.
pub fn extremal_state(mu: f64, nu: f64, lambda: f64, hbar: f64) -> Result<GaussianState> {
    let disc = mu * nu - lambda * lambda;
    if !(mu > 0.0 && nu > 0.0 && disc > 0.0)
        || !mu.is_finite()
        || !nu.is_finite()
        || !lambda.is_finite()
    {
        return Err(Error::BadLinearParams { mu, nu, lambda });
    }
    let root = disc.sqrt();
    let gamma = (nu / root).sqrt();
    let map = SymplecticMap::gauge(-lambda / nu).compose(&SymplecticMap::squeeze(gamma)?);
    let state = apply_map(&crate::states::ground_state(hbar)?, &map);
    debug_assert!({
        let scale = hbar / (2.0 * root);
        let want = [[nu * scale, -lambda * scale], [-lambda * scale, mu * scale]];
        let got = state.cov();
        (0..2).all(|i| (0..2).all(|j| (got[i][j] - want[i][j]).abs() < 1e-12 * (1.0 + hbar)))
    });
    Ok(state)
}
