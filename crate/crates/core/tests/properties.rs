//! Algebraic and statistical invariants of the coefficient-space geometry,
//! the bound checks, and the symplectic actions.

use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quadsure_core::coeffspace::{
    incompatibility, incompatibility_objective, incompatibility_routes, regular_polygon,
    CoefficientPair, PolygonSpec,
};
use quadsure_core::moments::{
    commutator_form_bound, concavity_check, linear_ur_check, pairwise_concatenated_bound,
    product_check, sum_check,
};
use quadsure_core::sample;
use quadsure_core::states::ground_state;
use quadsure_core::transforms::{
    apply_map, coefficient_action, extremal_state, standard_form, translate, SymplecticMap,
    Translation,
};

fn arb_pair(max_n: usize) -> impl Strategy<Value = CoefficientPair> {
    (2..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0..10.0f64, n),
            prop::collection::vec(-10.0..10.0f64, n),
        )
            .prop_map(|(a, b)| CoefficientPair::new(a, b).unwrap())
    })
}

proptest! {
    #[test]
    fn incompatibility_routes_agree(pair in arb_pair(12)) {
        let (lagrange, pairwise, frobenius) = incompatibility_routes(&pair);
        let scale = (pair.norm_a_sq() * pair.norm_b_sq()).max(1.0);
        prop_assert!((lagrange.powi(2) - pairwise.powi(2)).abs() <= 1e-12 * scale);
        prop_assert!((lagrange.powi(2) - frobenius.powi(2)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn incompatibility_scales_quadratically(pair in arb_pair(8), s in 0.0..4.0f64) {
        let scaled = incompatibility(&pair.scaled(s));
        let expected = s * s * incompatibility(&pair);
        prop_assert!((scaled - expected).abs() <= 1e-10 * expected.max(1.0));
    }

    #[test]
    fn unit_rows_never_exceed_half_n(angles in prop::collection::vec(0.0..std::f64::consts::TAU, 2..10)) {
        let n = angles.len() as f64;
        let value = incompatibility_objective(&angles).sqrt();
        prop_assert!(value <= n / 2.0 + 1e-9);
    }

    #[test]
    fn angle_identity_holds(pair in arb_pair(9)) {
        let norm_a = pair.norm_a_sq().sqrt();
        let norm_b = pair.norm_b_sq().sqrt();
        prop_assume!(norm_a > 1e-6 && norm_b > 1e-6);
        let cos_phi = (pair.dot() / (norm_a * norm_b)).clamp(-1.0, 1.0);
        let sin_phi = (1.0 - cos_phi * cos_phi).max(0.0).sqrt();
        let expected = norm_a * norm_b * sin_phi;
        prop_assert!((incompatibility(&pair) - expected).abs() <= 1e-9 * expected.max(1.0));
    }

    #[test]
    fn standard_form_round_trips(pair in arb_pair(10)) {
        let scale = (pair.norm_a_sq() * pair.norm_b_sq()).sqrt();
        prop_assume!(incompatibility(&pair) > 1e-3 * scale.max(1e-9));
        let reduction = standard_form(&pair).unwrap();
        let back = reduction.reconstruct();
        for (x, y) in back.a().iter().zip(pair.a()) {
            prop_assert!((x - y).abs() < 1e-9 * (1.0 + y.abs()));
        }
        for (x, y) in back.b().iter().zip(pair.b()) {
            prop_assert!((x - y).abs() < 1e-9 * (1.0 + y.abs()));
        }
    }
}

#[test]
fn route_agreement_across_sizes() {
    // 10⁴ random pairs spread over N = 2..12.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..10_000 {
        let n = 2 + i % 11;
        let pair = sample::random_pair(&mut rng, n);
        let (lagrange, pairwise, frobenius) = incompatibility_routes(&pair);
        let scale = (pair.norm_a_sq() * pair.norm_b_sq()).max(1.0);
        assert!((lagrange.powi(2) - pairwise.powi(2)).abs() <= 1e-12 * scale);
        assert!((lagrange.powi(2) - frobenius.powi(2)).abs() <= 1e-12 * scale);
    }
}

#[test]
fn polygons_attain_the_unit_row_maximum() {
    for n in 3..=9 {
        let pair = regular_polygon(&PolygonSpec::new(n, 1.0).unwrap());
        let inc = incompatibility(&pair);
        assert_relative_eq!(inc, n as f64 / 2.0, epsilon = 1e-12);
        // Equality comes with balanced orthogonal coefficient vectors.
        assert_relative_eq!(pair.norm_a_sq(), n as f64 / 2.0, epsilon = 1e-9);
        assert_relative_eq!(pair.norm_b_sq(), n as f64 / 2.0, epsilon = 1e-9);
        assert!(pair.dot().abs() < 1e-9);
    }
}

#[test]
fn bounds_hold_on_random_gaussians_and_mixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..4000 {
        let n = 2 + i % 7;
        let pair = sample::random_pair(&mut rng, n);
        let state = sample::random_admissible_gaussian(&mut rng, 1.0);
        assert!(sum_check(&state, &pair, 1e-9).satisfied);
        assert!(product_check(&state, &pair, 1e-9).satisfied);
        let (mu, nu, lambda) = sample::random_linear_params(&mut rng);
        assert!(linear_ur_check(&state, mu, nu, lambda, 1e-9)
            .unwrap()
            .satisfied);
    }
    for i in 0..500 {
        let n = 2 + i % 7;
        let pair = sample::random_pair(&mut rng, n);
        let mixture = sample::random_mixture(&mut rng, 1.0, 4);
        let moments = mixture.moments();
        assert!(sum_check(&moments, &pair, 1e-9).satisfied);
        assert!(product_check(&moments, &pair, 1e-9).satisfied);
        assert!(concavity_check(&mixture, &pair).satisfied);
    }
}

#[test]
fn commutator_form_matches_and_concatenation_is_strict() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for i in 0..1000 {
        let n = 3 + i % 6;
        let pair = sample::random_nondegenerate_pair(&mut rng, n);
        let hbar = 1.0;
        let full = commutator_form_bound(&pair, hbar);
        assert_relative_eq!(
            full,
            hbar * incompatibility(&pair),
            max_relative = 1e-12
        );
        let concat = pairwise_concatenated_bound(&pair, hbar).unwrap();
        assert!(
            concat < full,
            "n={n}: concatenated {concat} not below {full}"
        );
    }
}

#[test]
fn extremal_states_saturate_the_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for _ in 0..1000 {
        let (mu, nu, lambda) = sample::random_linear_params(&mut rng);
        let state = extremal_state(mu, nu, lambda, 1.0).unwrap();
        let report = linear_ur_check(&state, mu, nu, lambda, 1e-10).unwrap();
        assert!(report.saturated, "margin {}", report.lhs - report.rhs);
    }
    for i in 0..1000 {
        let n = 2 + i % 7;
        let pair = sample::random_nondegenerate_pair(&mut rng, n);
        let state =
            extremal_state(pair.norm_a_sq(), pair.norm_b_sq(), pair.dot(), 1.0).unwrap();
        let report = sum_check(&state, &pair, 1e-10);
        assert!(report.saturated, "margin {}", report.lhs - report.rhs);
    }
}

#[test]
fn incompatibility_is_invariant_under_map_compositions() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for i in 0..1000 {
        let n = 2 + i % 7;
        let pair = sample::random_pair(&mut rng, n);
        let base = incompatibility(&pair);
        let mut map = SymplecticMap::identity();
        for _ in 0..1 + i % 4 {
            map = sample::random_map(&mut rng, 2.0, 2.0).compose(&map);
        }
        let moved = coefficient_action(&pair, &map);
        assert!(
            (incompatibility(&moved) - base).abs() <= 1e-11 * base.max(1.0),
            "drift {}",
            (incompatibility(&moved) - base).abs()
        );
    }
}

#[test]
fn maps_preserve_purity_and_translations_preserve_reports() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..500 {
        let state = sample::random_admissible_gaussian(&mut rng, 1.0);
        let map = sample::random_map(&mut rng, 2.0, 2.0);
        let moved = apply_map(&state, &map);
        assert_relative_eq!(moved.det_cov(), state.det_cov(), max_relative = 1e-12);

        let pair = sample::random_pair(&mut rng, 4);
        let before = sum_check(&state, &pair, 1e-9);
        let shifted = translate(
            &state,
            &Translation {
                dp: rng.gen_range(-3.0..3.0),
                dq: rng.gen_range(-3.0..3.0),
            },
        );
        let after = sum_check(&shifted, &pair, 1e-9);
        assert_eq!(before.lhs, after.lhs);
        assert_eq!(before.rhs, after.rhs);
    }
}

#[test]
fn ground_state_linear_bound_equals_incompatibility_times_hbar() {
    // With (μ, ν, λ) taken from a pair, the linear bound is the sum bound.
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    let state = ground_state(1.0).unwrap();
    for _ in 0..200 {
        let pair = sample::random_nondegenerate_pair(&mut rng, 5);
        let sum = sum_check(&state, &pair, 1e-9);
        let linear = linear_ur_check(
            &state,
            pair.norm_a_sq(),
            pair.norm_b_sq(),
            pair.dot(),
            1e-9,
        )
        .unwrap();
        assert_relative_eq!(sum.lhs, linear.lhs, max_relative = 1e-12);
        assert_relative_eq!(sum.rhs, linear.rhs, max_relative = 1e-12);
    }
}
