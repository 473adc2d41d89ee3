// Reference literals keep the oracle's full printed precision.
#![allow(clippy::excessive_precision)]

//! Value tests against independent oracles.
//!
//! Reference values were computed with an mpmath script (dps = 30):
//! plain 60-step bisection on the final-size defect seeded a
//! high-precision Newton solve, derivatives came from the implicit
//! formulas evaluated at that root, and scan thresholds from a 2000-point
//! sign scan refined by 120-step bisection. The in-file bisection oracle
//! reproduces the same root with none of the library's Newton machinery.

use pgl::analysis::{altruistic_poa_growth, optimal_social_cost};
use pgl::epidemic::{attack_probability, attack_probability_derivative, final_size, simulate_sir};
use pgl::equilibrium::{
    altruistic_stability_interval, enumerate_uniform_ess, max_selfish_support, PopulationType,
};
use pgl::game::{selfish_cost, selfish_cost_derivative, social_cost, Allocation};
use pgl::GameParams;

fn game(r0: f64, eta: f64, c: f64) -> GameParams {
    GameParams::new(r0, eta, c).unwrap()
}

/// Pure bisection on the final-size defect, independent of the
/// library's hybrid solver.
fn bisect_final_size(x: f64, r0: f64, eta: f64) -> f64 {
    let g = |r: f64| x - (1.0 - eta) * x * (-r0 * r).exp() - r;
    let (mut lo, mut hi) = (eta * x, x);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn final_size_matches_frozen_references() {
    // (x, r0, eta, reference)
    let cases = [
        (1.0, 2.0, 0.01, 0.80020396767679926391),
        (0.25, 2.0, 0.01, 0.0049267804950645185896),
        (0.5, 2.0, 0.05, 0.14352413955544607218),
        (0.5, 2.0, 0.01, 0.067578642179394797552),
        (1.0, 0.5, 0.5, 0.63624276162088126348),
        (1.0, 1.0, 0.5, 0.76803904701346556526),
    ];
    for (x, r0, eta, reference) in cases {
        let sol = final_size(x, &game(r0, eta, 1.0)).unwrap();
        assert!(
            (sol.r_inf - reference).abs() <= 1e-12,
            "final_size({x}; {r0}, {eta}) = {} vs {reference}",
            sol.r_inf
        );
        let oracle = bisect_final_size(x, r0, eta);
        assert!((sol.r_inf - oracle).abs() <= 1e-12);
    }
}

#[test]
fn attack_probability_matches_bisection_oracle() {
    let g = game(2.0, 0.01, 1.0);
    let p = attack_probability(1.0, &g).unwrap();
    assert!((p - 0.80020396767679926391).abs() <= 1e-12);
    // Near the origin the probability approaches eta with slope
    // (1 - eta) r0 eta.
    let g = game(2.0, 0.3, 1.0);
    let p = attack_probability(1e-8, &g).unwrap();
    assert!((p - 0.3000000042).abs() <= 1e-12);
}

#[test]
fn selfish_cost_total_matches_reference() {
    let g = game(2.0, 0.01, 1.0);
    let cost = selfish_cost(1.0, &g).unwrap();
    assert!((cost.total - 1.80020396767679926391).abs() <= 1e-12);
}

#[test]
fn social_cost_of_uniform_four_matches_reference() {
    let g = game(2.0, 0.01, 0.05);
    let alloc = Allocation::uniform(4).unwrap();
    let cost = social_cost(&alloc, &g).unwrap();
    assert!((cost - 0.21970712198025807436).abs() <= 1e-12, "{cost}");
}

#[test]
fn first_derivative_matches_central_difference() {
    let g = game(2.0, 0.05, 1.0);
    let h = 1e-6;
    for x in [0.2, 0.5, 0.8] {
        let sol = final_size(x, &g).unwrap();
        let fd = (final_size(x + h, &g).unwrap().r_inf - final_size(x - h, &g).unwrap().r_inf)
            / (2.0 * h);
        assert!(
            (sol.r_prime - fd).abs() <= 1e-5,
            "R'({x}) = {} vs fd {fd}",
            sol.r_prime
        );
    }
}

#[test]
fn second_derivative_matches_central_difference_and_reference() {
    let g = game(2.0, 0.05, 1.0);
    let h = 1e-4;
    let x = 0.2;
    let sol = final_size(x, &g).unwrap();
    let fd = (final_size(x + h, &g).unwrap().r_inf - 2.0 * sol.r_inf
        + final_size(x - h, &g).unwrap().r_inf)
        / (h * h);
    assert!((sol.r_double_prime - fd).abs() <= 1e-3);
    assert!((sol.r_double_prime - 0.71749243276172838672).abs() <= 1e-10);
}

#[test]
fn attack_derivative_matches_central_difference() {
    let g = game(2.0, 0.05, 1.0);
    let h = 1e-6;
    for x in [0.3, 0.6] {
        let analytic = attack_probability_derivative(x, &g).unwrap();
        let fd = (attack_probability(x + h, &g).unwrap() - attack_probability(x - h, &g).unwrap())
            / (2.0 * h);
        assert!(
            (analytic - fd).abs() <= 1e-5,
            "p'({x}) = {analytic} vs fd {fd}"
        );
    }
}

#[test]
fn selfish_derivative_matches_central_difference() {
    let g = game(2.0, 0.05, 0.05);
    let h = 1e-6;
    let x = 0.8;
    let analytic = selfish_cost_derivative(x, &g).unwrap();
    let fd = (selfish_cost(x + h, &g).unwrap().total - selfish_cost(x - h, &g).unwrap().total)
        / (2.0 * h);
    assert!((analytic - fd).abs() <= 1e-5);
}

#[test]
fn selfish_support_threshold_matches_reference() {
    let bound = max_selfish_support(&game(2.0, 0.01, 0.05)).unwrap();
    let x_bar = bound.x_bar.expect("derivative changes sign here");
    assert!((x_bar - 0.39206199099082402099).abs() <= 1e-9, "{x_bar}");
    assert_eq!(bound.m_g, 2);
    // Enumeration respects the bound.
    let records =
        enumerate_uniform_ess(&game(2.0, 0.01, 0.05), PopulationType::Selfish, 100).unwrap();
    let supports: Vec<usize> = records.iter().map(|r| r.support_size).collect();
    assert_eq!(supports, vec![1, 2]);
}

#[test]
fn optimum_upper_bounds_match_reference() {
    let opt = optimal_social_cost(&game(2.0, 0.01, 0.05), 400).unwrap();
    assert!((opt.upper - 0.17887568896862980877).abs() <= 1e-12);
    assert_eq!(opt.argmin_support, 3);

    let opt = optimal_social_cost(&game(2.0, 0.01, 0.01), 200).unwrap();
    assert!((opt.upper - 0.058875688968629808769).abs() <= 1e-12);
    assert_eq!(opt.argmin_support, 3);
}

#[test]
fn stability_interval_matches_reference() {
    let a = altruistic_stability_interval(&game(2.0, 0.01, 1.0)).unwrap();
    assert!((a - 0.62201752650429501254).abs() <= 1e-6, "{a}");
}

#[test]
fn altruistic_threshold_sits_between_three_and_four_locations() {
    // R'(1/3) = 0.0819 > C + eta = 0.06 >= R'(1/4) = 0.0387.
    let g = game(2.0, 0.01, 0.05);
    let r3 = final_size(1.0 / 3.0, &g).unwrap().r_prime;
    let r4 = final_size(0.25, &g).unwrap().r_prime;
    assert!((r3 - 0.081897380341704172445).abs() <= 1e-12);
    assert!((r4 - 0.038652514149331619336).abs() <= 1e-12);
    assert!(r3 > 0.06 && r4 <= 0.06);
}

#[test]
fn altruistic_growth_table_matches_reference() {
    let g = game(2.0, 0.01, 0.05);
    let entries = altruistic_poa_growth(&g, &[100], 1000).unwrap();
    assert!(entries[0].is_ess);
    assert!((entries[0].social_cost - 5.0102019785691582603).abs() <= 1e-10);
    assert!((entries[0].ratio - 28.009407021475225).abs() <= 1e-9);
    assert!((entries[0].floor - 100.0 * 0.05 / 1.05).abs() <= 1e-12);
}

#[test]
fn altruistic_stable_states_fill_every_size_past_the_threshold() {
    // At these parameters every support size from four up is stable, so
    // the enumeration count scales with the scan limit: no upper cutoff.
    let g = game(2.0, 0.01, 0.05);
    let to_500 = enumerate_uniform_ess(&g, PopulationType::Altruistic, 500).unwrap();
    let supports: Vec<usize> = to_500.iter().map(|r| r.support_size).collect();
    assert_eq!(supports, (4..=500).collect::<Vec<_>>());
    let to_1000 = enumerate_uniform_ess(&g, PopulationType::Altruistic, 1000).unwrap();
    assert_eq!(to_1000.len(), to_500.len() + 500);
}

#[test]
fn supercritical_slope_reference() {
    let sol = final_size(1.0, &game(2.0, 0.01, 1.0)).unwrap();
    assert!((sol.r_prime - 1.3327671414028443258).abs() <= 1e-11);
    let sol = final_size(1.0, &game(0.5, 0.001, 1.0)).unwrap();
    assert!((sol.r_prime - 0.0039860544432764769633).abs() <= 1e-12);
}

#[test]
fn monotone_on_grids() {
    // Final size and attack probability are nondecreasing in density,
    // initial infections, and the reproduction number.
    let xs: Vec<f64> = (1..=20).map(|i| i as f64 * 0.05).collect();
    let etas = [0.001, 0.01, 0.1, 0.5];
    let r0s = [0.5, 1.0, 2.0, 4.0];
    for &r0 in &r0s {
        for &eta in &etas {
            let g = game(r0, eta, 1.0);
            let mut prev_r = 0.0;
            let mut prev_p = eta;
            for &x in &xs {
                let sol = final_size(x, &g).unwrap();
                assert!(sol.r_inf >= prev_r - 1e-12);
                assert!(sol.p >= prev_p - 1e-12);
                prev_r = sol.r_inf;
                prev_p = sol.p;
            }
        }
    }
    for &x in &[0.25, 1.0] {
        for w in etas.windows(2) {
            let a = final_size(x, &game(2.0, w[0], 1.0)).unwrap().r_inf;
            let b = final_size(x, &game(2.0, w[1], 1.0)).unwrap().r_inf;
            assert!(b >= a - 1e-12);
        }
        for w in r0s.windows(2) {
            let a = final_size(x, &game(w[0], 0.05, 1.0)).unwrap().r_inf;
            let b = final_size(x, &game(w[1], 0.05, 1.0)).unwrap().r_inf;
            assert!(b >= a - 1e-12);
        }
    }
}

#[test]
fn uniform_identity_holds_up_to_two_hundred_locations() {
    for &(r0, eta, c) in &[(2.0, 0.01, 0.05), (0.5, 0.5, 5.0), (4.0, 0.1, 0.1)] {
        let g = game(r0, eta, c);
        for n in 1..=200usize {
            let alloc = Allocation::uniform(n).unwrap();
            let social = social_cost(&alloc, &g).unwrap();
            let per_capita = selfish_cost(1.0 / n as f64, &g).unwrap().total;
            assert!(
                (social - per_capita).abs() <= 1e-9 * per_capita.abs().max(1.0),
                "n = {n}: {social} vs {per_capita}"
            );
        }
    }
}

#[test]
fn ode_terminal_matches_solver_at_spot_checks() {
    for &(x, r0, eta) in &[(1.0, 2.0, 0.01), (0.25, 4.0, 0.001), (1.0, 1.0, 0.001)] {
        let g = game(r0, eta, 1.0);
        let sol = final_size(x, &g).unwrap();
        let traj = simulate_sir(x, &g, 2000.0, 0.01).unwrap();
        assert!(traj.extinct);
        assert!(
            (traj.terminal_r - sol.r_inf).abs() <= 1e-6,
            "({x}, {r0}, {eta}): |{} - {}|",
            traj.terminal_r,
            sol.r_inf
        );
    }
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        /// The returned root always sits in the bracket with a tiny
        /// residual and a positive stable-branch denominator.
        #[test]
        fn solver_invariants(
            r0 in 0.05f64..8.0,
            eta in 0.0001f64..0.9999,
            x in 1e-6f64..1.0,
        ) {
            let g = game(r0, eta, 1.0);
            let sol = final_size(x, &g).unwrap();
            prop_assert!(sol.r_inf >= eta * x - 1e-15);
            prop_assert!(sol.r_inf <= x + 1e-15);
            prop_assert!(sol.residual <= 1e-10);
            prop_assert!(sol.p >= eta - 1e-12 && sol.p <= 1.0 + 1e-12);
            let denom = 1.0 - x * r0 * (1.0 - eta) * (-r0 * sol.r_inf).exp();
            prop_assert!(denom > 0.0);
        }

        /// Social cost ignores the order densities are listed in.
        #[test]
        fn social_cost_permutation_invariant(
            mut raw in proptest::collection::vec(0.05f64..1.0, 2..6),
            seed in any::<u64>(),
        ) {
            let total: f64 = raw.iter().sum();
            for d in raw.iter_mut() {
                *d /= total;
            }
            let g = game(2.0, 0.05, 0.3);
            let base = social_cost(&Allocation::new(raw.clone()).unwrap(), &g).unwrap();
            // Deterministic shuffle from the seed.
            let mut shuffled = raw.clone();
            let mut state = seed;
            for i in (1..shuffled.len()).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                shuffled.swap(i, j);
            }
            let permuted = social_cost(&Allocation::new(shuffled).unwrap(), &g).unwrap();
            prop_assert!((base - permuted).abs() <= 1e-12);
        }

        /// Per-capita and total cost agree on uniform allocations.
        #[test]
        fn uniform_identity_random(
            n in 1usize..=200,
            r0 in 0.1f64..6.0,
            eta in 0.001f64..=1.0,
            c in 0.01f64..5.0,
        ) {
            let g = game(r0, eta, c);
            let social = social_cost(&Allocation::uniform(n).unwrap(), &g).unwrap();
            let per_capita = selfish_cost(1.0 / n as f64, &g).unwrap().total;
            prop_assert!((social - per_capita).abs() <= 1e-9 * per_capita.abs().max(1.0));
        }

        /// The final size never decreases in density.
        #[test]
        fn monotone_in_density(
            r0 in 0.1f64..6.0,
            eta in 0.001f64..0.999,
            x in 1e-4f64..0.99,
            bump in 1e-4f64..0.01,
        ) {
            let g = game(r0, eta, 1.0);
            let a = final_size(x, &g).unwrap().r_inf;
            let b = final_size(x + bump, &g).unwrap().r_inf;
            prop_assert!(b >= a - 1e-12);
        }
    }
}
