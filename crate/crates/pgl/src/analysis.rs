//! Optimum bounds and price-of-anarchy certificates.
//!
//! The optimal social cost is never characterized in closed form, so the
//! search over uniform allocations yields only an upper bound, reported
//! as such. The exact lower bound `C` (every allocation opens at least
//! one location) is what the selfish certificate divides by, and the
//! single-location state caps the optimum at `C + 1`.

use serde::{Deserialize, Serialize};

use crate::equilibrium::{
    altruistic_stability_interval, check_ess, enumerate_uniform_ess, max_selfish_support,
    EssTolerances, PopulationType,
};
use crate::error::Result;
use crate::game::{social_cost, Allocation};
use crate::params::GameParams;
use crate::tolerances::CERTIFICATE_SLACK;

/// Bracketing of the optimal social cost.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OptimumBounds {
    /// Exact lower bound: the opening charge of a single location.
    pub lower: f64,
    /// Cheapest uniform allocation found; an upper bound on the optimum,
    /// at most `C + 1`.
    pub upper: f64,
    /// Support size attaining `upper`.
    pub argmin_support: usize,
}

/// Bound the optimal social cost by scanning uniform allocations over
/// `1..=n_max` locations.
pub fn optimal_social_cost(params: &GameParams, n_max: usize) -> Result<OptimumBounds> {
    let mut upper = f64::INFINITY;
    let mut argmin_support = 1;
    for n in 1..=n_max.max(1) {
        let cost = social_cost(&Allocation::uniform(n)?, params)?;
        if cost < upper {
            upper = cost;
            argmin_support = n;
        }
    }
    Ok(OptimumBounds {
        lower: params.c(),
        upper,
        argmin_support,
    })
}

/// Price-of-anarchy report for a selfish population.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoaReport {
    /// Highest social cost over the enumerated stable states.
    pub worst_ess_cost: f64,
    /// Support size of that worst state.
    pub worst_ess_support: usize,
    /// Exact lower bound on the optimum (`C`).
    pub opt_lower: f64,
    /// Best uniform allocation found.
    pub opt_upper: f64,
    pub opt_argmin_support: usize,
    /// `worst_ess_cost / opt_upper`: a certified lower bound on the
    /// price of anarchy.
    pub poa_lower: f64,
    /// `worst_ess_cost / opt_lower`: an upper estimate of the price of
    /// anarchy.
    pub poa_upper_estimate: f64,
    /// The constant-factor bound `3/C + r0`.
    pub theorem_bound: f64,
    /// Whether `poa_upper_estimate <= theorem_bound`.
    pub bound_satisfied: bool,
    /// The stable-state cost bound `max(2, C r0 + 1)`.
    pub ess_cost_bound: f64,
    /// Whether every enumerated state respects it (with roundoff slack).
    pub ess_cost_bound_satisfied: bool,
}

/// Evaluate the selfish price-of-anarchy certificates.
///
/// Enumeration runs to the larger of `n_max` and the selfish support
/// bound, which makes the uniform scan exhaustive over stable states.
pub fn selfish_poa(params: &GameParams, n_max: usize) -> Result<PoaReport> {
    let bound = max_selfish_support(params)?;
    let scan_max = n_max.max(bound.m_g);
    let records = enumerate_uniform_ess(params, PopulationType::Selfish, scan_max)?;
    let worst = records
        .iter()
        .max_by(|a, b| a.social_cost.total_cmp(&b.social_cost))
        .expect("the single-location state is always stable");

    let opt = optimal_social_cost(params, n_max)?;
    let c = params.c();
    let poa_upper_estimate = worst.social_cost / opt.lower;
    let theorem_bound = 3.0 / c + params.r0();
    let ess_cost_bound = 2f64.max(c * params.r0() + 1.0);
    let ess_cost_bound_satisfied = records
        .iter()
        .all(|r| r.social_cost <= ess_cost_bound + CERTIFICATE_SLACK);

    Ok(PoaReport {
        worst_ess_cost: worst.social_cost,
        worst_ess_support: worst.support_size,
        opt_lower: opt.lower,
        opt_upper: opt.upper,
        opt_argmin_support: opt.argmin_support,
        poa_lower: worst.social_cost / opt.upper,
        poa_upper_estimate,
        theorem_bound,
        bound_satisfied: poa_upper_estimate <= theorem_bound,
        ess_cost_bound,
        ess_cost_bound_satisfied,
    })
}

/// One row of the altruistic growth table.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AltruisticGrowthEntry {
    /// Requested support size.
    pub support_size: usize,
    /// Whether the uniform state over that many locations passed the
    /// stability check. When false the remaining fields are still
    /// reported for context but certify nothing.
    pub is_ess: bool,
    /// Social cost of the uniform state.
    pub social_cost: f64,
    /// `social_cost / opt_upper`: a lower bound on the price of anarchy
    /// when `is_ess` holds.
    pub ratio: f64,
    /// Analytic floor `K C / (C + 1)` the ratio must clear.
    pub floor: f64,
}

/// Evaluate uniform altruistic states at the requested support sizes and
/// report their cost ratios against the optimum upper bound.
///
/// Stable states exist at every sufficiently large support size, so the
/// ratios grow without bound; each verified row is a constructive
/// witness. A size that fails the check is marked rather than failing
/// the whole table.
pub fn altruistic_poa_growth(
    params: &GameParams,
    support_sizes: &[usize],
    n_max: usize,
) -> Result<Vec<AltruisticGrowthEntry>> {
    let opt = optimal_social_cost(params, n_max)?;
    let tolerances = EssTolerances::default();
    let c = params.c();
    let mut entries = Vec::with_capacity(support_sizes.len());
    for &k in support_sizes {
        let alloc = Allocation::uniform(k)?;
        let report = check_ess(&alloc, PopulationType::Altruistic, params, &tolerances)?;
        let cost = social_cost(&alloc, params)?;
        entries.push(AltruisticGrowthEntry {
            support_size: k,
            is_ess: report.verdict,
            social_cost: cost,
            ratio: cost / opt.upper,
            floor: k as f64 * c / (c + 1.0),
        });
    }
    Ok(entries)
}

/// Smallest support size whose uniform state is certified altruistically
/// stable by the convexity interval together with the incentive
/// condition. Used for reporting alongside enumerations.
pub fn altruistic_sufficient_support(params: &GameParams, n_max: usize) -> Result<Option<usize>> {
    let interval = match altruistic_stability_interval(params) {
        Ok(a) if a > 0.0 => a,
        _ => return Ok(None),
    };
    let tolerances = EssTolerances::default();
    let start = (1.0 / interval).floor() as usize + 1;
    for n in start..=n_max.max(start) {
        let alloc = Allocation::uniform(n)?;
        if check_ess(&alloc, PopulationType::Altruistic, params, &tolerances)?.verdict {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
