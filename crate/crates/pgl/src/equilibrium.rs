//! Evolutionarily stable states.
//!
//! A state is stable for a population type when (1) every inhabited
//! location costs the same and no empty location is cheaper, and (2)
//! with more than one used location, the cost gradient at every
//! inhabited location is strictly positive, so small-group defections
//! are self-defeating.
//!
//! Condition (1) alone is a Nash condition and admits states that
//! population dynamics would not sustain: with no disease, ten equally
//! sized locations equalize costs, yet any influx to a location lowers
//! its cost and snowballs. The gradient condition rejects those.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::epidemic::final_size;
use crate::error::{Error, Result};
use crate::game::{
    altruistic_cost, selfish_cost, selfish_cost_derivative, social_cost, Allocation,
};
use crate::params::GameParams;
use crate::tolerances::{COST_EQUALITY_REL, GRADIENT_STRICTNESS};

/// Which subjective cost the population minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PopulationType {
    Selfish,
    Altruistic,
}

impl fmt::Display for PopulationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PopulationType::Selfish => write!(f, "selfish"),
            PopulationType::Altruistic => write!(f, "altruistic"),
        }
    }
}

impl FromStr for PopulationType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "selfish" => Ok(PopulationType::Selfish),
            "altruistic" => Ok(PopulationType::Altruistic),
            other => Err(format!(
                "unknown population type {other:?} (expected selfish or altruistic)"
            )),
        }
    }
}

/// Epsilons for the stability check.
#[derive(Debug, Clone, Copy)]
pub struct EssTolerances {
    /// Relative tolerance for cost equality across inhabited locations.
    pub cost_equality_rel: f64,
    /// Gradients must strictly exceed this to count as positive.
    pub gradient_strictness: f64,
}

impl Default for EssTolerances {
    fn default() -> Self {
        Self {
            cost_equality_rel: COST_EQUALITY_REL,
            gradient_strictness: GRADIENT_STRICTNESS,
        }
    }
}

/// A structured reason a state failed the check.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Two inhabited locations with different costs.
    CostMismatch {
        density_a: f64,
        cost_a: f64,
        density_b: f64,
        cost_b: f64,
    },
    /// An empty location is cheaper than an inhabited one.
    ProfitableDeviation {
        density: f64,
        cost: f64,
        empty_cost: f64,
    },
    /// Nonpositive cost gradient at an inhabited location.
    NonpositiveGradient { density: f64, gradient: f64 },
}

/// Outcome of checking one allocation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EssReport {
    /// Condition (1): equal costs, no profitable deviation to an empty
    /// location.
    pub is_nash: bool,
    /// Condition (2): strictly positive gradients when more than one
    /// location is used.
    pub is_stable: bool,
    /// `is_nash && is_stable`.
    pub verdict: bool,
    pub violations: Vec<Violation>,
}

/// A verified uniform equilibrium.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EssRecord {
    pub population: PopulationType,
    pub support_size: usize,
    /// Per-location density, `1 / support_size`.
    pub density: f64,
    /// The population type's own cost at that density.
    pub location_cost: f64,
    /// Social cost of the state.
    pub social_cost: f64,
    /// Cost gradient at the density; strictly positive whenever
    /// `support_size > 1`.
    pub stability_margin: f64,
}

/// The type's subjective cost at an inhabited location of density `x > 0`.
fn location_cost(population: PopulationType, x: f64, params: &GameParams) -> Result<f64> {
    match population {
        PopulationType::Selfish => Ok(selfish_cost(x, params)?.total),
        PopulationType::Altruistic => altruistic_cost(x, true, params),
    }
}

/// Gradient of the type's cost at density `x > 0`. For altruists the
/// cost is the final-size slope, so the gradient is its curvature.
fn cost_gradient(population: PopulationType, x: f64, params: &GameParams) -> Result<f64> {
    match population {
        PopulationType::Selfish => selfish_cost_derivative(x, params),
        PopulationType::Altruistic => Ok(final_size(x, params)?.r_double_prime),
    }
}

/// Cost of deviating to a location outside the support: infinite
/// isolation for the selfish, the opening charge `C + eta` for altruists.
fn empty_location_cost(population: PopulationType, params: &GameParams) -> f64 {
    match population {
        PopulationType::Selfish => f64::INFINITY,
        PopulationType::Altruistic => params.c() + params.eta(),
    }
}

/// Check both stability conditions for an arbitrary finite-support
/// allocation.
pub fn check_ess(
    alloc: &Allocation,
    population: PopulationType,
    params: &GameParams,
    tolerances: &EssTolerances,
) -> Result<EssReport> {
    let mut violations = Vec::new();
    let groups = alloc.density_groups();

    let mut inhabited: Vec<(f64, f64)> = Vec::new();
    for &(density, _) in &groups {
        if density > 0.0 {
            inhabited.push((density, location_cost(population, density, params)?));
        }
    }

    // Condition (1): equal costs across inhabited locations...
    let (&(min_d, min_cost), &(max_d, max_cost)) = {
        let min = inhabited
            .iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("allocation has positive mass");
        let max = inhabited
            .iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("allocation has positive mass");
        (min, max)
    };
    let scale = 1f64.max(max_cost.abs());
    if max_cost - min_cost > tolerances.cost_equality_rel * scale {
        violations.push(Violation::CostMismatch {
            density_a: min_d,
            cost_a: min_cost,
            density_b: max_d,
            cost_b: max_cost,
        });
    }

    // ...and no profitable deviation to an empty location.
    let empty_cost = empty_location_cost(population, params);
    if max_cost > empty_cost + tolerances.cost_equality_rel * scale {
        violations.push(Violation::ProfitableDeviation {
            density: max_d,
            cost: max_cost,
            empty_cost,
        });
    }
    let is_nash = violations.is_empty();

    // Condition (2): strict positive gradients, only when more than one
    // location is used.
    let mut is_stable = true;
    if alloc.support_size() > 1 {
        for &(density, _) in &groups {
            if density > 0.0 {
                let gradient = cost_gradient(population, density, params)?;
                if gradient <= tolerances.gradient_strictness {
                    is_stable = false;
                    violations.push(Violation::NonpositiveGradient { density, gradient });
                }
            }
        }
    }

    Ok(EssReport {
        is_nash,
        is_stable,
        verdict: is_nash && is_stable,
        violations,
    })
}

/// Scan uniform allocations over `1..=n_max` locations and return a
/// record for every one that passes [`check_ess`], in increasing order
/// of support size. Equal densities at every stable state justify
/// restricting the scan to uniform allocations.
pub fn enumerate_uniform_ess(
    params: &GameParams,
    population: PopulationType,
    n_max: usize,
) -> Result<Vec<EssRecord>> {
    let tolerances = EssTolerances::default();
    let mut records = Vec::new();
    for n in 1..=n_max {
        let alloc = Allocation::uniform(n)?;
        let report = check_ess(&alloc, population, params, &tolerances)?;
        if report.verdict {
            let density = 1.0 / n as f64;
            records.push(EssRecord {
                population,
                support_size: n,
                density,
                location_cost: location_cost(population, density, params)?,
                social_cost: social_cost(&alloc, params)?,
                stability_margin: cost_gradient(population, density, params)?,
            });
        }
    }
    Ok(records)
}

/// Upper bound on the support of any selfish stable state.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SelfishSupportBound {
    /// No selfish stable state uses more locations than this.
    pub m_g: usize,
    /// Smallest positive root of the selfish cost derivative, when one
    /// exists in (0, 1]. The derivative is negative below it, so no
    /// stable state can put less than this density on a location.
    pub x_bar: Option<f64>,
}

const SCAN_POINTS: usize = 10_000;
const SCAN_FLOOR_EXP: f64 = -6.0;
const SCAN_BISECTION_WIDTH: f64 = 1e-10;

fn log_spaced(i: usize, n: usize) -> f64 {
    10f64.powf(SCAN_FLOOR_EXP * (1.0 - i as f64 / n as f64))
}

/// Locate the smallest density at which the selfish cost stops falling.
///
/// The derivative `-C/x^2 + p'(x)` tends to minus infinity at the
/// origin; a sign scan over a log-spaced grid finds its first crossing,
/// refined by bisection. If the derivative is negative throughout
/// (0, 1], larger support sizes are all unstable and the bound is 1.
pub fn max_selfish_support(params: &GameParams) -> Result<SelfishSupportBound> {
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=SCAN_POINTS {
        let x = log_spaced(i, SCAN_POINTS);
        let value = selfish_cost_derivative(x, params)?;
        if let Some((prev_x, prev_value)) = prev {
            if prev_value < 0.0 && value >= 0.0 {
                let mut lo = prev_x;
                let mut hi = x;
                while hi - lo > SCAN_BISECTION_WIDTH {
                    let mid = 0.5 * (lo + hi);
                    if selfish_cost_derivative(mid, params)? < 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let x_bar = 0.5 * (lo + hi);
                return Ok(SelfishSupportBound {
                    m_g: ((1.0 / x_bar).floor() as usize).max(1),
                    x_bar: Some(x_bar),
                });
            }
        }
        prev = Some((x, value));
    }
    Ok(SelfishSupportBound {
        m_g: 1,
        x_bar: None,
    })
}

/// Largest `a <= 1` such that the final size is convex on the sampled
/// interval (0, a).
///
/// Positive curvature below `1/n` certifies uniform altruistic states
/// over `n` locations, which is what makes arbitrarily isolated
/// altruistic equilibria possible. The endpoint is located by a sign
/// scan plus bisection; no closed form is claimed.
///
/// With everyone initially infected the curvature vanishes identically
/// and no such interval exists; that is an error. With nobody infected
/// it also vanishes, reported as an empty interval (`a = 0`).
pub fn altruistic_stability_interval(params: &GameParams) -> Result<f64> {
    let eta = params.eta();
    if eta == 1.0 {
        return Err(Error::DegenerateCurvature);
    }
    if eta == 0.0 {
        return Ok(0.0);
    }
    let curvature = |x: f64| -> Result<f64> { Ok(final_size(x, params)?.r_double_prime) };
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=SCAN_POINTS {
        let x = log_spaced(i, SCAN_POINTS);
        let value = curvature(x)?;
        match prev {
            None if value <= 0.0 => return Ok(0.0),
            Some((prev_x, prev_value)) if prev_value > 0.0 && value <= 0.0 => {
                let mut lo = prev_x;
                let mut hi = x;
                while hi - lo > SCAN_BISECTION_WIDTH {
                    let mid = 0.5 * (lo + hi);
                    if curvature(mid)? > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Ok(0.5 * (lo + hi));
            }
            _ => {}
        }
        prev = Some((x, value));
    }
    Ok(1.0)
}
