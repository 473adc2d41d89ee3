//! Cost structure of the location game.
//!
//! Individuals at a location with density `x` pay an isolation cost
//! `C / x` plus the attack probability `p(x)`. An allocation lists the
//! inhabited locations; its social cost is `C |N| + sum of final sizes`,
//! which for a uniform allocation over `n` locations coincides with the
//! per-individual cost at density `1/n`.

use serde::{Deserialize, Serialize};

use crate::epidemic::{
    attack_probability, attack_probability_derivative, final_size, final_size_derivative,
};
use crate::error::{Error, Result};
use crate::params::GameParams;
use crate::tolerances::ALLOCATION_SUM_TOLERANCE;

/// A finite-support allocation: the density of every used location.
///
/// Listing a location with density zero declares it used by a
/// measure-zero set of individuals; it still counts toward the number of
/// used locations (and so contributes `C` to the social cost) while
/// adding no infection mass. Densities are stored in nonincreasing order
/// so that equal allocations serialize identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Allocation {
    densities: Vec<f64>,
}

impl Allocation {
    /// Validate and canonicalize a density vector: nonempty, every entry
    /// in [0, 1], summing to one within tolerance.
    pub fn new(densities: Vec<f64>) -> Result<Self> {
        if densities.is_empty() {
            return Err(Error::InvalidAllocation(
                "at least one used location is required".into(),
            ));
        }
        for &d in &densities {
            if !d.is_finite() || !(0.0..=1.0).contains(&d) {
                return Err(Error::InvalidAllocation(format!(
                    "density {d} outside [0, 1]"
                )));
            }
        }
        let sum: f64 = densities.iter().sum();
        if (sum - 1.0).abs() > ALLOCATION_SUM_TOLERANCE {
            return Err(Error::InvalidAllocation(format!(
                "densities sum to {sum}, expected 1"
            )));
        }
        let mut densities = densities;
        densities.sort_by(|a, b| b.partial_cmp(a).expect("densities are finite"));
        Ok(Self { densities })
    }

    /// The uniform allocation over `n >= 1` locations.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAllocation(
                "uniform allocation needs at least one location".into(),
            ));
        }
        Ok(Self {
            densities: vec![1.0 / n as f64; n],
        })
    }

    /// Number of used locations, including declared zero-density ones.
    pub fn support_size(&self) -> usize {
        self.densities.len()
    }

    /// Densities in canonical (nonincreasing) order.
    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    /// Runs of identical densities, exploiting canonical order. Uniform
    /// allocations collapse to a single entry, so per-location work is
    /// done once per distinct density.
    pub fn density_groups(&self) -> Vec<(f64, usize)> {
        let mut groups: Vec<(f64, usize)> = Vec::new();
        for &d in &self.densities {
            match groups.last_mut() {
                Some((value, count)) if *value == d => *count += 1,
                _ => groups.push((d, 1)),
            }
        }
        groups
    }
}

impl TryFrom<Vec<f64>> for Allocation {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Allocation::new(v)
    }
}

impl From<Allocation> for Vec<f64> {
    fn from(a: Allocation) -> Vec<f64> {
        a.densities
    }
}

/// Per-individual cost breakdown at one location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocationCost {
    /// Isolation component `C / x`.
    pub isolation: f64,
    /// Infection component `p(x)`.
    pub infection: f64,
    /// Their sum.
    pub total: f64,
}

/// Isolation cost `C / x`. An uninhabited location has infinite
/// isolation cost; infinity is a modeled value here, relied on by the
/// deviation argument that makes the single-location state stable.
pub fn isolation_cost(x: f64, params: &GameParams) -> f64 {
    debug_assert!(x >= 0.0, "density must be nonnegative");
    if x == 0.0 {
        f64::INFINITY
    } else {
        params.c() / x
    }
}

/// Cost experienced by a self-interested individual at density `x`.
pub fn selfish_cost(x: f64, params: &GameParams) -> Result<LocationCost> {
    let isolation = isolation_cost(x, params);
    let infection = attack_probability(x, params)?;
    Ok(LocationCost {
        isolation,
        infection,
        total: isolation + infection,
    })
}

/// Derivative of the selfish cost, `-C/x^2 + p'(x)`. Requires `x > 0`.
pub fn selfish_cost_derivative(x: f64, params: &GameParams) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::DomainDensity { x });
    }
    Ok(-params.c() / (x * x) + attack_probability_derivative(x, params)?)
}

/// Cost experienced by an altruistic individual: the marginal social
/// cost of their presence.
///
/// At a used location this is the final-size slope `R'(x)` (with
/// `R'(0) = eta` for a used location of measure zero). Moving to an
/// unused location additionally opens it, charging the switching cost
/// `C`, for a total of `C + eta`.
pub fn altruistic_cost(x: f64, used: bool, params: &GameParams) -> Result<f64> {
    if !used {
        debug_assert!(x == 0.0, "an unused location has density zero");
        return Ok(params.c() + params.eta());
    }
    if x == 0.0 {
        return Ok(params.eta());
    }
    let sol = final_size(x, params)?;
    final_size_derivative(x, sol.r_inf, params)
}

/// Social cost of an allocation: `C` per used location plus the final
/// size of each.
pub fn social_cost(alloc: &Allocation, params: &GameParams) -> Result<f64> {
    let mut infected = 0.0;
    for (density, count) in alloc.density_groups() {
        if density > 0.0 {
            infected += count as f64 * final_size(density, params)?.r_inf;
        }
    }
    Ok(params.c() * alloc.support_size() as f64 + infected)
}
