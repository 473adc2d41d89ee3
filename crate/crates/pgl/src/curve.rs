//! Cost-curve data: the per-individual cost of a location as a function
//! of its density, with markers at every uniform equilibrium density so
//! a plotting tool can overlay where each population type settles.

use serde::{Deserialize, Serialize};

use crate::epidemic::final_size;
use crate::equilibrium::{enumerate_uniform_ess, PopulationType};
use crate::error::Result;
use crate::game::isolation_cost;
use crate::params::GameParams;

/// One sample of the cost curves at density `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub x: f64,
    /// Per-individual selfish cost, exactly `isolation + infection`.
    pub selfish_total: f64,
    pub isolation: f64,
    pub infection: f64,
    /// Marginal social cost of one more individual, `R'(x)`.
    pub altruistic_marginal: f64,
}

/// A uniform equilibrium density, placed on the selfish cost curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumMarker {
    pub population: PopulationType,
    pub support_size: usize,
    pub density: f64,
    /// Height of the marker on the plotted curve: the selfish cost at
    /// that density, which equals the social cost of the uniform state.
    pub curve_cost: f64,
    /// The population type's own cost there.
    pub location_cost: f64,
}

/// Samples and markers for one parameter set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveSeries {
    pub params: GameParams,
    pub samples: Vec<CurveSample>,
    pub markers: Vec<EquilibriumMarker>,
}

/// The four parameter sets emitted when none are given: one reproduction
/// number, low and high initial infections crossed with cheap and dear
/// isolation. The high-infection pairs exhibit the qualitative gap where
/// even the best altruistic density costs more than the best selfish one.
pub fn default_quartet() -> Vec<GameParams> {
    [
        (2.0, 0.01, 0.05),
        (2.0, 0.01, 0.5),
        (2.0, 0.5, 0.05),
        (2.0, 0.5, 0.5),
    ]
    .into_iter()
    .map(|(r0, eta, c)| GameParams::new(r0, eta, c).expect("quartet parameters are valid"))
    .collect()
}

/// Log-spaced density grid over [lo, hi].
fn density_grid(points: usize, lo: f64, hi: f64) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            lo * (hi / lo).powf(t)
        })
        .collect()
}

/// Build the curve for one parameter set: `grid_points` log-spaced
/// densities over [1e-3, 1] plus a marker for every uniform equilibrium
/// of either population type with support up to `n_max`.
pub fn curve_series(params: &GameParams, grid_points: usize, n_max: usize) -> Result<CurveSeries> {
    let mut samples = Vec::with_capacity(grid_points);
    for x in density_grid(grid_points, 1e-3, 1.0) {
        let sol = final_size(x, params)?;
        let isolation = isolation_cost(x, params);
        samples.push(CurveSample {
            x,
            selfish_total: isolation + sol.p,
            isolation,
            infection: sol.p,
            altruistic_marginal: sol.r_prime,
        });
    }

    let mut markers = Vec::new();
    for population in [PopulationType::Selfish, PopulationType::Altruistic] {
        for record in enumerate_uniform_ess(params, population, n_max)? {
            let sol = final_size(record.density, params)?;
            markers.push(EquilibriumMarker {
                population,
                support_size: record.support_size,
                density: record.density,
                curve_cost: isolation_cost(record.density, params) + sol.p,
                location_cost: record.location_cost,
            });
        }
    }

    Ok(CurveSeries {
        params: *params,
        samples,
        markers,
    })
}
