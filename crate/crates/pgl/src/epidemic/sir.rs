use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::GameParams;
use crate::tolerances::EXTINCTION_THRESHOLD;

/// Time series of one location's epidemic, from a fixed-step RK4
/// integration of the density-based SIR equations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SirTrajectory {
    pub times: Vec<f64>,
    pub s: Vec<f64>,
    pub i: Vec<f64>,
    pub r: Vec<f64>,
    /// Recovered mass at the final recorded time. Approximates the final
    /// size once the epidemic is extinct.
    pub terminal_r: f64,
    /// Whether the infected mass fell below the extinction threshold
    /// before the horizon. When false the horizon was too short and
    /// `terminal_r` undershoots the final size.
    pub extinct: bool,
}

#[inline]
fn derivatives(r0: f64, s: f64, i: f64) -> (f64, f64, f64) {
    let infections = r0 * i * s;
    (-infections, infections - i, i)
}

/// Integrate the SIR equations at density `x` with initial conditions
/// `((1-eta) x, eta x, 0)` using classical RK4 with step `step`.
///
/// Integration stops at the extinction threshold or at `horizon`,
/// whichever comes first. Mass `s + i + r = x` is conserved up to
/// roundoff because the three derivatives sum to zero.
pub fn simulate_sir(x: f64, params: &GameParams, horizon: f64, step: f64) -> Result<SirTrajectory> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::DomainDensity { x });
    }
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidParameter {
            name: "horizon",
            value: horizon,
            constraint: "finite and > 0",
        });
    }
    if !(step.is_finite() && step > 0.0 && step <= horizon) {
        return Err(Error::InvalidParameter {
            name: "step",
            value: step,
            constraint: "finite, > 0, and <= horizon",
        });
    }

    let (r0, eta) = (params.r0(), params.eta());
    let mut s = (1.0 - eta) * x;
    let mut i = eta * x;
    let mut r = 0.0;

    let steps = (horizon / step).ceil() as usize;
    let mut traj = SirTrajectory {
        times: vec![0.0],
        s: vec![s],
        i: vec![i],
        r: vec![r],
        terminal_r: r,
        extinct: i < EXTINCTION_THRESHOLD,
    };

    let h = step;
    for n in 1..=steps {
        if i < EXTINCTION_THRESHOLD {
            break;
        }
        let (k1s, k1i, k1r) = derivatives(r0, s, i);
        let (k2s, k2i, k2r) = derivatives(r0, s + 0.5 * h * k1s, i + 0.5 * h * k1i);
        let (k3s, k3i, k3r) = derivatives(r0, s + 0.5 * h * k2s, i + 0.5 * h * k2i);
        let (k4s, k4i, k4r) = derivatives(r0, s + h * k3s, i + h * k3i);
        s += h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
        i += h / 6.0 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i);
        r += h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
        i = i.max(0.0);
        traj.times.push(n as f64 * h);
        traj.s.push(s);
        traj.i.push(i);
        traj.r.push(r);
    }

    traj.terminal_r = r;
    traj.extinct = i < EXTINCTION_THRESHOLD;
    Ok(traj)
}
