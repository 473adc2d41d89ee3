use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::GameParams;
use crate::tolerances::{
    BISECTION_CAP, BRACKET_WIDTH, NEWTON_CAP, SINGULARITY_GUARD, SOLVER_RESIDUAL,
};

/// Solution of the final-size relation at one density, with the implicit
/// first and second derivatives evaluated on the stable branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FinalSizeSolution {
    /// Location density. Game densities live in (0, 1]; larger values
    /// satisfy the same relation and are accepted for diagnostics such as
    /// evaluating the slope at `1/r0` when `r0 < 1`.
    pub x: f64,
    /// Final size `R(x)`, the mass ever infected, in `[eta x, x]`.
    pub r_inf: f64,
    /// Attack probability `R(x) / x`, in `[eta, 1]`.
    pub p: f64,
    /// Absolute defect of the final-size relation at `r_inf`.
    pub residual: f64,
    /// `dR/dx` on the stable branch.
    pub r_prime: f64,
    /// `d^2R/dx^2` on the stable branch.
    pub r_double_prime: f64,
}

fn relation_defect(x: f64, r0: f64, eta: f64, r: f64) -> f64 {
    x - (1.0 - eta) * x * (-r0 * r).exp() - r
}

/// Solve the final-size relation at density `x`.
///
/// `g(R) = x - (1-eta) x e^{-r0 R} - R` is strictly concave with
/// `g(eta x) > 0 > g(x)` for `eta` in (0, 1), so the bracketed root is
/// unique and sits on the stable branch (positive derivative
/// denominator). Bisection narrows the bracket, Newton polishes.
///
/// Boundary fractions short-circuit: `eta = 1` gives `R = x` exactly and
/// `eta = 0` gives the disease-free branch `R = 0`.
pub fn final_size(x: f64, params: &GameParams) -> Result<FinalSizeSolution> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::DomainDensity { x });
    }
    let (r0, eta) = (params.r0(), params.eta());

    if eta == 1.0 {
        return Ok(FinalSizeSolution {
            x,
            r_inf: x,
            p: 1.0,
            residual: 0.0,
            r_prime: 1.0,
            r_double_prime: 0.0,
        });
    }
    if eta == 0.0 {
        // No initial infections: the epidemic never starts.
        return Ok(FinalSizeSolution {
            x,
            r_inf: 0.0,
            p: 0.0,
            residual: 0.0,
            r_prime: 0.0,
            r_double_prime: 0.0,
        });
    }

    let g = |r: f64| relation_defect(x, r0, eta, r);
    let g_prime = |r: f64| (1.0 - eta) * x * r0 * (-r0 * r).exp() - 1.0;

    let mut lo = eta * x;
    let mut hi = x;
    let mut iterations = 0usize;
    while hi - lo > BRACKET_WIDTH && iterations < BISECTION_CAP {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }

    // Newton polish, kept inside the bracket. g decreases through the
    // root, so g > 0 means the root lies above.
    let mut r = 0.5 * (lo + hi);
    let mut best_r = r;
    let mut best_defect = g(r).abs();
    for _ in 0..NEWTON_CAP {
        let gr = g(r);
        let defect = gr.abs();
        if defect < best_defect {
            best_defect = defect;
            best_r = r;
        }
        // The relation's terms all scale with x, so this is the
        // roundoff floor rather than an absolute target.
        if defect <= 1e-16 * x {
            break;
        }
        if gr > 0.0 {
            lo = lo.max(r);
        } else {
            hi = hi.min(r);
        }
        let slope = g_prime(r);
        let mut next = if slope != 0.0 {
            r - gr / slope
        } else {
            0.5 * (lo + hi)
        };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - r).abs() <= f64::EPSILON * r.abs() {
            r = next;
            let d = g(r).abs();
            if d < best_defect {
                best_defect = d;
                best_r = r;
            }
            break;
        }
        r = next;
        iterations += 1;
    }

    let r_inf = best_r;
    let residual = best_defect;
    if residual > SOLVER_RESIDUAL {
        return Err(Error::SolverFailure {
            x,
            lo,
            hi,
            residual,
            iterations,
        });
    }

    let r_prime = final_size_derivative(x, r_inf, params)?;
    let r_double_prime = final_size_second_derivative(x, r_inf, r_prime, params)?;
    Ok(FinalSizeSolution {
        x,
        r_inf,
        p: r_inf / x,
        residual,
        r_prime,
        r_double_prime,
    })
}

/// Attack probability `p(x) = R(x)/x`, extended continuously to
/// `p(0) = eta` (the final size has slope `eta` at the origin).
pub fn attack_probability(x: f64, params: &GameParams) -> Result<f64> {
    if x == 0.0 {
        return Ok(params.eta());
    }
    Ok(final_size(x, params)?.p)
}

/// First derivative of the final size via implicit differentiation:
///
/// ```text
/// R'(x) = (1 - E) / (1 - x r0 E),   E = (1 - eta) e^{-r0 R}
/// ```
///
/// `(x, r_inf)` must satisfy the final-size relation; at `x = 0` the
/// slope is `eta` exactly. A denominator at or below the guard threshold
/// signals inputs off the stable branch.
pub fn final_size_derivative(x: f64, r_inf: f64, params: &GameParams) -> Result<f64> {
    let (r0, eta) = (params.r0(), params.eta());
    if x == 0.0 {
        return Ok(eta);
    }
    let e = (1.0 - eta) * (-r0 * r_inf).exp();
    let denom = 1.0 - x * r0 * e;
    if denom <= SINGULARITY_GUARD {
        return Err(Error::SingularDerivative {
            x,
            denominator: denom,
        });
    }
    Ok((1.0 - e) / denom)
}

/// Second derivative of the final size, isolated from differentiating
/// the implicit relation twice:
///
/// ```text
/// R''(x) = E r0 R' (2 - x r0 R') / (1 - x r0 E)
/// ```
///
/// At `x = 0` this reduces to `2 r0 eta (1 - eta)`.
pub fn final_size_second_derivative(
    x: f64,
    r_inf: f64,
    r_prime: f64,
    params: &GameParams,
) -> Result<f64> {
    let (r0, eta) = (params.r0(), params.eta());
    if x == 0.0 {
        return Ok(2.0 * r0 * eta * (1.0 - eta));
    }
    let e = (1.0 - eta) * (-r0 * r_inf).exp();
    let denom = 1.0 - x * r0 * e;
    if denom <= SINGULARITY_GUARD {
        return Err(Error::SingularDerivative {
            x,
            denominator: denom,
        });
    }
    Ok(e * r0 * r_prime * (2.0 - x * r0 * r_prime) / denom)
}

/// Derivative of the attack probability, `p'(x) = (1 - p(x)) r0 R'(x)`,
/// extended to `p'(0) = (1 - eta) r0 eta`.
pub fn attack_probability_derivative(x: f64, params: &GameParams) -> Result<f64> {
    let (r0, eta) = (params.r0(), params.eta());
    if x == 0.0 {
        return Ok((1.0 - eta) * r0 * eta);
    }
    let sol = final_size(x, params)?;
    Ok((1.0 - sol.p) * r0 * sol.r_prime)
}
