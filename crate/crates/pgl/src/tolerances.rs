//! Every numeric threshold used by the solvers and certificate checks,
//! in one place.
//!
//! | Constant | Basis |
//! |----------|-------|
//! | Solver targets | bisection bracket + Newton polish on the final-size relation |
//! | Finite-difference tolerances | truncation error of the stencil at the stated step |
//! | Certificate slacks | allow f64 roundoff, never model error |

/// Maximum admissible defect of the final-size relation in any returned
/// solution. The solver normally lands several orders below this.
pub const RESIDUAL_LIMIT: f64 = 1e-10;

/// Absolute residual the Newton polish must reach before a solve is
/// accepted.
pub const SOLVER_RESIDUAL: f64 = 1e-12;

/// Bracket width at which bisection hands over to Newton.
pub const BRACKET_WIDTH: f64 = 1e-8;

/// Bisection iteration cap. The bracket halves each step, so 200 is far
/// beyond what a unit-length interval can need.
pub const BISECTION_CAP: usize = 200;

/// Newton iteration cap after the bisection phase.
pub const NEWTON_CAP: usize = 32;

/// Derivative denominators at or below this are treated as singular:
/// the inputs do not lie on the stable final-size branch.
pub const SINGULARITY_GUARD: f64 = 1e-12;

/// Fixed step of the RK4 integrator, in recovery periods.
pub const ODE_STEP: f64 = 0.01;

/// Infected mass below which the epidemic is considered extinct.
pub const EXTINCTION_THRESHOLD: f64 = 1e-10;

/// Default integration horizon used by sweeps, in recovery periods.
/// Near-critical parameter sets die out by t ~ 400; this leaves margin.
pub const ODE_HORIZON: f64 = 2000.0;

/// Agreement required between the ODE terminal recovered mass and the
/// transcendental final size.
pub const ODE_CROSS_TOLERANCE: f64 = 1e-6;

/// Central-difference step and tolerance for validating first derivatives.
pub const FD_FIRST_STEP: f64 = 1e-6;
pub const FD_FIRST_TOLERANCE: f64 = 1e-5;

/// Step and tolerance for validating second derivatives.
pub const FD_SECOND_STEP: f64 = 1e-4;
pub const FD_SECOND_TOLERANCE: f64 = 1e-3;

/// Node scale and tolerance for the slope-at-origin identity check.
pub const ORIGIN_SLOPE_NODE: f64 = 1e-7;
pub const ORIGIN_SLOPE_TOLERANCE: f64 = 1e-8;

/// Node scale and tolerance for the curvature-at-origin identity check.
pub const ORIGIN_CURVATURE_NODE: f64 = 1e-5;
pub const ORIGIN_CURVATURE_TOLERANCE: f64 = 1e-6;

/// Tolerance on the unit slope of the final size at density 1/R0.
pub const THRESHOLD_SLOPE_TOLERANCE: f64 = 1e-8;

/// Roundoff slack for the attack-rate slope bound p'(x) <= R0.
pub const ATTACK_SLOPE_SLACK: f64 = 1e-10;

/// Roundoff slack for equilibrium social-cost bound certificates.
pub const CERTIFICATE_SLACK: f64 = 1e-9;

/// Relative tolerance for cost equality between inhabited locations when
/// checking the equilibrium condition.
pub const COST_EQUALITY_REL: f64 = 1e-9;

/// Gradients must exceed this for a state to count as stable. Exactly
/// zero gradients are classified unstable: the stability condition is a
/// strict inequality.
pub const GRADIENT_STRICTNESS: f64 = 1e-10;

/// Allocation densities must sum to one within this.
pub const ALLOCATION_SUM_TOLERANCE: f64 = 1e-12;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::assertions_on_constants)] // constants sanity check
    fn solver_targets_are_ordered() {
        assert!(SOLVER_RESIDUAL < RESIDUAL_LIMIT);
        assert!(SINGULARITY_GUARD <= SOLVER_RESIDUAL);
        assert!(BRACKET_WIDTH > SOLVER_RESIDUAL);
    }

    #[test]
    #[allow(clippy::assertions_on_constants)] // constants sanity check
    fn ode_settings_are_consistent() {
        assert!(ODE_STEP > 0.0 && ODE_STEP < 1.0);
        assert!(EXTINCTION_THRESHOLD < ODE_CROSS_TOLERANCE);
        assert!(ODE_HORIZON > 1000.0);
    }
}
