//! Per-location epidemic quantities.
//!
//! A location with population density `x` runs a density-based SIR
//! epidemic with contact rate proportional to `x`. Time is measured in
//! recovery periods (`gamma = 1`, `beta = r0`), which is without loss of
//! generality: the final size depends only on `r0`, `eta`, and `x`.
//!
//! The central object is the final size `R(x)`, the total mass ever
//! infected, which is the unique stable root of
//!
//! ```text
//! R = x - (1 - eta) x exp(-r0 R)
//! ```
//!
//! on `[eta x, x]`. [`final_size`] solves this relation; [`simulate_sir`]
//! integrates the underlying ODEs directly and serves as an independent
//! cross-check of the transcendental route.

mod final_size;
mod sir;

pub use final_size::{
    attack_probability, attack_probability_derivative, final_size, final_size_derivative,
    final_size_second_derivative, FinalSizeSolution,
};
pub use sir::{simulate_sir, SirTrajectory};
