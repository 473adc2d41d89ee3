//! Where should people live during a pandemic?
//!
//! This crate models a continuum of individuals choosing locations while
//! a density-based SIR epidemic runs at each one. Dense locations are
//! cheap to live in but risky to inhabit; sparse ones are safe but
//! isolating. The library solves the per-location final-size relation,
//! prices the trade-off for self-interested and altruistic individuals,
//! finds the evolutionarily stable population states of each type, and
//! certifies price-of-anarchy bounds numerically.
//!
//! ```
//! use pgl::{epidemic, GameParams};
//!
//! let game = GameParams::new(2.0, 0.01, 0.05)?;
//! let sol = epidemic::final_size(1.0, &game)?;
//! assert!((sol.r_inf - 0.8002).abs() < 1e-4);
//! # Ok::<(), pgl::Error>(())
//! ```
//!
//! The `pgl` binary exposes the same functionality as subcommands
//! (`solve`, `ess`, `poa`, `curve`, `verify`); the guide under `book/`
//! walks through the model, and its code samples are compiled as the
//! doc-tests of the [`guide`] module.

pub mod analysis;
pub mod curve;
pub mod epidemic;
pub mod equilibrium;
mod error;
pub mod game;
pub mod guide;
pub mod output;
mod params;
pub mod tolerances;
pub mod verify;

pub use equilibrium::PopulationType;
pub use error::{Error, Result};
pub use game::Allocation;
pub use params::GameParams;
