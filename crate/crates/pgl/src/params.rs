use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A game instance: basic reproduction number, initial infected fraction,
/// and isolation cost coefficient.
///
/// Fields are validated on construction and immutable afterwards. Game
/// instances require `eta` in (0, 1]; [`GameParams::diagnostic`] also
/// admits the disease-free boundary `eta = 0`, where every epidemic
/// quantity is identically zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct GameParams {
    r0: f64,
    eta: f64,
    c: f64,
}

impl GameParams {
    /// Construct a game instance. Requires `r0 > 0`, `0 < eta <= 1`,
    /// `c > 0`, all finite.
    pub fn new(r0: f64, eta: f64, c: f64) -> Result<Self> {
        if eta.is_nan() || eta <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "eta",
                value: eta,
                constraint: "0 < eta <= 1 for a game instance (0 only in diagnostic mode)",
            });
        }
        Self::diagnostic(r0, eta, c)
    }

    /// Construct parameters admitting `eta = 0`, the disease-free branch.
    /// With no initial infections the epidemic never starts, so the final
    /// size and attack probability are identically zero.
    pub fn diagnostic(r0: f64, eta: f64, c: f64) -> Result<Self> {
        if !r0.is_finite() || r0 <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "r0",
                value: r0,
                constraint: "finite and > 0",
            });
        }
        if !eta.is_finite() || !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidParameter {
                name: "eta",
                value: eta,
                constraint: "finite and in [0, 1]",
            });
        }
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "c",
                value: c,
                constraint: "finite and > 0",
            });
        }
        Ok(Self { r0, eta, c })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

#[derive(Deserialize)]
struct RawParams {
    r0: f64,
    eta: f64,
    c: f64,
}

impl TryFrom<RawParams> for GameParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        GameParams::diagnostic(raw.r0, raw.eta, raw.c)
    }
}
