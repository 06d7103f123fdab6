//! Single-species TASEP with flux `J(rho) = rho (1 - rho)`, used as a baseline
//! and as the reduction of the two-species model on the diagonal.

use serde::{Deserialize, Serialize};

pub fn tasep_current(rho: f64) -> f64 {
    rho * (1.0 - rho)
}

/// Entropy solution of the scalar Riemann problem at the ray `xi`.
///
/// `rho_left > rho_right` opens a fan `(1 - xi) / 2`; otherwise a shock
/// travels at `1 - rho_left - rho_right`. On the shock the right value is
/// returned.
pub fn tasep_riemann(rho_left: f64, rho_right: f64, xi: f64) -> f64 {
    if rho_left > rho_right {
        if xi <= 1.0 - 2.0 * rho_left {
            rho_left
        } else if xi >= 1.0 - 2.0 * rho_right {
            rho_right
        } else {
            0.5 * (1.0 - xi)
        }
    } else if rho_left < rho_right {
        if xi < 1.0 - rho_left - rho_right {
            rho_left
        } else {
            rho_right
        }
    } else {
        rho_left
    }
}

/// Stationary current of an open TASEP between reservoirs at `rho_left` and
/// `rho_right`: maximum of `J` over the interval when `rho_left > rho_right`,
/// minimum otherwise.
pub fn extremal_current(rho_left: f64, rho_right: f64) -> f64 {
    let (lo, hi) = (rho_left.min(rho_right), rho_left.max(rho_right));
    let (j_lo, j_hi) = (tasep_current(lo), tasep_current(hi));
    if rho_left > rho_right {
        if lo <= 0.5 && 0.5 <= hi {
            0.25
        } else {
            j_lo.max(j_hi)
        }
    } else {
        // J is concave, so the minimum sits at an endpoint
        j_lo.min(j_hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TasepPhase {
    /// low density, bulk set by the left reservoir
    LeftInduced,
    /// high density, bulk set by the right reservoir
    RightInduced,
    /// maximal current, bulk density 1/2
    BulkInduced,
}

impl TasepPhase {
    pub fn short(self) -> &'static str {
        match self {
            Self::LeftInduced => "LI",
            Self::RightInduced => "RI",
            Self::BulkInduced => "BI",
        }
    }
}

/// Phase of the open scalar TASEP, read off the bulk value at the origin.
pub fn tasep_phase(rho_left: f64, rho_right: f64) -> TasepPhase {
    let bulk = tasep_riemann(rho_left, rho_right, 0.0);
    if bulk == 0.5 {
        TasepPhase::BulkInduced
    } else if bulk == rho_left && bulk == rho_right {
        // flat data: the side the characteristics come from
        if bulk < 0.5 {
            TasepPhase::LeftInduced
        } else {
            TasepPhase::RightInduced
        }
    } else if bulk == rho_left {
        TasepPhase::LeftInduced
    } else if bulk == rho_right {
        TasepPhase::RightInduced
    } else {
        // strictly inside the fan away from xi = 0 cannot happen; the fan
        // value at the origin is exactly 1/2
        TasepPhase::BulkInduced
    }
}
