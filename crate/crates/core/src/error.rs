use thiserror::Error;

use crate::boundary::SteadyState;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("outside the physical domain: {0}")]
    Domain(String),

    #[error("singular denominator at z = ({z_alpha}, {z_beta}): the density map is not invertible here")]
    SingularDenominator { z_alpha: f64, z_beta: f64 },

    #[error("degenerate density derivative at z = ({z_alpha}, {z_beta})")]
    DegenerateDerivative { z_alpha: f64, z_beta: f64 },

    #[error("states cannot be joined by a {family} shock: {reason}")]
    InvalidShockPair { family: &'static str, reason: String },

    #[error("root not bracketed: v - xi has values {f_lo} and {f_hi} at the bracket ends")]
    Bracket { f_lo: f64, f_hi: f64 },

    #[error("wave speeds out of order: wave {index} ends at {speed_hi} but the next starts at {next_lo}")]
    SpeedOrdering { index: usize, speed_hi: f64, next_lo: f64 },

    #[error("forbidden phase label ({0}); characteristic velocities out of order")]
    Classification(String),

    #[error("invalid boundary rates: {0}")]
    InvalidRates(String),

    #[error("boundary current ({j_circ}, {j_bullet}) infeasible on the {side} side: distance {distance} outside the simplex")]
    InfeasibleCurrent {
        side: &'static str,
        j_circ: f64,
        j_bullet: f64,
        distance: f64,
    },

    #[error("steady-state solver did not converge after {} iterations (residual {:.3e})", .best.iterations, .best.residual)]
    NonConvergence { best: Box<SteadyState> },

    #[error("invalid configuration: {0}")]
    Config(String),
}
