use thiserror::Error;

/// Errors raised by the solvers, sweeps and simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid pressure parameters: {0}")]
    InvalidParams(String),

    #[error("alpha = 1 is not admissible for the perturbed system")]
    AlphaOneUnsupported,

    #[error("the pressureless point A = B = 0 is not a valid input for the {0} solver")]
    PressurelessParams(&'static str),

    #[error("invalid state (u = {u}, rho = {rho}): velocity and density must be positive and finite")]
    InvalidState { u: f64, rho: f64 },

    #[error("degenerate density {0}: expected a positive finite value")]
    DegenerateDensity(f64),

    #[error("no threshold exists: the wave curve passes through both states for every A = B")]
    NoThreshold,

    #[error("could not bracket a root of {0}")]
    BracketFailure(&'static str),

    #[error("root of {what} did not reach tolerance (residual {residual:e})")]
    NotConverged { what: &'static str, residual: f64 },

    #[error("wrong wave-curve branch: {0}")]
    WrongBranch(String),

    #[error("degenerate jump: left and right densities coincide")]
    DegenerateJump,

    #[error("not applicable: {0}")]
    Inapplicable(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("CFL condition violated at t = {t}: max speed {max_speed}")]
    CflViolation { t: f64, max_speed: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
