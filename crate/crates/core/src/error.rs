use thiserror::Error;

/// Everything that can go wrong while setting up or solving a problem.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("multi-well potential: found {count} turning points (at most 2 supported)")]
    MultiWell { count: usize },

    #[error("no barrier: energy {energy} is not below the barrier maximum")]
    NoBarrier { energy: f64 },

    #[error("region error: {0}")]
    Region(String),

    #[error("point x = {x} lies within {radius:.3e} of the turning point at {turning_point}")]
    TurningPointProximity {
        x: f64,
        turning_point: f64,
        radius: f64,
    },

    #[error("regime error: {0}")]
    Regime(String),

    #[error("bracket error: {0}")]
    Bracket(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("accuracy warning: {0}")]
    Accuracy(String),

    #[error("orientation error: {0}")]
    Orientation(String),

    #[error("linearization error: x = {x} is outside the linear region of the turning point at {turning_point}")]
    Linearization { x: f64, turning_point: f64 },

    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("asymptotic matching error: {0}")]
    AsymptoticMatching(String),

    #[error("channel closed: {0}")]
    ChannelClosed(String),

    #[error("spectrum error: {0}")]
    Spectrum(String),

    #[error("pole proximity: {0}")]
    PoleProximity(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config error: {0}")]
    Config(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Regime,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_) | Error::InvalidParameter(_) => ErrorClass::Config,
            Error::Domain(_)
            | Error::MultiWell { .. }
            | Error::NoBarrier { .. }
            | Error::Region(_)
            | Error::TurningPointProximity { .. }
            | Error::Regime(_)
            | Error::Orientation(_)
            | Error::Linearization { .. }
            | Error::ChannelClosed(_)
            | Error::AsymptoticMatching(_)
            | Error::Range(_)
            | Error::Accuracy(_) => ErrorClass::Regime,
            Error::Bracket(_)
            | Error::Truncation(_)
            | Error::Spectrum(_)
            | Error::PoleProximity(_)
            | Error::Numerical(_) => ErrorClass::Numerical,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
