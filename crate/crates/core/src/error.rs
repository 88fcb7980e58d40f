use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Coarse error class, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Geometry,
}

/// Moving entity named in a [`Error::GeometryExhausted`] report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entity {
    Tx,
    Rx,
    MobileScatterer(usize),
}

impl core::fmt::Display for Entity {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Entity::Tx => f.write_str("Tx"),
            Entity::Rx => f.write_str("Rx"),
            Entity::MobileScatterer(i) => write!(f, "mobile scatterer {i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-positive distance: `{field}` must be > 0, got {value}")]
    NonPositiveDistance { field: &'static str, value: f64 },
    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig {
        field: &'static str,
        reason: &'static str,
    },
    #[error("time step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("scene geometry exhausted: {entity} reaches a wall at t = {time} s")]
    GeometryExhausted { entity: Entity, time: f64 },
    #[error("invalid coupling: arrival angle {angle} rad outside the valid range")]
    InvalidCoupling { angle: f64 },
    #[error("angle of departure {angle} rad outside ({lo}, {hi})")]
    AodOutOfRange { angle: f64, lo: f64, hi: f64 },
    #[error("degenerate ray: scatterer coincides with a terminal")]
    DegenerateRay,
    #[error("element correction exceeds path length ({0} m)")]
    ElementCorrection(f64),
    #[error("angle {0} rad outside the Lambertian domain [-pi/2, pi/2]")]
    LambertianDomain(f64),
    #[error("von Mises concentration must be >= 0, got {0}")]
    NegativeConcentration(f64),
    #[error("AoD distribution incompatible with wall: {accepted} of {attempts} draws accepted")]
    IncompatibleAod { accepted: usize, attempts: usize },
    #[error("no received power")]
    NoReceivedPower,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("impulse responses disagree on element pair or time stamp")]
    MismatchedLinks,
    #[error("time grid must be strictly increasing within [{start}, {horizon}] s")]
    InvalidTimeGrid { start: f64, horizon: f64 },
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::NonPositiveDistance { .. }
            | Error::InvalidConfig { .. }
            | Error::NonPositiveStep(_)
            | Error::NegativeConcentration(_)
            | Error::IncompatibleAod { .. }
            | Error::InvalidTimeGrid { .. }
            | Error::TooFewSamples { .. } => ErrorCategory::Config,
            _ => ErrorCategory::Geometry,
        }
    }
}
