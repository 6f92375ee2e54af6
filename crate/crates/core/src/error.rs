use num_complex::Complex64;
use thiserror::Error;

use crate::types::ImHPoint;

pub type Result<T> = std::result::Result<T, Error>;

/// Domain errors. Every variant is a property of the inputs, never an
/// internal inconsistency; the CLI maps all of them to exit code 1.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("point {point} coincides with center {index}")]
    SingularPoint { point: ImHPoint, index: usize },

    #[error("tail unresolved: {0}")]
    TailUnresolved(String),

    #[error("order type of fiber over {z} is not declared")]
    UnknownOrderType { z: Complex64 },

    #[error("segment over {z} from {from} to {to} meets center {index}")]
    SegmentHitsCenter {
        z: Complex64,
        from: f64,
        to: f64,
        index: usize,
    },

    #[error("ray meets center {index} at distance {s}")]
    RayHitsCenter { index: usize, s: f64 },

    #[error("rho grid spans {decades:.3} decades; at least one is required")]
    InsufficientRange { decades: f64 },

    #[error("center {index} has zero real part; charts need every real part nonzero")]
    NotChartAdmissible { index: usize },

    #[error("multiplier divisor does not match the section divisor at {z}: expected {expected}, found {found}")]
    WrongDivisor { z: Complex64, expected: i64, found: i64 },

    #[error("point class does not lie on the chosen section over {z}")]
    NotOnSection { z: Complex64 },

    #[error("root bracket failed on ({lo}, {hi}): f(lo)={f_lo}, f(hi)={f_hi}")]
    RootBracketFailure { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("q = {q} lies in the support of the transition divisor")]
    OutsideOverlap { q: Complex64 },

    #[error("configurations are not isomorphic: {0}")]
    NotIsomorphic(String),

    #[error("point {0} is a fixed point of the circle action")]
    FixedPointInput(ImHPoint),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Variant name, for machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::SingularPoint { .. } => "SingularPoint",
            Error::TailUnresolved(_) => "TailUnresolved",
            Error::UnknownOrderType { .. } => "UnknownOrderType",
            Error::SegmentHitsCenter { .. } => "SegmentHitsCenter",
            Error::RayHitsCenter { .. } => "RayHitsCenter",
            Error::InsufficientRange { .. } => "InsufficientRange",
            Error::NotChartAdmissible { .. } => "NotChartAdmissible",
            Error::WrongDivisor { .. } => "WrongDivisor",
            Error::NotOnSection { .. } => "NotOnSection",
            Error::RootBracketFailure { .. } => "RootBracketFailure",
            Error::OutsideOverlap { .. } => "OutsideOverlap",
            Error::NotIsomorphic(_) => "NotIsomorphic",
            Error::FixedPointInput(_) => "FixedPointInput",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
