//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero: divisor {0:e}")]
    DivideByZero(f64),

    #[error("{function} is undefined at {value}")]
    BranchDomain { function: &'static str, value: f64 },

    #[error("surface is not admissible at ({u}, {v}): |{quantity}| = {value:e} is below {threshold:e}")]
    Admissibility {
        u: f64,
        v: f64,
        quantity: &'static str,
        value: f64,
        threshold: f64,
    },

    #[error("type-2 regularity value {value:e} at ({u}, {v}) is below {threshold:e}")]
    Regularity {
        u: f64,
        v: f64,
        value: f64,
        threshold: f64,
    },

    #[error("unknown family '{0}'")]
    UnknownFamily(String),

    #[error("unknown parameter '{name}' for family {family}")]
    UnknownParameter { family: String, name: String },

    #[error("invalid parameters for {family}: {constraint}")]
    InvalidParameter { family: String, constraint: String },

    #[error("expected a {expected} affine factorable surface")]
    KindMismatch { expected: &'static str },

    #[error("need at least {needed} included samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("point ({u}, {v}) lies within 2h of the domain boundary")]
    BoundaryProximity { u: f64, v: f64 },

    #[error("radicand {value:e} at f2 = {at} is below {floor:e}")]
    RadicandNonPositive { at: f64, value: f64, floor: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
