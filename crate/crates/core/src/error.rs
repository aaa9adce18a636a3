//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

/// Everything that can go wrong when operating on box spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two arguments live on different box spaces.
    SpaceMismatch,
    /// A component index is out of range for the space.
    ComponentOutOfRange { component: u32 },
    /// A point index is out of range for its component.
    PointOutOfRange { component: u32, index: u32 },
    /// A component was declared with size zero.
    EmptyComponent { component: u32 },
    /// Weight vector length does not match the component size.
    WeightLength {
        component: u32,
        expected: usize,
        got: usize,
    },
    /// A weight is zero, negative, or not finite.
    WeightNotPositive { component: u32, index: u32 },
    /// Weights do not sum to one within 1e-12.
    WeightSum { sum: f64 },
    /// `power` and `widen` require an exponent of at least one.
    ZeroPower,
    /// The relation does not contain the diagonal of its space.
    MissingDiagonal,
    /// The relation is not a partial bijection.
    NotPartialBijection,
    /// A pair-function value is negative or not finite.
    InvalidValue { value: f64 },
    /// The operator (or its restriction) is zero where a nonzero one is required.
    ZeroOperator,
    /// No points remain after removing the forbidden set.
    EmptyRestriction,
    /// Power iteration hit its cap; carries the last norm estimate.
    NoConvergence { last_estimate: f64 },
    /// A ball exceeds the exhaustive-enumeration cap in exact mode.
    BallTooLarge {
        component: u32,
        center: u32,
        size: usize,
        cap: usize,
    },
    /// A relation sequence that must be increasing is not.
    NotIncreasing { position: usize },
    /// The pair function vanishes on every component under consideration.
    ZeroFunction,
    /// Catch-all for invalid arguments, with a short description.
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SpaceMismatch => write!(f, "arguments belong to different box spaces"),
            Error::ComponentOutOfRange { component } => {
                write!(f, "component {component} out of range")
            }
            Error::PointOutOfRange { component, index } => {
                write!(f, "point {index} out of range in component {component}")
            }
            Error::EmptyComponent { component } => {
                write!(f, "component {component} has size zero")
            }
            Error::WeightLength {
                component,
                expected,
                got,
            } => write!(
                f,
                "component {component} expects {expected} weights, got {got}"
            ),
            Error::WeightNotPositive { component, index } => write!(
                f,
                "weight at point {index} of component {component} is not strictly positive"
            ),
            Error::WeightSum { sum } => {
                write!(f, "weights sum to {sum}, expected 1 within 1e-12")
            }
            Error::ZeroPower => write!(f, "exponent must be at least 1"),
            Error::MissingDiagonal => write!(f, "relation does not contain the diagonal"),
            Error::NotPartialBijection => write!(f, "relation is not a partial bijection"),
            Error::InvalidValue { value } => {
                write!(
                    f,
                    "pair-function value {value} is not a finite nonnegative number"
                )
            }
            Error::ZeroOperator => write!(f, "operator is zero"),
            Error::EmptyRestriction => write!(f, "no points remain after restriction"),
            Error::NoConvergence { last_estimate } => write!(
                f,
                "power iteration did not converge (last estimate {last_estimate})"
            ),
            Error::BallTooLarge {
                component,
                center,
                size,
                cap,
            } => write!(
                f,
                "ball of {size} points at point {center} in component {component} \
                 exceeds the exact-enumeration cap {cap}"
            ),
            Error::NotIncreasing { position } => write!(
                f,
                "relation sequence is not increasing at position {position}"
            ),
            Error::ZeroFunction => {
                write!(
                    f,
                    "pair function is zero on every component under consideration"
                )
            }
            Error::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for Error {}
