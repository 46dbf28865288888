//! Crate error type.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Errors produced by parsing, evaluation and the geometric operations.
///
/// Every variant carries enough context to state *where* the problem is
/// (byte offset in a source string, evaluation point, offending subtree)
/// without holding references into caller data.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The expression text failed to parse.
    Parse {
        /// Byte offset of the offending token in the source string.
        offset: usize,
        /// Human-readable description of what was expected and found.
        message: String,
    },
    /// An identifier was applied like a function but is not a known function.
    UnknownFunction { name: String, offset: usize },
    /// Evaluation met a variable with no binding.
    UnboundVariable { name: String },
    /// More differentiation variables than the Taylor backend supports.
    TooManyVariables { count: usize, max: usize },
    /// Requested derivative order above the supported cap.
    OrderTooHigh { order: usize, max: usize },
    /// A function left its real domain (`log` of a nonpositive value,
    /// `sqrt` of a negative value, fractional power of a nonpositive base).
    Domain {
        op: &'static str,
        value: f64,
        subtree: String,
    },
    /// Division by zero, including `tan` at a pole.
    DivisionByZero { subtree: String },
    /// A dimension did not match what the operation requires.
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },
    /// The metric matrix failed the positivity check at a point.
    MetricNotPositiveDefinite {
        point: Vec<f64>,
        /// 1-based index of the first nonpositive leading principal minor.
        leading_minor: usize,
    },
    /// A frame failed the orthonormality check at a point.
    NonOrthonormalFrame { point: Vec<f64>, residual: f64 },
    /// A map failed a submersion requirement at a point.
    NotASubmersion { point: Vec<f64>, detail: String },
    /// A documented precondition of an operation was violated.
    Precondition { what: String, residual: f64 },
    /// Lookup of a named catalog object failed.
    UnknownCatalogEntry { kind: &'static str, name: String },
    /// An object was added under a name that is already taken.
    DuplicateCatalogEntry { kind: &'static str, name: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { offset, message } => {
                write!(f, "parse error at byte {offset}: {message}")
            }
            Error::UnknownFunction { name, offset } => {
                write!(f, "unknown function `{name}` at byte {offset}")
            }
            Error::UnboundVariable { name } => write!(f, "unbound variable `{name}`"),
            Error::TooManyVariables { count, max } => {
                write!(f, "{count} differentiation variables requested, at most {max} supported")
            }
            Error::OrderTooHigh { order, max } => {
                write!(f, "derivative order {order} requested, at most {max} supported")
            }
            Error::Domain { op, value, subtree } => {
                write!(f, "domain error: {op} of {value} in `{subtree}`")
            }
            Error::DivisionByZero { subtree } => write!(f, "division by zero in `{subtree}`"),
            Error::DimensionMismatch {
                context,
                expected,
                found,
            } => write!(f, "{context}: expected dimension {expected}, found {found}"),
            Error::MetricNotPositiveDefinite {
                point,
                leading_minor,
            } => write!(
                f,
                "metric not positive definite at {point:?} (leading minor {leading_minor})"
            ),
            Error::NonOrthonormalFrame { point, residual } => write!(
                f,
                "frame not orthonormal at {point:?} (gram residual {residual:.3e})"
            ),
            Error::NotASubmersion { point, detail } => {
                write!(f, "not a Riemannian submersion at {point:?}: {detail}")
            }
            Error::Precondition { what, residual } => {
                write!(f, "precondition violated: {what} (residual {residual:.3e})")
            }
            Error::UnknownCatalogEntry { kind, name } => {
                write!(f, "unknown catalog {kind} `{name}`")
            }
            Error::DuplicateCatalogEntry { kind, name } => {
                write!(f, "catalog {kind} `{name}` already exists")
            }
        }
    }
}

impl core::error::Error for Error {}
