//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

/// Errors raised by domain construction, interpolation, and curve handling.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Input points are affinely dependent (or otherwise fail to span the
    /// requested dimension).
    DegenerateDomain(String),
    /// A supplied anchor point is not strictly interior to the domain.
    AnchorOutside,
    /// A query point lies outside the domain hull (beyond tolerance).
    OutsideDomain,
    /// A polyline has zero total length after deduplication.
    DegenerateCurve,
    /// A wedge was requested from a hinge that is not convex.
    NotConvexHinge,
    /// A scalar field failed to evaluate at a point.
    EvaluationFailure(String),
    /// Point / mesh / field dimensions disagree.
    DimensionMismatch { expected: usize, got: usize },
    /// The domain shape is not supported by this build (3-D domains must be
    /// axis-aligned boxes).
    UnsupportedDomain(String),
    /// Invalid argument (levels, counts, parameters).
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateDomain(msg) => write!(f, "degenerate domain: {msg}"),
            Error::AnchorOutside => write!(f, "anchor is not strictly interior to the domain"),
            Error::OutsideDomain => write!(f, "point lies outside the domain"),
            Error::DegenerateCurve => write!(f, "curve has zero length"),
            Error::NotConvexHinge => write!(f, "hinge is not convex"),
            Error::EvaluationFailure(msg) => write!(f, "field evaluation failed: {msg}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::UnsupportedDomain(msg) => write!(f, "unsupported domain: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}
