use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("inner radius must be less than outer (got a = {a}, b = {b})")]
    InvertedRadii { a: f64, b: f64 },

    #[error("radii must be positive and finite (got a = {a}, b = {b})")]
    InvalidRadii { a: f64, b: f64 },

    #[error("point coincides with the origin")]
    DegeneratePoint,

    #[error("point radius must be positive and finite (got r = {0})")]
    InvalidRadius(f64),

    #[error("radius {r} lies outside the {kind} annulus a = {a}, b = {b}")]
    OutsideDomain {
        r: f64,
        a: f64,
        b: f64,
        kind: &'static str,
    },

    #[error("x and y coincide; the Green function is singular there (use the Robin function)")]
    Singular,

    #[error("configuration points {i} and {j} coincide")]
    Diagonal { i: usize, j: usize },

    #[error("configuration must contain at least one point")]
    EmptyConfiguration,

    #[error("series tolerance must be positive and finite (got {0})")]
    InvalidTolerance(f64),

    #[error("series ratio q = {0} is not below 1; the expansion does not converge")]
    Divergent(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sample point too close to the boundary or the pole: {0}")]
    SampleTooClose(String),
}
