//! Two-point blow-up location: the scalar radius equation, a multi-start
//! search for critical configurations, and diagnostics for candidate pairs.

mod profile;
mod search;
mod verify;

pub use profile::{profile, profile_control, r0_bracket, solve_r0, ProfilePoint, R0Solution};
pub use search::{
    configuration_distance, find_critical_points, polygon_diagnostics, polygon_explore, refine,
    sample_start, CriticalPointReport, IterationRecord, PolygonDiagnostics, SearchOptions,
};
pub use verify::{verify_two_point, SubtractCheck, BRACKET_ORDERS};
