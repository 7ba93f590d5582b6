//! Environmental contours for structural reliability.
//!
//! Parametric joint models of sea states ([`joint`]), the IFORM, ISORM,
//! direct-sampling and highest-density contour methods ([`contour`]),
//! deterministic responses and the long-term response distribution
//! ([`response`]), and directional return values ([`directional`]).

pub mod config;
pub mod contour;
pub mod directional;
pub mod distributions;
pub mod error;
pub mod joint;
pub mod numeric;
pub mod response;
pub mod sampling;
pub mod stats;
#[cfg(test)]
mod test_oracle;

pub use config::{DistributionConfig, ModelConfig};
pub use contour::geometry::Point;
pub use contour::{
    contour_bounds, empirical_total_alpha, Contour, ContourBounds, ContourMeta, EmpiricalAlpha,
    ExceedanceKind, ExceedanceSpec, GridSpec, Method, ReturnPeriod,
};
pub use directional::Sector;
pub use distributions::Distribution;
pub use error::{Error, Result};
pub use joint::{build_paper_model, AxisLabel, JointModel, Model, RosenblattOrder, Support};
pub use response::{Capacity, ResponseFunction, ResponseMax};
pub use sampling::SampleSet;
pub use stats::{DegreesOfFreedom, Probability};
