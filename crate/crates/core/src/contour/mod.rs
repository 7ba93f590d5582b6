//! Environmental contours: IFORM and ISORM (Rosenblatt images of U-space
//! circles), direct sampling (halfplane intersection) and highest density
//! (isodensity level set), plus the probability relations between marginal
//! and total exceedance.

mod ds;
mod export;
pub mod geometry;
mod hd;
mod probability;
mod rosenblatt;

pub use ds::{ds_contour, ds_contours, equal_angles, halfplane_offsets, MIN_EXCEEDANCES};
pub use export::CSV_FIELDS;
pub use hd::{hd_contour, hd_interval_1d, DensityGrid, GridSpec};
pub use probability::{
    alpha_from_return_period, iform_radius, iform_total_alpha, isorm_marginal_alpha,
    isorm_radius, return_period_from_alpha, ExceedanceKind, ExceedanceSpec, ReturnPeriod,
    HOURS_PER_YEAR,
};
pub use rosenblatt::{iform_contour, isorm_contour};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::joint::{AxisLabel, RosenblattOrder};
use crate::sampling::SampleSet;
use crate::stats::Probability;
use geometry::{Point, RingIndex};

/// Default number of U-space angles or DS halfplanes.
pub const DEFAULT_POINTS: usize = 360;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Iform,
    Isorm,
    Ds,
    Hd,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::Iform => "IFORM",
            Self::Isorm => "ISORM",
            Self::Ds => "DS",
            Self::Hd => "HD",
        }
    }

    /// Exceedance kind that defines this family of contours.
    pub fn required_kind(self) -> ExceedanceKind {
        match self {
            Self::Iform | Self::Ds => ExceedanceKind::Marginal,
            Self::Isorm | Self::Hd => ExceedanceKind::Total,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "iform" => Ok(Self::Iform),
            "isorm" => Ok(Self::Isorm),
            "ds" => Ok(Self::Ds),
            "hd" => Ok(Self::Hd),
            _ => Err(Error::Config(format!("unknown contour method `{s}`"))),
        }
    }
}

/// How a contour was constructed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ContourMeta {
    Rosenblatt {
        order: RosenblattOrder,
        n_points: usize,
        radius: f64,
    },
    DirectSampling {
        angles: usize,
        seed: u64,
        sample_size: usize,
        model_id: String,
    },
    HighestDensity {
        f_c: f64,
        grid: [usize; 2],
        /// Grid quadrature of the density over `{f >= f_c}`.
        enclosed_probability: f64,
        /// Grid quadrature of the density over `{f < f_c}`.
        excluded_probability: f64,
    },
    /// Read back from a CSV file that does not carry construction details.
    Imported,
}

/// A closed contour, possibly made of several rings (HD level sets can be
/// disconnected or have holes; membership then follows the even-odd rule).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub method: Method,
    pub spec: ExceedanceSpec,
    pub labels: [AxisLabel; 2],
    /// Open rings; the closing edge is implied.
    pub components: Vec<Vec<Point>>,
    pub meta: ContourMeta,
}

impl Contour {
    pub fn new(
        method: Method,
        spec: ExceedanceSpec,
        labels: [AxisLabel; 2],
        components: Vec<Vec<Point>>,
        meta: ContourMeta,
    ) -> Result<Self> {
        if components.is_empty() || components.iter().any(|c| c.len() < 3) {
            return Err(Error::Domain("a contour needs at least one ring of 3 or more points".into()));
        }
        if components.iter().flatten().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(Error::NonFinite("contour vertex"));
        }
        Ok(Self { method, spec, labels, components, meta })
    }

    /// The first (largest) ring.
    pub fn points(&self) -> &[Point] {
        &self.components[0]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Point> {
        self.components.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every ring passes the segment-intersection scan.
    pub fn is_simple(&self) -> bool {
        self.components.iter().all(|c| geometry::is_simple(c))
    }

    /// Even-odd membership over all rings.
    pub fn contains(&self, p: Point) -> bool {
        self.components.iter().filter(|c| geometry::point_in_ring(c, p)).count() % 2 == 1
    }

    pub fn index(&self) -> RingIndex {
        RingIndex::new(self.components.iter().map(Vec::as_slice))
    }
}

/// Extremes of each variable along a contour. Ties go to the vertex met
/// first (rings in order, vertices in order).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourBounds {
    pub lower: [f64; 2],
    pub upper: [f64; 2],
    pub lower_at: [Point; 2],
    pub upper_at: [Point; 2],
}

pub fn contour_bounds(contour: &Contour) -> ContourBounds {
    let first = contour.components[0][0];
    let mut b = ContourBounds {
        lower: first,
        upper: first,
        lower_at: [first; 2],
        upper_at: [first; 2],
    };
    for p in contour.vertices() {
        for j in 0..2 {
            if p[j] < b.lower[j] {
                b.lower[j] = p[j];
                b.lower_at[j] = *p;
            }
            if p[j] > b.upper[j] {
                b.upper[j] = p[j];
                b.upper_at[j] = *p;
            }
        }
    }
    b
}

/// Share of sample points strictly outside a contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalAlpha {
    pub alpha: Probability,
    pub standard_error: f64,
    pub outside: usize,
    pub count: usize,
}

pub fn empirical_total_alpha(contour: &Contour, sample: &SampleSet) -> Result<EmpiricalAlpha> {
    let count = sample.points.len();
    if count == 0 {
        return Err(Error::InsufficientSample { needed: 1, got: 0 });
    }
    let index = contour.index();
    let outside = sample.points.par_iter().filter(|p| !index.contains(**p)).count();
    let a = outside as f64 / count as f64;
    Ok(EmpiricalAlpha {
        alpha: Probability::new(a)?,
        standard_error: (a * (1.0 - a) / count as f64).sqrt(),
        outside,
        count,
    })
}


#[cfg(test)]
mod tests;
