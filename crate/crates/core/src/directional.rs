//! Omnidirectional and sector return values of a directional wave height
//! model, and how they compare with the largest wave height on a contour
//! built from the `(h_x, h_y)` components.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::contour::{
    alpha_from_return_period, ds_contour, equal_angles, iform_contour, ExceedanceSpec, Method,
};
use crate::error::{Error, Result};
use crate::joint::{CartesianDirectional, Hierarchical, JointModel, Model, RosenblattOrder};
use crate::numeric::{integrate_with_points, solve_monotone, QuadOptions};
use crate::sampling::sample;

/// A directional sector, `[center − width/2, center + width/2]` modulo 2π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    pub center: f64,
    pub width: f64,
}

impl Sector {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::NonFinite("sector centre"));
        }
        if !(width > 0.0 && width <= TAU * (1.0 + 1e-12)) {
            return Err(Error::InvalidParameter { name: "width", value: width, reason: "must lie in (0, 2π]" });
        }
        Ok(Self { center: center.rem_euclid(TAU), width: width.min(TAU) })
    }

    pub fn from_degrees(center: f64, width: f64) -> Result<Self> {
        Self::new(center.to_radians(), width.to_radians())
    }

    pub fn full() -> Self {
        Self { center: 0.0, width: TAU }
    }

    /// `n` equal sectors covering the circle, the first centred on 0.
    pub fn partition(n: usize) -> Vec<Self> {
        let w = TAU / n as f64;
        (0..n).map(|i| Self { center: w * i as f64, width: w }).collect()
    }

    pub fn contains(&self, theta: f64) -> bool {
        let d = (theta - self.center + 0.5 * self.width).rem_euclid(TAU);
        d <= self.width
    }
}

/// The polar `(θ, h_s)` model underneath a directional model.
pub fn polar_model(model: &Model) -> Result<&Hierarchical> {
    let base = match model {
        Model::Cartesian(c) => c.base(),
        Model::Hierarchical(h) => h,
        Model::NormalMixturePair(_) => return Err(not_directional()),
    };
    if base.circular_axis() != Some(0) {
        return Err(not_directional());
    }
    Ok(base)
}

fn not_directional() -> Error {
    Error::Config("the model has no circular direction axis".into())
}

fn quad() -> QuadOptions {
    QuadOptions { abs_tol: 1e-16, rel_tol: 1e-10, max_intervals: 4000 }
}

/// `∫_sector f_Θ(θ) · g(θ) dθ`, with the sector mapped into the model's
/// direction window.
fn over_sector(base: &Hierarchical, sector: &Sector, g: impl Fn(f64) -> f64) -> Result<f64> {
    let (lo, _) = base.support().x1;
    let wrap = |t: f64| lo + (t - lo).rem_euclid(TAU);
    let a = sector.center - 0.5 * sector.width;
    let b = a + sector.width;
    // The window seam and the direction modes are break points.
    let mut points: Vec<f64> = Vec::new();
    let seam = lo + ((a - lo) / TAU).ceil() * TAU;
    for t in [seam, seam - TAU, seam + TAU] {
        points.push(t);
    }
    if let crate::distributions::Distribution::Mixture(m) = base.first() {
        for (_, d) in m.components() {
            if let Some(mode) = d.mode() {
                let k = ((a - mode) / TAU).ceil();
                points.push(mode + k * TAU);
            }
        }
    }
    points.retain(|t| *t > a && *t < b);
    Ok(integrate_with_points(
        |t| {
            let t = wrap(t);
            let w = base.marginal_pdf(0, t);
            if w == 0.0 {
                0.0
            } else {
                w * g(t)
            }
        },
        a,
        b,
        &points,
        quad(),
    )?
    .value)
}

/// Probability that a random sea state comes from `sector`.
pub fn sector_rate(model: &Model, sector: &Sector) -> Result<f64> {
    let base = polar_model(model)?;
    over_sector(base, sector, |_| 1.0)
}

/// `P(H_s > h, Θ ∈ sector)`.
pub fn sector_exceedance(model: &Model, sector: &Sector, h: f64) -> Result<f64> {
    let base = polar_model(model)?;
    over_sector(base, sector, |t| base.conditional_sf(1, h, t))
}

/// `P(H_s > h)` over all directions.
pub fn omnidirectional_exceedance(model: &Model, h: f64) -> Result<f64> {
    sector_exceedance(model, &Sector::full(), h)
}

fn solve_height(base: &Hierarchical, target: f64, tail: impl Fn(f64) -> f64) -> Result<f64> {
    let (lo, hi) = base.support().x2;
    let ln_t = target.ln();
    solve_monotone(
        |h| tail(h).max(1e-300).ln() - ln_t,
        lo + 0.5,
        lo + 5.0,
        lo,
        hi,
        1e-9,
    )
}

/// `H_T` with `P(H_s > H_T) = 1 / (M T)`, `M` sea states per year.
pub fn omnidirectional_return_value(model: &Model, years: f64, state_hours: f64) -> Result<f64> {
    let base = polar_model(model)?;
    let alpha = alpha_from_return_period(years, state_hours)?.value();
    let full = Sector::full();
    solve_height(base, alpha, |h| over_sector(base, &full, |t| base.conditional_sf(1, h, t)).unwrap_or(f64::NAN))
}

/// `H_T^d` from the sea states of one sector: the sector sees `m = M · p`
/// states a year, `p` the sector occurrence rate, and its conditional
/// `H_s` distribution is exceeded with probability `1 / (m T)`.
pub fn sector_return_value(model: &Model, years: f64, state_hours: f64, sector: &Sector) -> Result<f64> {
    let base = polar_model(model)?;
    let alpha = alpha_from_return_period(years, state_hours)?.value();
    let rate = over_sector(base, sector, |_| 1.0)?;
    if rate < alpha {
        return Err(Error::Domain(format!(
            "sector occurrence rate {rate:.3e} is below the exceedance probability {alpha:.3e}"
        )));
    }
    // P(H > h | sector) = 1/(m T)  ⇔  P(H > h, Θ ∈ sector) = α.
    solve_height(base, alpha, |h| over_sector(base, sector, |t| base.conditional_sf(1, h, t)).unwrap_or(f64::NAN))
}

/// Settings for the contour side of [`contour_vs_omnidirectional_gap`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapOptions {
    pub n_points: usize,
    pub sample_size: usize,
    pub seed: u64,
}

impl Default for GapOptions {
    fn default() -> Self {
        Self { n_points: 360, sample_size: 10_000_000, seed: crate::sampling::DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnValueGap {
    pub method: Method,
    pub max_hs_on_contour: f64,
    pub omnidirectional: f64,
}

impl ReturnValueGap {
    /// The contour's largest wave height stays below the omnidirectional
    /// return value.
    pub fn below(&self) -> bool {
        self.max_hs_on_contour < self.omnidirectional
    }
}

/// Largest `h_s` on an IFORM or DS contour in `(h_x, h_y)` space next to the
/// omnidirectional return value for the same return period.
pub fn contour_vs_omnidirectional_gap(
    model: &Model,
    years: f64,
    state_hours: f64,
    method: Method,
    opts: &GapOptions,
) -> Result<ReturnValueGap> {
    let base = polar_model(model)?;
    let cartesian: Model = match model {
        Model::Cartesian(c) => c.clone().into(),
        _ => CartesianDirectional::new(base.clone())?.into(),
    };
    let spec = ExceedanceSpec::from_return_period(crate::contour::ExceedanceKind::Marginal, years, state_hours)?;
    let contour = match method {
        Method::Iform => iform_contour(&cartesian, &spec, RosenblattOrder::X1First, opts.n_points)?,
        Method::Ds => {
            let s = sample(&cartesian, "directional-cartesian", opts.sample_size, opts.seed)?;
            ds_contour(&s, &spec, &equal_angles(opts.n_points))?
        }
        other => {
            return Err(Error::Domain(format!(
                "the return value comparison is defined for IFORM and DS contours, not {other}"
            )))
        }
    };
    // Radius is convex along an edge, so its maximum sits at a vertex.
    let max_hs = contour.vertices().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max);
    Ok(ReturnValueGap {
        method,
        max_hs_on_contour: max_hs,
        omnidirectional: omnidirectional_return_value(model, years, state_hours)?,
    })
}
