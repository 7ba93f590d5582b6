//! Two-dimensional joint environmental models and the Rosenblatt transform.
//!
//! Every model exposes its two marginals and both conditionals, so the
//! Rosenblatt transform can condition in either order. Where a model has no
//! closed form for a marginal or conditional it integrates the joint density
//! along a line.

mod cartesian;
mod dependence;
mod hierarchical;
mod mixture_pair;
mod registry;

pub use cartesian::CartesianDirectional;
pub use dependence::DependenceFunction;
pub use hierarchical::{ConditionalFamily, Hierarchical};
pub use mixture_pair::NormalMixturePair;
pub use registry::{
    build_paper_model, directional_polar, independent_weibull, registered_models,
    sea_state_with_shape, Model, TP_OVER_TZ,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{self, QuadOptions};
use crate::stats::{norm_cdf, norm_isf, norm_ppf, norm_sf, Probability};

/// Name and unit of one model axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisLabel {
    pub name: String,
    pub unit: String,
}

impl AxisLabel {
    pub fn new(name: &str, unit: &str) -> Self {
        Self { name: name.to_string(), unit: unit.to_string() }
    }
}

/// Rectangle used for numerical work (quadrature limits, root brackets,
/// density grids). It holds all but a negligible share of the mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Support {
    pub x1: (f64, f64),
    pub x2: (f64, f64),
}

impl Support {
    pub fn axis(&self, axis: usize) -> (f64, f64) {
        if axis == 0 {
            self.x1
        } else {
            self.x2
        }
    }

    pub fn contains(&self, x: [f64; 2]) -> bool {
        (self.x1.0..=self.x1.1).contains(&x[0]) && (self.x2.0..=self.x2.1).contains(&x[1])
    }
}

/// Conditioning order for the Rosenblatt transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RosenblattOrder {
    /// `u₁ = Φ⁻¹(F(x₁))`, `u₂ = Φ⁻¹(F(x₂ | x₁))`.
    X1First,
    /// `u₁ = Φ⁻¹(F(x₂))`, `u₂ = Φ⁻¹(F(x₁ | x₂))`.
    X2First,
}

impl RosenblattOrder {
    /// `(first, second)` axis indices.
    pub fn axes(self) -> (usize, usize) {
        match self {
            Self::X1First => (0, 1),
            Self::X2First => (1, 0),
        }
    }

    pub fn from_permutation(perm: &[usize]) -> Result<Self> {
        match perm {
            [0, 1] => Ok(Self::X1First),
            [1, 0] => Ok(Self::X2First),
            _ => Err(Error::Domain(format!("{perm:?} is not a permutation of two axes"))),
        }
    }
}

impl std::fmt::Display for RosenblattOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::X1First => "x1-first",
            Self::X2First => "x2-first",
        })
    }
}

impl std::str::FromStr for RosenblattOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x1-first" | "x1" | "natural" => Ok(Self::X1First),
            "x2-first" | "x2" | "reversed" => Ok(Self::X2First),
            _ => Err(Error::Config(format!("unknown Rosenblatt order `{s}`"))),
        }
    }
}

/// A bivariate joint density with both marginal/conditional factorisations.
///
/// `axis` arguments are 0 or 1. Conditionals are of `axis` given the value of
/// the other axis. The raw methods do not validate their inputs; the free
/// functions in this module do.
pub trait JointModel: Send + Sync + std::fmt::Debug {
    fn labels(&self) -> [AxisLabel; 2];
    fn support(&self) -> Support;
    fn pdf(&self, x: [f64; 2]) -> f64;

    fn marginal_pdf(&self, axis: usize, x: f64) -> f64;
    fn marginal_cdf(&self, axis: usize, x: f64) -> f64;
    fn marginal_sf(&self, axis: usize, x: f64) -> f64;

    fn conditional_cdf(&self, axis: usize, x: f64, given: f64) -> f64;
    fn conditional_sf(&self, axis: usize, x: f64, given: f64) -> f64;

    /// Axis holding a circular variable, if any.
    fn circular_axis(&self) -> Option<usize> {
        None
    }

    /// Marginal quantile for `0 < p <= 0.5`-style lower-tail use.
    fn marginal_ppf(&self, axis: usize, p: f64) -> Result<f64> {
        invert_lower(|x| self.marginal_cdf(axis, x), p, self.support().axis(axis))
    }

    /// Marginal inverse survival function, accurate for small `q`.
    fn marginal_isf(&self, axis: usize, q: f64) -> Result<f64> {
        invert_upper(|x| self.marginal_sf(axis, x), q, self.support().axis(axis))
    }

    fn conditional_ppf(&self, axis: usize, p: f64, given: f64) -> Result<f64> {
        invert_lower(|x| self.conditional_cdf(axis, x, given), p, self.support().axis(axis))
    }

    fn conditional_isf(&self, axis: usize, q: f64, given: f64) -> Result<f64> {
        invert_upper(|x| self.conditional_sf(axis, x, given), q, self.support().axis(axis))
    }
}

const TINY: f64 = 1e-300;

/// Solves `ln cdf(x) = ln p` on `bounds`.
pub(crate) fn invert_lower(cdf: impl Fn(f64) -> f64, p: f64, bounds: (f64, f64)) -> Result<f64> {
    let target = p.ln();
    solve_in(|x| cdf(x).max(TINY).ln() - target, bounds, "lower-tail quantile")
}

/// Solves `ln sf(x) = ln q` on `bounds`.
pub(crate) fn invert_upper(sf: impl Fn(f64) -> f64, q: f64, bounds: (f64, f64)) -> Result<f64> {
    let target = q.ln();
    solve_in(|x| target - sf(x).max(TINY).ln(), bounds, "upper-tail quantile")
}

fn solve_in(f: impl Fn(f64) -> f64, (lo, hi): (f64, f64), what: &'static str) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::NoConvergence {
            what,
            detail: format!("target probability is not attained inside [{lo}, {hi}]"),
        });
    }
    let tol = 1e-13 * lo.abs().max(hi.abs()).max(1.0);
    numeric::brent(f, lo, hi, tol)
}

/// Quadrature settings for line integrals of a joint density. Purely relative
/// so that far-tail conditionals keep their accuracy.
pub(crate) fn line_quad() -> QuadOptions {
    QuadOptions { abs_tol: 0.0, rel_tol: 1e-11, max_intervals: 2000 }
}

/// Tail-accurate `Φ⁻¹` from a CDF and survival value of the same point.
fn to_normal(p: f64, q: f64) -> f64 {
    if p <= 0.5 {
        norm_ppf(p)
    } else {
        norm_isf(q)
    }
}

fn check_finite(x: [f64; 2], what: &'static str) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Checked joint density: zero outside the numerical support.
pub fn joint_pdf(model: &dyn JointModel, x: [f64; 2]) -> Result<f64> {
    check_finite(x, "joint_pdf")?;
    Ok(model.pdf(x))
}

/// `F(x2 | x1)` in the model's natural order.
pub fn conditional_cdf(model: &dyn JointModel, x2: f64, x1: f64) -> Result<Probability> {
    check_finite([x1, x2], "conditional_cdf")?;
    let (lo, hi) = model.support().x1;
    if x1 < lo || x1 > hi {
        return Err(Error::Domain(format!("conditioning value {x1} outside [{lo}, {hi}]")));
    }
    Probability::new(model.conditional_cdf(1, x2, x1))
}

/// Marginal CDF of the second axis, obtained by integrating over the first.
pub fn reversed_marginal_cdf(model: &dyn JointModel, x2: f64) -> Result<Probability> {
    if x2.is_nan() {
        return Err(Error::NonFinite("reversed_marginal_cdf"));
    }
    Probability::new(model.marginal_cdf(1, x2))
}

/// Maps a state to U-space. `u[0]` belongs to the first variable of `order`.
pub fn rosenblatt_forward(
    model: &dyn JointModel,
    x: [f64; 2],
    order: RosenblattOrder,
) -> Result<[f64; 2]> {
    check_finite(x, "rosenblatt_forward")?;
    let (a, b) = order.axes();
    let out_of_range = || Error::OutOfRange { x1: x[0], x2: x[1] };
    let (p, q) = (model.marginal_cdf(a, x[a]), model.marginal_sf(a, x[a]));
    if p <= 0.0 || q <= 0.0 {
        return Err(out_of_range());
    }
    let u1 = to_normal(p, q);
    let (p, q) = (model.conditional_cdf(b, x[b], x[a]), model.conditional_sf(b, x[b], x[a]));
    if p <= 0.0 || q <= 0.0 || p.is_nan() {
        return Err(out_of_range());
    }
    Ok([u1, to_normal(p, q)])
}

/// Maps a U-space point back to a state.
pub fn rosenblatt_inverse(
    model: &dyn JointModel,
    u: [f64; 2],
    order: RosenblattOrder,
) -> Result<[f64; 2]> {
    check_finite(u, "rosenblatt_inverse")?;
    let (a, b) = order.axes();
    let xa = if u[0] > 0.0 {
        model.marginal_isf(a, norm_sf(u[0]))?
    } else {
        model.marginal_ppf(a, norm_cdf(u[0]))?
    };
    let xb = if u[1] > 0.0 {
        model.conditional_isf(b, norm_sf(u[1]), xa)?
    } else {
        model.conditional_ppf(b, norm_cdf(u[1]), xa)?
    };
    let mut x = [0.0; 2];
    x[a] = xa;
    x[b] = xb;
    Ok(x)
}
