use std::f64::consts::TAU;

use super::{
    AxisLabel, CartesianDirectional, ConditionalFamily, DependenceFunction, Hierarchical,
    JointModel, NormalMixturePair, Support,
};
use crate::distributions::{Distribution, Mixture, VonMises, Weibull3};
use crate::error::{Error, Result};

/// Fixed relation between spectral peak period and zero-crossing period.
pub const TP_OVER_TZ: f64 = 1.2796;

/// Any of the built-in model classes.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Hierarchical(Hierarchical),
    NormalMixturePair(NormalMixturePair),
    Cartesian(CartesianDirectional),
}

impl Model {
    fn inner(&self) -> &dyn JointModel {
        match self {
            Model::Hierarchical(m) => m,
            Model::NormalMixturePair(m) => m,
            Model::Cartesian(m) => m,
        }
    }
}

impl From<Hierarchical> for Model {
    fn from(m: Hierarchical) -> Self {
        Model::Hierarchical(m)
    }
}
impl From<NormalMixturePair> for Model {
    fn from(m: NormalMixturePair) -> Self {
        Model::NormalMixturePair(m)
    }
}
impl From<CartesianDirectional> for Model {
    fn from(m: CartesianDirectional) -> Self {
        Model::Cartesian(m)
    }
}

impl JointModel for Model {
    fn labels(&self) -> [AxisLabel; 2] {
        self.inner().labels()
    }
    fn support(&self) -> Support {
        self.inner().support()
    }
    fn pdf(&self, x: [f64; 2]) -> f64 {
        self.inner().pdf(x)
    }
    fn marginal_pdf(&self, axis: usize, x: f64) -> f64 {
        self.inner().marginal_pdf(axis, x)
    }
    fn marginal_cdf(&self, axis: usize, x: f64) -> f64 {
        self.inner().marginal_cdf(axis, x)
    }
    fn marginal_sf(&self, axis: usize, x: f64) -> f64 {
        self.inner().marginal_sf(axis, x)
    }
    fn conditional_cdf(&self, axis: usize, x: f64, given: f64) -> f64 {
        self.inner().conditional_cdf(axis, x, given)
    }
    fn conditional_sf(&self, axis: usize, x: f64, given: f64) -> f64 {
        self.inner().conditional_sf(axis, x, given)
    }
    fn circular_axis(&self) -> Option<usize> {
        self.inner().circular_axis()
    }
    fn marginal_ppf(&self, axis: usize, p: f64) -> Result<f64> {
        self.inner().marginal_ppf(axis, p)
    }
    fn marginal_isf(&self, axis: usize, q: f64) -> Result<f64> {
        self.inner().marginal_isf(axis, q)
    }
    fn conditional_ppf(&self, axis: usize, p: f64, given: f64) -> Result<f64> {
        self.inner().conditional_ppf(axis, p, given)
    }
    fn conditional_isf(&self, axis: usize, q: f64, given: f64) -> Result<f64> {
        self.inner().conditional_isf(axis, q, given)
    }
}

/// Names accepted by [`build_paper_model`].
pub fn registered_models() -> &'static [&'static str] {
    &[
        "sea-state",
        "sea-state-tp",
        "normal-mixture",
        "weibull-normal",
        "directional",
        "directional-cartesian",
    ]
}

fn sea_state() -> Result<Hierarchical> {
    sea_state_with_shape(1.471)
}

/// The sea-state model with the Weibull shape of `h_s` replaced by `k`; all
/// other parameters are kept. The `h_s` support follows the new tail.
pub fn sea_state_with_shape(k: f64) -> Result<Hierarchical> {
    let (lambda, gamma) = (2.776, 0.8888);
    let h_max = gamma + lambda * 1e16f64.ln().powf(1.0 / k);
    Hierarchical::new(
        Weibull3::new(lambda, k, gamma)?.into(),
        ConditionalFamily::LogNormal {
            mu: DependenceFunction::Power { a: 0.1, b: 1.489, c: 0.1901 },
            sigma: DependenceFunction::ExpDecay { a: 0.04, b: 0.1748, c: -0.2243 },
        },
        Support { x1: (gamma, h_max), x2: (0.1, 40.0) },
        [AxisLabel::new("hs", "m"), AxisLabel::new("tz", "s")],
    )
}

fn weibull_normal() -> Result<Hierarchical> {
    let x1_max = 1e16f64.ln().powf(1.0 / 3.0);
    Hierarchical::new(
        Weibull3::new(1.0, 3.0, 0.0)?.into(),
        ConditionalFamily::Normal {
            mean: DependenceFunction::Affine { a1: 0.0, a2: 1.0 },
            std: DependenceFunction::ExpOfAffine { b1: 0.1, b2: -1.0 },
        },
        Support { x1: (0.0, x1_max), x2: (-12.0, 16.0) },
        [AxisLabel::new("x1", "-"), AxisLabel::new("x2", "-")],
    )
}

/// Direction-dependent wave height model: a two-component von Mises mixture
/// for the direction and a Weibull for `h_s` whose scale and shape are
/// eighth-order Fourier series in the direction.
pub fn directional_polar(cut: f64) -> Result<Hierarchical> {
    let theta: Distribution = Mixture::new(vec![
        (0.21, VonMises::with_cut(2.10, 0.74, cut)?.into()),
        (0.79, VonMises::with_cut(5.54, 13.11, cut)?.into()),
    ])?
    .into();
    let scale = DependenceFunction::Fourier {
        cos: vec![1.875, 0.345, -0.210, -0.160, -0.265, -0.090, 0.070, 0.030, 0.030],
        sin: vec![-0.140, -0.820, -0.200, 0.095, 0.110, 0.070, 0.020, -0.015],
    };
    let shape = DependenceFunction::Fourier {
        cos: vec![1.910, 0.240, -0.080, -0.010, -0.110, 0.0004, 0.060, 0.060, 0.004],
        sin: vec![-0.130, -0.170, -0.030, 0.030, 0.003, 0.020, 0.020, -0.010],
    };
    Hierarchical::new(
        theta,
        ConditionalFamily::Weibull3 {
            scale,
            shape,
            location: DependenceFunction::Constant { c: 0.5 },
        },
        Support { x1: (cut, cut + TAU), x2: (0.5, 25.0) },
        [AxisLabel::new("theta", "rad"), AxisLabel::new("hs", "m")],
    )
}

/// Independent pair: a Weibull first variable and a second variable that
/// is either standard normal or uniform on `[-3, 3]`.
pub fn independent_weibull(shape: f64, uniform_second: bool) -> Result<Hierarchical> {
    let x1_max = 1e16f64.ln().powf(1.0 / shape);
    let c = |c| DependenceFunction::Constant { c };
    let (family, x2) = if uniform_second {
        (ConditionalFamily::Uniform { lo: c(-3.0), hi: c(3.0) }, (-3.0, 3.0))
    } else {
        (ConditionalFamily::Normal { mean: c(0.0), std: c(1.0) }, (-10.0, 10.0))
    };
    Hierarchical::new(
        Weibull3::new(1.0, shape, 0.0)?.into(),
        family,
        Support { x1: (0.0, x1_max), x2 },
        [AxisLabel::new("x1", "-"), AxisLabel::new("x2", "-")],
    )
}

/// Builds one of the registered example models by name.
pub fn build_paper_model(name: &str) -> Result<Model> {
    Ok(match name {
        "sea-state" => sea_state()?.into(),
        "sea-state-tp" => sea_state()?.rescaled(TP_OVER_TZ, AxisLabel::new("tp", "s"))?.into(),
        "normal-mixture" => NormalMixturePair::new(3.0)?.into(),
        "weibull-normal" => weibull_normal()?.into(),
        "directional" => directional_polar(0.0)?.into(),
        "directional-cartesian" => CartesianDirectional::new(directional_polar(0.0)?)?.into(),
        other => return Err(Error::UnknownModel(other.to_string())),
    })
}
