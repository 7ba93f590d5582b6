//! TOML model and response descriptions.
//!
//! ```toml
//! kind = "hierarchical"
//! labels = [{ name = "hs", unit = "m" }, { name = "tz", unit = "s" }]
//! support = { x1 = [0.8888, 33.0], x2 = [0.1, 40.0] }
//!
//! [first]
//! family = "weibull3"
//! scale = 2.776
//! shape = 1.471
//! location = 0.8888
//!
//! [conditional]
//! family = "log-normal"
//! mu = { form = "power", a = 0.1, b = 1.489, c = 0.1901 }
//! sigma = { form = "exp-decay", a = 0.04, b = 0.1748, c = -0.2243 }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::distributions::{Distribution, LogNormal, Mixture, Normal, Uniform, VonMises, Weibull3};
use crate::error::{Error, Result};
use crate::joint::{
    build_paper_model, AxisLabel, CartesianDirectional, ConditionalFamily, Hierarchical, Model,
    NormalMixturePair, Support,
};
use crate::response::ResponseFunction;

/// A one-dimensional distribution as written in a config file. Angles are
/// in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DistributionConfig {
    Weibull3 { scale: f64, shape: f64, location: f64 },
    LogNormal { mu: f64, sigma: f64 },
    Normal { mean: f64, std: f64 },
    VonMises {
        mu: f64,
        kappa: f64,
        #[serde(default)]
        cut: f64,
    },
    Uniform { lo: f64, hi: f64 },
    Mixture { components: Vec<MixtureComponent> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureComponent {
    pub weight: f64,
    pub distribution: DistributionConfig,
}

impl DistributionConfig {
    pub fn build(&self) -> Result<Distribution> {
        Ok(match self {
            Self::Weibull3 { scale, shape, location } => Weibull3::new(*scale, *shape, *location)?.into(),
            Self::LogNormal { mu, sigma } => LogNormal::new(*mu, *sigma)?.into(),
            Self::Normal { mean, std } => Normal::new(*mean, *std)?.into(),
            Self::VonMises { mu, kappa, cut } => VonMises::with_cut(*mu, *kappa, *cut)?.into(),
            Self::Uniform { lo, hi } => Uniform::new(*lo, *hi)?.into(),
            Self::Mixture { components } => Mixture::new(
                components
                    .iter()
                    .map(|c| Ok((c.weight, c.distribution.build()?)))
                    .collect::<Result<Vec<_>>>()?,
            )?
            .into(),
        })
    }
}

/// Hierarchical model fields shared by the plain and directional kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HierarchicalConfig {
    pub first: DistributionConfig,
    pub conditional: ConditionalFamily,
    /// Support in reported units (after `second_scale`).
    pub support: Support,
    pub labels: [AxisLabel; 2],
    /// Reports the second variable as `s · x₂`, e.g. `t_p = 1.2796 · t_z`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_scale: Option<f64>,
}

impl HierarchicalConfig {
    pub fn build(&self) -> Result<Hierarchical> {
        Hierarchical::with_second_scale(
            self.first.build()?,
            self.conditional.clone(),
            self.second_scale.unwrap_or(1.0),
            self.support,
            self.labels.clone(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelConfig {
    /// One of the built-in models by name.
    Registered { name: String },
    Hierarchical(HierarchicalConfig),
    /// A hierarchical model whose first variable is a direction.
    Directional(HierarchicalConfig),
    NormalMixture { a: f64 },
    /// `(h_x, h_y)` view of a directional model.
    CartesianWrap { base: HierarchicalConfig },
}

impl ModelConfig {
    pub fn build(&self) -> Result<Model> {
        Ok(match self {
            Self::Registered { name } => build_paper_model(name)?,
            Self::Hierarchical(h) => h.build()?.into(),
            Self::Directional(h) => directional(h)?.into(),
            Self::NormalMixture { a } => NormalMixturePair::new(*a)?.into(),
            Self::CartesianWrap { base } => CartesianDirectional::new(directional(base)?)?.into(),
        })
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

fn directional(h: &HierarchicalConfig) -> Result<Hierarchical> {
    let m = h.build()?;
    if !m.first().is_circular() {
        return Err(Error::Config("a directional model needs a von Mises (mixture) first variable".into()));
    }
    Ok(m)
}

pub fn response_from_toml(text: &str) -> Result<ResponseFunction> {
    let f: ResponseFunction = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    f.validate()?;
    Ok(f)
}

pub fn load_response(path: &Path) -> Result<ResponseFunction> {
    response_from_toml(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::joint::JointModel;

    const SEA_STATE: &str = r#"
kind = "hierarchical"
labels = [{ name = "hs", unit = "m" }, { name = "tp", unit = "s" }]
support = { x1 = [0.8888, 33.0], x2 = [0.12796, 51.184] }
second_scale = 1.2796

[first]
family = "weibull3"
scale = 2.776
shape = 1.471
location = 0.8888

[conditional]
family = "log-normal"
mu = { form = "power", a = 0.1, b = 1.489, c = 0.1901 }
sigma = { form = "exp-decay", a = 0.04, b = 0.1748, c = -0.2243 }
"#;

    #[test]
    fn hierarchical_config_matches_registry() {
        let m = ModelConfig::from_toml(SEA_STATE).unwrap().build().unwrap();
        let r = build_paper_model("sea-state-tp").unwrap();
        assert_eq!(m.labels(), r.labels());
        for x in [[2.0, 8.0], [10.0, 15.0], [0.95, 3.0]] {
            assert!((m.pdf(x) / r.pdf(x) - 1.0).abs() < 1e-14, "{x:?}");
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let extra = SEA_STATE.replace("second_scale", "secnd_scale");
        assert!(matches!(ModelConfig::from_toml(&extra), Err(Error::Config(_))));
        let bad_form = SEA_STATE.replace("form = \"power\"", "form = \"cubic\"");
        assert!(ModelConfig::from_toml(&bad_form).is_err());
        assert!(ModelConfig::from_toml("kind = \"registered\"\nname = \"sea-state\"\nx = 1\n").is_err());
        assert!(matches!(
            ModelConfig::from_toml("kind = \"registered\"\nname = \"nope\"\n").unwrap().build(),
            Err(Error::UnknownModel(_))
        ));
    }

    #[test]
    fn directional_kind_needs_a_direction() {
        let cfg = SEA_STATE.replace("kind = \"hierarchical\"", "kind = \"directional\"");
        assert!(ModelConfig::from_toml(&cfg).unwrap().build().is_err());
    }

    #[test]
    fn round_trip_through_toml() {
        let cfg = ModelConfig::from_toml(SEA_STATE).unwrap();
        let again = ModelConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(cfg, again);
        let n = ModelConfig::NormalMixture { a: 3.0 };
        assert_eq!(ModelConfig::from_toml(&n.to_toml().unwrap()).unwrap(), n);
    }

    #[test]
    fn responses() {
        let f = response_from_toml("family = \"bimodal\"\na1 = 4\na2 = 1.1\nb1 = 0.1\nb2 = 0.05\nte1 = 25\nte2 = 12.5\n")
            .unwrap();
        assert_eq!(f, ResponseFunction::paper_bimodal());
        assert!(response_from_toml("family = \"sdof\"\na = -2\nb = 0.007\ntp0 = 30\n").is_err());
    }
}
