use serde::{Deserialize, Serialize};

use super::{
    invert_lower, invert_upper, line_quad, AxisLabel, DependenceFunction, JointModel, Support,
};
use crate::distributions::{Distribution, LogNormal, Normal, Uniform, Weibull3};
use crate::error::{Error, Result};
use crate::numeric::integrate_with_points;

/// Family of `X₂ | X₁` with each parameter a function of `x₁`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConditionalFamily {
    Normal { mean: DependenceFunction, std: DependenceFunction },
    LogNormal { mu: DependenceFunction, sigma: DependenceFunction },
    Weibull3 { scale: DependenceFunction, shape: DependenceFunction, location: DependenceFunction },
    Uniform { lo: DependenceFunction, hi: DependenceFunction },
}

impl ConditionalFamily {
    pub fn at(&self, x1: f64) -> Result<Distribution> {
        Ok(match self {
            Self::Normal { mean, std } => Normal::new(mean.eval(x1), std.eval(x1))?.into(),
            Self::LogNormal { mu, sigma } => LogNormal::new(mu.eval(x1), sigma.eval(x1))?.into(),
            Self::Weibull3 { scale, shape, location } => {
                Weibull3::new(scale.eval(x1), shape.eval(x1), location.eval(x1))?.into()
            }
            Self::Uniform { lo, hi } => Uniform::new(lo.eval(x1), hi.eval(x1))?.into(),
        })
    }

    fn functions(&self) -> Vec<&DependenceFunction> {
        match self {
            Self::Normal { mean, std } => vec![mean, std],
            Self::LogNormal { mu, sigma } => vec![mu, sigma],
            Self::Weibull3 { scale, shape, location } => vec![scale, shape, location],
            Self::Uniform { lo, hi } => vec![lo, hi],
        }
    }
}

/// `f(x₁, x₂) = f(x₁) · f(x₂ | x₁)`.
///
/// The second axis may be reported on a scaled axis, `x₂' = s·x₂`, which
/// relabels the variable without changing the probability model.
#[derive(Debug, Clone, PartialEq)]
pub struct Hierarchical {
    first: Distribution,
    conditional: ConditionalFamily,
    second_scale: f64,
    support: Support,
    labels: [AxisLabel; 2],
    breaks: Vec<f64>,
}

impl Hierarchical {
    /// `support` is given in reported units (after any second-axis scaling).
    pub fn new(
        first: Distribution,
        conditional: ConditionalFamily,
        support: Support,
        labels: [AxisLabel; 2],
    ) -> Result<Self> {
        Self::with_second_scale(first, conditional, 1.0, support, labels)
    }

    pub fn with_second_scale(
        first: Distribution,
        conditional: ConditionalFamily,
        second_scale: f64,
        support: Support,
        labels: [AxisLabel; 2],
    ) -> Result<Self> {
        if !(second_scale.is_finite() && second_scale > 0.0) {
            return Err(Error::InvalidParameter {
                name: "second_scale",
                value: second_scale,
                reason: "must be finite and > 0",
            });
        }
        for (lo, hi) in [support.x1, support.x2] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Config(format!("invalid support interval [{lo}, {hi}]")));
            }
        }
        for f in conditional.functions() {
            f.validate()?;
        }
        // Parameters must stay valid across the whole first-axis support.
        let (lo, hi) = support.x1;
        for i in 0..=400 {
            let x1 = lo + (hi - lo) * i as f64 / 400.0;
            conditional.at(x1).map_err(|e| {
                Error::Config(format!("conditional distribution invalid at x1 = {x1}: {e}"))
            })?;
        }
        let mut breaks: Vec<f64> = match &first {
            Distribution::Mixture(m) => m.components().iter().filter_map(|(_, d)| d.mode()).collect(),
            d => d.mode().into_iter().collect(),
        };
        breaks.retain(|b| *b > lo && *b < hi);
        Ok(Self { first, conditional, second_scale, support, labels, breaks })
    }

    pub fn first(&self) -> &Distribution {
        &self.first
    }

    pub fn conditional_family(&self) -> &ConditionalFamily {
        &self.conditional
    }

    /// Distribution of the unscaled second variable given `x1`.
    pub fn conditional_at(&self, x1: f64) -> Option<Distribution> {
        self.conditional.at(x1).ok()
    }

    pub fn second_scale(&self) -> f64 {
        self.second_scale
    }

    /// Same model with a different second-axis scale and support.
    pub fn rescaled(&self, second_scale: f64, label: AxisLabel) -> Result<Self> {
        let ratio = second_scale / self.second_scale;
        let support = Support {
            x1: self.support.x1,
            x2: (self.support.x2.0 * ratio, self.support.x2.1 * ratio),
        };
        Self::with_second_scale(
            self.first.clone(),
            self.conditional.clone(),
            second_scale,
            support,
            [self.labels[0].clone(), label],
        )
    }

    /// Joint density with `x₂` on the unscaled axis.
    fn density(&self, x1: f64, x2: f64) -> f64 {
        let f1 = self.first.pdf(x1);
        if f1 == 0.0 {
            return 0.0;
        }
        match self.conditional_at(x1) {
            Some(c) => f1 * c.pdf(x2),
            None => 0.0,
        }
    }

    /// `∫_a^b f(t, x₂) dt` over the first axis.
    fn line(&self, x2: f64, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let pts: Vec<f64> = self.breaks.iter().copied().filter(|p| *p > a && *p < b).collect();
        integrate_with_points(|t| self.density(t, x2), a, b, &pts, line_quad())
            .map(|e| e.value.max(0.0))
            .unwrap_or(f64::NAN)
    }

    /// `∫ f(t) · g(conditional at t) dt` over the first axis.
    fn mix(&self, g: impl Fn(&Distribution) -> f64) -> f64 {
        let (lo, hi) = self.support.x1;
        integrate_with_points(
            |t| {
                let f1 = self.first.pdf(t);
                if f1 == 0.0 {
                    return 0.0;
                }
                self.conditional_at(t).map_or(0.0, |c| f1 * g(&c))
            },
            lo,
            hi,
            &self.breaks,
            line_quad(),
        )
        .map(|e| e.value.clamp(0.0, 1.0))
        .unwrap_or(f64::NAN)
    }

    fn clamp_first(&self, x1: f64) -> f64 {
        x1.clamp(self.support.x1.0, self.support.x1.1)
    }
}

impl JointModel for Hierarchical {
    fn labels(&self) -> [AxisLabel; 2] {
        self.labels.clone()
    }

    fn support(&self) -> Support {
        self.support
    }

    fn pdf(&self, x: [f64; 2]) -> f64 {
        if !self.support.contains(x) {
            return 0.0;
        }
        self.density(x[0], x[1] / self.second_scale) / self.second_scale
    }

    fn circular_axis(&self) -> Option<usize> {
        self.first.is_circular().then_some(0)
    }

    fn marginal_pdf(&self, axis: usize, x: f64) -> f64 {
        if axis == 0 {
            return self.first.pdf(x);
        }
        let s = self.second_scale;
        let (lo, hi) = self.support.x1;
        self.line(x / s, lo, hi) / s
    }

    fn marginal_cdf(&self, axis: usize, x: f64) -> f64 {
        if axis == 0 {
            return self.first.cdf(x);
        }
        let z = x / self.second_scale;
        self.mix(|c| c.cdf(z))
    }

    fn marginal_sf(&self, axis: usize, x: f64) -> f64 {
        if axis == 0 {
            return self.first.sf(x);
        }
        let z = x / self.second_scale;
        self.mix(|c| c.sf(z))
    }

    fn conditional_cdf(&self, axis: usize, x: f64, given: f64) -> f64 {
        if axis == 1 {
            return self
                .conditional_at(self.clamp_first(given))
                .map_or(f64::NAN, |c| c.cdf(x / self.second_scale));
        }
        let z = given / self.second_scale;
        let (lo, hi) = self.support.x1;
        let x = x.clamp(lo, hi);
        let part = self.line(z, lo, x);
        let rest = self.line(z, x, hi);
        part / (part + rest)
    }

    fn conditional_sf(&self, axis: usize, x: f64, given: f64) -> f64 {
        if axis == 1 {
            return self
                .conditional_at(self.clamp_first(given))
                .map_or(f64::NAN, |c| c.sf(x / self.second_scale));
        }
        let z = given / self.second_scale;
        let (lo, hi) = self.support.x1;
        let x = x.clamp(lo, hi);
        let part = self.line(z, lo, x);
        let rest = self.line(z, x, hi);
        rest / (part + rest)
    }

    fn marginal_ppf(&self, axis: usize, p: f64) -> Result<f64> {
        if axis == 0 {
            return Ok(self.first.ppf(p));
        }
        invert_lower(|x| self.marginal_cdf(1, x), p, self.support.x2)
    }

    fn marginal_isf(&self, axis: usize, q: f64) -> Result<f64> {
        if axis == 0 {
            return Ok(self.first.isf(q));
        }
        invert_upper(|x| self.marginal_sf(1, x), q, self.support.x2)
    }

    fn conditional_ppf(&self, axis: usize, p: f64, given: f64) -> Result<f64> {
        if axis == 1 {
            let c = self.conditional.at(self.clamp_first(given))?;
            return Ok(self.second_scale * c.ppf(p));
        }
        let z = given / self.second_scale;
        let (lo, hi) = self.support.x1;
        let total = self.line(z, lo, hi);
        invert_lower(|x| self.line(z, lo, x) / total, p, self.support.x1)
    }

    fn conditional_isf(&self, axis: usize, q: f64, given: f64) -> Result<f64> {
        if axis == 1 {
            let c = self.conditional.at(self.clamp_first(given))?;
            return Ok(self.second_scale * c.isf(q));
        }
        let z = given / self.second_scale;
        let (lo, hi) = self.support.x1;
        let total = self.line(z, lo, hi);
        invert_upper(|x| self.line(z, x, hi) / total, q, self.support.x1)
    }
}
