//! Exceedance probabilities, return periods and the U-space radii that link
//! marginal and total exceedance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{chi2_isf, chi2_sf, norm_isf, norm_sf, DegreesOfFreedom, Probability};

pub const HOURS_PER_YEAR: f64 = 365.25 * 24.0;

/// Whether `alpha` bounds a single (possibly rotated) variable or the whole
/// region outside the contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExceedanceKind {
    Marginal,
    Total,
}

impl ExceedanceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Marginal => "marginal",
            Self::Total => "total",
        }
    }
}

impl std::fmt::Display for ExceedanceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ExceedanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "marginal" => Ok(Self::Marginal),
            "total" => Ok(Self::Total),
            _ => Err(Error::Config(format!("unknown exceedance kind `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnPeriod {
    pub years: f64,
    pub state_hours: f64,
}

/// Target exceedance probability of a contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExceedanceSpec {
    kind: ExceedanceKind,
    alpha: Probability,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    origin: Option<ReturnPeriod>,
}

impl ExceedanceSpec {
    /// `alpha` must lie strictly between 0 and 1.
    pub fn new(kind: ExceedanceKind, alpha: f64) -> Result<Self> {
        let alpha = Probability::new(alpha)?;
        if alpha.value() <= 0.0 || alpha.value() >= 1.0 {
            return Err(Error::Domain(format!(
                "contour exceedance probability must lie in (0, 1), got {alpha}"
            )));
        }
        Ok(Self { kind, alpha, origin: None })
    }

    pub fn marginal(alpha: f64) -> Result<Self> {
        Self::new(ExceedanceKind::Marginal, alpha)
    }

    pub fn total(alpha: f64) -> Result<Self> {
        Self::new(ExceedanceKind::Total, alpha)
    }

    pub fn from_return_period(kind: ExceedanceKind, years: f64, state_hours: f64) -> Result<Self> {
        let alpha = alpha_from_return_period(years, state_hours)?;
        let mut spec = Self::new(kind, alpha.value())?;
        spec.origin = Some(ReturnPeriod { years, state_hours });
        Ok(spec)
    }

    pub fn kind(&self) -> ExceedanceKind {
        self.kind
    }

    pub fn alpha(&self) -> Probability {
        self.alpha
    }

    pub fn origin(&self) -> Option<ReturnPeriod> {
        self.origin
    }

    /// Errors unless the spec is of the `expected` kind.
    pub fn require(&self, method: &'static str, expected: ExceedanceKind) -> Result<()> {
        if self.kind == expected {
            Ok(())
        } else {
            Err(Error::SpecKindMismatch {
                method,
                expected: expected.as_str(),
                got: self.kind.as_str(),
            })
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter { name, value: v, reason: "must be finite and > 0" })
    }
}

/// Per-state exceedance probability `α = dt / (T · 365.25 · 24)`.
pub fn alpha_from_return_period(years: f64, state_hours: f64) -> Result<Probability> {
    let years = positive("return_period", years)?;
    let dt = positive("state_duration", state_hours)?;
    Probability::new(dt / (years * HOURS_PER_YEAR))
}

/// Return period in years of a per-state exceedance probability.
pub fn return_period_from_alpha(alpha: Probability, state_hours: f64) -> Result<f64> {
    let dt = positive("state_duration", state_hours)?;
    let a = positive("alpha", alpha.value())?;
    Ok(dt / (a * HOURS_PER_YEAR))
}

fn open_alpha(alpha: Probability) -> Result<f64> {
    let a = alpha.value();
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(Error::Domain(format!("exceedance probability must lie in (0, 1), got {a}")))
    }
}

/// Marginal exceedance in `(0, 0.5)`; 0.5 and above give a radius `<= 0`.
fn marginal_alpha(alpha_m: Probability) -> Result<f64> {
    let a = open_alpha(alpha_m)?;
    if a >= 0.5 {
        return Err(Error::DegenerateContour { alpha: a });
    }
    Ok(a)
}

/// `β_F = Φ⁻¹(1 − α_m)`.
pub fn iform_radius(alpha_m: Probability) -> Result<f64> {
    Ok(norm_isf(marginal_alpha(alpha_m)?))
}

/// `β_S` with `χ²ₙ(β_S²) = 1 − α_t`.
pub fn isorm_radius(alpha_t: Probability, n: DegreesOfFreedom) -> Result<f64> {
    open_alpha(alpha_t)?;
    Ok(chi2_isf(n, alpha_t)?.sqrt())
}

/// Marginal exceedance probability of the outermost point of an ISORM
/// sphere, `1 − Φ(β_S)`.
pub fn isorm_marginal_alpha(alpha_t: Probability, n: DegreesOfFreedom) -> Result<Probability> {
    Probability::new(norm_sf(isorm_radius(alpha_t, n)?))
}

/// Probability of falling outside the IFORM sphere, `1 − χ²ₙ(β_F²)`.
pub fn iform_total_alpha(alpha_m: Probability, n: DegreesOfFreedom) -> Result<Probability> {
    let beta = iform_radius(alpha_m)?;
    chi2_sf(n, beta * beta)
}
