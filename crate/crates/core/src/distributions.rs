//! Univariate families used as marginals and conditionals.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::numeric;
use crate::stats::{self, norm_cdf, norm_pdf, norm_ppf, norm_sf, Probability};

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { name, value, reason: "must be finite and > 0" })
    }
}

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { name, value, reason: "must be finite" })
    }
}

fn open_unit(p: Probability) -> Result<f64> {
    let v = p.value();
    if v <= 0.0 || v >= 1.0 {
        Err(Error::Domain(format!("quantile needs 0 < p < 1, got {v}")))
    } else {
        Ok(v)
    }
}

/// Three-parameter Weibull with scale `λ`, shape `k` and location `γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weibull3 {
    scale: f64,
    shape: f64,
    location: f64,
}

impl Weibull3 {
    pub fn new(scale: f64, shape: f64, location: f64) -> Result<Self> {
        Ok(Self {
            scale: positive("scale", scale)?,
            shape: positive("shape", shape)?,
            location: finite("location", location)?,
        })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
    pub fn shape(&self) -> f64 {
        self.shape
    }
    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < self.location {
            return 0.0;
        }
        let z = (x - self.location) / self.scale;
        if z == 0.0 {
            return match self.shape {
                k if k < 1.0 => f64::INFINITY,
                k if k == 1.0 => 1.0 / self.scale,
                _ => 0.0,
            };
        }
        let zk = z.powf(self.shape);
        self.shape / self.scale * zk / z * (-zk).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.location {
            return 0.0;
        }
        -(-((x - self.location) / self.scale).powf(self.shape)).exp_m1()
    }

    pub fn sf(&self, x: f64) -> f64 {
        if x <= self.location {
            return 1.0;
        }
        (-((x - self.location) / self.scale).powf(self.shape)).exp()
    }

    pub fn ppf(&self, p: f64) -> f64 {
        self.location + self.scale * (-(-p).ln_1p()).powf(1.0 / self.shape)
    }

    pub fn isf(&self, q: f64) -> f64 {
        self.location + self.scale * (-q.ln()).powf(1.0 / self.shape)
    }
}

/// Log-normal: `ln X ~ N(mu, sigma²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogNormal {
    mu: f64,
    sigma: f64,
}

impl LogNormal {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        Ok(Self { mu: finite("mu", mu)?, sigma: positive("sigma", sigma)? })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        norm_pdf((x.ln() - self.mu) / self.sigma) / (x * self.sigma)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        norm_cdf((x.ln() - self.mu) / self.sigma)
    }

    pub fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        norm_sf((x.ln() - self.mu) / self.sigma)
    }

    pub fn ppf(&self, p: f64) -> f64 {
        (self.mu + self.sigma * norm_ppf(p)).exp()
    }

    pub fn isf(&self, q: f64) -> f64 {
        (self.mu - self.sigma * norm_ppf(q)).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normal {
    mean: f64,
    std: f64,
}

impl Normal {
    pub fn new(mean: f64, std: f64) -> Result<Self> {
        Ok(Self { mean: finite("mean", mean)?, std: positive("std", std)? })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }
    pub fn std(&self) -> f64 {
        self.std
    }

    pub fn pdf(&self, x: f64) -> f64 {
        norm_pdf((x - self.mean) / self.std) / self.std
    }
    pub fn cdf(&self, x: f64) -> f64 {
        norm_cdf((x - self.mean) / self.std)
    }
    pub fn sf(&self, x: f64) -> f64 {
        norm_sf((x - self.mean) / self.std)
    }
    pub fn ppf(&self, p: f64) -> f64 {
        self.mean + self.std * norm_ppf(p)
    }
    pub fn isf(&self, q: f64) -> f64 {
        self.mean - self.std * norm_ppf(q)
    }
}

/// Von Mises distribution on the circle.
///
/// The density is periodic. The CDF is measured from a cut angle: it is 0 at
/// `cut` and reaches 1 at `cut + 2π`. Angles outside that window are clamped.
#[derive(Debug, Clone, PartialEq)]
pub struct VonMises {
    mu: f64,
    kappa: f64,
    cut: f64,
    log_norm: f64,
    // I_j(κ)/I_0(κ) for j >= 1, truncated once negligible.
    ratios: Vec<f64>,
}

impl VonMises {
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        Self::with_cut(mu, kappa, 0.0)
    }

    pub fn with_cut(mu: f64, kappa: f64, cut: f64) -> Result<Self> {
        let mu = finite("mu", mu)?.rem_euclid(TAU);
        let cut = finite("cut", cut)?;
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                value: kappa,
                reason: "must be finite and >= 0",
            });
        }
        let mut ratios = stats::bessel_i_ratios(kappa, 64 + (12.0 * kappa.sqrt()) as usize * 2);
        let keep = ratios.iter().position(|r| *r < 1e-18).unwrap_or(ratios.len());
        ratios.truncate(keep);
        Ok(Self { mu, kappa, cut, log_norm: TAU.ln() + stats::log_i0_unchecked(kappa), ratios })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn cut(&self) -> f64 {
        self.cut
    }

    pub fn pdf(&self, theta: f64) -> f64 {
        (self.kappa * (theta - self.mu).cos() - self.log_norm).exp()
    }

    pub fn cdf(&self, theta: f64) -> f64 {
        if theta <= self.cut {
            return 0.0;
        }
        if theta >= self.cut + TAU {
            return 1.0;
        }
        let mut acc = (theta - self.cut) / TAU;
        let (a, b) = (theta - self.mu, self.cut - self.mu);
        for (i, r) in self.ratios.iter().enumerate() {
            let j = (i + 1) as f64;
            acc += r / (j * PI) * ((j * a).sin() - (j * b).sin());
        }
        acc.clamp(0.0, 1.0)
    }

    pub fn sf(&self, theta: f64) -> f64 {
        1.0 - self.cdf(theta)
    }

    pub fn ppf(&self, p: f64) -> f64 {
        circular_ppf(|t| self.cdf(t), |t| self.pdf(t), self.cut, p)
    }
}

// Quantile of a circular CDF on [cut, cut + 2π] by safeguarded Newton.
fn circular_ppf(cdf: impl Fn(f64) -> f64, pdf: impl Fn(f64) -> f64, cut: f64, p: f64) -> f64 {
    if p <= 0.0 {
        return cut;
    }
    if p >= 1.0 {
        return cut + TAU;
    }
    let (mut lo, mut hi) = (cut, cut + TAU);
    let mut x = cut + p * TAU;
    for _ in 0..200 {
        let f = cdf(x) - p;
        if f == 0.0 {
            return x;
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = pdf(x);
        let mut next = x - f / d;
        if !(next > lo && next < hi) || d <= 0.0 {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-14 * (1.0 + x.abs()) || hi - lo <= 1e-14 {
            return next;
        }
        x = next;
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform {
    lo: f64,
    hi: f64,
}

impl Uniform {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let (lo, hi) = (finite("lo", lo)?, finite("hi", hi)?);
        if hi <= lo {
            return Err(Error::InvalidParameter { name: "hi", value: hi, reason: "must exceed lo" });
        }
        Ok(Self { lo, hi })
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
    pub fn pdf(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi {
            0.0
        } else {
            1.0 / (self.hi - self.lo)
        }
    }
    pub fn cdf(&self, x: f64) -> f64 {
        ((x - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0)
    }
    pub fn sf(&self, x: f64) -> f64 {
        ((self.hi - x) / (self.hi - self.lo)).clamp(0.0, 1.0)
    }
    pub fn ppf(&self, p: f64) -> f64 {
        self.lo + p * (self.hi - self.lo)
    }
    pub fn isf(&self, q: f64) -> f64 {
        self.hi - q * (self.hi - self.lo)
    }
}

/// Finite mixture with positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixture {
    components: Vec<(f64, Distribution)>,
}

impl Mixture {
    pub fn new(components: Vec<(f64, Distribution)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("mixture needs at least one component".into()));
        }
        let mut total = 0.0;
        for (w, _) in &components {
            if !(*w > 0.0 && *w <= 1.0) {
                return Err(Error::InvalidParameter {
                    name: "weight",
                    value: *w,
                    reason: "mixture weights must lie in (0, 1]",
                });
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "weights",
                value: total,
                reason: "mixture weights must sum to 1",
            });
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(f64, Distribution)] {
        &self.components
    }

    fn is_circular(&self) -> bool {
        self.components.iter().all(|(_, d)| matches!(d, Distribution::VonMises(_)))
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.components.iter().map(|(w, d)| w * d.pdf(x)).sum()
    }
    pub fn cdf(&self, x: f64) -> f64 {
        self.components.iter().map(|(w, d)| w * d.cdf(x)).sum::<f64>().clamp(0.0, 1.0)
    }
    pub fn sf(&self, x: f64) -> f64 {
        self.components.iter().map(|(w, d)| w * d.sf(x)).sum::<f64>().clamp(0.0, 1.0)
    }

    pub fn ppf(&self, p: f64) -> f64 {
        if self.is_circular() {
            let cut = self.support().0;
            return circular_ppf(|t| self.cdf(t), |t| self.pdf(t), cut, p);
        }
        let (lo, hi) = self.bracket(|d| d.ppf(p));
        self.invert(|x| self.cdf(x) - p, lo, hi)
    }

    pub fn isf(&self, q: f64) -> f64 {
        if self.is_circular() {
            return self.ppf(1.0 - q);
        }
        let (lo, hi) = self.bracket(|d| d.isf(q));
        self.invert(|x| q - self.sf(x), lo, hi)
    }

    fn bracket(&self, each: impl Fn(&Distribution) -> f64) -> (f64, f64) {
        self.components.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, d)| {
            let x = each(d);
            (lo.min(x), hi.max(x))
        })
    }

    fn invert(&self, f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            return lo;
        }
        let tol = 1e-14 * lo.abs().max(hi.abs()).max(1.0);
        numeric::brent(f, lo, hi, tol).unwrap_or(0.5 * (lo + hi))
    }

    pub fn support(&self) -> (f64, f64) {
        self.components.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, d)| {
            let (a, b) = d.support();
            (lo.min(a), hi.max(b))
        })
    }
}

/// Any of the supported univariate families.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    Weibull3(Weibull3),
    LogNormal(LogNormal),
    Normal(Normal),
    VonMises(VonMises),
    Uniform(Uniform),
    Mixture(Mixture),
}

macro_rules! dispatch {
    ($self:ident, $d:ident => $e:expr) => {
        match $self {
            Distribution::Weibull3($d) => $e,
            Distribution::LogNormal($d) => $e,
            Distribution::Normal($d) => $e,
            Distribution::VonMises($d) => $e,
            Distribution::Uniform($d) => $e,
            Distribution::Mixture($d) => $e,
        }
    };
}

impl Distribution {
    /// Density; zero outside the support.
    pub fn pdf(&self, x: f64) -> f64 {
        dispatch!(self, d => d.pdf(x))
    }

    pub fn cdf(&self, x: f64) -> f64 {
        dispatch!(self, d => d.cdf(x))
    }

    pub fn sf(&self, x: f64) -> f64 {
        dispatch!(self, d => d.sf(x))
    }

    /// Unchecked quantile; `p` must lie in `[0, 1]`.
    pub fn ppf(&self, p: f64) -> f64 {
        dispatch!(self, d => d.ppf(p))
    }

    /// Unchecked inverse survival function, accurate for small `q`.
    pub fn isf(&self, q: f64) -> f64 {
        match self {
            Distribution::Weibull3(d) => d.isf(q),
            Distribution::LogNormal(d) => d.isf(q),
            Distribution::Normal(d) => d.isf(q),
            Distribution::VonMises(d) => d.ppf(1.0 - q),
            Distribution::Uniform(d) => d.isf(q),
            Distribution::Mixture(d) => d.isf(q),
        }
    }

    /// Checked CDF.
    pub fn cdf_checked(&self, x: f64) -> Result<Probability> {
        if x.is_nan() {
            return Err(Error::NonFinite("cdf"));
        }
        Probability::new(self.cdf(x))
    }

    /// Checked quantile for `0 < p < 1`.
    pub fn quantile(&self, p: Probability) -> Result<f64> {
        let v = open_unit(p)?;
        // Use the upper-tail form where it avoids cancellation.
        Ok(if v > 0.5 { self.isf(1.0 - v) } else { self.ppf(v) })
    }

    /// Quantile at exceedance probability `alpha`, i.e. `F(x) = 1 − α`.
    pub fn exceedance_quantile(&self, alpha: Probability) -> Result<f64> {
        open_unit(alpha)?;
        Ok(self.isf(alpha.value()))
    }

    /// Open support `(lo, hi)`; infinite ends are reported as such.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Distribution::Weibull3(d) => (d.location, f64::INFINITY),
            Distribution::LogNormal(_) => (0.0, f64::INFINITY),
            Distribution::Normal(_) => (f64::NEG_INFINITY, f64::INFINITY),
            Distribution::VonMises(d) => (d.cut, d.cut + TAU),
            Distribution::Uniform(d) => (d.lo, d.hi),
            Distribution::Mixture(d) => d.support(),
        }
    }

    /// Finite interval holding all but a negligible (< 1e-12) share of mass.
    pub fn truncation(&self) -> (f64, f64) {
        match self {
            Distribution::Weibull3(d) => {
                (d.location, d.location + d.scale * 1e16f64.ln().powf(1.0 / d.shape))
            }
            Distribution::LogNormal(d) => {
                ((d.mu - 10.0 * d.sigma).exp(), (d.mu + 10.0 * d.sigma).exp())
            }
            Distribution::Normal(d) => (d.mean - 10.0 * d.std, d.mean + 10.0 * d.std),
            Distribution::VonMises(d) => (d.cut, d.cut + TAU),
            Distribution::Uniform(d) => (d.lo, d.hi),
            Distribution::Mixture(m) => m.components.iter().fold(
                (f64::INFINITY, f64::NEG_INFINITY),
                |(lo, hi), (_, d)| {
                    let (a, b) = d.truncation();
                    (lo.min(a), hi.max(b))
                },
            ),
        }
    }

    /// Location of the density maximum for unimodal families.
    pub fn mode(&self) -> Option<f64> {
        match self {
            Distribution::Weibull3(d) if d.shape >= 1.0 => {
                Some(d.location + d.scale * ((d.shape - 1.0) / d.shape).powf(1.0 / d.shape))
            }
            Distribution::Weibull3(d) => Some(d.location),
            Distribution::LogNormal(d) => Some((d.mu - d.sigma * d.sigma).exp()),
            Distribution::Normal(d) => Some(d.mean),
            Distribution::VonMises(d) if d.kappa > 0.0 => Some(d.mu),
            Distribution::Mixture(m) if m.components.len() == 1 => m.components[0].1.mode(),
            _ => None,
        }
    }

    pub fn is_circular(&self) -> bool {
        match self {
            Distribution::VonMises(_) => true,
            Distribution::Mixture(m) => m.is_circular(),
            _ => false,
        }
    }
}

impl From<Weibull3> for Distribution {
    fn from(d: Weibull3) -> Self {
        Distribution::Weibull3(d)
    }
}
impl From<LogNormal> for Distribution {
    fn from(d: LogNormal) -> Self {
        Distribution::LogNormal(d)
    }
}
impl From<Normal> for Distribution {
    fn from(d: Normal) -> Self {
        Distribution::Normal(d)
    }
}
impl From<VonMises> for Distribution {
    fn from(d: VonMises) -> Self {
        Distribution::VonMises(d)
    }
}
impl From<Uniform> for Distribution {
    fn from(d: Uniform) -> Self {
        Distribution::Uniform(d)
    }
}
impl From<Mixture> for Distribution {
    fn from(d: Mixture) -> Self {
        Distribution::Mixture(d)
    }
}
