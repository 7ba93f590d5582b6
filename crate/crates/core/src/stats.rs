//! Special functions: standard normal, chi-squared with integer degrees of
//! freedom, and the zero-order modified Bessel function.
//!
//! Two layers are exposed. The checked functions (`std_normal_cdf`,
//! `chi2_quantile`, ...) validate their arguments and return typed results.
//! The raw `norm_*` helpers skip validation and are what the hot paths in
//! sampling and contour construction call.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::InvalidProbability(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn complement(self) -> Self {
        Self(1.0 - self.0)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

impl std::fmt::Display for Probability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Number of variables (degrees of freedom of the chi-squared radius law).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DegreesOfFreedom(u32);

impl DegreesOfFreedom {
    pub fn new(n: u32) -> Result<Self> {
        if n >= 1 {
            Ok(Self(n))
        } else {
            Err(Error::InvalidParameter {
                name: "n",
                value: n as f64,
                reason: "degrees of freedom must be >= 1",
            })
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Φ(x), accurate to a few ulps in both tails via `erfc`.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// 1 − Φ(x) without cancellation.
pub fn norm_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

// Acklam's rational approximation, relative error below 1.2e-9; used only
// as the starting point for Halley refinement.
fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Lower-tail quantile for `p <= 0.5`, refined on the lower tail so the
/// relative error in `p` stays near machine precision.
fn lower_tail_quantile(p: f64) -> f64 {
    let mut x = acklam(p);
    for _ in 0..4 {
        let e = norm_cdf(x) - p;
        let u = e / norm_pdf(x);
        let step = u / (1.0 + 0.5 * x * u);
        x -= step;
        if step.abs() <= 1e-15 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Φ⁻¹(p). Returns ±∞ at the end points and NaN outside `[0, 1]`.
pub fn norm_ppf(p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    if p <= 0.5 {
        lower_tail_quantile(p)
    } else {
        -lower_tail_quantile(1.0 - p)
    }
}

/// Inverse survival function: the `x` with `1 − Φ(x) = q`.
pub fn norm_isf(q: f64) -> f64 {
    -norm_ppf(q)
}

/// Checked Φ(x).
pub fn std_normal_cdf(x: f64) -> Result<Probability> {
    if !x.is_finite() {
        return Err(Error::NonFinite("std_normal_cdf"));
    }
    Ok(Probability(norm_cdf(x)))
}

/// Checked Φ⁻¹(p) for `0 < p < 1`.
pub fn std_normal_quantile(p: Probability) -> Result<f64> {
    let p = p.value();
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::Domain(format!(
            "normal quantile is infinite at p = {p}"
        )));
    }
    Ok(norm_ppf(p))
}

/// Regularised lower and upper incomplete gamma functions `(P(a, x), Q(a, x))`.
///
/// Series expansion below `x < a + 1`, Lentz continued fraction above.
pub fn regularized_gamma(a: f64, x: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 1.0);
    }
    let log_prefactor = a * x.ln() - x - libm::lgamma(a);
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..1000 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        let p = sum * log_prefactor.exp();
        (p, 1.0 - p)
    } else {
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..1000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        let q = log_prefactor.exp() * h;
        (1.0 - q, q)
    }
}

fn check_chi2_arg(x: f64) -> Result<()> {
    if x.is_nan() {
        return Err(Error::NonFinite("chi2"));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!("chi-squared argument {x} < 0")));
    }
    Ok(())
}

/// Chi-squared CDF on `n` degrees of freedom.
pub fn chi2_cdf(n: DegreesOfFreedom, x: f64) -> Result<Probability> {
    check_chi2_arg(x)?;
    if x.is_infinite() {
        return Ok(Probability(1.0));
    }
    Ok(Probability(regularized_gamma(0.5 * n.get() as f64, 0.5 * x).0))
}

/// Chi-squared survival function `1 − χ²ₙ(x)` without cancellation.
pub fn chi2_sf(n: DegreesOfFreedom, x: f64) -> Result<Probability> {
    check_chi2_arg(x)?;
    if x.is_infinite() {
        return Ok(Probability(0.0));
    }
    Ok(Probability(regularized_gamma(0.5 * n.get() as f64, 0.5 * x).1))
}

/// Chi-squared quantile for `0 <= p < 1`.
pub fn chi2_quantile(n: DegreesOfFreedom, p: Probability) -> Result<f64> {
    let pv = p.value();
    if pv >= 1.0 {
        return Err(Error::Domain(
            "chi-squared quantile is infinite at p = 1".into(),
        ));
    }
    if pv == 0.0 {
        return Ok(0.0);
    }
    if pv > 0.5 {
        return chi2_isf(n, Probability(1.0 - pv));
    }
    let a = 0.5 * n.get() as f64;
    // Solve in (ln t, ln P) so tiny lower-tail probabilities keep relative
    // accuracy in both the argument and the probability.
    let target = pv.ln();
    let log_half = numeric::solve_monotone(
        |s| regularized_gamma(a, s.exp()).0.ln() - target,
        a.ln() - 1.0,
        (a + 1.0).ln(),
        -700.0,
        10.0,
        1e-15,
    )?;
    Ok(2.0 * log_half.exp())
}

/// Inverse survival function: the `x` with `1 − χ²ₙ(x) = q`, for `0 < q <= 1`.
pub fn chi2_isf(n: DegreesOfFreedom, q: Probability) -> Result<f64> {
    let qv = q.value();
    if qv <= 0.0 {
        return Err(Error::Domain(
            "chi-squared quantile is infinite at exceedance 0".into(),
        ));
    }
    if qv == 1.0 {
        return Ok(0.0);
    }
    let a = 0.5 * n.get() as f64;
    if n.get() == 2 {
        return Ok(-2.0 * qv.ln());
    }
    let target = qv.ln();
    let half = numeric::solve_monotone(
        |t| regularized_gamma(a, t).1.ln() - target,
        a,
        a - target + 1.0,
        1e-300,
        1e5,
        1e-15,
    )?;
    Ok(2.0 * half)
}

/// `ln I₀(κ)` for `κ >= 0`.
///
/// Power series up to `κ = 30`, asymptotic expansion beyond.
pub fn log_bessel_i0(kappa: f64) -> Result<f64> {
    if kappa.is_nan() {
        return Err(Error::NonFinite("log_bessel_i0"));
    }
    if kappa < 0.0 {
        return Err(Error::Domain(format!("Bessel I0 argument {kappa} < 0")));
    }
    Ok(log_i0_unchecked(kappa))
}

pub(crate) fn log_i0_unchecked(kappa: f64) -> f64 {
    if kappa <= 30.0 {
        let q = 0.25 * kappa * kappa;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= q / (k * k);
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
        }
        sum.ln()
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..40 {
            let kf = k as f64;
            let next = term * (2.0 * kf - 1.0).powi(2) / (8.0 * kappa * kf);
            if next >= term {
                break;
            }
            term = next;
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
        }
        kappa - 0.5 * (2.0 * PI * kappa).ln() + sum.ln()
    }
}

/// Ratios `I_j(κ) / I₀(κ)` for `j = 1..=count`, by Miller's backward
/// recurrence on `I_j / I_{j-1}`.
pub fn bessel_i_ratios(kappa: f64, count: usize) -> Vec<f64> {
    if kappa == 0.0 {
        return vec![0.0; count];
    }
    let start = count + 40 + (2.0 * kappa) as usize;
    let mut ratio = 0.0;
    let mut steps = vec![0.0; count + 1];
    for j in (1..=start).rev() {
        ratio = 1.0 / (2.0 * j as f64 / kappa + ratio);
        if j <= count {
            steps[j] = ratio;
        }
    }
    let mut out = Vec::with_capacity(count);
    let mut acc = 1.0;
    for s in steps.iter().skip(1) {
        acc *= s;
        out.push(acc);
    }
    out
}
