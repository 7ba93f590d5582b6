use super::{AxisLabel, JointModel, Support};
use crate::error::{Error, Result};
use crate::numeric;
use crate::stats::{norm_cdf, norm_isf, norm_pdf, norm_ppf, norm_sf};

/// Equal-weight sum of two independent bivariate standard normals centred at
/// `(a, a)` and `(−a, −a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalMixturePair {
    a: f64,
    support: Support,
}

impl NormalMixturePair {
    pub fn new(a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidParameter { name: "a", value: a, reason: "must be finite" });
        }
        let r = a.abs() + 10.0;
        Ok(Self { a, support: Support { x1: (-r, r), x2: (-r, r) } })
    }

    pub fn offset(&self) -> f64 {
        self.a
    }

    /// Weight of the `+a` component given the other coordinate, from the
    /// ratio `φ(x + a)/φ(x − a) = exp(−2ax)`.
    fn upper_weight(&self, given: f64) -> f64 {
        1.0 / (1.0 + (-2.0 * self.a * given).exp())
    }
}

impl JointModel for NormalMixturePair {
    fn labels(&self) -> [AxisLabel; 2] {
        [AxisLabel::new("x1", "-"), AxisLabel::new("x2", "-")]
    }

    fn support(&self) -> Support {
        self.support
    }

    fn pdf(&self, x: [f64; 2]) -> f64 {
        let a = self.a;
        0.5 * (norm_pdf(x[0] - a) * norm_pdf(x[1] - a) + norm_pdf(x[0] + a) * norm_pdf(x[1] + a))
    }

    fn marginal_pdf(&self, _axis: usize, x: f64) -> f64 {
        0.5 * (norm_pdf(x - self.a) + norm_pdf(x + self.a))
    }

    fn marginal_cdf(&self, _axis: usize, x: f64) -> f64 {
        0.5 * (norm_cdf(x - self.a) + norm_cdf(x + self.a))
    }

    fn marginal_sf(&self, _axis: usize, x: f64) -> f64 {
        0.5 * (norm_sf(x - self.a) + norm_sf(x + self.a))
    }

    fn conditional_cdf(&self, _axis: usize, x: f64, given: f64) -> f64 {
        let w = self.upper_weight(given);
        w * norm_cdf(x - self.a) + (1.0 - w) * norm_cdf(x + self.a)
    }

    fn conditional_sf(&self, _axis: usize, x: f64, given: f64) -> f64 {
        let w = self.upper_weight(given);
        w * norm_sf(x - self.a) + (1.0 - w) * norm_sf(x + self.a)
    }

    fn marginal_ppf(&self, _axis: usize, p: f64) -> Result<f64> {
        self.weighted_ppf(0.5, p)
    }

    fn marginal_isf(&self, _axis: usize, q: f64) -> Result<f64> {
        self.weighted_isf(0.5, q)
    }

    fn conditional_ppf(&self, _axis: usize, p: f64, given: f64) -> Result<f64> {
        self.weighted_ppf(self.upper_weight(given), p)
    }

    fn conditional_isf(&self, _axis: usize, q: f64, given: f64) -> Result<f64> {
        self.weighted_isf(self.upper_weight(given), q)
    }
}

impl NormalMixturePair {
        fn weighted_ppf(&self, w: f64, p: f64) -> Result<f64> {
        let a = self.a;
        let z = norm_ppf(p);
        let target = p.ln();
        bracketed(
            |x| (w * norm_cdf(x - a) + (1.0 - w) * norm_cdf(x + a)).max(1e-300).ln() - target,
            z - a.abs() - 0.5,
            z + a.abs() + 0.5,
        )
    }

    fn weighted_isf(&self, w: f64, q: f64) -> Result<f64> {
        let a = self.a;
        let z = norm_isf(q);
        let target = q.ln();
        bracketed(
            |x| target - (w * norm_sf(x - a) + (1.0 - w) * norm_sf(x + a)).max(1e-300).ln(),
            z - a.abs() - 0.5,
            z + a.abs() + 0.5,
        )
    }
}

fn bracketed(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    // The component quantiles bracket the root; the margin absorbs rounding
    // when one weight is numerically 1.
    numeric::brent(f, lo, hi, 1e-13 * lo.abs().max(hi.abs()).max(1.0))
}
