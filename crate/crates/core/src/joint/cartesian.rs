use std::f64::consts::TAU;

use super::{invert_lower, invert_upper, line_quad, AxisLabel, Hierarchical, JointModel, Support};
use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::numeric::integrate_with_points;

/// A polar `(θ, h)` model seen in Cartesian components
/// `x = h·cos θ`, `y = h·sin θ`, with density `f(θ, h) / h`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartesianDirectional {
    base: Hierarchical,
    radius: f64,
    h_min: f64,
    cut: f64,
    modes: Vec<f64>,
}

impl CartesianDirectional {
    pub fn new(base: Hierarchical) -> Result<Self> {
        if base.circular_axis() != Some(0) {
            return Err(Error::Config(
                "the Cartesian wrapper needs a model whose first axis is a direction".into(),
            ));
        }
        let s = base.support();
        let modes = match base.first() {
            Distribution::Mixture(m) => m.components().iter().filter_map(|(_, d)| d.mode()).collect(),
            d => d.mode().into_iter().collect(),
        };
        Ok(Self { radius: s.x2.1, h_min: s.x2.0.max(0.0), cut: s.x1.0, base, modes })
    }

    pub fn base(&self) -> &Hierarchical {
        &self.base
    }

    fn wrap(&self, theta: f64) -> f64 {
        self.cut + (theta - self.cut).rem_euclid(TAU)
    }

    fn direction(axis: usize, theta: f64) -> f64 {
        if axis == 0 {
            theta.cos()
        } else {
            theta.sin()
        }
    }

    /// Angles in the cut window where the projection coefficient vanishes or
    /// where `|x / c(θ)|` meets the lower end of the radial support.
    fn angle_breaks(&self, axis: usize, x: f64) -> Vec<f64> {
        let base_angle = |c: f64| if axis == 0 { c.acos() } else { c.asin() };
        let mut pts: Vec<f64> = self.modes.clone();
        let zero = if axis == 0 { 0.5 * std::f64::consts::PI } else { 0.0 };
        pts.extend([zero, zero + std::f64::consts::PI]);
        if self.h_min > 0.0 && x.abs() < self.h_min {
            let r = x / self.h_min;
            let t = base_angle(r);
            if axis == 0 {
                pts.extend([t, -t]);
            } else {
                pts.extend([t, std::f64::consts::PI - t]);
            }
        }
        let lo = self.cut;
        let mut out: Vec<f64> = pts.into_iter().map(|t| self.wrap(t)).filter(|t| *t > lo).collect();
        out.retain(|t| *t < lo + TAU);
        out
    }

    /// `∫ f_Θ(θ) · g(H | θ, c(θ)) dθ` over the full circle.
    fn over_angles(&self, axis: usize, x: f64, g: impl Fn(&Distribution, f64) -> f64) -> f64 {
        let theta = self.base.first();
        let pts = self.angle_breaks(axis, x);
        integrate_with_points(
            |t| {
                let w = theta.pdf(t);
                if w == 0.0 {
                    return 0.0;
                }
                self.base.conditional_at(t).map_or(0.0, |d| w * g(&d, Self::direction(axis, t)))
            },
            self.cut,
            self.cut + TAU,
            &pts,
            line_quad(),
        )
        .map(|e| e.value)
        .unwrap_or(f64::NAN)
    }

    fn state(axis: usize, x: f64, given: f64) -> [f64; 2] {
        if axis == 0 {
            [x, given]
        } else {
            [given, x]
        }
    }

    fn line_breaks(&self, given: f64) -> Vec<f64> {
        let mut pts = vec![0.0];
        if given.abs() < self.h_min {
            let t = (self.h_min * self.h_min - given * given).sqrt();
            pts.extend([-t, t]);
        }
        pts
    }

    /// `∫_a^b f(state(axis, t, given)) dt`.
    fn line(&self, axis: usize, given: f64, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let pts: Vec<f64> =
            self.line_breaks(given).into_iter().filter(|p| *p > a && *p < b).collect();
        integrate_with_points(|t| self.pdf(Self::state(axis, t, given)), a, b, &pts, line_quad())
            .map(|e| e.value.max(0.0))
            .unwrap_or(f64::NAN)
    }
}

impl JointModel for CartesianDirectional {
    fn labels(&self) -> [AxisLabel; 2] {
        let h = &self.base.labels()[1];
        [
            AxisLabel::new(&format!("{}_x", h.name), &h.unit),
            AxisLabel::new(&format!("{}_y", h.name), &h.unit),
        ]
    }

    fn support(&self) -> Support {
        let r = self.radius;
        Support { x1: (-r, r), x2: (-r, r) }
    }

    fn pdf(&self, x: [f64; 2]) -> f64 {
        let h = x[0].hypot(x[1]);
        if h <= self.h_min || h == 0.0 || h > self.radius {
            return 0.0;
        }
        let theta = self.wrap(x[1].atan2(x[0]));
        self.base.pdf([theta, h]) / h
    }

    // The polar form f(x/c)/|c| degenerates at x = 0, so integrate along the line.
    fn marginal_pdf(&self, axis: usize, x: f64) -> f64 {
        let r = self.radius;
        self.line(1 - axis, x, -r, r)
    }

    fn marginal_cdf(&self, axis: usize, x: f64) -> f64 {
        self.over_angles(axis, x, |d, c| {
            if c > 0.0 {
                d.cdf(x / c)
            } else if c < 0.0 {
                d.sf(x / c)
            } else if x >= 0.0 {
                1.0
            } else {
                0.0
            }
        })
        .clamp(0.0, 1.0)
    }

    fn marginal_sf(&self, axis: usize, x: f64) -> f64 {
        self.over_angles(axis, x, |d, c| {
            if c > 0.0 {
                d.sf(x / c)
            } else if c < 0.0 {
                d.cdf(x / c)
            } else if x < 0.0 {
                1.0
            } else {
                0.0
            }
        })
        .clamp(0.0, 1.0)
    }

    fn conditional_cdf(&self, axis: usize, x: f64, given: f64) -> f64 {
        let r = self.radius;
        let x = x.clamp(-r, r);
        let part = self.line(axis, given, -r, x);
        part / (part + self.line(axis, given, x, r))
    }

    fn conditional_sf(&self, axis: usize, x: f64, given: f64) -> f64 {
        let r = self.radius;
        let x = x.clamp(-r, r);
        let rest = self.line(axis, given, x, r);
        rest / (self.line(axis, given, -r, x) + rest)
    }

    fn conditional_ppf(&self, axis: usize, p: f64, given: f64) -> Result<f64> {
        let r = self.radius;
        let total = self.line(axis, given, -r, r);
        invert_lower(|x| self.line(axis, given, -r, x) / total, p, (-r, r))
    }

    fn conditional_isf(&self, axis: usize, q: f64, given: f64) -> Result<f64> {
        let r = self.radius;
        let total = self.line(axis, given, -r, r);
        invert_upper(|x| self.line(axis, given, x, r) / total, q, (-r, r))
    }
}
