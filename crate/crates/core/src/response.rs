//! Deterministic structural responses, their maxima along contours, and the
//! long-term response distribution integrated over all sea states.
//!
//! Every response family here factors as `r = h · q(s)`: a wave height `h`
//! times a profile `q` of the other variable (peak period for the sea-state
//! families, direction for the ellipse). The long-term distribution then
//! reduces to a one-dimensional integral over the conditioning variable.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contour::geometry::Point;
use crate::contour::{Contour, ExceedanceKind, ExceedanceSpec};
use crate::error::{Error, Result};
use crate::joint::{AxisLabel, JointModel, Model};
use crate::numeric::{brent, golden_max, integrate_with_points, QuadOptions};
use crate::sampling::sample;
use crate::stats::Probability;

mod degrees {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rad: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(rad.to_degrees())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        f64::deserialize(d).map(f64::to_radians)
    }
}

/// A deterministic response `r(state)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ResponseFunction {
    /// `a·h_s / (1 + b·(t_p − t_p0)²)` on `(h_s, t_p)`.
    Sdof { a: f64, b: f64, tp0: f64 },
    /// Sum of two single-degree-of-freedom terms on `(h_s, t_p)`.
    Bimodal { a1: f64, a2: f64, b1: f64, b2: f64, te1: f64, te2: f64 },
    /// `√(a·u² + b·v²)` with `(u, v)` the `(h_x, h_y)` components rotated by
    /// `phi`. Given in degrees in config files and stored in radians.
    DirectionalEllipse {
        a: f64,
        b: f64,
        #[serde(rename = "phi_deg", with = "degrees")]
        phi: f64,
    },
}

/// How a model or contour lays out its two coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// `(h_s, t_p)`.
    SeaState,
    /// `(h_x, h_y)` components of a directional wave height.
    Cartesian,
    /// `(θ, h_s)` with `θ` in radians.
    Polar,
}

impl Frame {
    pub fn of(labels: &[AxisLabel; 2]) -> Option<Self> {
        let (a, b) = (labels[0].name.as_str(), labels[1].name.as_str());
        if a == "hs" && b == "tp" {
            Some(Self::SeaState)
        } else if a.ends_with("_x") && b.ends_with("_y") && a[..a.len() - 2] == b[..b.len() - 2] {
            Some(Self::Cartesian)
        } else if a == "theta" {
            Some(Self::Polar)
        } else {
            None
        }
    }
}

fn describe(labels: &[AxisLabel; 2]) -> String {
    format!("({}, {})", labels[0].name, labels[1].name)
}

impl ResponseFunction {
    pub fn paper_sdof() -> Self {
        Self::Sdof { a: 2.0, b: 0.007, tp0: 30.0 }
    }

    pub fn paper_bimodal() -> Self {
        Self::Bimodal { a1: 4.0, a2: 1.1, b1: 0.1, b2: 0.05, te1: 25.0, te2: 12.5 }
    }

    pub fn paper_ellipse() -> Self {
        Self::DirectionalEllipse { a: 1.4, b: 5.0, phi: 315f64.to_radians() }
    }

    pub fn validate(&self) -> Result<()> {
        let params: Vec<(&'static str, f64)> = match *self {
            Self::Sdof { a, b, tp0 } => vec![("a", a), ("b", b), ("tp0", tp0)],
            Self::Bimodal { a1, a2, b1, b2, te1, te2 } => {
                vec![("a1", a1), ("a2", a2), ("b1", b1), ("b2", b2), ("te1", te1), ("te2", te2)]
            }
            Self::DirectionalEllipse { a, b, phi } => vec![("a", a), ("b", b), ("phi", phi)],
        };
        for (name, v) in params {
            if !v.is_finite() {
                return Err(Error::InvalidParameter { name, value: v, reason: "must be finite" });
            }
            if name.starts_with(['a', 'b']) && v <= 0.0 {
                return Err(Error::InvalidParameter { name, value: v, reason: "must be positive" });
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Sdof { .. } => "sdof",
            Self::Bimodal { .. } => "bimodal",
            Self::DirectionalEllipse { .. } => "directional-ellipse",
        }
    }

    fn is_directional(&self) -> bool {
        matches!(self, Self::DirectionalEllipse { .. })
    }

    /// Response per unit wave height as a function of the profile variable.
    pub fn profile(&self, s: f64) -> f64 {
        match *self {
            Self::Sdof { a, b, tp0 } => a / (1.0 + b * (s - tp0).powi(2)),
            Self::Bimodal { a1, a2, b1, b2, te1, te2 } => {
                a1 / (1.0 + b1 * (s - te1).powi(2)) + a2 / (1.0 + b2 * (s - te2).powi(2))
            }
            Self::DirectionalEllipse { a, b, phi } => {
                let (sn, cs) = (s - phi).sin_cos();
                (a * cs * cs + b * sn * sn).sqrt()
            }
        }
    }

    /// Response in the function's own frame: `(h_s, t_p)` for the sea-state
    /// families, `(h_x, h_y)` for the ellipse.
    pub fn evaluate(&self, x: Point) -> f64 {
        match *self {
            Self::Sdof { .. } | Self::Bimodal { .. } => x[0] * self.profile(x[1]),
            Self::DirectionalEllipse { a, b, phi } => {
                let (s, c) = phi.sin_cos();
                let u = x[0] * c + x[1] * s;
                let v = -x[0] * s + x[1] * c;
                (a * u * u + b * v * v).sqrt()
            }
        }
    }

    /// Checks that states labelled `labels` can be fed to this function.
    pub fn frame_for(&self, labels: &[AxisLabel; 2]) -> Result<Frame> {
        let frame = Frame::of(labels);
        let ok = match frame {
            Some(Frame::SeaState) => !self.is_directional(),
            Some(Frame::Cartesian | Frame::Polar) => self.is_directional(),
            None => false,
        };
        if !ok {
            let expected = if self.is_directional() { "(hs_x, hs_y) or (theta, hs)" } else { "(hs, tp)" };
            return Err(Error::CoordinateMismatch {
                expected: format!("{} response needs {expected}", self.name()),
                got: describe(labels),
            });
        }
        Ok(frame.expect("checked above"))
    }

    /// Response at a state given in `frame` coordinates.
    pub fn evaluate_in(&self, frame: Frame, x: Point) -> f64 {
        match frame {
            Frame::Polar => {
                let (s, c) = x[0].sin_cos();
                self.evaluate([x[1] * c, x[1] * s])
            }
            _ => self.evaluate(x),
        }
    }

    /// Interior local extrema of the sea-state profile, sorted. The profile
    /// is a sum of positive Lorentzian bumps, so extrema lie between the
    /// smallest and largest bump centre and it decays to zero outside.
    fn profile_extrema(&self) -> Vec<f64> {
        let (lo, hi) = match *self {
            Self::Sdof { tp0, .. } => return vec![tp0],
            Self::Bimodal { te1, te2, .. } => (te1.min(te2), te1.max(te2)),
            Self::DirectionalEllipse { .. } => unreachable!("angular profile"),
        };
        if hi - lo < 1e-12 {
            return vec![lo];
        }
        let n = 4000;
        let step = (hi - lo) / n as f64;
        let grid: Vec<f64> = (0..=n).map(|i| lo + step * i as f64).collect();
        let q: Vec<f64> = grid.iter().map(|t| self.profile(*t)).collect();
        let mut out = Vec::new();
        for i in 0..=n {
            let left = if i == 0 { f64::NEG_INFINITY } else { q[i - 1] };
            let right = if i == n { f64::NEG_INFINITY } else { q[i + 1] };
            let is_max = q[i] >= left && q[i] > right;
            let is_min = i > 0 && i < n && q[i] <= left && q[i] < right;
            if is_max || is_min {
                let (a, b) = (grid[i.saturating_sub(1)], grid[(i + 1).min(n)]);
                let sign = if is_max { 1.0 } else { -1.0 };
                out.push(golden_max(|t| sign * self.profile(t), a, b, 1e-12).0);
            }
        }
        out
    }

    /// `{s : q(s) > level}` as disjoint open intervals, for the sea-state
    /// families.
    fn superlevel(&self, extrema: &[f64], level: f64) -> Vec<(f64, f64)> {
        let q = |t: f64| self.profile(t) - level;
        let tol = 1e-12;
        let mut cuts = Vec::new();
        let first = extrema[0];
        if q(first) > 0.0 {
            let mut d = 1.0;
            while q(first - d) > 0.0 {
                d *= 2.0;
            }
            cuts.push(brent(q, first - d, first, tol).unwrap_or(first - d));
        }
        for w in extrema.windows(2) {
            if q(w[0]).signum() != q(w[1]).signum() {
                cuts.push(brent(q, w[0], w[1], tol).unwrap_or(w[0]));
            }
        }
        let last = *extrema.last().unwrap_or(&first);
        if q(last) > 0.0 {
            let mut d = 1.0;
            while q(last + d) > 0.0 {
                d *= 2.0;
            }
            cuts.push(brent(q, last, last + d, tol).unwrap_or(last + d));
        }
        cuts.windows(2)
            .filter(|w| q(0.5 * (w[0] + w[1])) > 0.0)
            .map(|w| (w[0], w[1]))
            .collect()
    }
}

/// Design capacity in response units.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Capacity(f64);

impl Capacity {
    pub fn new(r_cap: f64) -> Result<Self> {
        if !(r_cap.is_finite() && r_cap > 0.0) {
            return Err(Error::InvalidParameter {
                name: "capacity",
                value: r_cap,
                reason: "must be positive and finite",
            });
        }
        Ok(Self(r_cap))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Capacity {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Capacity> for f64 {
    fn from(c: Capacity) -> f64 {
        c.0
    }
}

/// Largest response along a contour and the state where it occurs, in the
/// contour's own coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResponseMax {
    pub response: f64,
    pub state: Point,
}

/// Maximum over all vertices, refined by golden-section search along the two
/// edges that meet at the best vertex.
pub fn max_response_on_contour(f: &ResponseFunction, contour: &Contour) -> Result<ResponseMax> {
    let frame = f.frame_for(&contour.labels)?;
    let r = |x: Point| f.evaluate_in(frame, x);
    let mut best = (f64::NEG_INFINITY, 0, 0);
    for (k, ring) in contour.components.iter().enumerate() {
        for (i, x) in ring.iter().enumerate() {
            let v = r(*x);
            if v > best.0 {
                best = (v, k, i);
            }
        }
    }
    let (_, k, i) = best;
    let ring = &contour.components[k];
    let n = ring.len();
    let centre = ring[i];
    let mut out = ResponseMax { response: best.0, state: centre };
    for other in [ring[(i + n - 1) % n], ring[(i + 1) % n]] {
        let along = |t: f64| [centre[0] + t * (other[0] - centre[0]), centre[1] + t * (other[1] - centre[1])];
        let (t, v) = golden_max(|t| r(along(t)), 0.0, 1.0, 1e-10);
        if v > out.response {
            out = ResponseMax { response: v, state: along(t) };
        }
    }
    Ok(out)
}

fn quad() -> QuadOptions {
    QuadOptions { abs_tol: 1e-16, rel_tol: 1e-9, max_intervals: 4000 }
}

/// Probability of `[a, b]` under a conditional, taken from whichever tail
/// keeps the difference well conditioned.
fn interval_mass(model: &dyn JointModel, a: f64, b: f64, given: f64) -> f64 {
    let (ca, cb) = (model.conditional_cdf(1, a, given), model.conditional_cdf(1, b, given));
    if ca > 0.5 {
        (model.conditional_sf(1, a, given) - model.conditional_sf(1, b, given)).max(0.0)
    } else {
        (cb - ca).max(0.0)
    }
}

fn polar_base(model: &Model) -> &dyn JointModel {
    match model {
        Model::Cartesian(c) => c.base(),
        other => other,
    }
}

/// `P(R > x)` over all sea states.
pub fn long_term_sf(model: &Model, f: &ResponseFunction, x: f64) -> Result<Probability> {
    f.validate()?;
    if !x.is_finite() {
        return Err(Error::NonFinite("response level"));
    }
    if x <= 0.0 {
        return Ok(Probability::new(1.0)?);
    }
    let frame = f.frame_for(&model.labels())?;
    let value = match frame {
        Frame::SeaState => {
            let extrema = f.profile_extrema();
            let peaks: Vec<f64> = extrema.iter().map(|t| f.profile(*t)).collect();
            let qmax = peaks.iter().copied().fold(0.0, f64::max);
            let (h_lo, h_hi) = model.support().x1;
            let start = (x / qmax).max(h_lo);
            if start >= h_hi {
                0.0
            } else {
                // The interval structure of {q > x/h} changes where x/h crosses
                // an extreme value of q.
                let points: Vec<f64> = peaks.iter().map(|q| x / q).filter(|h| *h > start && *h < h_hi).collect();
                integrate_with_points(
                    |h| {
                        let w = model.marginal_pdf(0, h);
                        if w == 0.0 {
                            return 0.0;
                        }
                        let mass: f64 = f
                            .superlevel(&extrema, x / h)
                            .into_iter()
                            .map(|(a, b)| interval_mass(model, a, b, h))
                            .sum();
                        w * mass
                    },
                    start,
                    h_hi,
                    &points,
                    quad(),
                )?
                .value
            }
        }
        Frame::Cartesian | Frame::Polar => {
            let base = polar_base(model);
            let (t_lo, t_hi) = base.support().x1;
            let ResponseFunction::DirectionalEllipse { phi, .. } = *f else { unreachable!() };
            // Profile extremes sit on the ellipse axes.
            let points: Vec<f64> = (0..8)
                .map(|k| phi + 0.5 * PI * (k as f64 - 4.0))
                .map(|t| t_lo + (t - t_lo).rem_euclid(TAU))
                .filter(|t| *t > t_lo && *t < t_hi)
                .collect();
            integrate_with_points(
                |t| {
                    let w = base.marginal_pdf(0, t);
                    if w == 0.0 {
                        0.0
                    } else {
                        w * base.conditional_sf(1, x / f.profile(t), t)
                    }
                },
                t_lo,
                t_hi,
                &points,
                quad(),
            )?
            .value
        }
    };
    Probability::new(value.clamp(0.0, 1.0))
}

/// `P(R <= x)` over all sea states.
pub fn long_term_cdf(model: &Model, f: &ResponseFunction, x: f64) -> Result<Probability> {
    Ok(long_term_sf(model, f, x)?.complement())
}

/// Response level exceeded with probability `spec.alpha()` by a random sea
/// state.
pub fn return_response(model: &Model, f: &ResponseFunction, spec: &ExceedanceSpec) -> Result<f64> {
    spec.require("all sea states", ExceedanceKind::Total)?;
    let ln_a = spec.alpha().value().ln();
    let excess = |r: f64| -> f64 {
        let p = long_term_sf(model, f, r).map(|p| p.value()).unwrap_or(f64::NAN);
        p.max(1e-300).ln() - ln_a
    };
    let mut hi = 1.0;
    let mut lo = 0.0;
    loop {
        let e = excess(hi);
        if e.is_nan() {
            return Err(Error::NoConvergence { what: "return response", detail: format!("sf failed at {hi}") });
        }
        if e < 0.0 {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::NoConvergence {
                what: "return response",
                detail: "no response level reaches the exceedance probability".into(),
            });
        }
    }
    brent(excess, lo, hi, 1e-6)
}

/// Probability that the long-term response exceeds the capacity.
pub fn failure_probability(model: &Model, f: &ResponseFunction, cap: Capacity) -> Result<Probability> {
    long_term_sf(model, f, cap.value())
}

/// Monte Carlo estimate of a probability with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarlo {
    pub probability: f64,
    pub standard_error: f64,
    pub hits: usize,
    pub draws: usize,
}

/// Failure probability by counting exceedances in a model sample.
pub fn failure_probability_mc(
    model: &Model,
    f: &ResponseFunction,
    cap: Capacity,
    draws: usize,
    seed: u64,
) -> Result<MonteCarlo> {
    let frame = f.frame_for(&model.labels())?;
    let s = sample(model, "monte-carlo", draws, seed)?;
    let hits = s.points.par_iter().filter(|x| f.evaluate_in(frame, **x) > cap.value()).count();
    let p = hits as f64 / draws as f64;
    Ok(MonteCarlo { probability: p, standard_error: (p * (1.0 - p) / draws as f64).sqrt(), hits, draws })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::{iform_contour, ContourMeta, Method};
    use crate::joint::{build_paper_model, RosenblattOrder};
    use crate::test_oracle as oracle;

    #[test]
    fn formulas() {
        let s = ResponseFunction::paper_sdof();
        assert_eq!(s.evaluate([7.5, 30.0]), 15.0);
        let b = ResponseFunction::paper_bimodal();
        assert!((b.evaluate([15.2, 17.4]) - 16.57).abs() < 5e-3);
        let round = ResponseFunction::DirectionalEllipse { a: 2.0, b: 2.0, phi: 1.1 };
        for x in [[3.0f64, 4.0], [-1.0, 0.5], [0.0, -2.0]] {
            let want = 2f64.sqrt() * x[0].hypot(x[1]);
            assert!((round.evaluate(x) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn ellipse_is_the_axis_aligned_form_in_rotated_coordinates() {
        let (a, b, phi) = (1.4, 5.0, 315f64.to_radians());
        let f = ResponseFunction::DirectionalEllipse { a, b, phi };
        for x in [[1.0, 2.0], [-3.0, 0.2], [7.0, -7.0], [0.0, 0.0]] {
            let u = x[0] * phi.cos() + x[1] * phi.sin();
            let v = -x[0] * phi.sin() + x[1] * phi.cos();
            let axis_aligned = (a * u * u + b * v * v).sqrt();
            assert!((f.evaluate(x) - axis_aligned).abs() <= 1e-14 * axis_aligned.max(1.0));
            // Positively homogeneous of degree one.
            let s = 2.5;
            assert!((f.evaluate([s * x[0], s * x[1]]) - s * f.evaluate(x)).abs() < 1e-12);
            let polar = [x[1].atan2(x[0]), x[0].hypot(x[1])];
            assert!((f.evaluate_in(Frame::Polar, polar) - f.evaluate(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn nonnegative_responses() {
        for f in [ResponseFunction::paper_sdof(), ResponseFunction::paper_bimodal()] {
            for h in [0.0, 0.5, 12.0] {
                for t in [-5.0, 0.0, 10.0, 60.0] {
                    assert!(f.evaluate([h, t]) >= 0.0);
                }
            }
        }
        let e = ResponseFunction::paper_ellipse();
        assert!(e.evaluate([-4.0, 1.0]) >= 0.0);
    }

    #[test]
    fn bimodal_superlevel_sets() {
        let f = ResponseFunction::paper_bimodal();
        let ext = f.profile_extrema();
        assert_eq!(ext.len(), 3, "{ext:?}");
        let (peak_lo, dip, peak_hi) = (f.profile(ext[0]), f.profile(ext[1]), f.profile(ext[2]));
        assert!(dip < peak_lo && dip < peak_hi);
        // Between the dip and the lower peak the set splits in two.
        let level = 0.5 * (dip + peak_lo.min(peak_hi));
        let iv = f.superlevel(&ext, level);
        assert_eq!(iv.len(), 2);
        for (a, b) in &iv {
            assert!((f.profile(*a) - level).abs() < 1e-10 && (f.profile(*b) - level).abs() < 1e-10);
        }
        assert_eq!(f.superlevel(&ext, 0.5 * dip).len(), 1);
        assert!(f.superlevel(&ext, 1.1 * peak_lo.max(peak_hi)).is_empty());
        let s = ResponseFunction::paper_sdof();
        let iv = s.superlevel(&s.profile_extrema(), 1.0);
        // 2 / (1 + 0.007 d²) = 1  ⇒  d = √(1/0.007).
        let d = (1.0f64 / 0.007).sqrt();
        assert!((iv[0].0 - (30.0 - d)).abs() < 1e-9 && (iv[0].1 - (30.0 + d)).abs() < 1e-9);
    }

    #[test]
    fn frames_are_checked() {
        let tz = build_paper_model("sea-state").unwrap();
        let f = ResponseFunction::paper_sdof();
        assert!(matches!(long_term_sf(&tz, &f, 5.0), Err(Error::CoordinateMismatch { .. })));
        let cart = build_paper_model("directional-cartesian").unwrap();
        assert!(matches!(long_term_sf(&cart, &f, 5.0), Err(Error::CoordinateMismatch { .. })));
        assert!(long_term_sf(&cart, &ResponseFunction::paper_ellipse(), 5.0).is_ok());
        let tp = build_paper_model("sea-state-tp").unwrap();
        assert!(long_term_sf(&tp, &ResponseFunction::paper_ellipse(), 5.0).is_err());
        assert!(Capacity::new(0.0).is_err() && Capacity::new(-1.0).is_err());
    }

    /// `P(R > x)` for the sea-state model written out by hand: crossings of
    /// the profile found by a scan plus bisection, log-normal interval
    /// masses, Simpson over `h_s`.
    fn sf_oracle(f: &ResponseFunction, x: f64) -> f64 {
        let (lambda, k, gamma) = (2.776, 1.471, 0.8888);
        let weibull = |h: f64| {
            let z = (h - gamma) / lambda;
            if z <= 0.0 { 0.0 } else { k / lambda * z.powf(k - 1.0) * (-z.powf(k)).exp() }
        };
        let inner = |h: f64| {
            let level = x / h;
            let mu = 0.1 + 1.489 * h.powf(0.1901) + 1.2796f64.ln();
            let sigma = 0.04 + 0.1748 * (-0.2243 * h).exp();
            let cdf = |t: f64| if t <= 0.0 { 0.0 } else { oracle::normal_cdf((t.ln() - mu) / sigma) };
            let g = |t: f64| f.profile(t) - level;
            let (step, mut t, mut mass) = (0.02, 0.0, 0.0);
            let mut start = if g(0.0) > 0.0 { Some(0.0) } else { None };
            while t < 80.0 {
                let (a, b) = (t, t + step);
                if (g(a) > 0.0) != (g(b) > 0.0) {
                    let root = if g(a) < 0.0 {
                        oracle::bisect(g, a, b, 0.0)
                    } else {
                        oracle::bisect(|t| -g(t), a, b, 0.0)
                    };
                    match start.take() {
                        Some(s0) => mass += cdf(root) - cdf(s0),
                        None => start = Some(root),
                    }
                }
                t = b;
            }
            mass
        };
        // The interval mass grows like a square root from the smallest
        // height that reaches x; substitute h = h0 + u² there.
        let qmax = (0..8000).map(|i| f.profile(i as f64 * 0.01)).fold(0.0, f64::max);
        let h0 = (x / qmax).max(gamma);
        let top = (25.0 - h0).sqrt();
        oracle::simpson(|u| 2.0 * u * weibull(h0 + u * u) * inner(h0 + u * u), 0.0, top, 20_000)
    }

    #[test]
    fn long_term_matches_direct_quadrature() {
        let m = build_paper_model("sea-state-tp").unwrap();
        for f in [ResponseFunction::paper_sdof(), ResponseFunction::paper_bimodal()] {
            for x in [4.0, 8.0, 14.0] {
                let got = long_term_sf(&m, &f, x).unwrap().value();
                let want = sf_oracle(&f, x);
                assert!((got / want - 1.0).abs() < 1e-4, "{} at {x}: {got} vs {want}", f.name());
            }
        }
    }

    #[test]
    fn long_term_limits_and_monotonicity() {
        let m = build_paper_model("sea-state-tp").unwrap();
        let f = ResponseFunction::paper_sdof();
        assert_eq!(long_term_cdf(&m, &f, 0.0).unwrap().value(), 0.0);
        // No sea state in the support reaches this response.
        assert_eq!(long_term_sf(&m, &f, 1e3).unwrap().value(), 0.0);
        let mut prev = 1.0;
        for x in [0.5, 1.0, 3.0, 6.0, 10.0, 14.0] {
            let p = long_term_sf(&m, &f, x).unwrap().value();
            assert!(p < prev);
            prev = p;
        }
        let a = ExceedanceSpec::total(1e-3).unwrap();
        let b = ExceedanceSpec::total(1e-4).unwrap();
        let (ra, rb) = (return_response(&m, &f, &a).unwrap(), return_response(&m, &f, &b).unwrap());
        assert!(rb > ra);
        assert!((long_term_sf(&m, &f, ra).unwrap().value() / 1e-3 - 1.0).abs() < 1e-5);
        assert!(return_response(&m, &f, &ExceedanceSpec::marginal(1e-3).unwrap()).is_err());
    }

    #[test]
    fn isotropic_response_ignores_rotation() {
        let m = build_paper_model("directional-cartesian").unwrap();
        let cap = Capacity::new(6.0).unwrap();
        let p0 = failure_probability(&m, &ResponseFunction::DirectionalEllipse { a: 2.0, b: 2.0, phi: 0.0 }, cap)
            .unwrap()
            .value();
        for phi in [0.7, 2.0, 5.5] {
            let f = ResponseFunction::DirectionalEllipse { a: 2.0, b: 2.0, phi };
            let p = failure_probability(&m, &f, cap).unwrap().value();
            assert!((p / p0 - 1.0).abs() < 1e-8, "{phi}: {p} vs {p0}");
        }
        // Same as the omnidirectional H_s tail at cap / √2.
        let polar = build_paper_model("directional").unwrap();
        let tail = polar.marginal_sf(1, 6.0 / 2f64.sqrt());
        assert!((p0 / tail - 1.0).abs() < 1e-6);
    }

    #[test]
    fn quadrature_agrees_with_monte_carlo() {
        let cases = [
            ("sea-state-tp", ResponseFunction::paper_sdof(), 8.0),
            ("sea-state-tp", ResponseFunction::paper_bimodal(), 9.0),
            ("directional-cartesian", ResponseFunction::paper_ellipse(), 6.0),
        ];
        for (name, f, cap) in cases {
            let m = build_paper_model(name).unwrap();
            let cap = Capacity::new(cap).unwrap();
            let q = failure_probability(&m, &f, cap).unwrap().value();
            let mc = failure_probability_mc(&m, &f, cap, 400_000, 17).unwrap();
            assert!(mc.hits > 100, "{name}: {mc:?}");
            assert!((mc.probability - q).abs() < 3.0 * mc.standard_error, "{name}: {q} vs {mc:?}");
        }
    }

    #[test]
    fn contour_maximum_is_refined_along_edges() {
        let m = build_paper_model("sea-state-tp").unwrap();
        let spec = ExceedanceSpec::marginal(1e-3).unwrap();
        let f = ResponseFunction::paper_sdof();
        let coarse = iform_contour(&m, &spec, RosenblattOrder::X1First, 24).unwrap();
        let fine = iform_contour(&m, &spec, RosenblattOrder::X1First, 3600).unwrap();
        let (rc, rf) = (max_response_on_contour(&f, &coarse).unwrap(), max_response_on_contour(&f, &fine).unwrap());
        let vertex_best = coarse.points().iter().map(|x| f.evaluate(*x)).fold(0.0, f64::max);
        assert!(rc.response >= vertex_best);
        assert!((rf.response - rc.response).abs() < 0.05 * rf.response);
        assert!((f.evaluate(rc.state) - rc.response).abs() < 1e-12);
        let wrong = Contour::new(
            Method::Iform,
            spec,
            [AxisLabel::new("hs", "m"), AxisLabel::new("tz", "s")],
            coarse.components.clone(),
            ContourMeta::Imported,
        )
        .unwrap();
        assert!(matches!(max_response_on_contour(&f, &wrong), Err(Error::CoordinateMismatch { .. })));
    }

    #[test]
    fn config_round_trip() {
        let f: ResponseFunction =
            toml::from_str("family = \"directional-ellipse\"\na = 1.4\nb = 5.0\nphi_deg = 315.0\n").unwrap();
        assert_eq!(f, ResponseFunction::paper_ellipse());
        let s: ResponseFunction = toml::from_str("family = \"sdof\"\na = 2.0\nb = 0.007\ntp0 = 30.0\n").unwrap();
        assert_eq!(s, ResponseFunction::paper_sdof());
        assert!(toml::from_str::<ResponseFunction>("family = \"sdof\"\na = 2.0\nb = 0.007\ntp0 = 30.0\nc = 1\n").is_err());
        let back: ResponseFunction = toml::from_str(&toml::to_string(&f).unwrap()).unwrap();
        assert!((back.profile(0.3) - f.profile(0.3)).abs() < 1e-14);
    }
}
