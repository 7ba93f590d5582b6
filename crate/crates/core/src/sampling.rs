//! Seeded Monte Carlo samples from joint models, projections and empirical
//! quantiles.
//!
//! Draws go through uniform variates: `x₁ = F₁⁻¹(u₁)`, then
//! `x₂ = F⁻¹(u₂ | x₁)`. The Cartesian directional model is sampled in its
//! polar form and mapped to `(h cos θ, h sin θ)`.
//!
//! Reproducibility contract: the sample is cut into blocks of
//! [`BLOCK_SIZE`] points. Block `b` is generated by ChaCha8 keyed with the
//! 64-bit seed (expanded by `SeedableRng::seed_from_u64`) on stream `b`.
//! Blocks are concatenated in index order, so any parallel schedule yields
//! the same points.

use std::io::Write;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::joint::{AxisLabel, Hierarchical, JointModel, Model};
use crate::stats::Probability;

pub const BLOCK_SIZE: usize = 1 << 16;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_190_601;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub points: Vec<[f64; 2]>,
    pub seed: u64,
    pub model_id: String,
    pub count: usize,
    pub labels: [AxisLabel; 2],
}

impl SampleSet {
    pub fn project(&self, theta: f64) -> Vec<f64> {
        project(&self.points, theta)
    }

    /// CSV with a `#` header line recording model, seed and size.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "# model_id={},seed={},count={}", self.model_id, self.seed, self.count)?;
        writeln!(w, "{},{}", self.labels[0].name, self.labels[1].name)?;
        for p in &self.points {
            writeln!(w, "{},{}", p[0], p[1])?;
        }
        Ok(())
    }
}

/// `y = x₁ cos θ + x₂ sin θ` for every point, order preserved.
pub fn project(points: &[[f64; 2]], theta: f64) -> Vec<f64> {
    let (c, s) = (theta.cos(), theta.sin());
    points.iter().map(|p| p[0] * c + p[1] * s).collect()
}

/// Number of sample values that must exceed the empirical quantile at
/// exceedance `alpha`: `ceil(α · n)`.
pub fn exceedance_count(alpha: Probability, n: usize) -> Result<usize> {
    let a = alpha.value();
    let expected = a * n as f64;
    // Absorb rounding in the product so that e.g. 0.01 · 300 counts 3.
    let k = (expected * (1.0 - 1e-12)).ceil() as usize;
    if expected < 1.0 - 1e-12 || k >= n {
        let needed = if a > 0.0 { (1.0 / a).ceil() as usize } else { usize::MAX };
        return Err(Error::InsufficientSample { needed: needed.max(k + 1), got: n });
    }
    Ok(k.max(1))
}

/// Empirical quantile at exceedance `alpha`: the value exceeded by exactly
/// `ceil(α · n)` sample values (the `(k+1)`-th largest).
pub fn empirical_quantile(values: &[f64], alpha: Probability) -> Result<f64> {
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::NonFinite("empirical_quantile"));
    }
    let k = exceedance_count(alpha, values.len())?;
    let mut buf = values.to_vec();
    let idx = values.len() - 1 - k;
    let (_, v, _) = buf.select_nth_unstable_by(idx, f64::total_cmp);
    Ok(*v)
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    // 53 random bits mapped to the open interval (0, 1).
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Inverse CDF of a circular law: a monotone table of the CDF refined by
/// safeguarded Newton steps.
#[derive(Debug)]
struct CircularInverse<'a> {
    dist: &'a Distribution,
    theta: Vec<f64>,
    cdf: Vec<f64>,
}

impl<'a> CircularInverse<'a> {
    const NODES: usize = 4096;

    fn new(dist: &'a Distribution) -> Self {
        let (lo, hi) = dist.support();
        let theta: Vec<f64> =
            (0..=Self::NODES).map(|i| lo + (hi - lo) * i as f64 / Self::NODES as f64).collect();
        let mut cdf: Vec<f64> = theta.iter().map(|t| dist.cdf(*t)).collect();
        cdf[0] = 0.0;
        cdf[Self::NODES] = 1.0;
        for i in 1..cdf.len() {
            cdf[i] = cdf[i].max(cdf[i - 1]);
        }
        Self { dist, theta, cdf }
    }

    fn invert(&self, p: f64) -> f64 {
        let i = self.cdf.partition_point(|c| *c <= p).clamp(1, Self::NODES);
        let (a, b) = (self.theta[i - 1], self.theta[i]);
        let (fa, fb) = (self.cdf[i - 1], self.cdf[i]);
        let mut t = if fb > fa { a + (p - fa) / (fb - fa) * (b - a) } else { a };
        for _ in 0..3 {
            let d = self.dist.pdf(t);
            if d <= 0.0 {
                break;
            }
            t = (t - (self.dist.cdf(t) - p) / d).clamp(a, b);
        }
        t
    }
}

enum Drawer<'a> {
    Hierarchical {
        model: &'a Hierarchical,
        circular: Option<CircularInverse<'a>>,
        cartesian: bool,
    },
    Generic(&'a dyn JointModel),
}

impl Drawer<'_> {
    fn draw(&self, u1: f64, u2: f64) -> Result<[f64; 2]> {
        match self {
            Drawer::Hierarchical { model, circular, cartesian } => {
                let x1 = match circular {
                    Some(inv) => inv.invert(u1),
                    None => quantile(model.first(), u1),
                };
                let c = model.conditional_at(x1).ok_or_else(|| {
                    Error::Domain(format!("conditional distribution undefined at {x1}"))
                })?;
                let x2 = model.second_scale() * quantile(&c, u2);
                Ok(if *cartesian { [x2 * x1.cos(), x2 * x1.sin()] } else { [x1, x2] })
            }
            Drawer::Generic(m) => {
                let x1 = if u1 <= 0.5 { m.marginal_ppf(0, u1)? } else { m.marginal_isf(0, 1.0 - u1)? };
                let x2 = if u2 <= 0.5 {
                    m.conditional_ppf(1, u2, x1)?
                } else {
                    m.conditional_isf(1, 1.0 - u2, x1)?
                };
                Ok([x1, x2])
            }
        }
    }
}

fn quantile(d: &Distribution, u: f64) -> f64 {
    if u <= 0.5 {
        d.ppf(u)
    } else {
        d.isf(1.0 - u)
    }
}

fn hierarchical_drawer(model: &Hierarchical, cartesian: bool) -> Drawer<'_> {
    let first = model.first();
    let circular = first.is_circular().then(|| CircularInverse::new(first));
    Drawer::Hierarchical { model, circular, cartesian }
}

/// Draws `count` points from `model`. `model_id` is recorded, not resolved.
pub fn sample(model: &Model, model_id: &str, count: usize, seed: u64) -> Result<SampleSet> {
    if count == 0 {
        return Err(Error::Domain("sample size must be >= 1".into()));
    }
    let drawer = match model {
        Model::Hierarchical(h) => hierarchical_drawer(h, false),
        Model::Cartesian(c) => hierarchical_drawer(c.base(), true),
        other => Drawer::Generic(other),
    };
    let blocks = count.div_ceil(BLOCK_SIZE);
    let parts = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let n = BLOCK_SIZE.min(count - b * BLOCK_SIZE);
            (0..n)
                .map(|_| {
                    let u1 = unit(&mut rng);
                    let u2 = unit(&mut rng);
                    drawer.draw(u1, u2)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut points = Vec::with_capacity(count);
    for p in parts {
        points.extend(p);
    }
    Ok(SampleSet { points, seed, model_id: model_id.to_string(), count, labels: model.labels() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::joint::build_paper_model;
    use crate::test_oracle as oracle;

    fn p(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    #[test]
    fn projections() {
        let pts = vec![[1.0, 1.0], [2.0, -3.0]];
        assert_eq!(project(&pts, 0.0), vec![1.0, 2.0]);
        let y = project(&pts, std::f64::consts::FRAC_PI_2);
        assert!((y[0] - 1.0).abs() < 1e-15 && (y[1] + 3.0).abs() < 1e-15);
        let y = project(&pts, std::f64::consts::FRAC_PI_4);
        assert!((y[0] - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn quantile_convention() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(empirical_quantile(&v, p(0.01)).unwrap(), 99.0);
        assert_eq!(empirical_quantile(&v, p(0.05)).unwrap(), 95.0);
        assert_eq!(empirical_quantile(&v, p(0.5)).unwrap(), 50.0);
        assert!(matches!(
            empirical_quantile(&v, p(0.001)),
            Err(Error::InsufficientSample { .. })
        ));
        assert_eq!(exceedance_count(p(0.01), 300).unwrap(), 3);
        assert_eq!(exceedance_count(p(0.011), 100).unwrap(), 2);
    }

    #[test]
    fn determinism_and_streams() {
        let m = build_paper_model("sea-state").unwrap();
        let a = sample(&m, "sea-state", 1, 7).unwrap();
        let b = sample(&m, "sea-state", 1, 7).unwrap();
        assert_eq!(a.points, b.points);
        let c = sample(&m, "sea-state", 1, 8).unwrap();
        assert_ne!(a.points, c.points);
        // A longer sample extends a shorter one: blocks do not depend on count.
        let long = sample(&m, "sea-state", BLOCK_SIZE + 10, 7).unwrap();
        assert_eq!(long.points[0], a.points[0]);
        let short = sample(&m, "sea-state", BLOCK_SIZE + 3, 7).unwrap();
        assert_eq!(&long.points[..BLOCK_SIZE + 3], &short.points[..]);
    }

    #[test]
    fn mixture_pair_marginal_cdf() {
        let m = build_paper_model("normal-mixture").unwrap();
        let n = 20_000;
        let s = sample(&m, "normal-mixture", n, 3).unwrap();
        for x in [-4.0, -3.0, 0.0, 2.5, 3.5] {
            let exact = 0.5 * (oracle::normal_cdf(x - 3.0) + oracle::normal_cdf(x + 3.0));
            let hits = s.points.iter().filter(|p| p[0] <= x).count() as f64 / n as f64;
            let se = (exact * (1.0 - exact) / n as f64).sqrt();
            assert!((hits - exact).abs() < 4.0 * se, "x = {x}: {hits} vs {exact}");
        }
    }

    #[test]
    fn ks_first_coordinate() {
        let m = build_paper_model("sea-state").unwrap();
        let n = 1_000_000;
        let s = sample(&m, "sea-state", n, 11).unwrap();
        let mut x: Vec<f64> = s.points.iter().map(|p| p[0]).collect();
        x.sort_by(f64::total_cmp);
        let d = x
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let f = 1.0 - (-((v - 0.8888) / 2.776).powf(1.471)).exp();
                (f - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - f).abs())
            })
            .fold(0.0f64, f64::max);
        assert!(d <= 1.63 / (n as f64).sqrt(), "KS statistic {d}");
    }

    #[test]
    fn standard_normal_quantile_from_sample() {
        use crate::joint::{ConditionalFamily, DependenceFunction, Support};
        let first = crate::distributions::Normal::new(0.0, 1.0).unwrap().into();
        let m: Model = Hierarchical::new(
            first,
            ConditionalFamily::Normal {
                mean: DependenceFunction::Constant { c: 0.0 },
                std: DependenceFunction::Constant { c: 1.0 },
            },
            Support { x1: (-10.0, 10.0), x2: (-10.0, 10.0) },
            [AxisLabel::new("z1", "-"), AxisLabel::new("z2", "-")],
        )
        .unwrap()
        .into();
        let n = 1_000_000;
        let s = sample(&m, "normal", n, 5).unwrap();
        let x: Vec<f64> = s.points.iter().map(|p| p[0]).collect();
        let q = empirical_quantile(&x, p(1e-3)).unwrap();
        let exact = oracle::normal_isf(1e-3);
        // Standard error of the order statistic: sqrt(a(1-a)/n) / φ(x).
        let se = (1e-3 * (1.0 - 1e-3) / n as f64).sqrt() / oracle::phi_density(exact);
        assert!((q - exact).abs() < 3.0 * se, "{q} vs {exact} (se {se})");
    }

    #[test]
    fn direction_sector_occupancy() {
        let m = build_paper_model("directional").unwrap();
        let n = 200_000;
        let s = sample(&m, "directional", n, 9).unwrap();
        // Share of directions inside the half circle centred on 5.54 rad.
        let Model::Hierarchical(h) = &m else { panic!() };
        let theta = h.first();
        let (a, b) = (5.54 - std::f64::consts::FRAC_PI_2, 5.54 + std::f64::consts::FRAC_PI_2);
        let wrap = |t: f64| t.rem_euclid(std::f64::consts::TAU);
        let inside = |t: f64| {
            let t = wrap(t);
            t >= wrap(a) || t < wrap(b)
        };
        let hits = s.points.iter().filter(|p| inside(p[0])).count() as f64 / n as f64;
        let want = oracle::simpson(|t| theta.pdf(wrap(t)), a, b, 20_000);
        let se = (want * (1.0 - want) / n as f64).sqrt();
        assert!((hits - want).abs() < 3.0 * se, "{hits} vs {want}");
        assert!(s.points.iter().all(|p| (0.0..std::f64::consts::TAU).contains(&p[0])));
    }

    #[test]
    fn cartesian_sample_is_polar_sample_rotated() {
        let polar = build_paper_model("directional").unwrap();
        let cart = build_paper_model("directional-cartesian").unwrap();
        let a = sample(&polar, "directional", 100, 4).unwrap();
        let b = sample(&cart, "directional-cartesian", 100, 4).unwrap();
        for (p, q) in a.points.iter().zip(&b.points) {
            assert!((q[0] - p[1] * p[0].cos()).abs() < 1e-12);
            assert!((q[1] - p[1] * p[0].sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_dump_has_header() {
        let m = build_paper_model("sea-state").unwrap();
        let s = sample(&m, "sea-state", 3, 1).unwrap();
        let mut out = Vec::new();
        s.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("# model_id=sea-state,seed=1,count=3\nhs,tz\n"));
        assert_eq!(text.lines().count(), 5);
    }
}
