use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::geometry::{dedup_ring, signed_area, Point};
use super::{Contour, ContourMeta, ExceedanceKind, ExceedanceSpec, Method};
use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::joint::{AxisLabel, JointModel, Support};
use crate::numeric::brent;
use crate::stats::Probability;

/// Density grid resolution (nodes per axis) and extent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n1: usize,
    pub n2: usize,
    /// Defaults to the model support.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Support>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { n1: 1000, n2: 1000, bounds: None }
    }
}

impl GridSpec {
    pub fn square(n: usize) -> Self {
        Self { n1: n, n2: n, bounds: None }
    }

    pub fn with_bounds(mut self, bounds: Support) -> Self {
        self.bounds = Some(bounds);
        self
    }
}

const BISECTIONS: usize = 60;

/// Joint density tabulated on a regular grid of nodes.
#[derive(Debug, Clone)]
pub struct DensityGrid {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Row-major: `f[i * n2 + j] = f(x[i], y[j])`.
    f: Vec<f64>,
    labels: [AxisLabel; 2],
    fmax: f64,
}

fn nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn trapezoid(i: usize, n: usize) -> f64 {
    if i == 0 || i == n - 1 {
        0.5
    } else {
        1.0
    }
}

impl DensityGrid {
    pub fn new(model: &dyn JointModel, grid: &GridSpec) -> Result<Self> {
        if grid.n1 < 3 || grid.n2 < 3 {
            return Err(Error::Domain("density grid needs at least 3 nodes per axis".into()));
        }
        let s = grid.bounds.unwrap_or_else(|| model.support());
        let x = nodes(s.x1.0, s.x1.1, grid.n1);
        let y = nodes(s.x2.0, s.x2.1, grid.n2);
        let f: Vec<f64> = x
            .par_iter()
            .flat_map_iter(|xi| y.iter().map(move |yj| model.pdf([*xi, *yj])))
            .collect();
        if f.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::NonFinite("density grid"));
        }
        let fmax = f.iter().copied().fold(0.0, f64::max);
        if fmax <= 0.0 {
            return Err(Error::Domain("density vanishes on the whole grid".into()));
        }
        Ok(Self { x, y, f, labels: model.labels(), fmax })
    }

    pub fn shape(&self) -> [usize; 2] {
        [self.x.len(), self.y.len()]
    }

    fn cell_area(&self) -> f64 {
        (self.x[1] - self.x[0]) * (self.y[1] - self.y[0])
    }

    fn weighted_sum(&self, keep: impl Fn(f64) -> bool + Sync) -> f64 {
        let (n1, n2) = (self.x.len(), self.y.len());
        let s: f64 = (0..n1)
            .into_par_iter()
            .map(|i| {
                let row = &self.f[i * n2..(i + 1) * n2];
                let inner: f64 = row
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| keep(**v))
                    .map(|(j, v)| v * trapezoid(j, n2))
                    .sum();
                inner * trapezoid(i, n1)
            })
            .sum();
        s * self.cell_area()
    }

    /// Trapezoidal mass of the whole grid.
    pub fn total_mass(&self) -> f64 {
        self.weighted_sum(|_| true)
    }

    /// Trapezoidal mass of `{f < c}`, summed directly from the low-density
    /// nodes so that small values keep their relative accuracy.
    pub fn excluded_mass(&self, c: f64) -> f64 {
        self.weighted_sum(|v| v < c)
    }

    /// Largest threshold whose excluded mass does not exceed `alpha`, by
    /// bisection on `[0, max f]`.
    pub fn threshold(&self, alpha: Probability) -> Result<f64> {
        let a = alpha.value();
        let (mut lo, mut hi) = (0.0, self.fmax);
        if self.excluded_mass(hi) <= a {
            return Ok(hi);
        }
        for _ in 0..BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if self.excluded_mass(mid) <= a {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if lo <= 0.0 {
            return Err(Error::NoConvergence {
                what: "HD threshold",
                detail: format!("grid cannot resolve exceedance probability {a}"),
            });
        }
        Ok(lo)
    }

    /// Rings of the level set `f = c` by marching squares with linear
    /// interpolation. The grid is padded with a ring of zero density so
    /// every ring closes. Rings are sorted by enclosed area, largest first.
    pub fn level_set(&self, c: f64) -> Vec<Vec<Point>> {
        let (n1, n2) = (self.x.len(), self.y.len());
        let (dx, dy) = (self.x[1] - self.x[0], self.y[1] - self.y[0]);
        // Padded indices run over 0..n + 2; index 0 and n + 1 are the pad.
        let (p1, p2) = (n1 + 2, n2 + 2);
        let value = |i: usize, j: usize| -> f64 {
            if i == 0 || j == 0 || i == p1 - 1 || j == p2 - 1 {
                -c
            } else {
                self.f[(i - 1) * n2 + (j - 1)] - c
            }
        };
        let coord = |i: usize, j: usize| -> Point {
            [self.x[0] + (i as f64 - 1.0) * dx, self.y[0] + (j as f64 - 1.0) * dy]
        };
        let h_edge = |i: usize, j: usize| 2 * (i * p2 + j);
        let v_edge = |i: usize, j: usize| 2 * (i * p2 + j) + 1;

        let mut links: HashMap<usize, [usize; 2]> = HashMap::new();
        let mut link = |a: usize, b: usize| {
            for (from, to) in [(a, b), (b, a)] {
                let e = links.entry(from).or_insert([usize::MAX; 2]);
                if e[0] == usize::MAX {
                    e[0] = to;
                } else {
                    e[1] = to;
                }
            }
        };
        for i in 0..p1 - 1 {
            for j in 0..p2 - 1 {
                let (va, vb, vc, vd) = (value(i, j), value(i + 1, j), value(i + 1, j + 1), value(i, j + 1));
                let case = (va >= 0.0) as u8
                    | ((vb >= 0.0) as u8) << 1
                    | ((vc >= 0.0) as u8) << 2
                    | ((vd >= 0.0) as u8) << 3;
                let bottom = h_edge(i, j);
                let right = v_edge(i + 1, j);
                let top = h_edge(i, j + 1);
                let left = v_edge(i, j);
                let centre_in = va + vb + vc + vd >= 0.0;
                match case {
                    0 | 15 => {}
                    1 | 14 => link(left, bottom),
                    2 | 13 => link(bottom, right),
                    3 | 12 => link(left, right),
                    4 | 11 => link(right, top),
                    6 | 9 => link(bottom, top),
                    7 | 8 => link(left, top),
                    5 => {
                        if centre_in {
                            link(bottom, right);
                            link(left, top);
                        } else {
                            link(left, bottom);
                            link(right, top);
                        }
                    }
                    10 => {
                        if centre_in {
                            link(left, bottom);
                            link(right, top);
                        } else {
                            link(bottom, right);
                            link(left, top);
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }

        let crossing = |edge: usize| -> Point {
            let k = edge / 2;
            let (i, j) = (k / p2, k % p2);
            let (i2, j2) = if edge % 2 == 0 { (i + 1, j) } else { (i, j + 1) };
            let (va, vb) = (value(i, j), value(i2, j2));
            let t = va / (va - vb);
            let (a, b) = (coord(i, j), coord(i2, j2));
            [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
        };

        let mut starts: Vec<usize> = links.keys().copied().collect();
        starts.sort_unstable();
        let mut seen: HashSet<usize> = HashSet::with_capacity(starts.len());
        let mut rings = Vec::new();
        let tol = 1e-9 * dx.min(dy);
        for s in starts {
            if seen.contains(&s) {
                continue;
            }
            let mut ring = Vec::new();
            let (mut prev, mut cur) = (usize::MAX, s);
            loop {
                seen.insert(cur);
                ring.push(crossing(cur));
                let [a, b] = links[&cur];
                let next = if a != prev { a } else { b };
                prev = cur;
                cur = next;
                if cur == s || cur == usize::MAX || seen.contains(&cur) {
                    break;
                }
            }
            dedup_ring(&mut ring, tol);
            if ring.len() >= 3 {
                rings.push(ring);
            }
        }
        rings.sort_by(|a, b| signed_area(b).abs().total_cmp(&signed_area(a).abs()));
        rings
    }

    /// HD contour at total exceedance `spec.alpha()`.
    pub fn contour(&self, spec: &ExceedanceSpec) -> Result<Contour> {
        spec.require("HD", ExceedanceKind::Total)?;
        let f_c = self.threshold(spec.alpha())?;
        let rings = self.level_set(f_c);
        if rings.is_empty() {
            return Err(Error::NoConvergence {
                what: "HD contour extraction",
                detail: format!("no level set found at f_c = {f_c}"),
            });
        }
        let excluded = self.excluded_mass(f_c);
        let enclosed = self.weighted_sum(|v| v >= f_c);
        Contour::new(
            Method::Hd,
            *spec,
            self.labels.clone(),
            rings,
            ContourMeta::HighestDensity {
                f_c,
                grid: self.shape(),
                enclosed_probability: enclosed,
                excluded_probability: excluded,
            },
        )
    }
}

/// HD contour of `model` at total exceedance `spec.alpha()`.
pub fn hd_contour(model: &dyn JointModel, spec: &ExceedanceSpec, grid: &GridSpec) -> Result<Contour> {
    DensityGrid::new(model, grid)?.contour(spec)
}

/// Highest density interval `[a, b]` of a unimodal distribution holding
/// probability `1 − α`: `f(a) = f(b)` and `F(a) + 1 − F(b) = α`.
pub fn hd_interval_1d(dist: &Distribution, alpha: Probability) -> Result<(f64, f64)> {
    let a = alpha.value();
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Domain(format!("exceedance probability must lie in (0, 1), got {a}")));
    }
    let mode = dist
        .mode()
        .ok_or_else(|| Error::Domain("the HD interval needs a unimodal distribution".into()))?;
    let s_lo = dist.support().0;
    let (t_lo, t_hi) = dist.truncation();
    let lower_end = if s_lo.is_finite() { s_lo } else { t_lo };
    let scale = (t_hi - t_lo).abs().max(1.0);
    let tol = 1e-14 * scale;

    // Lower end of the interval whose density level is that of `b`.
    let lower_for = |b: f64| -> f64 {
        let level = dist.pdf(b);
        if mode <= lower_end || dist.pdf(lower_end) >= level {
            return lower_end;
        }
        brent(|x| dist.pdf(x) - level, lower_end, mode, tol).unwrap_or(lower_end)
    };
    let excess = |b: f64| -> f64 {
        let lo = lower_for(b);
        let out = dist.cdf(lo) + dist.sf(b);
        out.max(1e-300).ln() - a.ln()
    };
    let mut hi = t_hi;
    while excess(hi) > 0.0 {
        hi = mode + 2.0 * (hi - mode);
        if !hi.is_finite() || hi > 1e12 * scale {
            return Err(Error::NoConvergence {
                what: "HD interval",
                detail: format!("upper end not bracketed for alpha {a}"),
            });
        }
    }
    let b = brent(excess, mode, hi, tol)?;
    Ok((lower_for(b), b))
}
