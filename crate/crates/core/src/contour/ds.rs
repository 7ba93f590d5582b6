use rayon::prelude::*;

use super::geometry::{clip_halfplane, dedup_ring, Point};
use super::{Contour, ContourMeta, ExceedanceKind, ExceedanceSpec, Method};
use crate::error::{Error, Result};
use crate::sampling::{exceedance_count, SampleSet};
use crate::stats::Probability;

/// Smallest `α · n` accepted for a DS contour.
pub const MIN_EXCEEDANCES: f64 = 100.0;

/// `n` angles equally spaced on `[0, 2π)`.
pub fn equal_angles(n: usize) -> Vec<f64> {
    (0..n).map(|i| std::f64::consts::TAU * i as f64 / n as f64).collect()
}

/// The `m` largest values of `x₁ cos θ + x₂ sin θ`, sorted descending.
///
/// Candidates above a running threshold are buffered and the buffer is
/// cut back to its top `m` whenever it fills, so the pass is linear.
fn top_projections(points: &[Point], theta: f64, m: usize) -> Vec<f64> {
    let (c, s) = (theta.cos(), theta.sin());
    let cap = (4 * m).max(4096);
    let mut buf: Vec<f64> = Vec::with_capacity(cap);
    let mut threshold = f64::NEG_INFINITY;
    let keep_top = |buf: &mut Vec<f64>| {
        if buf.len() > m {
            let cut = buf.len() - m;
            buf.select_nth_unstable_by(cut, f64::total_cmp);
            buf.drain(..cut);
        }
    };
    for p in points {
        let y = p[0] * c + p[1] * s;
        if y > threshold {
            buf.push(y);
            if buf.len() == cap {
                keep_top(&mut buf);
                threshold = buf.iter().copied().fold(f64::INFINITY, f64::min);
            }
        }
    }
    keep_top(&mut buf);
    buf.sort_unstable_by(|a, b| b.total_cmp(a));
    buf
}

/// Halfplane offsets `C[a][i]`: the empirical quantile of the projection
/// at angle `angles[i]` and exceedance `alphas[a]`.
pub fn halfplane_offsets(
    points: &[Point],
    angles: &[f64],
    alphas: &[Probability],
) -> Result<Vec<Vec<f64>>> {
    if points.iter().any(|p| p[0].is_nan() || p[1].is_nan()) {
        return Err(Error::NonFinite("sample point"));
    }
    let ks = alphas
        .iter()
        .map(|a| exceedance_count(*a, points.len()))
        .collect::<Result<Vec<_>>>()?;
    let m = ks.iter().copied().max().unwrap_or(0) + 1;
    let per_angle: Vec<Vec<f64>> = angles
        .par_iter()
        .map(|theta| {
            let top = top_projections(points, *theta, m);
            ks.iter().map(|k| top[*k]).collect()
        })
        .collect();
    Ok((0..alphas.len()).map(|a| per_angle.iter().map(|v| v[a]).collect()).collect())
}

/// DS contour: boundary of the intersection of the halfplanes
/// `x₁ cos θ + x₂ sin θ <= C_θ`.
pub fn ds_contour(sample: &SampleSet, spec: &ExceedanceSpec, angles: &[f64]) -> Result<Contour> {
    let mut out = ds_contours(sample, std::slice::from_ref(spec), angles)?;
    Ok(out.remove(0))
}

/// DS contours at several exceedance probabilities sharing one pass over
/// the sample per angle.
pub fn ds_contours(
    sample: &SampleSet,
    specs: &[ExceedanceSpec],
    angles: &[f64],
) -> Result<Vec<Contour>> {
    if angles.len() < 3 {
        return Err(Error::Domain(format!("need at least 3 halfplane angles, got {}", angles.len())));
    }
    let n = sample.points.len();
    for spec in specs {
        spec.require("DS", ExceedanceKind::Marginal)?;
        let a = spec.alpha().value();
        if a * (n as f64) < MIN_EXCEEDANCES {
            return Err(Error::InsufficientSample {
                needed: (MIN_EXCEEDANCES / a).ceil() as usize,
                got: n,
            });
        }
    }
    let alphas: Vec<Probability> = specs.iter().map(|s| s.alpha()).collect();
    let offsets = halfplane_offsets(&sample.points, angles, &alphas)?;
    specs
        .iter()
        .zip(offsets)
        .map(|(spec, c)| {
            let ring = intersect_halfplanes(&sample.points, angles, &c)?;
            Contour::new(
                Method::Ds,
                *spec,
                sample.labels.clone(),
                vec![ring],
                ContourMeta::DirectSampling {
                    angles: angles.len(),
                    seed: sample.seed,
                    sample_size: n,
                    model_id: sample.model_id.clone(),
                },
            )
        })
        .collect()
}

fn intersect_halfplanes(points: &[Point], angles: &[f64], offsets: &[f64]) -> Result<Vec<Point>> {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in points {
        for j in 0..2 {
            lo[j] = lo[j].min(p[j]);
            hi[j] = hi[j].max(p[j]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1.0);
    let (b0, b1) = ([lo[0] - 10.0 * span, lo[1] - 10.0 * span], [hi[0] + 10.0 * span, hi[1] + 10.0 * span]);
    let mut poly: Vec<Point> = vec![[b0[0], b0[1]], [b1[0], b0[1]], [b1[0], b1[1]], [b0[0], b1[1]]];
    for (theta, c) in angles.iter().zip(offsets) {
        poly = clip_halfplane(&poly, [theta.cos(), theta.sin()], *c);
        if poly.is_empty() {
            return Err(Error::EmptyIntersection);
        }
    }
    dedup_ring(&mut poly, 1e-12 * span);
    if poly.len() < 3 {
        return Err(Error::EmptyIntersection);
    }
    let touches_box = poly.iter().any(|p| {
        p[0] <= b0[0] + span || p[0] >= b1[0] - span || p[1] <= b0[1] + span || p[1] >= b1[1] - span
    });
    if touches_box {
        return Err(Error::Domain("the halfplane angles do not enclose a bounded region".into()));
    }
    Ok(poly)
}
