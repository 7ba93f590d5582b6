use std::f64::consts::TAU;

use rayon::prelude::*;

use super::{
    iform_radius, isorm_radius, Contour, ContourMeta, ExceedanceKind, ExceedanceSpec, Method,
};
use crate::error::{Error, Result};
use crate::joint::{rosenblatt_inverse, JointModel, RosenblattOrder};
use crate::stats::DegreesOfFreedom;

/// IFORM contour: inverse-Rosenblatt image of `n_points` equally spaced
/// points on the U-space circle of radius `Φ⁻¹(1 − α_m)`. The first point
/// sits at angle 0, where the first variable of `order` is largest.
pub fn iform_contour(
    model: &dyn JointModel,
    spec: &ExceedanceSpec,
    order: RosenblattOrder,
    n_points: usize,
) -> Result<Contour> {
    spec.require("IFORM", ExceedanceKind::Marginal)?;
    let radius = iform_radius(spec.alpha())?;
    circle_image(model, spec, order, n_points, radius, Method::Iform)
}

/// ISORM contour: as IFORM with the radius `β` of `χ²₂(β²) = 1 − α_t`.
pub fn isorm_contour(
    model: &dyn JointModel,
    spec: &ExceedanceSpec,
    order: RosenblattOrder,
    n_points: usize,
) -> Result<Contour> {
    spec.require("ISORM", ExceedanceKind::Total)?;
    let radius = isorm_radius(spec.alpha(), DegreesOfFreedom::new(2)?)?;
    circle_image(model, spec, order, n_points, radius, Method::Isorm)
}

fn circle_image(
    model: &dyn JointModel,
    spec: &ExceedanceSpec,
    order: RosenblattOrder,
    n_points: usize,
    radius: f64,
    method: Method,
) -> Result<Contour> {
    if n_points < 3 {
        return Err(Error::Domain(format!("need at least 3 contour points, got {n_points}")));
    }
    let points = (0..n_points)
        .into_par_iter()
        .map(|i| {
            let phi = TAU * i as f64 / n_points as f64;
            let u = [radius * phi.cos(), radius * phi.sin()];
            rosenblatt_inverse(model, u, order).map_err(|e| Error::NoConvergence {
                what: "inverse Rosenblatt transform",
                detail: format!("at U-space angle {:.3} deg: {e}", phi.to_degrees()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Contour::new(
        method,
        *spec,
        model.labels(),
        vec![points],
        ContourMeta::Rosenblatt { order, n_points, radius },
    )
}
