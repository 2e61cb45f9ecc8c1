//! Manufactured-solution convergence checks for the discrete operator.

use std::f64::consts::PI;
use std::sync::Arc;

use super::field::ScalarField;
use super::grid::build_grid;
use super::operator::{assemble_operator, solve_linear, BoundaryData};
use crate::error::Result;
use crate::model::{Geometry, ReducedPoint};

/// Exact solution and `−L` applied to it, per geometry.
fn manufactured(geom: &Geometry) -> (Box<dyn Fn(ReducedPoint) -> f64 + Send + Sync>, Box<dyn Fn(ReducedPoint) -> f64>) {
    match *geom {
        Geometry::ToroidalCrossSection { .. } => {
            let (r0, r1, _, _) = geom.bounds();
            let k = PI / (r1 - r0);
            let exact = move |p: ReducedPoint| (k * (p.r - r0)).sin() * (PI * p.z).cos();
            let minus_l = move |p: ReducedPoint| {
                let (s, c) = (k * (p.r - r0)).sin_cos();
                let cz = (PI * p.z).cos();
                (k * k + PI * PI) * s * cz - k * c * cz / p.r
            };
            (Box::new(exact), Box::new(minus_l))
        }
        Geometry::RadialDisc { r0 } => {
            let k = PI / (2.0 * r0);
            let exact = move |p: ReducedPoint| (k * p.r).cos();
            let minus_l = move |p: ReducedPoint| k * k * (k * p.r).cos() + k * sinc(k, p.r);
            (Box::new(exact), Box::new(minus_l))
        }
        Geometry::MirrorCylinder { r0, l } => {
            let k = PI / (2.0 * r0);
            let m = PI / (2.0 * l);
            let exact = move |p: ReducedPoint| (k * p.r).cos() * (m * p.z).cos();
            let minus_l = move |p: ReducedPoint| {
                let cz = (m * p.z).cos();
                (k * k + m * m) * (k * p.r).cos() * cz + k * sinc(k, p.r) * cz
            };
            (Box::new(exact), Box::new(minus_l))
        }
    }
}

/// `sin(k r) / r`, with its limit `k` on the axis.
fn sinc(k: f64, r: f64) -> f64 {
    if r == 0.0 {
        k
    } else {
        (k * r).sin() / r
    }
}

/// Discrete L2 error of the manufactured problem on an `n × n` grid (or `n` nodes in 1-D).
pub fn mms_error(geom: &Geometry, n: usize) -> Result<(f64, f64)> {
    let grid = Arc::new(build_grid(geom, n, n)?);
    let (exact, minus_l) = manufactured(geom);
    let exact: Arc<dyn Fn(ReducedPoint) -> f64 + Send + Sync> = Arc::from(exact);
    let op = assemble_operator(grid.clone(), 0.0);
    let rhs = ScalarField::from_fn(grid.lattice, |p| if geom.contains(p) { minus_l(p) } else { 0.0 });
    let sol = solve_linear(&op, &rhs, &BoundaryData::Profile(exact.clone()))?;
    let (mut acc, mut count) = (0.0, 0usize);
    for k in 0..grid.len() {
        if grid.kinds[k].is_unknown() {
            let e = sol.values[k] - exact(grid.point(k));
            acc += e * e;
            count += 1;
        }
    }
    Ok((grid.lattice.spacing(), (acc / count.max(1) as f64).sqrt()))
}

/// Least-squares slope of `log(error)` against `log(h)` over the given resolutions.
pub fn mms_convergence(geom: &Geometry, resolutions: &[usize]) -> Result<f64> {
    let pts = resolutions
        .iter()
        .map(|&n| mms_error(geom, n))
        .collect::<Result<Vec<_>>>()?;
    let logs: Vec<(f64, f64)> = pts.iter().map(|(h, e)| (h.ln(), e.ln())).collect();
    Ok(least_squares_slope(&logs))
}

pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
