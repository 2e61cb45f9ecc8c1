//! External magnetic field configurations and their first-integral data.

use super::geometry::{Geometry, ReducedPoint};
use crate::error::{config_err, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldKind {
    /// Uniform field `(0, 0, b)` along the cylinder axis.
    AxialConstant { b: f64 },
    /// Poloidal field `b B^{x0}` generated by `Ã = (b/2)((r−r0)² + (z−z0)²)`,
    /// plus an optional vacuum toroidal component of magnitude `toroidal` at `r = r0`.
    PoloidalTorus { b: f64, r0: f64, z0: f64, toroidal: f64 },
    /// Mirror field with axial profile `a(x₃) = a0 + a2 x₃²`.
    MirrorProfile { a0: f64, a2: f64 },
}

/// A magnetic field configuration together with the speed of light.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSpec {
    pub kind: FieldKind,
    pub c_light: f64,
}

impl FieldSpec {
    pub fn new(kind: FieldKind, c_light: f64) -> Self {
        Self { kind, c_light }
    }

    /// Checks positivity and compatibility with `geom`.
    pub fn validate(&self, geom: &Geometry) -> Result<()> {
        if !(self.c_light.is_finite() && self.c_light > 0.0) {
            return Err(config_err("c_light must be positive"));
        }
        match (self.kind, geom) {
            (FieldKind::AxialConstant { b }, Geometry::RadialDisc { .. }) => positive_b(b),
            (FieldKind::PoloidalTorus { b, r0, z0, toroidal }, Geometry::ToroidalCrossSection { .. }) => {
                positive_b(b)?;
                if !(r0.is_finite() && z0.is_finite() && toroidal.is_finite()) {
                    return Err(config_err("field center and toroidal component must be finite"));
                }
                if r0 <= 0.0 {
                    return Err(config_err("magnetic axis must satisfy r0 > 0"));
                }
                Ok(())
            }
            (FieldKind::MirrorProfile { a0, a2 }, Geometry::MirrorCylinder { l, .. }) => {
                if !(a0.is_finite() && a2.is_finite()) {
                    return Err(config_err("mirror profile coefficients must be finite"));
                }
                let min_a = if a2 >= 0.0 { a0 } else { a0 + a2 * l * l };
                if min_a <= 0.0 {
                    return Err(config_err("mirror profile a(x3) must be positive on [-l, l]"));
                }
                Ok(())
            }
            (kind, geom) => Err(config_err(format!("field {kind:?} is not compatible with geometry {geom:?}"))),
        }
    }

    /// The field-strength parameter that multiplies `|x − x0|²/2` in the
    /// angular integral at `p` (`b`, or `a(x₃)` for the mirror).
    #[inline]
    pub fn strength_at(&self, p: ReducedPoint) -> f64 {
        match self.kind {
            FieldKind::AxialConstant { b } | FieldKind::PoloidalTorus { b, .. } => b,
            FieldKind::MirrorProfile { a0, a2 } => a0 + a2 * p.z * p.z,
        }
    }

    /// Smallest field-strength parameter on `geom`.
    pub fn min_strength(&self, geom: &Geometry) -> f64 {
        match (self.kind, geom) {
            (FieldKind::MirrorProfile { a0, a2 }, Geometry::MirrorCylinder { l, .. }) => {
                if a2 >= 0.0 {
                    a0
                } else {
                    a0 + a2 * l * l
                }
            }
            _ => self.strength_at(ReducedPoint::new(0.0, 0.0)),
        }
    }

    /// Distance `|x − x0|` from the confinement center. For the cylinder
    /// geometries the center is the axis at the same height.
    #[inline]
    pub fn center_distance(&self, p: ReducedPoint) -> f64 {
        match self.kind {
            FieldKind::PoloidalTorus { r0, z0, .. } => (p.r - r0).hypot(p.z - z0),
            _ => p.r,
        }
    }

    pub fn center(&self) -> ReducedPoint {
        match self.kind {
            FieldKind::PoloidalTorus { r0, z0, .. } => ReducedPoint::new(r0, z0),
            _ => ReducedPoint::new(0.0, 0.0),
        }
    }

    /// Operator norm `|A0|` and Euclidean norm `|a0|` of the linear form
    /// `v ↦ vᵀ(A0 (x − x0) + a0)` in the angular integral.
    pub fn linear_form_norms(&self) -> (f64, f64) {
        let c = self.c_light;
        match self.kind {
            FieldKind::PoloidalTorus { r0, .. } => (c, c * r0),
            FieldKind::AxialConstant { .. } | FieldKind::MirrorProfile { .. } => (c, 0.0),
        }
    }

    /// Vector-potential scalar `Ã` of the poloidal torus field.
    pub fn vector_potential(&self, p: ReducedPoint) -> Option<f64> {
        match self.kind {
            FieldKind::PoloidalTorus { b, r0, z0, .. } => Some(0.5 * b * ((p.r - r0).powi(2) + (p.z - z0).powi(2))),
            _ => None,
        }
    }

    /// Splits the angular integral at `p` as `I = spatial + coefficient · v_θ`,
    /// where `v_θ` is the velocity component along the symmetry direction.
    #[inline]
    pub fn angular_split(&self, gyro: f64, p: ReducedPoint) -> (f64, f64) {
        match self.kind {
            FieldKind::PoloidalTorus { b, r0, z0, .. } => {
                (0.5 * b * ((p.r - r0).powi(2) + (p.z - z0).powi(2)), -gyro * p.r)
            }
            FieldKind::AxialConstant { b } => (0.5 * b * p.r * p.r, gyro * p.r),
            FieldKind::MirrorProfile { a0, a2 } => (0.5 * (a0 + a2 * p.z * p.z) * p.r * p.r, gyro * p.r),
        }
    }

    /// Field components `(B_r, B_θ, B_z)` at a reduced point. For the
    /// torus these are the reduced-field components `(B̃1, B̃2, B̃3)`.
    pub fn reduced_components(&self, p: ReducedPoint) -> [f64; 3] {
        match self.kind {
            FieldKind::AxialConstant { b } => [0.0, 0.0, b],
            FieldKind::PoloidalTorus { b, r0, z0, toroidal } => {
                [b * (p.z - z0) / p.r, toroidal * r0 / p.r, -b * (p.r - r0) / p.r]
            }
            FieldKind::MirrorProfile { a0, a2 } => {
                let a = a0 + a2 * p.z * p.z;
                let da = 2.0 * a2 * p.z;
                [-0.5 * da * p.r, 0.0, a]
            }
        }
    }

    /// Cartesian field at `x` (the torus field is rotated out of its cross-section).
    pub fn cartesian(&self, x: [f64; 3]) -> [f64; 3] {
        match self.kind {
            FieldKind::AxialConstant { b } => [0.0, 0.0, b],
            FieldKind::MirrorProfile { a0, a2 } => {
                let a = a0 + a2 * x[2] * x[2];
                let da = 2.0 * a2 * x[2];
                [-0.5 * da * x[0], -0.5 * da * x[1], a]
            }
            FieldKind::PoloidalTorus { .. } => {
                let r = x[0].hypot(x[1]);
                let [br, bt, bz] = self.reduced_components(ReducedPoint::new(r, x[2]));
                let (c, s) = (x[0] / r, x[1] / r);
                [br * c - bt * s, br * s + bt * c, bz]
            }
        }
    }

    /// Divergence from the analytic Jacobian of the built-in fields.
    ///
    /// The torus reports `∂_r(r B̃1) + ∂_z(r B̃3)`; the cylinder fields report
    /// the three-dimensional divergence.
    pub fn divergence_symbolic(&self, p: ReducedPoint) -> f64 {
        match self.kind {
            FieldKind::AxialConstant { .. } => 0.0,
            // r B̃1 = b (z − z0) has no r-dependence; r B̃3 = −b (r − r0) has no z-dependence.
            FieldKind::PoloidalTorus { .. } => 0.0 + 0.0,
            FieldKind::MirrorProfile { a2, .. } => {
                let da = 2.0 * a2 * p.z;
                -0.5 * da - 0.5 * da + da
            }
        }
    }

    /// The same field with strength parameter multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let kind = match self.kind {
            FieldKind::AxialConstant { b } => FieldKind::AxialConstant { b: lambda * b },
            FieldKind::PoloidalTorus { b, r0, z0, toroidal } => FieldKind::PoloidalTorus { b: lambda * b, r0, z0, toroidal },
            FieldKind::MirrorProfile { a0, a2 } => FieldKind::MirrorProfile { a0: lambda * a0, a2: lambda * a2 },
        };
        Self { kind, c_light: self.c_light }
    }
}

fn positive_b(b: f64) -> Result<()> {
    if b.is_finite() && b > 0.0 {
        Ok(())
    } else {
        Err(config_err("field strength b must be positive"))
    }
}

/// Max over sample points of `|∂_r(r B_r) + ∂_z(r B_z)|` by centered differences.
pub fn reduced_divergence_residual<F>(field: F, points: &[ReducedPoint], step: f64) -> f64
where
    F: Fn(ReducedPoint) -> [f64; 3],
{
    points
        .iter()
        .map(|&p| {
            let rb = |r: f64, z: f64| {
                let b = field(ReducedPoint::new(r, z));
                (r * b[0], r * b[2])
            };
            let d_r = (rb(p.r + step, p.z).0 - rb(p.r - step, p.z).0) / (2.0 * step);
            let d_z = (rb(p.r, p.z + step).1 - rb(p.r, p.z - step).1) / (2.0 * step);
            (d_r + d_z).abs()
        })
        .fold(0.0, f64::max)
}

/// Max over sample points of the Cartesian divergence by centered differences.
pub fn cartesian_divergence_residual<F>(field: F, points: &[[f64; 3]], step: f64) -> f64
where
    F: Fn([f64; 3]) -> [f64; 3],
{
    points
        .iter()
        .map(|x| {
            let mut div = 0.0;
            for k in 0..3 {
                let (mut xp, mut xm) = (*x, *x);
                xp[k] += step;
                xm[k] -= step;
                div += (field(xp)[k] - field(xm)[k]) / (2.0 * step);
            }
            div.abs()
        })
        .fold(0.0, f64::max)
}

/// Tensor lattice of `n × n` points inside `geom` (a line for the radial disc).
pub fn sample_lattice(geom: &Geometry, n: usize) -> Vec<ReducedPoint> {
    let (r0, r1, z0, z1) = geom.bounds();
    let n = n.max(2);
    let nz = if geom.spatial_dim() == 1 { 1 } else { n };
    let mut pts = Vec::with_capacity(n * nz);
    for j in 0..nz {
        let z = if nz == 1 { 0.0 } else { z0 + (z1 - z0) * j as f64 / (nz - 1) as f64 };
        for i in 0..n {
            let r = r0 + (r1 - r0) * i as f64 / (n - 1) as f64;
            let p = ReducedPoint::new(r, z);
            if geom.contains(p) {
                pts.push(p);
            }
        }
    }
    pts
}

/// Finite-difference divergence residual of a built-in field over an
/// `n × n` lattice of `geom`: the reduced condition for the torus, the
/// three-dimensional divergence for the cylinder geometries.
pub fn check_divergence_free(geom: &Geometry, field: &FieldSpec, resolution: usize) -> f64 {
    let (r0, r1, z0, z1) = geom.bounds();
    let scale = (r1 - r0).max(z1 - z0).max(1e-3);
    let step = 1e-3 * scale;
    let pts = sample_lattice(geom, resolution);
    match field.kind {
        FieldKind::PoloidalTorus { .. } => reduced_divergence_residual(|p| field.reduced_components(p), &pts, step),
        _ => {
            let cart: Vec<[f64; 3]> = pts.iter().map(|p| [p.r, 0.0, p.z]).collect();
            cartesian_divergence_residual(|x| field.cartesian(x), &cart, step)
        }
    }
}
