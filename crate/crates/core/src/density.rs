//! Velocity-space moments of the ansatz density, support radii and charges.
//!
//! In velocity space the ansatz depends on `v` only through the component
//! `w` along the symmetry direction and the transverse speed `s`. With
//! `v = R (ξ, η)` and `D = E0 − q u = ½ m R²` the energy argument becomes
//! `(E0 − E)/wE = D (1 − ξ² − η²)/wE`, so the integrand is piecewise
//! polynomial with kinks at dimensionless breakpoints. Cells are split at
//! those breakpoints and the rule is exact up to rounding; the breakpoints
//! do not move under the field scaling, which makes that law hold exactly.

use std::f64::consts::PI;

use crate::elliptic::{Grid, ScalarField};
use crate::error::{config_err, Result};
use crate::model::{smoothstep, FieldSpec, Geometry, ReducedPoint, Species};
use crate::quadrature::{break_list, GaussRule};

/// Composite Gauss–Legendre settings for velocity integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    order: usize,
    subdivisions: usize,
    rule: GaussRule,
}

impl QuadratureSpec {
    pub fn new(order: usize, subdivisions: usize) -> Result<Self> {
        if order < 4 {
            return Err(config_err(format!("quadrature order {order} is below the minimum of 4")));
        }
        if subdivisions < 2 {
            return Err(config_err(format!("quadrature subdivisions {subdivisions} is below the minimum of 2")));
        }
        Ok(Self { order, subdivisions, rule: GaussRule::new(order)? })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn subdivisions(&self) -> usize {
        self.subdivisions
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::new(8, 8).expect("default quadrature is valid")
    }
}

/// `R(u) = √(2 (E0 − q u)₊ / m)`.
#[inline]
pub fn velocity_radius(sp: &Species, u: f64) -> f64 {
    let d = sp.cutoff.e0 - sp.charge * u;
    if d > 0.0 {
        (2.0 * d / sp.mass).sqrt()
    } else {
        0.0
    }
}

/// `(R0⁺, R0⁻)` for a positive and a negative species.
pub fn global_velocity_radius(plus: &Species, minus: &Species) -> Result<(f64, f64)> {
    if !(plus.charge > 0.0 && minus.charge < 0.0) {
        return Err(config_err(format!(
            "global velocity radii need q+ > 0 > q-, got '{}' q = {} and '{}' q = {}",
            plus.label, plus.charge, minus.label, minus.charge
        )));
    }
    let rp = (2.0 * (plus.cutoff.e0 - plus.charge / minus.charge * minus.cutoff.e0).max(0.0) / plus.mass).sqrt();
    let rm = (2.0 * (minus.cutoff.e0 - minus.charge / plus.charge * plus.cutoff.e0).max(0.0) / minus.mass).sqrt();
    Ok((rp, rm))
}

/// Largest velocity radius a species can reach with a potential in `[c_low, c_high]`.
pub fn barrier_velocity_radius(sp: &Species, c_low: f64, c_high: f64) -> f64 {
    if sp.charge > 0.0 {
        velocity_radius(sp, c_low)
    } else {
        velocity_radius(sp, c_high)
    }
}

/// `S0 = ρ_L + √(ρ_L² + 2 (R0 |a0| m + |q| I0)/(b |q|))` with `ρ_L = R0 |A0| m/(b |q|)`,
/// using the field strength at the confinement center.
pub fn spatial_radius(sp: &Species, field: &FieldSpec, r0: f64) -> Result<f64> {
    spatial_radius_with_strength(sp, field, r0, field.strength_at(field.center()))
}

/// As [`spatial_radius`] with an explicit strength `b`, e.g. the mirror's `a(x₃)`.
pub fn spatial_radius_with_strength(sp: &Species, field: &FieldSpec, r0: f64, b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(config_err(format!("spatial radius needs a positive field strength, got {b}")));
    }
    let (big_a, small_a) = field.linear_form_norms();
    let q = sp.charge.abs();
    let larmor = r0 * big_a * sp.mass / (b * q);
    let under = larmor * larmor + 2.0 * (r0 * small_a * sp.mass + q * sp.cutoff.i0) / (b * q);
    Ok(larmor + under.max(0.0).sqrt())
}

/// The ansatz `ψ(E(v, u), I(x, v))` at a reduced point, `v` in the local frame.
#[inline]
pub fn phase_space_density(sp: &Species, field: &FieldSpec, p: ReducedPoint, u: f64, v: &[f64]) -> f64 {
    let (a, lin) = field.angular_split(gyro(sp, field), p);
    sp.cutoff.value(sp.energy(v, u), a + lin * v[1])
}

#[inline]
fn gyro(sp: &Species, field: &FieldSpec) -> f64 {
    field.c_light * sp.mass / sp.charge
}

/// The integrand of [`rho_hat`] at unit coordinates `(ξ, η)`, i.e. at
/// `v = R(u) (ξ, η)` with `ξ` the symmetry component and `η` the transverse speed.
pub fn rho_hat_integrand(sp: &Species, field: &FieldSpec, p: ReducedPoint, u: f64, xi: f64, eta: f64) -> f64 {
    let d = sp.cutoff.e0 - sp.charge * u;
    if !(d > 0.0) {
        return 0.0;
    }
    let r = (2.0 * d / sp.mass).sqrt();
    let (a, lin) = field.angular_split(gyro(sp, field), p);
    let c = &sp.cutoff;
    c.amplitude * smoothstep(d * (1.0 - xi * xi - eta * eta) / c.w_e) * c.integral_factor(a + lin * r * xi)
}

/// `∫ ψ(E(v, u), I(x, v)) dv`.
pub fn rho_hat(geom: &Geometry, field: &FieldSpec, sp: &Species, p: ReducedPoint, u: f64, quad: &QuadratureSpec) -> f64 {
    rho_hat_with_derivative(geom, field, sp, p, u, quad).0
}

/// `ρ̂(x, u)` together with `∂_u ρ̂(x, u) = q ∫ ∂_Eψ dv`.
pub fn rho_hat_with_derivative(
    geom: &Geometry,
    field: &FieldSpec,
    sp: &Species,
    p: ReducedPoint,
    u: f64,
    quad: &QuadratureSpec,
) -> (f64, f64) {
    let c = &sp.cutoff;
    if c.is_zero() {
        return (0.0, 0.0);
    }
    let d = c.e0 - sp.charge * u;
    if !(d > 0.0) {
        return (0.0, 0.0);
    }
    let r = (2.0 * d / sp.mass).sqrt();
    let (a, lin) = field.angular_split(gyro(sp, field), p);
    let slope = lin * r;
    if a - slope.abs() >= c.i0 {
        return (0.0, 0.0);
    }
    // Energy argument on the unit ball: t = (1 − ξ² − η²)/ratio.
    let ratio = c.w_e / d;

    let mut extra = [f64::NAN; 4];
    if ratio < 1.0 {
        let k = (1.0 - ratio).sqrt();
        extra[0] = -k;
        extra[1] = k;
    }
    if slope != 0.0 {
        extra[2] = (c.i0 - a) / slope;
        extra[3] = (c.i0 - c.w_i - a) / slope;
    }
    let breaks = break_list(-1.0, 1.0, quad.subdivisions, &extra);
    let rule = &quad.rule;

    match geom.velocity_dim() {
        3 => {
            // Transverse integrals in closed form:
            // ∫ s(t) 2πη dη = π ratio F(T), ∫ s'(t) 2πη dη = π ratio s(T), T = (1 − ξ²)/ratio.
            let (m0, m1) = rule.integrate_pieces2(&breaks, |xi| {
                let si = c.integral_factor(a + slope * xi);
                if si == 0.0 {
                    return (0.0, 0.0);
                }
                let t = (1.0 - xi * xi) / ratio;
                (si * smoothstep_antiderivative(t), si * smoothstep(t))
            });
            let r3 = r * r * r;
            let rho = c.amplitude * r3 * PI * ratio * m0;
            let drho = -sp.charge * c.amplitude * r3 * PI / d * m1;
            (rho, drho)
        }
        _ => {
            let (m0, m1) = rule.integrate_pieces2(&breaks, |xi| {
                let si = c.integral_factor(a + slope * xi);
                let top2 = 1.0 - xi * xi;
                if si == 0.0 || top2 <= 0.0 {
                    return (0.0, 0.0);
                }
                let top = top2.sqrt();
                let kink = if top2 > ratio { (top2 - ratio).sqrt() } else { f64::NAN };
                let inner = break_list(0.0, top, quad.subdivisions, &[kink]);
                let (h0, h1) = rule.integrate_pieces2(&inner, |eta| {
                    let t = (top2 - eta * eta) / ratio;
                    (smoothstep(t), smoothstep_slope(t))
                });
                (si * h0, si * h1)
            });
            // Both signs of the transverse component contribute.
            let rho = 2.0 * c.amplitude * r * r * m0;
            let drho = -2.0 * sp.charge * c.amplitude * r * r / c.w_e * m1;
            (rho, drho)
        }
    }
}

/// `∫₀^T s(t) dt` for the clamped smoothstep.
#[inline]
fn smoothstep_antiderivative(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        t - 0.5
    } else {
        t * t * t * (1.0 - 0.5 * t)
    }
}

#[inline]
fn smoothstep_slope(t: f64) -> f64 {
    crate::model::smoothstep_derivative(t)
}

/// Charge density source `4π Σ q ρ̂` and its `u`-derivative at one point.
pub fn charge_source(
    geom: &Geometry,
    field: &FieldSpec,
    species: &[Species],
    p: ReducedPoint,
    u: f64,
    quad: &QuadratureSpec,
) -> (f64, f64) {
    let (mut s, mut ds) = (0.0, 0.0);
    for sp in species {
        let (r, dr) = rho_hat_with_derivative(geom, field, sp, p, u, quad);
        s += 4.0 * PI * sp.charge * r;
        ds += 4.0 * PI * sp.charge * dr;
    }
    (s, ds)
}

/// `safety · max |∂_u 4π Σ q ρ̂(x, u)|` over the sample points and `u_samples`
/// equally spaced potentials in `u_range`.
pub fn rho_hat_derivative_bound(
    geom: &Geometry,
    field: &FieldSpec,
    species: &[Species],
    points: &[ReducedPoint],
    u_range: (f64, f64),
    quad: &QuadratureSpec,
    u_samples: usize,
    safety: f64,
) -> f64 {
    if species.iter().all(|s| s.cutoff.is_zero()) {
        return 0.0;
    }
    let (lo, hi) = u_range;
    let n = if hi > lo { u_samples.max(2) } else { 1 };
    let us: Vec<f64> = (0..n)
        .map(|k| if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 })
        .collect();
    use rayon::prelude::*;
    let worst = points
        .par_iter()
        .map(|&p| {
            us.iter()
                .map(|&u| charge_source(geom, field, species, p, u, quad).1.abs())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    safety * worst
}

/// One-dimensional trapezoid weights on `n` nodes with spacing `h`.
fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    let mut w = vec![h; n];
    w[0] *= 0.5;
    w[n - 1] *= 0.5;
    w
}

/// `q ∫ ρ ν` over the reduced domain with `ν = 2πr`, by the tensor trapezoid rule
/// (density taken as zero at exterior nodes). For the radial disc this is the
/// charge per unit length of the cylinder.
pub fn total_charge(grid: &Grid, rho: &ScalarField, sp: &Species) -> f64 {
    let l = grid.lattice;
    let wr = trapezoid_weights(l.nr, l.hr);
    let wz = trapezoid_weights(l.nz, l.hz);
    let mut acc = 0.0;
    for j in 0..l.nz {
        let mut row = 0.0;
        for i in 0..l.nr {
            let idx = l.index(i, j);
            if grid.kinds[idx].in_domain() {
                row += wr[i] * grid.geometry.volume_weight(grid.point(idx)) * rho.values[idx];
            }
        }
        acc += wz[j] * row;
    }
    sp.charge * acc
}

/// Largest distance from the confinement center over nodes with positive density.
pub fn measured_support(grid: &Grid, rho: &ScalarField, field: &FieldSpec) -> f64 {
    (0..grid.len())
        .filter(|&k| grid.kinds[k].in_domain() && rho.values[k] > 0.0)
        .map(|k| field.center_distance(grid.point(k)))
        .fold(0.0, f64::max)
}
