//! The two conserved quantities `E` and `I` of the characteristic flow.

use super::field::FieldSpec;
use super::geometry::ReducedPoint;
use super::species::Species;

/// Velocity index of the component along the symmetry direction.
pub const SYMMETRY_COMPONENT: usize = 1;

/// `E = ½ m |v|² + q u`.
#[inline]
pub fn energy_integral(species: &Species, v: &[f64], u: f64) -> f64 {
    species.energy(v, u)
}

/// Angular integral at a reduced point. `v` is given in the local frame
/// `(e_r, e_θ, e_z)` (or `(e_r, e_θ)` for the radial disc).
#[inline]
pub fn angular_integral(species: &Species, field: &FieldSpec, p: ReducedPoint, v: &[f64]) -> f64 {
    let (spatial, coef) = field.angular_split(species.gyro_factor(field.c_light), p);
    spatial + coef * v[SYMMETRY_COMPONENT]
}

/// Angular integral evaluated from Cartesian position and velocity.
pub fn angular_integral_cartesian(species: &Species, field: &FieldSpec, x: [f64; 3], v: [f64; 3]) -> f64 {
    let r = x[0].hypot(x[1]);
    let v_theta = if r > 0.0 { (x[0] * v[1] - x[1] * v[0]) / r } else { 0.0 };
    let v_r = if r > 0.0 { (x[0] * v[0] + x[1] * v[1]) / r } else { 0.0 };
    angular_integral(species, field, ReducedPoint::new(r, x[2]), &[v_r, v_theta, v[2]])
}
