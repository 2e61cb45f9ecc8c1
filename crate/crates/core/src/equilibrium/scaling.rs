use std::sync::Arc;

use super::{monotone_solve, Configuration, EquilibriumSolution};
use crate::elliptic::BoundaryData;
use crate::error::{config_err, Result};

/// Field `λ b`, profiles `λ^(2−m) ψ(λ⁻² E, λ⁻¹ I)`, boundary data `λ² g`.
/// The tolerance is scaled by `λ²` so both iterations stop at the same step.
pub fn scale_configuration(config: &Configuration, lambda: f64) -> Result<Configuration> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(config_err(format!("scaling factor must be positive, got {lambda}")));
    }
    let l2 = lambda * lambda;
    let m = config.geometry.velocity_dim();
    let mut scaled = config.clone();
    scaled.field = config.field.scaled(lambda);
    for sp in &mut scaled.species {
        sp.cutoff = sp.cutoff.field_scaled(lambda, m);
    }
    scaled.boundary = match &config.boundary {
        BoundaryData::Constant(c) => BoundaryData::Constant(l2 * c),
        BoundaryData::Profile(f) => {
            let f = f.clone();
            BoundaryData::Profile(Arc::new(move |p| l2 * f(p)))
        }
    };
    scaled.settings.tol = config.settings.tol * l2;
    Ok(scaled)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleReport {
    pub lambda: f64,
    /// `max |φ_λ − λ² φ|` over all nodes.
    pub phi_deviation: f64,
    /// `‖φ_λ‖∞`.
    pub phi_scaled_norm: f64,
    /// Per species: `(label, Q, Q_λ, |Q_λ / Q − λ²|)`.
    pub charges: Vec<(String, f64, f64, f64)>,
    /// Per species: `(label, S0, S0 after scaling)`.
    pub spatial_radii: Vec<(String, f64, f64)>,
}

impl ScaleReport {
    pub fn max_charge_error(&self) -> f64 {
        self.charges.iter().map(|c| c.3).fold(0.0, f64::max)
    }

    pub fn relative_phi_deviation(&self) -> f64 {
        if self.phi_scaled_norm == 0.0 {
            self.phi_deviation
        } else {
            self.phi_deviation / self.phi_scaled_norm
        }
    }

    pub fn max_s0_change(&self) -> f64 {
        self.spatial_radii.iter().map(|s| (s.2 - s.1).abs()).fold(0.0, f64::max)
    }
}

/// Solves the scaled configuration and compares it with `λ² φ` and `λ² Q`.
pub fn scale_solution(base: &EquilibriumSolution, lambda: f64) -> Result<(Configuration, EquilibriumSolution, ScaleReport)> {
    if !base.converged {
        return Err(config_err("base solution has not converged"));
    }
    let config = scale_configuration(&base.config, lambda)?;
    let scaled = monotone_solve(&config, base.direction)?;
    let l2 = lambda * lambda;
    let phi_deviation = scaled
        .potential
        .values
        .iter()
        .zip(&base.potential.values)
        .map(|(a, b)| (a - l2 * b).abs())
        .fold(0.0, f64::max);
    let charges = base
        .species
        .iter()
        .zip(&scaled.species)
        .map(|(b, s)| {
            let err = if b.charge == 0.0 { s.charge.abs() } else { (s.charge / b.charge - l2).abs() };
            (b.label.clone(), b.charge, s.charge, err)
        })
        .collect();
    let spatial_radii = base
        .species
        .iter()
        .zip(&scaled.species)
        .map(|(b, s)| (b.label.clone(), b.s0, s.s0))
        .collect();
    let report = ScaleReport {
        lambda,
        phi_deviation,
        phi_scaled_norm: scaled.potential.max_abs(),
        charges,
        spatial_radii,
    };
    Ok((config, scaled, report))
}
