//! Monotone iteration for the semilinear problem `−L φ = 4π Σ q ρ̂(x, φ)`,
//! the charge-ratio family and the field-scaling transform.

mod design;
mod family;
mod monotone;
mod scaling;

use std::sync::Arc;

use crate::density::QuadratureSpec;
use crate::elliptic::{BoundaryData, Grid, ScalarField};
use crate::error::{config_err, Error, Result};
use crate::model::{check_unique_labels, FieldSpec, Geometry, ReducedPoint, Species};

pub use design::{family_cutoff_for_support, target_charge_ratio, RatioTarget};
pub use family::{continuity_probe, family_solve, max_charge_jump, sweep_lambda, FamilyTemplate, SweepRow};
pub use monotone::monotone_solve;
pub use scaling::{scale_configuration, scale_solution, ScaleReport};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub nr: usize,
    pub nz: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub k_safety: f64,
    pub quadrature: QuadratureSpec,
    /// Potentials sampled in `[c_low, c_high]` when bounding `∂_u ρ̂`.
    pub k_u_samples: usize,
    /// Cap on the number of grid nodes sampled when bounding `∂_u ρ̂`.
    pub k_max_points: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            nr: 65,
            nz: 65,
            tol: 1e-8,
            max_iter: 500,
            k_safety: 1.5,
            quadrature: QuadratureSpec::default(),
            k_u_samples: 17,
            k_max_points: 4096,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(config_err("solver tolerance must be positive"));
        }
        if self.max_iter == 0 {
            return Err(config_err("max_iter must be at least 1"));
        }
        if !(self.k_safety.is_finite() && self.k_safety >= 1.0) {
            return Err(config_err("K safety factor must be at least 1"));
        }
        if self.k_u_samples < 2 || self.k_max_points == 0 {
            return Err(config_err("K sampling needs at least 2 potentials and 1 point"));
        }
        Ok(())
    }
}

/// A complete problem: domain, field, species, boundary data and solver settings.
#[derive(Debug, Clone)]
pub struct Configuration {
    pub geometry: Geometry,
    pub field: FieldSpec,
    pub species: Vec<Species>,
    pub boundary: BoundaryData,
    pub settings: SolverSettings,
}

impl Configuration {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.field.validate(&self.geometry)?;
        if self.species.is_empty() {
            return Err(config_err("at least one species is required"));
        }
        for sp in &self.species {
            sp.validate()?;
        }
        check_unique_labels(&self.species)?;
        self.settings.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barriers {
    pub c_low: f64,
    pub c_high: f64,
}

/// `c_low = min{min g, E0/q : q < 0}`, `c_high = max{max g, E0/q : q > 0}`.
pub fn constant_barriers(species: &[Species], g_range: (f64, f64)) -> Barriers {
    let mut c_low = g_range.0;
    let mut c_high = g_range.1;
    for sp in species {
        let c = sp.cutoff.e0 / sp.charge;
        if sp.charge > 0.0 {
            c_high = c_high.max(c);
        } else {
            c_low = c_low.min(c);
        }
    }
    Barriers { c_low, c_high }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Descent from the supersolution `c_high`.
    Maximal,
    /// Ascent from the subsolution `c_low`.
    Minimal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub step: usize,
    pub delta: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesReport {
    pub label: String,
    pub charge: f64,
    /// Velocity radius bound over the barrier interval.
    pub r0: f64,
    /// Closed-form spatial support radius.
    pub s0: f64,
    /// Largest center distance over grid nodes with positive density.
    pub measured_support: f64,
}

#[derive(Debug, Clone)]
pub struct EquilibriumSolution {
    pub config: Configuration,
    pub grid: Arc<Grid>,
    pub potential: ScalarField,
    pub densities: Vec<ScalarField>,
    pub species: Vec<SpeciesReport>,
    pub barriers: Barriers,
    pub direction: Direction,
    pub k_shift: f64,
    pub log: Vec<IterationRecord>,
    pub converged: bool,
}

impl EquilibriumSolution {
    pub fn iterations(&self) -> usize {
        self.log.len()
    }

    pub fn final_residual(&self) -> f64 {
        self.log.last().map_or(0.0, |r| r.residual)
    }

    pub fn charge(&self, label: &str) -> Option<f64> {
        self.species.iter().find(|s| s.label == label).map(|s| s.charge)
    }

    /// Potential and its gradient at a reduced point.
    pub fn potential_at(&self, p: ReducedPoint) -> Result<(f64, [f64; 2])> {
        if !self.config.geometry.contains(p) {
            return Err(Error::OutsideDomain { r: p.r, z: p.z });
        }
        self.potential.interpolate(p)
    }
}

/// `ψ(E(v, φ(x)), I(x, v))` for species `index` of a solved configuration.
pub fn eval_f(sol: &EquilibriumSolution, index: usize, p: ReducedPoint, v: &[f64]) -> Result<f64> {
    let sp = sol
        .config
        .species
        .get(index)
        .ok_or_else(|| config_err(format!("species index {index} out of range")))?;
    let (u, _) = sol.potential_at(p)?;
    Ok(crate::density::phase_space_density(sp, &sol.config.field, p, u, v))
}
