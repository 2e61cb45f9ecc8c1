use rayon::prelude::*;

use super::{monotone_solve, Configuration, Direction, EquilibriumSolution, SolverSettings};
use crate::elliptic::BoundaryData;
use crate::error::{config_err, Result};
use crate::model::{CutoffSpec, FieldSpec, Geometry, Species};

/// Two species sharing one base profile, weighted by `λ` and `1 − λ`.
#[derive(Debug, Clone)]
pub struct FamilyTemplate {
    pub geometry: Geometry,
    pub field: FieldSpec,
    pub base: CutoffSpec,
    /// `(label, charge, mass)` of the positive species.
    pub plus: (String, f64, f64),
    /// `(label, charge, mass)` of the negative species.
    pub minus: (String, f64, f64),
    pub boundary: BoundaryData,
    pub settings: SolverSettings,
}

impl FamilyTemplate {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if !(self.base.e0 > 0.0 && self.base.i0 > 0.0) {
            return Err(config_err("family base profile needs E0 > 0 and I0 > 0"));
        }
        if !(self.plus.1 > 0.0 && self.minus.1 < 0.0) {
            return Err(config_err(format!(
                "family needs q+ > 0 > q-, got '{}' q = {} and '{}' q = {}",
                self.plus.0, self.plus.1, self.minus.0, self.minus.1
            )));
        }
        Ok(())
    }

    /// The species pair of the family member at `lambda`.
    pub fn species(&self, lambda: f64) -> Result<Vec<Species>> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(config_err(format!("family parameter {lambda} is outside [0, 1]")));
        }
        self.validate()?;
        let m = self.geometry.velocity_dim() as i32;
        let member = |(label, q, mass): &(String, f64, f64), weight: f64| {
            let qa = q.abs();
            let cutoff = self.base.rescale_energy(mass / (qa * qa), weight * mass.powi(m) / qa.powi(m + 1));
            Species::new(label.clone(), *q, *mass, cutoff)
        };
        Ok(vec![member(&self.plus, lambda)?, member(&self.minus, 1.0 - lambda)?])
    }

    pub fn configuration(&self, lambda: f64) -> Result<Configuration> {
        Ok(Configuration {
            geometry: self.geometry,
            field: self.field,
            species: self.species(lambda)?,
            boundary: self.boundary.clone(),
            settings: self.settings.clone(),
        })
    }

    /// `((q−/m−) E0, (q+/m+) E0)`, the potential bounds of every family member.
    pub fn potential_bounds(&self) -> (f64, f64) {
        (self.minus.1 / self.minus.2 * self.base.e0, self.plus.1 / self.plus.2 * self.base.e0)
    }
}

/// Maximal solution of the family member at `lambda`.
pub fn family_solve(template: &FamilyTemplate, lambda: f64) -> Result<EquilibriumSolution> {
    monotone_solve(&template.configuration(lambda)?, Direction::Maximal)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub q_plus: f64,
    pub q_minus: f64,
    pub phi_sup: f64,
}

/// Family solves at each `λ` (strictly increasing, inside `[0, 1]`), in parallel.
pub fn sweep_lambda(template: &FamilyTemplate, lambdas: &[f64]) -> Result<Vec<SweepRow>> {
    if lambdas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(config_err("sweep values must be strictly increasing"));
    }
    if let Some(bad) = lambdas.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(config_err(format!("sweep value {bad} is outside [0, 1]")));
    }
    lambdas
        .par_iter()
        .map(|&lambda| {
            let sol = family_solve(template, lambda)?;
            Ok(SweepRow {
                lambda,
                q_plus: sol.species[0].charge,
                q_minus: sol.species[1].charge,
                phi_sup: sol.potential.max_abs(),
            })
        })
        .collect()
}

/// Largest change of either charge between consecutive sweep rows.
pub fn max_charge_jump(rows: &[SweepRow]) -> f64 {
    rows.windows(2)
        .map(|w| (w[1].q_plus - w[0].q_plus).abs().max((w[1].q_minus - w[0].q_minus).abs()))
        .fold(0.0, f64::max)
}

/// Max consecutive charge jump on `[0, 1]` with `n` and `2n` steps, and their ratio.
pub fn continuity_probe(template: &FamilyTemplate, n: usize) -> Result<(f64, f64, f64)> {
    let grid = |steps: usize| (0..=steps).map(|k| k as f64 / steps as f64).collect::<Vec<_>>();
    let coarse = sweep_lambda(template, &grid(n))?;
    let fine = sweep_lambda(template, &grid(2 * n))?;
    let (jc, jf) = (max_charge_jump(&coarse), max_charge_jump(&fine));
    Ok((jc, jf, jc / jf))
}
