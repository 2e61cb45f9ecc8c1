use std::sync::Arc;

use rayon::prelude::*;

use super::{
    constant_barriers, Barriers, Configuration, Direction, EquilibriumSolution, IterationRecord, SpeciesReport,
};
use crate::density::{
    barrier_velocity_radius, charge_source, measured_support, rho_hat, rho_hat_derivative_bound,
    spatial_radius_with_strength, total_charge,
};
use crate::elliptic::{assemble_operator, build_grid, Grid, ScalarField};
use crate::error::{Error, Result};
use crate::model::ReducedPoint;

/// Shifted monotone iteration `φ ← (−L + K)⁻¹ (4π Σ q ρ̂(·, clamp φ) + K φ)`
/// started from the constant barrier selected by `direction`.
///
/// Stops once successive iterates differ by less than `tol` and the
/// discrete equation residual is below `tol`.
pub fn monotone_solve(config: &Configuration, direction: Direction) -> Result<EquilibriumSolution> {
    config.validate()?;
    let set = &config.settings;
    let grid = Arc::new(build_grid(&config.geometry, set.nr, set.nz)?);
    let barriers = constant_barriers(&config.species, config.boundary.range(&grid));
    let unknowns: Vec<usize> = (0..grid.len()).filter(|&k| grid.kinds[k].is_unknown()).collect();
    let tol = set.tol;

    if config.species.iter().all(|s| s.cutoff.is_zero()) {
        let op = assemble_operator(grid.clone(), 0.0);
        let phi = op.factor()?.solve(&ScalarField::zeros(grid.lattice), &config.boundary)?;
        let residual = max_at(&op.apply(&phi.values, &config.boundary), &unknowns);
        let log = vec![IterationRecord { step: 1, delta: 0.0, residual }];
        return Ok(finish(config, grid, phi, barriers, direction, 0.0, log));
    }

    let k = rho_hat_derivative_bound(
        &config.geometry,
        &config.field,
        &config.species,
        &sample_points(&grid, set.k_max_points),
        (barriers.c_low, barriers.c_high),
        &set.quadrature,
        set.k_u_samples,
        set.k_safety,
    );
    let op = assemble_operator(grid.clone(), k);
    let solver = op.factor()?;

    let start = match direction {
        Direction::Maximal => barriers.c_high,
        Direction::Minimal => barriers.c_low,
    };
    let mut phi = ScalarField::constant(grid.lattice, start);
    let mut source = sources(config, &grid, &unknowns, &phi, barriers);
    let mut log: Vec<IterationRecord> = Vec::new();

    for step in 1..=set.max_iter {
        let mut rhs = ScalarField::zeros(grid.lattice);
        for &i in &unknowns {
            rhs.values[i] = source[i] + k * phi.values[i];
        }
        let next = solver.solve(&rhs, &config.boundary)?;

        let mut delta = 0.0f64;
        for &i in &unknowns {
            let change = next.values[i] - phi.values[i];
            let against = match direction {
                Direction::Maximal => change,
                Direction::Minimal => -change,
            };
            if against > 10.0 * tol {
                return Err(Error::Monotonicity { step, node: i, excess: against });
            }
            delta = delta.max(change.abs());
        }

        source = sources(config, &grid, &unknowns, &next, barriers);
        let applied = op.apply(&next.values, &config.boundary);
        let residual = unknowns
            .iter()
            .map(|&i| (applied[i] - k * next.values[i] - source[i]).abs())
            .fold(0.0, f64::max);
        phi = next;
        log.push(IterationRecord { step, delta, residual });
        if delta < tol && residual < tol {
            return Ok(finish(config, grid, phi, barriers, direction, k, log));
        }
    }

    let last = log.last().copied().unwrap_or(IterationRecord { step: 0, delta: f64::NAN, residual: f64::NAN });
    Err(Error::NonConvergence {
        iterations: set.max_iter,
        last_delta: last.delta,
        last_residual: last.residual,
        history: log.iter().map(|r| (r.delta, r.residual)).collect(),
    })
}

fn max_at(values: &[f64], idx: &[usize]) -> f64 {
    idx.iter().map(|&i| values[i].abs()).fold(0.0, f64::max)
}

/// `4π Σ q ρ̂(x, clamp(φ(x)))` at the unknown nodes; zero elsewhere.
fn sources(config: &Configuration, grid: &Grid, unknowns: &[usize], phi: &ScalarField, b: Barriers) -> Vec<f64> {
    let vals: Vec<f64> = unknowns
        .par_iter()
        .map(|&i| {
            let u = phi.values[i].clamp(b.c_low, b.c_high);
            charge_source(&config.geometry, &config.field, &config.species, grid.point(i), u, &config.settings.quadrature).0
        })
        .collect();
    let mut out = vec![0.0; grid.len()];
    for (&i, v) in unknowns.iter().zip(vals) {
        out[i] = v;
    }
    out
}

/// In-domain nodes on a sub-lattice with at most about `max_points` nodes.
fn sample_points(grid: &Grid, max_points: usize) -> Vec<ReducedPoint> {
    let l = grid.lattice;
    let count = (0..grid.len()).filter(|&k| grid.kinds[k].in_domain()).count();
    let stride = if count <= max_points {
        1
    } else {
        let dim = if l.nz > 1 { 2.0 } else { 1.0 };
        ((count as f64 / max_points as f64).powf(1.0 / dim)).ceil() as usize
    };
    let mut pts = Vec::new();
    for j in (0..l.nz).step_by(stride) {
        for i in (0..l.nr).step_by(stride) {
            let k = l.index(i, j);
            if grid.kinds[k].in_domain() {
                pts.push(grid.point(k));
            }
        }
    }
    pts
}

fn finish(
    config: &Configuration,
    grid: Arc<Grid>,
    phi: ScalarField,
    barriers: Barriers,
    direction: Direction,
    k: f64,
    log: Vec<IterationRecord>,
) -> EquilibriumSolution {
    let in_domain: Vec<usize> = (0..grid.len()).filter(|&i| grid.kinds[i].in_domain()).collect();
    let strength = config.field.min_strength(&config.geometry);
    let mut densities = Vec::with_capacity(config.species.len());
    let mut reports = Vec::with_capacity(config.species.len());
    for sp in &config.species {
        let vals: Vec<f64> = in_domain
            .par_iter()
            .map(|&i| {
                let u = phi.values[i].clamp(barriers.c_low, barriers.c_high);
                rho_hat(&config.geometry, &config.field, sp, grid.point(i), u, &config.settings.quadrature)
            })
            .collect();
        let mut rho = ScalarField::zeros(grid.lattice);
        for (&i, v) in in_domain.iter().zip(vals) {
            rho.values[i] = v;
        }
        let r0 = barrier_velocity_radius(sp, barriers.c_low, barriers.c_high);
        // Validation guarantees a positive strength.
        let s0 = spatial_radius_with_strength(sp, &config.field, r0, strength).unwrap_or(f64::NAN);
        reports.push(SpeciesReport {
            label: sp.label.clone(),
            charge: total_charge(&grid, &rho, sp),
            r0,
            s0,
            measured_support: measured_support(&grid, &rho, &config.field),
        });
        densities.push(rho);
    }
    EquilibriumSolution {
        config: config.clone(),
        grid,
        potential: phi,
        densities,
        species: reports,
        barriers,
        direction,
        k_shift: k,
        log,
        converged: true,
    }
}
