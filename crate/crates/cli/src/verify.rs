//! The `verify` battery: field divergence, operator convergence, barrier,
//! uniqueness and support checks on one configuration.

use serde_json::{json, Value};
use vpconfine::density::{spatial_radius_with_strength, velocity_radius};
use vpconfine::elliptic::mms_convergence;
use vpconfine::equilibrium::{eval_f, monotone_solve, Direction, EquilibriumSolution};
use vpconfine::model::{
    check_divergence_free, field::reduced_divergence_residual, field::sample_lattice, CrossSection, Geometry,
    ReducedPoint,
};
use vpconfine::Result;

use crate::config::LoadedConfig;

pub const DIVERGENCE_TOL: f64 = 1e-12;
pub const BARRIER_SLACK: f64 = 1e-8;
pub const SUPPORT_SAMPLES: usize = 10_000;

/// Element `index` of the Halton sequence in base `base`.
pub fn halton(mut index: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut x = 0.0;
    while index > 0 {
        f /= base as f64;
        x += f * (index % base) as f64;
        index /= base;
    }
    x
}

const PRIMES: [usize; 6] = [2, 3, 5, 7, 11, 13];

/// Field-scale-relative divergence residual of the configured field, its
/// analytic divergence, and the residual of a deliberately non-solenoidal field.
pub fn divergence_checks(cfg: &LoadedConfig) -> (f64, f64, f64) {
    let pts = sample_lattice(&cfg.geometry, 33);
    let scale = pts.iter().map(|&p| cfg.field.strength_at(p)).fold(0.0, f64::max).max(1.0);
    let numeric = check_divergence_free(&cfg.geometry, &cfg.field, 33) / scale;
    let symbolic = pts.iter().map(|&p| cfg.field.divergence_symbolic(p).abs()).fold(0.0, f64::max);
    let (r0, r1, z0, z1) = cfg.geometry.bounds();
    let step = 1e-3 * (r1 - r0).max(z1 - z0);
    // B = (r, 0, z) has reduced divergence 3r.
    let adversarial = reduced_divergence_residual(|p: ReducedPoint| [p.r, 0.0, p.z], &pts, step);
    (numeric, symbolic, adversarial)
}

/// Expected manufactured-solution order for the geometry.
pub fn mms_threshold(geom: &Geometry) -> f64 {
    match geom {
        Geometry::ToroidalCrossSection { shape: CrossSection::Disc { .. } } => 1.5,
        _ => 1.9,
    }
}

pub struct SupportCheck {
    /// `(label, measured support, S0, h)` per species.
    pub radii: Vec<(String, f64, f64, f64)>,
    /// Species-samples that fell outside the confinement region.
    pub outside: usize,
    /// Of those, the ones where the density was nonzero.
    pub violations: usize,
}

impl SupportCheck {
    pub fn radii_ok(&self) -> bool {
        self.radii.iter().all(|(_, m, s0, h)| *m <= s0 + h)
    }
}

/// Support checks on a solved configuration, with `samples` quasi-random
/// spatial points; velocities cover the ball of radius `2 R0`.
pub fn support_checks(sol: &EquilibriumSolution, samples: usize) -> Result<SupportCheck> {
    let geom = &sol.config.geometry;
    let field = &sol.config.field;
    let l = sol.grid.lattice;
    let h = if geom.spatial_dim() == 1 { l.hr } else { l.hr.max(l.hz) };
    let radii: Vec<_> = sol
        .species
        .iter()
        .map(|s| (s.label.clone(), s.measured_support, s.s0, h))
        .collect();

    let (r0, r1, z0, z1) = geom.bounds();
    let vdim = geom.velocity_dim();
    let mut violations = 0;
    let mut outside = 0;
    let mut k = 1;
    let mut drawn = 0;
    while drawn < samples {
        let p = ReducedPoint::new(r0 + (r1 - r0) * halton(k, 2), if geom.spatial_dim() == 1 { 0.0 } else { z0 + (z1 - z0) * halton(k, 3) });
        k += 1;
        if !geom.contains(p) {
            continue;
        }
        let (u, _) = sol.potential_at(p)?;
        for (idx, (sp, rep)) in sol.config.species.iter().zip(&sol.species).enumerate() {
            let outside_space = field.center_distance(p) > rep.s0;
            let ru = velocity_radius(sp, u);
            // Velocity direction from the remaining Halton coordinates, modulus up to 2 R0.
            let mut v: Vec<f64> = (0..vdim).map(|d| 2.0 * halton(k, PRIMES[2 + d]) - 1.0).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
            let modulus = 2.0 * rep.r0.max(ru) * halton(k, PRIMES[5]);
            v.iter_mut().for_each(|x| *x *= modulus / norm);
            let speed = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if outside_space || speed > ru {
                outside += 1;
                if eval_f(sol, idx, p, &v)? != 0.0 {
                    violations += 1;
                }
            }
        }
        drawn += 1;
    }
    Ok(SupportCheck { radii, outside, violations })
}

/// Runs the battery. Returns the report and the names of failed checks.
pub fn run(cfg: &LoadedConfig) -> Result<(Value, Vec<String>)> {
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
        ok
    };

    let (numeric, symbolic, adversarial) = divergence_checks(cfg);
    let divergence = json!({
        "numeric_relative": numeric,
        "symbolic": symbolic,
        "pass": check("divergence", numeric < DIVERGENCE_TOL && symbolic < DIVERGENCE_TOL),
        "adversarial_residual": adversarial,
        "adversarial_flagged": check("adversarial_divergence", adversarial > DIVERGENCE_TOL),
    });

    let order = mms_convergence(&cfg.geometry, &[17, 33, 65])?;
    let threshold = mms_threshold(&cfg.geometry);
    let mms = json!({ "order": order, "threshold": threshold, "pass": check("mms_order", order >= threshold) });

    let problem = cfg.configuration(None).map_err(|e| vpconfine::Error::Config(e.to_string()))?;
    let max = monotone_solve(&problem, Direction::Maximal)?;
    let min = monotone_solve(&problem, Direction::Minimal)?;
    let b = max.barriers;
    let within = |s: &EquilibriumSolution| {
        s.potential
            .values
            .iter()
            .zip(&s.grid.kinds)
            .filter(|(_, k)| k.in_domain())
            .all(|(&v, _)| v >= b.c_low - BARRIER_SLACK && v <= b.c_high + BARRIER_SLACK)
    };
    let barriers = json!({
        "c_low": b.c_low,
        "c_high": b.c_high,
        "pass": check("barriers", within(&max) && within(&min)),
    });
    let gap = max.potential.max_abs_diff(&min.potential);
    let tol = problem.settings.tol;
    let uniqueness = json!({
        "max_min_gap": gap,
        "limit": 10.0 * tol,
        "pass": check("max_min_agreement", gap <= 10.0 * tol),
    });
    let self_consistency = json!({
        "iterations": max.iterations(),
        "final_residual": max.final_residual(),
        "pass": check("self_consistency", max.converged && max.final_residual() < tol),
    });

    let sc = support_checks(&max, SUPPORT_SAMPLES)?;
    let strength = cfg.field.min_strength(&cfg.geometry);
    let closed: Vec<f64> = problem
        .species
        .iter()
        .zip(&max.species)
        .map(|(sp, rep)| spatial_radius_with_strength(sp, &cfg.field, rep.r0, strength))
        .collect::<Result<_>>()?;
    let support = json!({
        "species": sc.radii.iter().zip(&closed).map(|((l, m, s0, h), c)| json!({
            "label": l, "measured": m, "S0": s0, "S0_closed_form": c, "h": h
        })).collect::<Vec<_>>(),
        "samples": SUPPORT_SAMPLES,
        "samples_outside": sc.outside,
        "nonzero_outside": sc.violations,
        "pass": check("support", sc.radii_ok() && sc.violations == 0),
    });

    let report = json!({
        "divergence": divergence,
        "mms": mms,
        "barriers": barriers,
        "uniqueness": uniqueness,
        "self_consistency": self_consistency,
        "support": support,
        "failures": failures,
    });
    Ok((report, failures))
}
