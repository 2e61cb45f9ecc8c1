//! Choosing family parameters for prescribed support and charge ratio.

use std::cell::Cell;

use super::{constant_barriers, family_solve, EquilibriumSolution, FamilyTemplate};
use crate::density::{barrier_velocity_radius, spatial_radius_with_strength};
use crate::elliptic::build_grid;
use crate::error::{config_err, Error, Result};
use crate::model::CutoffSpec;

/// Largest closed-form spatial radius over the family species for base profile `base`.
fn family_support(template: &FamilyTemplate, base: CutoffSpec) -> Result<f64> {
    let mut t = template.clone();
    t.base = base;
    let species = t.species(0.5)?;
    let grid = build_grid(&t.geometry, t.settings.nr, t.settings.nz)?;
    let b = constant_barriers(&species, t.boundary.range(&grid));
    let strength = t.field.min_strength(&t.geometry);
    species.iter().try_fold(0.0f64, |acc, sp| {
        let r0 = barrier_velocity_radius(sp, b.c_low, b.c_high);
        Ok(acc.max(spatial_radius_with_strength(sp, &t.field, r0, strength)?))
    })
}

/// Base profile with the given `i0` whose energy cutoff makes the largest
/// closed-form support radius of the family equal to `delta`. Widths and
/// amplitude are taken from the template.
pub fn family_cutoff_for_support(template: &FamilyTemplate, delta: f64, i0: f64) -> Result<CutoffSpec> {
    if !(delta > 0.0 && i0 > 0.0) {
        return Err(config_err("support target and I0 must be positive"));
    }
    let with_e0 = |e0: f64| CutoffSpec { e0, i0, ..template.base };
    let floor = family_support(template, with_e0(1e-300))?;
    if floor >= delta {
        return Err(config_err(format!(
            "I0 = {i0} alone gives support radius {floor}, above the target {delta}"
        )));
    }
    let mut hi = template.base.e0.max(1e-6);
    while family_support(template, with_e0(hi))? < delta {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(config_err("no energy cutoff reaches the support target"));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if family_support(template, with_e0(mid))? <= delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // `lo` keeps the support at or below the target.
    Ok(with_e0(lo))
}

#[derive(Debug, Clone)]
pub struct RatioTarget {
    pub lambda: f64,
    pub ratio: f64,
    pub solves: usize,
    pub solution: EquilibriumSolution,
}

/// Family member whose charges satisfy `Q⁺ / |Q⁻| = ratio` to within `tol`.
///
/// Root finding runs on `ln(Q⁺/|Q⁻|)` as a function of `logit λ`, which is
/// close to linear; Illinois-modified regula falsi keeps the bracket.
pub fn target_charge_ratio(template: &FamilyTemplate, ratio: f64, tol: f64, max_solves: usize) -> Result<RatioTarget> {
    if !(ratio > 0.0 && tol > 0.0) {
        return Err(config_err("charge ratio and tolerance must be positive"));
    }
    let solves = Cell::new(0usize);
    let eval = |t: f64| -> Result<(f64, RatioTarget)> {
        let lambda = 1.0 / (1.0 + (-t).exp());
        let solution = family_solve(template, lambda)?;
        solves.set(solves.get() + 1);
        let r = solution.species[0].charge / solution.species[1].charge.abs();
        Ok((r.ln() - ratio.ln(), RatioTarget { lambda, ratio: r, solves: solves.get(), solution }))
    };
    let done = |t: &RatioTarget| (t.ratio - ratio).abs() < tol;

    let (mut a, mut b) = (0.0f64, 0.0f64);
    let (mut fa, first) = eval(a)?;
    if done(&first) {
        return Ok(first);
    }
    let step = if fa < 0.0 { 1.0 } else { -1.0 };
    let mut fb;
    loop {
        b += step;
        let (f, hit) = eval(b)?;
        if done(&hit) {
            return Ok(hit);
        }
        fb = f;
        if fb.signum() != fa.signum() {
            break;
        }
        a = b;
        fa = fb;
        if b.abs() > 30.0 {
            return Err(config_err("charge ratio target is not bracketed by the family"));
        }
    }
    let mut side = 0i32;
    while solves.get() < max_solves {
        let t = (a * fb - b * fa) / (fb - fa);
        let (ft, hit) = eval(t)?;
        if done(&hit) {
            return Ok(hit);
        }
        if ft.signum() == fb.signum() {
            b = t;
            fb = ft;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = t;
            fa = ft;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::NonConvergence {
        iterations: solves.get(),
        last_delta: (b - a).abs(),
        last_residual: fa.abs().min(fb.abs()),
        history: Vec::new(),
    })
}
