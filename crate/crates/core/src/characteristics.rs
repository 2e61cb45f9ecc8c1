//! Characteristic (particle orbit) integration and first-integral drift.
//!
//! State layouts by geometry:
//! - toroidal cross-section: `(r, z, w1, w2, w3)` with `w` in the frame `(e_r, e_θ, e_z)`;
//! - radial disc: `(x1, x2, v1, v2)` in the plane transverse to the axis;
//! - mirror cylinder: `(x1, x2, x3, v1, v2, v3)`.

use crate::elliptic::ScalarField;
use crate::error::{config_err, Error, Result};
use crate::model::{angular_integral, angular_integral_cartesian, FieldSpec, Geometry, ReducedPoint, Species};

/// Potential driving the orbit.
#[derive(Debug, Clone, Copy)]
pub enum Potential<'a> {
    Zero,
    Grid(&'a ScalarField),
}

impl Potential<'_> {
    fn eval(&self, p: ReducedPoint) -> Option<(f64, [f64; 2])> {
        match self {
            Potential::Zero => Some((0.0, [0.0, 0.0])),
            Potential::Grid(f) => f.interpolate(p).ok(),
        }
    }
}

/// Bilinear value and interpolated centered-difference gradient `(∂_r, ∂_z)`.
pub fn interpolate_potential(field: &ScalarField, p: ReducedPoint) -> Result<(f64, [f64; 2])> {
    field.interpolate(p)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExitEvent {
    Completed,
    LeftDomain { t: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    pub state: Vec<f64>,
    pub energy: f64,
    pub integral: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceResult {
    pub samples: Vec<TraceSample>,
    pub energy0: f64,
    pub integral0: f64,
    /// `max |E(t) − E(0)| / (|E(0)| + 1)`.
    pub energy_drift: f64,
    /// `max |I(t) − I(0)| / (|I(0)| + 1)`.
    pub integral_drift: f64,
    /// Largest distance from the confinement center along the orbit.
    pub max_center_distance: f64,
    pub exit: ExitEvent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    pub t_max: f64,
    pub dt: f64,
    /// Keep every `record_every`-th step in the samples (the drift uses every step).
    pub record_every: usize,
}

struct System<'a> {
    geom: Geometry,
    field: FieldSpec,
    sp: &'a Species,
    potential: Potential<'a>,
}

impl System<'_> {
    fn dim(&self) -> usize {
        match self.geom {
            Geometry::ToroidalCrossSection { .. } => 5,
            Geometry::RadialDisc { .. } => 4,
            Geometry::MirrorCylinder { .. } => 6,
        }
    }

    fn reduced(&self, s: &[f64]) -> ReducedPoint {
        match self.geom {
            Geometry::ToroidalCrossSection { .. } => ReducedPoint::new(s[0], s[1]),
            Geometry::RadialDisc { .. } => ReducedPoint::new(s[0].hypot(s[1]), 0.0),
            Geometry::MirrorCylinder { .. } => ReducedPoint::new(s[0].hypot(s[1]), s[2]),
        }
    }

    fn rhs(&self, s: &[f64], out: &mut [f64]) -> bool {
        let p = self.reduced(s);
        let Some((_, grad)) = self.potential.eval(p) else {
            return false;
        };
        let qm = self.sp.charge / self.sp.mass;
        let inv_c = 1.0 / self.field.c_light;
        match self.geom {
            Geometry::ToroidalCrossSection { .. } => {
                let (r, w1, w2, w3) = (s[0], s[2], s[3], s[4]);
                let b = self.field.reduced_components(p);
                let cross = [w2 * b[2] - w3 * b[1], w3 * b[0] - w1 * b[2], w1 * b[1] - w2 * b[0]];
                out[0] = w1;
                out[1] = w3;
                out[2] = w2 * w2 / r + qm * (-grad[0] + inv_c * cross[0]);
                out[3] = -w1 * w2 / r + qm * inv_c * cross[1];
                out[4] = qm * (-grad[1] + inv_c * cross[2]);
            }
            Geometry::RadialDisc { .. } => {
                let b = self.field.cartesian([s[0], s[1], 0.0])[2];
                let (ex, ey) = radial_field(grad[0], s[0], s[1], p.r);
                out[0] = s[2];
                out[1] = s[3];
                out[2] = qm * (ex + inv_c * s[3] * b);
                out[3] = qm * (ey - inv_c * s[2] * b);
            }
            Geometry::MirrorCylinder { .. } => {
                let b = self.field.cartesian([s[0], s[1], s[2]]);
                let (ex, ey) = radial_field(grad[0], s[0], s[1], p.r);
                let v = [s[3], s[4], s[5]];
                let cross = [v[1] * b[2] - v[2] * b[1], v[2] * b[0] - v[0] * b[2], v[0] * b[1] - v[1] * b[0]];
                out[0] = v[0];
                out[1] = v[1];
                out[2] = v[2];
                out[3] = qm * (ex + inv_c * cross[0]);
                out[4] = qm * (ey + inv_c * cross[1]);
                out[5] = qm * (-grad[1] + inv_c * cross[2]);
            }
        }
        true
    }

    fn invariants(&self, s: &[f64]) -> Option<(f64, f64)> {
        let p = self.reduced(s);
        let (u, _) = self.potential.eval(p)?;
        Some(match self.geom {
            Geometry::ToroidalCrossSection { .. } => {
                let v = &s[2..5];
                (self.sp.energy(v, u), angular_integral(self.sp, &self.field, p, v))
            }
            Geometry::RadialDisc { .. } => {
                let v = &s[2..4];
                let i = angular_integral_cartesian(self.sp, &self.field, [s[0], s[1], 0.0], [s[2], s[3], 0.0]);
                (self.sp.energy(v, u), i)
            }
            Geometry::MirrorCylinder { .. } => {
                let v = &s[3..6];
                let i = angular_integral_cartesian(self.sp, &self.field, [s[0], s[1], s[2]], [s[3], s[4], s[5]]);
                (self.sp.energy(v, u), i)
            }
        })
    }

    fn inside(&self, s: &[f64]) -> bool {
        self.geom.contains(self.reduced(s))
    }
}

/// Electric field `−∂_r φ · x/r` in the transverse plane.
fn radial_field(dphi_dr: f64, x1: f64, x2: f64, r: f64) -> (f64, f64) {
    if r == 0.0 {
        (0.0, 0.0)
    } else {
        (-dphi_dr * x1 / r, -dphi_dr * x2 / r)
    }
}

/// Classical RK4 integration of the characteristic system from `(x0, v0)`.
/// Integration stops when the orbit leaves the domain.
pub fn trace(
    geom: &Geometry,
    field: &FieldSpec,
    sp: &Species,
    potential: Potential<'_>,
    x0: &[f64],
    v0: &[f64],
    opts: TraceOptions,
) -> Result<TraceResult> {
    if !(opts.dt.is_finite() && opts.dt > 0.0) {
        return Err(config_err(format!("time step must be positive, got {}", opts.dt)));
    }
    if !(opts.t_max.is_finite() && opts.t_max >= 0.0) {
        return Err(config_err("t_max must be nonnegative"));
    }
    let sys = System { geom: *geom, field: *field, sp, potential };
    let (nx, nv) = match geom {
        Geometry::ToroidalCrossSection { .. } => (2, 3),
        Geometry::RadialDisc { .. } => (2, 2),
        Geometry::MirrorCylinder { .. } => (3, 3),
    };
    if x0.len() != nx || v0.len() != nv {
        return Err(config_err(format!(
            "this geometry expects a {nx}-component position and a {nv}-component velocity"
        )));
    }
    let mut s: Vec<f64> = x0.iter().chain(v0).copied().collect();
    let p0 = sys.reduced(&s);
    if !sys.inside(&s) {
        return Err(Error::OutsideDomain { r: p0.r, z: p0.z });
    }
    let (e0, i0) = sys.invariants(&s).ok_or(Error::OutsideDomain { r: p0.r, z: p0.z })?;
    let record_every = opts.record_every.max(1);
    let mut samples = vec![TraceSample { t: 0.0, state: s.clone(), energy: e0, integral: i0 }];
    let (mut de, mut di) = (0.0f64, 0.0f64);
    let mut max_d = field.center_distance(p0);
    let steps = (opts.t_max / opts.dt).round() as usize;
    let n = sys.dim();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let dt = opts.dt;
    let mut exit = ExitEvent::Completed;

    for step in 1..=steps {
        let t = step as f64 * dt;
        let mut ok = sys.rhs(&s, &mut k1);
        for i in 0..n {
            tmp[i] = s[i] + 0.5 * dt * k1[i];
        }
        ok = ok && sys.rhs(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = s[i] + 0.5 * dt * k2[i];
        }
        ok = ok && sys.rhs(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = s[i] + dt * k3[i];
        }
        ok = ok && sys.rhs(&tmp, &mut k4);
        if ok {
            for i in 0..n {
                tmp[i] = s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        let inv = if ok && sys.inside(&tmp) { sys.invariants(&tmp) } else { None };
        let Some((e, i)) = inv else {
            exit = ExitEvent::LeftDomain { t };
            break;
        };
        s.copy_from_slice(&tmp);
        de = de.max((e - e0).abs() / (e0.abs() + 1.0));
        di = di.max((i - i0).abs() / (i0.abs() + 1.0));
        max_d = max_d.max(field.center_distance(sys.reduced(&s)));
        if step % record_every == 0 || step == steps {
            samples.push(TraceSample { t, state: s.clone(), energy: e, integral: i });
        }
    }

    Ok(TraceResult {
        samples,
        energy0: e0,
        integral0: i0,
        energy_drift: de,
        integral_drift: di,
        max_center_distance: max_d,
        exit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::Lattice;
    use crate::model::{CrossSection, CutoffSpec, FieldKind};

    fn unit(q: f64) -> Species {
        Species::new("s", q, 1.0, CutoffSpec::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap()).unwrap()
    }

    fn opts(t_max: f64, dt: f64) -> TraceOptions {
        TraceOptions { t_max, dt, record_every: 1 }
    }

    #[test]
    fn gyration_in_uniform_field() {
        let g = Geometry::RadialDisc { r0: 3.0 };
        let f = FieldSpec::new(FieldKind::AxialConstant { b: 2.0 }, 1.0);
        let sp = unit(1.0);
        let period = std::f64::consts::PI;
        let dt = period / 4000.0;
        let res = trace(&g, &f, &sp, Potential::Zero, &[1.0, 0.0], &[0.0, 1.0], opts(period, dt)).unwrap();
        let last = res.samples.last().unwrap();
        assert!((last.state[0] - 1.0).abs() < 1e-8 && last.state[1].abs() < 1e-8, "{:?}", last.state);
        // Center of the orbit sits at distance 0.5 from the start.
        let max_dist = res
            .samples
            .iter()
            .map(|s| (s.state[0] - 1.0).hypot(s.state[1]))
            .fold(0.0, f64::max);
        assert!((max_dist - 1.0).abs() < 1e-6, "{max_dist}");
    }

    #[test]
    fn particle_at_rest_stays() {
        let g = Geometry::ToroidalCrossSection { shape: CrossSection::Rect { r_min: 1.0, r_max: 3.0, z_min: -1.0, z_max: 1.0 } };
        let f = FieldSpec::new(FieldKind::PoloidalTorus { b: 1.0, r0: 2.0, z0: 0.0, toroidal: 0.3 }, 1.0);
        let res = trace(&g, &f, &unit(1.0), Potential::Zero, &[2.3, 0.2], &[0.0, 0.0, 0.0], opts(1.0, 0.01)).unwrap();
        assert!(res.samples.iter().all(|s| s.state == res.samples[0].state));
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = Geometry::MirrorCylinder { r0: 1.0, l: 1.0 };
        let f = FieldSpec::new(FieldKind::MirrorProfile { a0: 1.0, a2: 1.0 }, 1.0);
        let sp = unit(1.0);
        assert!(trace(&g, &f, &sp, Potential::Zero, &[0.0, 0.0, 0.0], &[0.0; 3], opts(1.0, 0.0)).is_err());
        assert!(trace(&g, &f, &sp, Potential::Zero, &[2.0, 0.0, 0.0], &[0.0; 3], opts(1.0, 0.1)).is_err());
        assert!(trace(&g, &f, &sp, Potential::Zero, &[0.0, 0.0], &[0.0; 3], opts(1.0, 0.1)).is_err());
    }

    #[test]
    fn leaves_domain() {
        let g = Geometry::MirrorCylinder { r0: 1.0, l: 1.0 };
        let f = FieldSpec::new(FieldKind::MirrorProfile { a0: 1.0, a2: 1.0 }, 1.0);
        let res = trace(&g, &f, &unit(1.0), Potential::Zero, &[0.0, 0.0, 0.0], &[0.0, 0.0, 1.0], opts(5.0, 0.01)).unwrap();
        match res.exit {
            ExitEvent::LeftDomain { t } => assert!((t - 1.0).abs() < 0.02),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn interpolation_reproduces_affine_fields() {
        let l = Lattice { r_min: 1.0, hr: 0.1, nr: 11, z_min: -0.5, hz: 0.1, nz: 11 };
        let f = ScalarField::from_fn(l, |p| 0.3 + 2.0 * p.r - 1.5 * p.z);
        let (v, g) = interpolate_potential(&f, ReducedPoint::new(1.37, 0.11)).unwrap();
        assert!((v - (0.3 + 2.74 - 0.165)).abs() < 1e-13);
        assert!((g[0] - 2.0).abs() < 1e-12 && (g[1] + 1.5).abs() < 1e-12);
        let (v, _) = interpolate_potential(&f, ReducedPoint::new(1.3, 0.2)).unwrap();
        assert_eq!(v, f.values[l.index(3, 7)]);
        assert!(interpolate_potential(&f, ReducedPoint::new(2.5, 0.0)).is_err());
    }
}
