use super::grid::{locate_in_lattice, Lattice};
use crate::error::{Error, Result};
use crate::model::ReducedPoint;

/// Node values of a scalar on a structured lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub lattice: Lattice,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(lattice: Lattice) -> Self {
        Self { lattice, values: vec![0.0; lattice.len()] }
    }

    pub fn constant(lattice: Lattice, c: f64) -> Self {
        Self { lattice, values: vec![c; lattice.len()] }
    }

    pub fn from_fn(lattice: Lattice, f: impl Fn(ReducedPoint) -> f64) -> Self {
        let values = (0..lattice.len()).map(|k| f(lattice.point(k))).collect();
        Self { lattice, values }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &ScalarField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    fn in_hull(&self, p: ReducedPoint) -> bool {
        let l = &self.lattice;
        let tol = 1e-12 * (1.0 + l.r_max().abs());
        let r_ok = p.r >= l.r_min - tol && p.r <= l.r_max() + tol;
        let z_ok = l.nz == 1 || (p.z >= l.z_min - tol && p.z <= l.z_max() + tol);
        r_ok && z_ok
    }

    /// Centered-difference gradient `(∂_r, ∂_z)` at a node, one-sided at lattice edges.
    /// On the axis `r = 0` the radial derivative is zero by symmetry.
    pub fn node_gradient(&self, i: usize, j: usize) -> (f64, f64) {
        let l = &self.lattice;
        let v = |i: usize, j: usize| self.values[l.index(i, j)];
        let dr = if l.r_min == 0.0 && i == 0 {
            0.0
        } else if i == 0 {
            (-3.0 * v(0, j) + 4.0 * v(1, j) - v(2, j)) / (2.0 * l.hr)
        } else if i == l.nr - 1 {
            (3.0 * v(i, j) - 4.0 * v(i - 1, j) + v(i - 2, j)) / (2.0 * l.hr)
        } else {
            (v(i + 1, j) - v(i - 1, j)) / (2.0 * l.hr)
        };
        let dz = if l.nz == 1 {
            0.0
        } else if j == 0 {
            (-3.0 * v(i, 0) + 4.0 * v(i, 1) - v(i, 2)) / (2.0 * l.hz)
        } else if j == l.nz - 1 {
            (3.0 * v(i, j) - 4.0 * v(i, j - 1) + v(i, j - 2)) / (2.0 * l.hz)
        } else {
            (v(i, j + 1) - v(i, j - 1)) / (2.0 * l.hz)
        };
        (dr, dz)
    }

    /// Bilinear value and bilinearly interpolated node gradients at `p`.
    pub fn interpolate(&self, p: ReducedPoint) -> Result<(f64, [f64; 2])> {
        if !self.in_hull(p) {
            return Err(Error::OutsideDomain { r: p.r, z: p.z });
        }
        let l = &self.lattice;
        let (i, j, tr, tz) = locate_in_lattice(l, p);
        if l.nz == 1 {
            let (a, b) = (self.values[i], self.values[i + 1]);
            let (ga, _) = self.node_gradient(i, 0);
            let (gb, _) = self.node_gradient(i + 1, 0);
            return Ok(((1.0 - tr) * a + tr * b, [(1.0 - tr) * ga + tr * gb, 0.0]));
        }
        let w = [(1.0 - tr) * (1.0 - tz), tr * (1.0 - tz), (1.0 - tr) * tz, tr * tz];
        let nodes = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)];
        let (mut val, mut gr, mut gz) = (0.0, 0.0, 0.0);
        for (wk, &(a, b)) in w.iter().zip(&nodes) {
            val += wk * self.values[l.index(a, b)];
            let (dr, dz) = self.node_gradient(a, b);
            gr += wk * dr;
            gz += wk * dz;
        }
        Ok((val, [gr, gz]))
    }
}
