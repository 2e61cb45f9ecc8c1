use std::sync::Arc;

use super::field::ScalarField;
use super::grid::{Grid, NodeKind};
use crate::error::{Error, Result};
use crate::model::{CrossSection, Geometry, ReducedPoint};

/// Dirichlet data on the boundary of the reduced domain.
#[derive(Clone)]
pub enum BoundaryData {
    Constant(f64),
    Profile(Arc<dyn Fn(ReducedPoint) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryData::Constant(c) => write!(f, "Constant({c})"),
            BoundaryData::Profile(_) => write!(f, "Profile(..)"),
        }
    }
}

impl Default for BoundaryData {
    fn default() -> Self {
        BoundaryData::Constant(0.0)
    }
}

impl BoundaryData {
    #[inline]
    pub fn at(&self, p: ReducedPoint) -> f64 {
        match self {
            BoundaryData::Constant(c) => *c,
            BoundaryData::Profile(f) => f(p),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, BoundaryData::Constant(c) if *c == 0.0)
    }

    /// Smallest and largest value over the boundary nodes and crossings of `grid`.
    pub fn range(&self, grid: &Grid) -> (f64, f64) {
        match self {
            BoundaryData::Constant(c) => (*c, *c),
            BoundaryData::Profile(_) => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                let mut see = |v: f64| {
                    lo = lo.min(v);
                    hi = hi.max(v);
                };
                for k in 0..grid.len() {
                    match grid.kinds[k] {
                        NodeKind::Boundary => see(self.at(grid.point(k))),
                        NodeKind::Interior => {
                            for a in 0..4 {
                                if grid.arm_is_irregular(k, a) {
                                    see(self.at(grid.arm_endpoint(k, a)));
                                }
                            }
                        }
                        _ => {}
                    }
                }
                (lo, hi)
            }
        }
    }

    /// Value assigned to a Dirichlet or exterior lattice node.
    fn node_value(&self, grid: &Grid, idx: usize) -> f64 {
        let p = grid.point(idx);
        match (grid.kinds[idx], grid.geometry) {
            (NodeKind::Exterior, Geometry::ToroidalCrossSection { shape: CrossSection::Disc { r_c, z_c, radius } }) => {
                let d = (p.r - r_c).hypot(p.z - z_c);
                let s = radius / d;
                self.at(ReducedPoint::new(r_c + (p.r - r_c) * s, z_c + (p.z - z_c) * s))
            }
            _ => self.at(p),
        }
    }
}

const NONE: usize = usize::MAX;

/// One row of `−L + K`. Unknown rows have up to four lattice neighbours and
/// up to four boundary crossings; Dirichlet and exterior rows are identities.
#[derive(Debug, Clone, Copy)]
struct Row {
    diag: f64,
    nbr: [(usize, f64); 4],
    bnd: [f64; 4],
}

/// Five-point (three-point in 1-D) discretization of `−L + K` on a grid.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    grid: Arc<Grid>,
    shift: f64,
    rows: Vec<Row>,
}

pub fn assemble_operator(grid: Arc<Grid>, shift: f64) -> DiscreteOperator {
    let l = grid.lattice;
    let two_d = l.nz > 1;
    let n = grid.len();
    let mut rows = Vec::with_capacity(n);
    for idx in 0..n {
        let mut row = Row { diag: 1.0, nbr: [(NONE, 0.0); 4], bnd: [0.0; 4] };
        let kind = grid.kinds[idx];
        if !kind.is_unknown() {
            rows.push(row);
            continue;
        }
        let (i, j) = l.coords(idx);
        let p = grid.point(idx);
        let [he, hw, hn, hs] = grid.arms[idx];
        let mut coef = [0.0; 4];
        let mut diag = shift;
        if kind == NodeKind::Axis {
            // Ghost reflection about r = 0 and the regular limit 2∂_r² of ∂_r² + r⁻¹∂_r.
            let c = 4.0 / (he * he);
            coef[0] = -c;
            diag += c;
        } else {
            let s = he + hw;
            let c_e = 2.0 / (he * s) + hw / (p.r * he * s);
            let c_w = 2.0 / (hw * s) - he / (p.r * hw * s);
            let c_0 = -2.0 / (he * hw) + (he - hw) / (p.r * he * hw);
            coef[0] = -c_e;
            coef[1] = -c_w;
            diag -= c_0;
        }
        if two_d {
            let s = hn + hs;
            let c_n = 2.0 / (hn * s);
            let c_s = 2.0 / (hs * s);
            coef[2] = -c_n;
            coef[3] = -c_s;
            diag += c_n + c_s;
        }
        let neighbours = [
            Some((i + 1, j)),
            i.checked_sub(1).map(|a| (a, j)),
            if two_d { Some((i, j + 1)) } else { None },
            if two_d { j.checked_sub(1).map(|b| (i, b)) } else { None },
        ];
        for k in 0..4 {
            if coef[k] == 0.0 {
                continue;
            }
            if grid.arm_is_irregular(idx, k) {
                row.bnd[k] = coef[k];
            } else {
                let (a, b) = neighbours[k].expect("unknown nodes have lattice neighbours");
                row.nbr[k] = (l.index(a, b), coef[k]);
            }
        }
        row.diag = diag;
        rows.push(row);
    }
    DiscreteOperator { grid, shift, rows }
}

impl DiscreteOperator {
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// `(−L + K) φ` at unknown nodes, with boundary crossings taking values
    /// from `g`; zero at all other nodes.
    pub fn apply(&self, phi: &[f64], g: &BoundaryData) -> Vec<f64> {
        let mut out = vec![0.0; phi.len()];
        for (idx, row) in self.rows.iter().enumerate() {
            if !self.grid.kinds[idx].is_unknown() {
                continue;
            }
            let mut acc = row.diag * phi[idx];
            for &(j, c) in &row.nbr {
                if j != NONE {
                    acc += c * phi[j];
                }
            }
            for k in 0..4 {
                if row.bnd[k] != 0.0 {
                    acc += row.bnd[k] * g.at(self.grid.arm_endpoint(idx, k));
                }
            }
            out[idx] = acc;
        }
        out
    }

    /// Right-hand side of the full linear system for source `rhs` and data `g`.
    fn system_rhs(&self, rhs: &[f64], g: &BoundaryData) -> Vec<f64> {
        let mut b = vec![0.0; rhs.len()];
        for (idx, row) in self.rows.iter().enumerate() {
            if self.grid.kinds[idx].is_unknown() {
                let mut v = rhs[idx];
                for k in 0..4 {
                    if row.bnd[k] != 0.0 {
                        v -= row.bnd[k] * g.at(self.grid.arm_endpoint(idx, k));
                    }
                }
                b[idx] = v;
            } else {
                b[idx] = g.node_value(&self.grid, idx);
            }
        }
        b
    }

    /// Full-system matrix-vector product (identity on Dirichlet and exterior rows).
    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (idx, row) in self.rows.iter().enumerate() {
            let mut acc = row.diag * x[idx];
            for &(j, c) in &row.nbr {
                if j != NONE {
                    acc += c * x[j];
                }
            }
            y[idx] = acc;
        }
    }

    /// Factorization suitable for repeated solves with this operator.
    pub fn factor(&self) -> Result<LinearSolver<'_>> {
        let n = self.rows.len();
        let kind = if n <= DIRECT_LIMIT {
            SolverKind::Banded(BandLu::factor(self)?)
        } else {
            SolverKind::Krylov
        };
        Ok(LinearSolver { op: self, kind })
    }
}

/// Largest system solved by banded factorization.
pub const DIRECT_LIMIT: usize = 256 * 256;

struct BandLu {
    n: usize,
    bw: usize,
    a: Vec<f64>,
}

impl BandLu {
    fn factor(op: &DiscreteOperator) -> Result<Self> {
        let n = op.rows.len();
        let bw = if op.grid.lattice.nz > 1 { op.grid.lattice.nr } else { 1 };
        let width = 2 * bw + 1;
        let mut a = vec![0.0; n * width];
        for (i, row) in op.rows.iter().enumerate() {
            a[i * width + bw] = row.diag;
            for &(j, c) in &row.nbr {
                if j != NONE {
                    a[i * width + (j + bw - i)] += c;
                }
            }
        }
        // Doolittle elimination without pivoting; the matrix is an M-matrix.
        for k in 0..n {
            let pivot = a[k * width + bw];
            if !(pivot.is_finite() && pivot != 0.0) {
                return Err(Error::LinearSolve { iterations: 0, residual: f64::NAN });
            }
            let last = (k + bw).min(n - 1);
            let (head, tail) = a.split_at_mut((k + 1) * width);
            let krow = &head[k * width..];
            for i in k + 1..=last {
                let ri = &mut tail[(i - k - 1) * width..(i - k) * width];
                let off = k + bw - i;
                let lik = ri[off] / pivot;
                if lik == 0.0 {
                    continue;
                }
                ri[off] = lik;
                for j in k + 1..=last {
                    ri[j + bw - i] -= lik * krow[j + bw - k];
                }
            }
        }
        Ok(Self { n, bw, a })
    }

    fn solve_in_place(&self, x: &mut [f64]) {
        let (n, bw, w) = (self.n, self.bw, 2 * self.bw + 1);
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let mut s = x[i];
            for j in lo..i {
                s -= self.a[i * w + (j + bw - i)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let hi = (i + bw).min(n - 1);
            let mut s = x[i];
            for j in i + 1..=hi {
                s -= self.a[i * w + (j + bw - i)] * x[j];
            }
            x[i] = s / self.a[i * w + bw];
        }
    }
}

enum SolverKind {
    Banded(BandLu),
    Krylov,
}

pub struct LinearSolver<'a> {
    op: &'a DiscreteOperator,
    kind: SolverKind,
}

const KRYLOV_MAX_ITER: usize = 20_000;

impl LinearSolver<'_> {
    /// Solves `(−L + K) φ = rhs` at unknown nodes with `φ = g` on the boundary.
    /// The returned field has residual at most `1e-10 (‖rhs‖∞ + 1)`.
    pub fn solve(&self, rhs: &ScalarField, g: &BoundaryData) -> Result<ScalarField> {
        let b = self.op.system_rhs(&rhs.values, g);
        let scale = rhs.values.iter().fold(0.0f64, |m, v| m.max(v.abs())) + 1.0;
        let target = 1e-10 * scale;
        let mut x;
        let mut res = vec![0.0; b.len()];
        match &self.kind {
            SolverKind::Banded(lu) => {
                x = b.clone();
                lu.solve_in_place(&mut x);
                for _ in 0..3 {
                    let r = residual(self.op, &x, &b, &mut res);
                    if r <= 0.01 * target {
                        break;
                    }
                    lu.solve_in_place(&mut res);
                    for (xi, ri) in x.iter_mut().zip(&res) {
                        *xi += ri;
                    }
                }
            }
            SolverKind::Krylov => {
                x = bicgstab(self.op, &b, 0.01 * target)?;
            }
        }
        let r = residual(self.op, &x, &b, &mut res);
        if !(r <= target) {
            return Err(Error::LinearSolve { iterations: 0, residual: r });
        }
        Ok(ScalarField { lattice: rhs.lattice, values: x })
    }
}

fn residual(op: &DiscreteOperator, x: &[f64], b: &[f64], out: &mut [f64]) -> f64 {
    op.matvec(x, out);
    let mut m = 0.0f64;
    for (o, bi) in out.iter_mut().zip(b) {
        *o = bi - *o;
        m = m.max(o.abs());
    }
    m
}

/// Jacobi-preconditioned BiCGStab on the full system.
fn bicgstab(op: &DiscreteOperator, b: &[f64], tol: f64) -> Result<Vec<f64>> {
    let n = b.len();
    let dinv: Vec<f64> = op.rows.iter().map(|r| 1.0 / r.diag).collect();
    let dot = |a: &[f64], c: &[f64]| a.iter().zip(c).map(|(x, y)| x * y).sum::<f64>();
    let norm_inf = |a: &[f64]| a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let r_hat = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut last = norm_inf(&r);
    for it in 0..KRYLOV_MAX_ITER {
        if last <= tol {
            return Ok(x);
        }
        let rho_new = dot(&r_hat, &r);
        if rho_new == 0.0 || omega == 0.0 {
            return Err(Error::LinearSolve { iterations: it, residual: last });
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for k in 0..n {
            p[k] = r[k] + beta * (p[k] - omega * v[k]);
            y[k] = dinv[k] * p[k];
        }
        op.matvec(&y, &mut v);
        alpha = rho / dot(&r_hat, &v);
        for k in 0..n {
            s[k] = r[k] - alpha * v[k];
        }
        if norm_inf(&s) <= tol {
            for k in 0..n {
                x[k] += alpha * y[k];
            }
            return Ok(x);
        }
        for k in 0..n {
            z[k] = dinv[k] * s[k];
        }
        op.matvec(&z, &mut t);
        omega = dot(&t, &s) / dot(&t, &t);
        for k in 0..n {
            x[k] += alpha * y[k] + omega * z[k];
            r[k] = s[k] - omega * t[k];
        }
        last = norm_inf(&r);
    }
    Err(Error::LinearSolve { iterations: KRYLOV_MAX_ITER, residual: last })
}

/// One-shot solve of `(−L + K) φ = rhs`, `φ = g` on the boundary.
pub fn solve_linear(op: &DiscreteOperator, rhs: &ScalarField, g: &BoundaryData) -> Result<ScalarField> {
    op.factor()?.solve(rhs, g)
}

#[cfg(test)]
pub(crate) fn solve_with_krylov(op: &DiscreteOperator, rhs: &ScalarField, g: &BoundaryData) -> Result<ScalarField> {
    LinearSolver { op, kind: SolverKind::Krylov }.solve(rhs, g)
}
