use crate::error::{config_err, Error, Result};
use crate::model::{CrossSection, Geometry, ReducedPoint};

/// Uniform tensor lattice `r_i = r_min + i hr`, `z_j = z_min + j hz`.
/// Node `(i, j)` is stored at index `j * nr + i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub r_min: f64,
    pub hr: f64,
    pub nr: usize,
    pub z_min: f64,
    pub hz: f64,
    pub nz: usize,
}

impl Lattice {
    #[inline]
    pub fn len(&self) -> usize {
        self.nr * self.nz
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nr + i
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nr, idx / self.nr)
    }

    #[inline]
    pub fn point(&self, idx: usize) -> ReducedPoint {
        let (i, j) = self.coords(idx);
        ReducedPoint::new(self.r_min + i as f64 * self.hr, self.z_min + j as f64 * self.hz)
    }

    pub fn r_max(&self) -> f64 {
        self.r_min + (self.nr - 1) as f64 * self.hr
    }

    pub fn z_max(&self) -> f64 {
        if self.nz == 1 {
            self.z_min
        } else {
            self.z_min + (self.nz - 1) as f64 * self.hz
        }
    }

    /// Largest spacing of the lattice.
    pub fn spacing(&self) -> f64 {
        if self.nz > 1 {
            self.hr.max(self.hz)
        } else {
            self.hr
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Unknown with a full (possibly irregular) stencil.
    Interior,
    /// Unknown on `r = 0` carrying the regularity condition.
    Axis,
    /// Dirichlet node on (or within a thousandth of a spacing of) the boundary.
    Boundary,
    /// Lattice node outside the domain; not part of the problem.
    Exterior,
}

impl NodeKind {
    #[inline]
    pub fn is_unknown(self) -> bool {
        matches!(self, NodeKind::Interior | NodeKind::Axis)
    }

    #[inline]
    pub fn in_domain(self) -> bool {
        !matches!(self, NodeKind::Exterior)
    }
}

/// Distances from a node to its four stencil neighbours `(east, west, north, south)`,
/// where east is `+r` and north is `+z`. A distance shorter than the spacing
/// means the neighbour is the boundary crossing on that arm.
pub type Arms = [f64; 4];

#[derive(Debug, Clone)]
pub struct Grid {
    pub geometry: Geometry,
    pub lattice: Lattice,
    pub kinds: Vec<NodeKind>,
    pub arms: Vec<Arms>,
}

/// Nodes closer than this fraction of a spacing to a curved boundary become Dirichlet nodes.
const SNAP_FRACTION: f64 = 1e-3;

pub fn build_grid(geom: &Geometry, nr: usize, nz: usize) -> Result<Grid> {
    geom.validate()?;
    if nr < 8 {
        return Err(config_err(format!("radial resolution {nr} is below the minimum of 8")));
    }
    let nz = if geom.spatial_dim() == 1 { 1 } else { nz };
    if geom.spatial_dim() == 2 && nz < 8 {
        return Err(config_err(format!("axial resolution {nz} is below the minimum of 8")));
    }
    let (r0, r1, z0, z1) = geom.bounds();
    let hr = (r1 - r0) / (nr - 1) as f64;
    let hz = if nz > 1 { (z1 - z0) / (nz - 1) as f64 } else { 0.0 };
    let lattice = Lattice { r_min: r0, hr, nr, z_min: z0, hz, nz };
    if let Geometry::ToroidalCrossSection { .. } = geom {
        if 2.0 * r0 <= hr {
            return Err(config_err("radial spacing too coarse for the inner radius of the cross-section"));
        }
    }

    let n = lattice.len();
    let mut kinds = vec![NodeKind::Interior; n];
    let mut arms = vec![[hr, hr, hz, hz]; n];
    for idx in 0..n {
        let (i, j) = lattice.coords(idx);
        kinds[idx] = match *geom {
            Geometry::RadialDisc { .. } => {
                if i == 0 {
                    NodeKind::Axis
                } else if i == nr - 1 {
                    NodeKind::Boundary
                } else {
                    NodeKind::Interior
                }
            }
            Geometry::MirrorCylinder { .. } => {
                if j == 0 || j == nz - 1 || i == nr - 1 {
                    NodeKind::Boundary
                } else if i == 0 {
                    NodeKind::Axis
                } else {
                    NodeKind::Interior
                }
            }
            Geometry::ToroidalCrossSection { shape: CrossSection::Rect { .. } } => {
                if i == 0 || j == 0 || i == nr - 1 || j == nz - 1 {
                    NodeKind::Boundary
                } else {
                    NodeKind::Interior
                }
            }
            Geometry::ToroidalCrossSection { shape: CrossSection::Disc { .. } } => {
                let d = geom.boundary_distance(lattice.point(idx));
                if d < -SNAP_FRACTION * hr.min(hz) {
                    NodeKind::Exterior
                } else if d <= SNAP_FRACTION * hr.min(hz) {
                    NodeKind::Boundary
                } else {
                    NodeKind::Interior
                }
            }
        };
    }

    if let Geometry::ToroidalCrossSection { shape: CrossSection::Disc { r_c, z_c, radius } } = *geom {
        for idx in 0..n {
            if kinds[idx] != NodeKind::Interior {
                continue;
            }
            let (i, j) = lattice.coords(idx);
            let p = lattice.point(idx);
            let neighbours = [(i + 1, j), (i.wrapping_sub(1), j), (i, j + 1), (i, j.wrapping_sub(1))];
            for (k, &(ni, nj)) in neighbours.iter().enumerate() {
                // Interior nodes never sit on the lattice edge, so neighbours exist.
                if kinds[lattice.index(ni, nj)] != NodeKind::Exterior {
                    continue;
                }
                let t = match k {
                    0 => -(p.r - r_c) + (radius * radius - (p.z - z_c).powi(2)).sqrt(),
                    1 => (p.r - r_c) + (radius * radius - (p.z - z_c).powi(2)).sqrt(),
                    2 => -(p.z - z_c) + (radius * radius - (p.r - r_c).powi(2)).sqrt(),
                    _ => (p.z - z_c) + (radius * radius - (p.r - r_c).powi(2)).sqrt(),
                };
                let h = if k < 2 { hr } else { hz };
                arms[idx][k] = t.clamp(SNAP_FRACTION * h, h);
            }
        }
    }

    Ok(Grid { geometry: *geom, lattice, kinds, arms })
}

impl Grid {
    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn point(&self, idx: usize) -> ReducedPoint {
        self.lattice.point(idx)
    }

    /// Boundary crossing reached along arm `k` of node `idx`.
    pub fn arm_endpoint(&self, idx: usize, k: usize) -> ReducedPoint {
        let p = self.point(idx);
        let t = self.arms[idx][k];
        match k {
            0 => ReducedPoint::new(p.r + t, p.z),
            1 => ReducedPoint::new(p.r - t, p.z),
            2 => ReducedPoint::new(p.r, p.z + t),
            _ => ReducedPoint::new(p.r, p.z - t),
        }
    }

    /// Whether arm `k` of node `idx` ends on the boundary between lattice nodes.
    pub fn arm_is_irregular(&self, idx: usize, k: usize) -> bool {
        let h = if k < 2 { self.lattice.hr } else { self.lattice.hz };
        self.arms[idx][k] < h
    }

    /// Lattice node containing `p` in its lower-left cell, with local cell coordinates.
    pub fn locate(&self, p: ReducedPoint) -> Result<(usize, usize, f64, f64)> {
        if !self.geometry.contains(p) {
            return Err(Error::OutsideDomain { r: p.r, z: p.z });
        }
        Ok(locate_in_lattice(&self.lattice, p))
    }
}

pub(crate) fn locate_in_lattice(l: &Lattice, p: ReducedPoint) -> (usize, usize, f64, f64) {
    let fr = snap(((p.r - l.r_min) / l.hr).clamp(0.0, (l.nr - 1) as f64));
    let i = (fr.floor() as usize).min(l.nr - 2);
    let (j, tz) = if l.nz == 1 {
        (0, 0.0)
    } else {
        let fz = snap(((p.z - l.z_min) / l.hz).clamp(0.0, (l.nz - 1) as f64));
        let j = (fz.floor() as usize).min(l.nz - 2);
        (j, fz - j as f64)
    };
    (i, j, fr - i as f64, tz)
}

/// Rounds lattice coordinates that are integers up to rounding, so node
/// positions interpolate to the node value exactly.
fn snap(f: f64) -> f64 {
    let r = f.round();
    if (f - r).abs() < 1e-9 {
        r
    } else {
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_lattice() {
        let g = build_grid(&Geometry::RadialDisc { r0: 1.0 }, 101, 1).unwrap();
        assert!((g.lattice.hr - 0.01).abs() < 1e-15);
        assert_eq!(g.kinds[0], NodeKind::Axis);
        assert_eq!(g.kinds[100], NodeKind::Boundary);
        assert_eq!(g.len(), 101);
    }

    #[test]
    fn rect_nodes_avoid_axis() {
        let geom = Geometry::ToroidalCrossSection { shape: CrossSection::Rect { r_min: 1.0, r_max: 2.0, z_min: -0.5, z_max: 0.5 } };
        let g = build_grid(&geom, 64, 64).unwrap();
        assert!((0..g.len()).all(|k| g.point(k).r >= 1.0));
    }

    #[test]
    fn disc_arms_within_spacing() {
        let geom = Geometry::ToroidalCrossSection { shape: CrossSection::Disc { r_c: 2.0, z_c: 0.0, radius: 0.5 } };
        let g = build_grid(&geom, 64, 64).unwrap();
        let mut irregular = 0;
        for k in 0..g.len() {
            if g.kinds[k] == NodeKind::Interior {
                assert!(geom.boundary_distance(g.point(k)) > 0.0);
                for a in 0..4 {
                    let h = if a < 2 { g.lattice.hr } else { g.lattice.hz };
                    assert!(g.arms[k][a] > 0.0 && g.arms[k][a] <= h);
                    if g.arm_is_irregular(k, a) {
                        irregular += 1;
                        let e = g.arm_endpoint(k, a);
                        assert!(geom.boundary_distance(e).abs() < 1e-12);
                    }
                }
            }
        }
        assert!(irregular > 0);
    }

    #[test]
    fn coarse_resolution_rejected() {
        assert!(build_grid(&Geometry::RadialDisc { r0: 1.0 }, 7, 1).is_err());
        assert!(build_grid(&Geometry::MirrorCylinder { r0: 1.0, l: 1.0 }, 16, 4).is_err());
    }
}
