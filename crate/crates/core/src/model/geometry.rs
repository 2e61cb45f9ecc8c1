use crate::error::{config_err, Result};

/// A point of a reduced (symmetry-quotient) domain.
///
/// `r` is the distance from the symmetry axis. `z` is the axial coordinate for
/// the toroidal cross-section and the mirror cylinder; it is unused (zero) for
/// the radial disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedPoint {
    pub r: f64,
    pub z: f64,
}

impl ReducedPoint {
    pub const fn new(r: f64, z: f64) -> Self {
        Self { r, z }
    }
}

/// Shape of a toroidal cross-section in the `(r, z)` half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossSection {
    Rect { r_min: f64, r_max: f64, z_min: f64, z_max: f64 },
    Disc { r_c: f64, z_c: f64, radius: f64 },
}

/// The three reduced computational domains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    /// Cross-section of an infinite cylinder, reduced to the radius.
    RadialDisc { r0: f64 },
    /// Cross-section of a domain of revolution that avoids the axis.
    ToroidalCrossSection { shape: CrossSection },
    /// Finite cylinder `B_r0 × (−l, l)` in axisymmetric `(r, x₃)` coordinates.
    MirrorCylinder { r0: f64, l: f64 },
}

const CONTAIN_SLACK: f64 = 1e-12;

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Geometry::RadialDisc { r0 } => r0.is_finite() && r0 > 0.0,
            Geometry::MirrorCylinder { r0, l } => r0.is_finite() && l.is_finite() && r0 > 0.0 && l > 0.0,
            Geometry::ToroidalCrossSection { shape } => match shape {
                CrossSection::Rect { r_min, r_max, z_min, z_max } => {
                    [r_min, r_max, z_min, z_max].iter().all(|x| x.is_finite())
                        && r_min > 0.0
                        && r_max > r_min
                        && z_max > z_min
                }
                CrossSection::Disc { r_c, z_c, radius } => {
                    [r_c, z_c, radius].iter().all(|x| x.is_finite()) && radius > 0.0 && r_c - radius > 0.0
                }
            },
        };
        if ok {
            Ok(())
        } else {
            Err(config_err(format!("invalid geometry parameters: {self:?}")))
        }
    }

    /// Dimension of the velocity space the ansatz density is integrated over.
    pub fn velocity_dim(&self) -> usize {
        match self {
            Geometry::RadialDisc { .. } => 2,
            _ => 3,
        }
    }

    pub fn spatial_dim(&self) -> usize {
        match self {
            Geometry::RadialDisc { .. } => 1,
            _ => 2,
        }
    }

    /// Whether the reduced domain touches the symmetry axis `r = 0`.
    pub fn has_axis(&self) -> bool {
        !matches!(self, Geometry::ToroidalCrossSection { .. })
    }

    /// `(r_min, r_max, z_min, z_max)` of the bounding box.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        match *self {
            Geometry::RadialDisc { r0 } => (0.0, r0, 0.0, 0.0),
            Geometry::MirrorCylinder { r0, l } => (0.0, r0, -l, l),
            Geometry::ToroidalCrossSection { shape } => match shape {
                CrossSection::Rect { r_min, r_max, z_min, z_max } => (r_min, r_max, z_min, z_max),
                CrossSection::Disc { r_c, z_c, radius } => (r_c - radius, r_c + radius, z_c - radius, z_c + radius),
            },
        }
    }

    /// Closed-domain membership test.
    pub fn contains(&self, p: ReducedPoint) -> bool {
        match *self {
            Geometry::ToroidalCrossSection { shape: CrossSection::Disc { r_c, z_c, radius } } => {
                let d2 = (p.r - r_c).powi(2) + (p.z - z_c).powi(2);
                d2 <= radius * radius * (1.0 + CONTAIN_SLACK)
            }
            _ => {
                let (r0, r1, z0, z1) = self.bounds();
                let sr = CONTAIN_SLACK * (r1 - r0).max(1.0);
                let sz = CONTAIN_SLACK * (z1 - z0).max(1.0);
                let z_ok = self.spatial_dim() == 1 || (p.z >= z0 - sz && p.z <= z1 + sz);
                p.r >= r0 - sr && p.r <= r1 + sr && z_ok
            }
        }
    }

    /// Distance from `p` to the boundary of the reduced domain, excluding the axis.
    pub fn boundary_distance(&self, p: ReducedPoint) -> f64 {
        match *self {
            Geometry::RadialDisc { r0 } => r0 - p.r,
            Geometry::MirrorCylinder { r0, l } => (r0 - p.r).min(l - p.z.abs()),
            Geometry::ToroidalCrossSection { shape } => match shape {
                CrossSection::Rect { r_min, r_max, z_min, z_max } => {
                    (p.r - r_min).min(r_max - p.r).min(p.z - z_min).min(z_max - p.z)
                }
                CrossSection::Disc { r_c, z_c, radius } => radius - (p.r - r_c).hypot(p.z - z_c),
            },
        }
    }

    /// Symmetry weight ν = 2πr converting reduced integrals to physical ones.
    #[inline]
    pub fn volume_weight(&self, p: ReducedPoint) -> f64 {
        2.0 * std::f64::consts::PI * p.r
    }
}
