pub mod cutoff;
pub mod field;
pub mod geometry;
pub mod integrals;
pub mod species;

pub use cutoff::{smoothstep, smoothstep_derivative, CutoffSpec, CutoffValue};
pub use field::{check_divergence_free, FieldKind, FieldSpec};
pub use geometry::{CrossSection, Geometry, ReducedPoint};
pub use integrals::{angular_integral, angular_integral_cartesian, energy_integral};
pub use species::{check_unique_labels, Species};
