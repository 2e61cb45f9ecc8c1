//! JSON run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vpconfine::density::QuadratureSpec;
use vpconfine::elliptic::BoundaryData;
use vpconfine::equilibrium::{Configuration, FamilyTemplate, SolverSettings};
use vpconfine::model::{CrossSection, CutoffSpec, FieldKind, FieldSpec, Geometry, Species};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometryBlock {
    RadialDisc { r0: f64 },
    ToroidalRect { r_min: f64, r_max: f64, z_min: f64, z_max: f64 },
    ToroidalDisc { r_c: f64, z_c: f64, radius: f64 },
    MirrorCylinder { r0: f64, l: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldBlock {
    AxialConstant { b: f64 },
    PoloidalTorus {
        b: f64,
        r0: f64,
        z0: f64,
        #[serde(default)]
        toroidal: f64,
    },
    MirrorProfile { a0: f64, a2: f64 },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffBlock {
    pub e0: f64,
    pub i0: f64,
    pub amplitude: f64,
    pub w_e: f64,
    pub w_i: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesBlock {
    pub label: String,
    pub charge: f64,
    pub mass: f64,
    pub cutoff: CutoffBlock,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleBlock {
    pub label: String,
    pub charge: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyBlock {
    pub base: CutoffBlock,
    pub plus: ParticleBlock,
    pub minus: ParticleBlock,
    /// Member solved by `solve`/`scale`/`trace` when no species list is given.
    #[serde(default = "half")]
    pub lambda: f64,
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureBlock {
    pub order: usize,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    pub nx: usize,
    #[serde(default = "default_nz")]
    pub nz: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_k_safety")]
    pub k_safety: f64,
    #[serde(default = "default_quadrature")]
    pub quadrature: QuadratureBlock,
}

fn default_nz() -> usize {
    1
}
fn default_tol() -> f64 {
    1e-8
}
fn default_max_iter() -> usize {
    500
}
fn default_k_safety() -> f64 {
    1.5
}
fn default_quadrature() -> QuadratureBlock {
    QuadratureBlock { order: 8, subdivisions: 8 }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsBlock {
    #[serde(default = "one")]
    pub c_light: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for UnitsBlock {
    fn default() -> Self {
        Self { c_light: 1.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundaryBlock {
    Constant { value: f64 },
}

impl Default for BoundaryBlock {
    fn default() -> Self {
        BoundaryBlock::Constant { value: 0.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryBlock,
    pub field: FieldBlock,
    #[serde(default)]
    pub species: Vec<SpeciesBlock>,
    #[serde(default)]
    pub family: Option<FamilyBlock>,
    #[serde(default)]
    pub boundary: BoundaryBlock,
    pub solver: SolverBlock,
    #[serde(default)]
    pub units: UnitsBlock,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

/// A configuration problem, with the 1-based line of the offending entry when known.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// A parsed and cross-validated configuration.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub raw: RunConfig,
    pub text: String,
    pub geometry: Geometry,
    pub field: FieldSpec,
    pub settings: SolverSettings,
    pub boundary: BoundaryData,
    pub species: Vec<Species>,
    pub family: Option<FamilyTemplate>,
}

impl LoadedConfig {
    /// The configuration solved by `solve`: the explicit species list, or the
    /// family member at `lambda` (default from the family block).
    pub fn configuration(&self, lambda: Option<f64>) -> Result<Configuration, ConfigError> {
        let species = match (&self.family, lambda) {
            (Some(t), Some(l)) => t.species(l).map_err(|e| self.error(None, e.to_string()))?,
            (Some(t), None) if self.species.is_empty() => {
                let l = self.raw.family.as_ref().map_or(0.5, |f| f.lambda);
                t.species(l).map_err(|e| self.error(None, e.to_string()))?
            }
            (None, Some(_)) => return Err(self.error(None, "--lambda needs a family block".into())),
            _ => self.species.clone(),
        };
        Ok(Configuration {
            geometry: self.geometry,
            field: self.field,
            species,
            boundary: self.boundary.clone(),
            settings: self.settings.clone(),
        })
    }

    fn error(&self, needle: Option<&str>, message: String) -> ConfigError {
        ConfigError { line: needle.and_then(|n| find_line(&self.text, n)), message }
    }
}

/// 1-based line of the first occurrence of `needle` in `text`.
fn find_line(text: &str, needle: &str) -> Option<usize> {
    text.find(needle).map(|pos| text[..pos].matches('\n').count() + 1)
}

fn key_line(text: &str, key: &str) -> Option<usize> {
    find_line(text, &format!("\"{key}\""))
}

pub fn load(path: &Path) -> Result<LoadedConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError { line: None, message: format!("cannot read {}: {e}", path.display()) })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<LoadedConfig, ConfigError> {
    let raw: RunConfig = serde_json::from_str(text).map_err(|e| ConfigError {
        line: Some(e.line()),
        message: format!("{e}"),
    })?;
    let err = |needle: Option<&str>, message: String| ConfigError {
        line: needle.and_then(|n| find_line(text, n)),
        message,
    };

    let geometry = match raw.geometry {
        GeometryBlock::RadialDisc { r0 } => Geometry::RadialDisc { r0 },
        GeometryBlock::ToroidalRect { r_min, r_max, z_min, z_max } => {
            Geometry::ToroidalCrossSection { shape: CrossSection::Rect { r_min, r_max, z_min, z_max } }
        }
        GeometryBlock::ToroidalDisc { r_c, z_c, radius } => {
            Geometry::ToroidalCrossSection { shape: CrossSection::Disc { r_c, z_c, radius } }
        }
        GeometryBlock::MirrorCylinder { r0, l } => Geometry::MirrorCylinder { r0, l },
    };
    geometry
        .validate()
        .map_err(|e| ConfigError { line: key_line(text, "geometry"), message: e.to_string() })?;

    let kind = match raw.field {
        FieldBlock::AxialConstant { b } => FieldKind::AxialConstant { b },
        FieldBlock::PoloidalTorus { b, r0, z0, toroidal } => FieldKind::PoloidalTorus { b, r0, z0, toroidal },
        FieldBlock::MirrorProfile { a0, a2 } => FieldKind::MirrorProfile { a0, a2 },
    };
    let field = FieldSpec::new(kind, raw.units.c_light);
    field
        .validate(&geometry)
        .map_err(|e| ConfigError { line: key_line(text, "field"), message: e.to_string() })?;

    let s = &raw.solver;
    let quadrature = QuadratureSpec::new(s.quadrature.order, s.quadrature.subdivisions)
        .map_err(|e| ConfigError { line: key_line(text, "quadrature"), message: e.to_string() })?;
    let settings = SolverSettings {
        nr: s.nx,
        nz: s.nz,
        tol: s.tol,
        max_iter: s.max_iter,
        k_safety: s.k_safety,
        quadrature,
        ..SolverSettings::default()
    };
    settings
        .validate()
        .map_err(|e| ConfigError { line: key_line(text, "solver"), message: e.to_string() })?;
    vpconfine::elliptic::build_grid(&geometry, s.nx, s.nz)
        .map_err(|e| ConfigError { line: key_line(text, "solver"), message: e.to_string() })?;

    let boundary = match raw.boundary {
        BoundaryBlock::Constant { value } if value.is_finite() => BoundaryData::Constant(value),
        BoundaryBlock::Constant { .. } => return Err(err(Some("\"boundary\""), "boundary value must be finite".into())),
    };

    let mut species = Vec::with_capacity(raw.species.len());
    for sb in &raw.species {
        let c = sb.cutoff;
        let needle = format!("\"{}\"", sb.label);
        let sp = Species {
            label: sb.label.clone(),
            charge: sb.charge,
            mass: sb.mass,
            cutoff: CutoffSpec { e0: c.e0, i0: c.i0, amplitude: c.amplitude, w_e: c.w_e, w_i: c.w_i },
        };
        sp.validate().map_err(|e| err(Some(&needle), e.to_string()))?;
        species.push(sp);
    }
    vpconfine::model::check_unique_labels(&species).map_err(|e| err(Some("\"species\""), e.to_string()))?;

    let family = match &raw.family {
        Some(fb) => {
            let c = fb.base;
            let t = FamilyTemplate {
                geometry,
                field,
                base: CutoffSpec { e0: c.e0, i0: c.i0, amplitude: c.amplitude, w_e: c.w_e, w_i: c.w_i },
                plus: (fb.plus.label.clone(), fb.plus.charge, fb.plus.mass),
                minus: (fb.minus.label.clone(), fb.minus.charge, fb.minus.mass),
                boundary: boundary.clone(),
                settings: settings.clone(),
            };
            t.validate().map_err(|e| err(Some("\"family\""), e.to_string()))?;
            for p in [&fb.plus, &fb.minus] {
                if !(p.mass.is_finite() && p.mass > 0.0) {
                    return Err(err(Some(&format!("\"{}\"", p.label)), format!("species '{}': mass must be positive", p.label)));
                }
            }
            if fb.plus.label == fb.minus.label {
                return Err(err(Some("\"family\""), "family species labels must differ".into()));
            }
            t.species(fb.lambda).map_err(|e| err(Some("\"lambda\""), e.to_string()))?;
            Some(t)
        }
        None => None,
    };
    if species.is_empty() && family.is_none() {
        return Err(err(None, "configuration needs a species list or a family block".into()));
    }

    Ok(LoadedConfig { raw, text: text.to_string(), geometry, field, settings, boundary, species, family })
}
