use super::cutoff::CutoffSpec;
use crate::error::{config_err, Result};

/// A particle species: charge, mass and the profile of its ansatz density.
#[derive(Debug, Clone, PartialEq)]
pub struct Species {
    pub label: String,
    pub charge: f64,
    pub mass: f64,
    pub cutoff: CutoffSpec,
}

impl Species {
    pub fn new(label: impl Into<String>, charge: f64, mass: f64, cutoff: CutoffSpec) -> Result<Self> {
        let sp = Self { label: label.into(), charge, mass, cutoff };
        sp.validate()?;
        Ok(sp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.charge.is_finite() && self.charge != 0.0) {
            return Err(config_err(format!("species '{}': charge must be finite and nonzero", self.label)));
        }
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(config_err(format!("species '{}': mass must be positive", self.label)));
        }
        self.cutoff
            .validate()
            .map_err(|e| config_err(format!("species '{}': {e}", self.label)))
    }

    /// `E = ½ m |v|² + q u`.
    #[inline]
    pub fn energy(&self, v: &[f64], u: f64) -> f64 {
        let v2: f64 = v.iter().map(|x| x * x).sum();
        0.5 * self.mass * v2 + self.charge * u
    }

    /// Charge-to-mass combination `c m / q` that multiplies the angular momentum term.
    #[inline]
    pub(crate) fn gyro_factor(&self, c_light: f64) -> f64 {
        c_light * self.mass / self.charge
    }
}

/// Checks that labels are unique within a species list.
pub fn check_unique_labels(species: &[Species]) -> Result<()> {
    for (i, a) in species.iter().enumerate() {
        if species[..i].iter().any(|b| b.label == a.label) {
            return Err(config_err(format!("duplicate species label '{}'", a.label)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(q: f64, m: f64) -> Species {
        Species::new("s", q, m, CutoffSpec::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn energy_examples() {
        assert_eq!(sp(1.0, 2.0).energy(&[1.0, 0.0], 0.0), 1.0);
        assert_eq!(sp(-1.0, 2.0).energy(&[0.0, 0.0], 3.0), -3.0);
        assert_eq!(sp(2.0, 1.0).energy(&[1.0, 1.0, 1.0], 0.5), 2.5);
    }

    #[test]
    fn invalid_species_rejected() {
        let c = CutoffSpec::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(Species::new("x", 0.0, 1.0, c).is_err());
        assert!(Species::new("x", 1.0, 0.0, c).is_err());
        assert!(Species::new("x", 1.0, -2.0, c).is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let a = sp(1.0, 1.0);
        assert!(check_unique_labels(&[a.clone(), a]).is_err());
    }
}
