//! Smoothstep-product cutoff profiles.
//!
//! A profile composes the two first integrals `(E, I)` into a nonnegative,
//! bounded, C¹ phase-space density that vanishes once either integral
//! reaches its cutoff value.

use crate::error::{config_err, Result};

/// Cubic smoothstep clamped to `[0, 1]`.
#[inline]
pub fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t * t * (3.0 - 2.0 * t)
    }
}

#[inline]
pub fn smoothstep_derivative(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        6.0 * t * (1.0 - t)
    }
}

/// Parameters of `ψ(E, I) = C · s((E0 − E)/wE) · s((I0 − I)/wI)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub e0: f64,
    pub i0: f64,
    pub amplitude: f64,
    pub w_e: f64,
    pub w_i: f64,
}

/// Value and partial derivatives of a cutoff profile at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffValue {
    pub value: f64,
    pub d_e: f64,
    pub d_i: f64,
}

impl CutoffSpec {
    pub fn new(e0: f64, i0: f64, amplitude: f64, w_e: f64, w_i: f64) -> Result<Self> {
        let spec = Self { e0, i0, amplitude, w_e, w_i };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.e0, self.i0, self.amplitude, self.w_e, self.w_i]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(config_err("cutoff parameters must be finite"));
        }
        if self.amplitude < 0.0 {
            return Err(config_err("cutoff amplitude must be nonnegative"));
        }
        if self.w_e <= 0.0 || self.w_i <= 0.0 {
            return Err(config_err("cutoff widths must be positive"));
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn energy_factor(&self, e: f64) -> f64 {
        smoothstep((self.e0 - e) / self.w_e)
    }

    #[inline]
    pub(crate) fn integral_factor(&self, i: f64) -> f64 {
        smoothstep((self.i0 - i) / self.w_i)
    }

    /// ψ(E, I).
    #[inline]
    pub fn value(&self, e: f64, i: f64) -> f64 {
        if self.amplitude == 0.0 {
            return 0.0;
        }
        let se = self.energy_factor(e);
        if se == 0.0 {
            return 0.0;
        }
        self.amplitude * se * self.integral_factor(i)
    }

    /// ψ together with ∂ψ/∂E and ∂ψ/∂I.
    pub fn eval(&self, e: f64, i: f64) -> CutoffValue {
        let te = (self.e0 - e) / self.w_e;
        let ti = (self.i0 - i) / self.w_i;
        let (se, si) = (smoothstep(te), smoothstep(ti));
        CutoffValue {
            value: self.amplitude * se * si,
            d_e: -self.amplitude * smoothstep_derivative(te) * si / self.w_e,
            d_i: -self.amplitude * se * smoothstep_derivative(ti) / self.w_i,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude == 0.0
    }

    /// The profile `E, I ↦ factor · ψ(α E, I)` written in the same family.
    pub fn rescale_energy(&self, alpha: f64, factor: f64) -> Self {
        Self {
            e0: self.e0 / alpha,
            w_e: self.w_e / alpha,
            amplitude: self.amplitude * factor,
            ..*self
        }
    }

    /// `λ^(2−m) ψ(λ⁻² E, λ⁻¹ I)` for velocity dimension `m`.
    pub fn field_scaled(&self, lambda: f64, velocity_dim: usize) -> Self {
        let l2 = lambda * lambda;
        Self {
            e0: self.e0 * l2,
            w_e: self.w_e * l2,
            i0: self.i0 * lambda,
            w_i: self.w_i * lambda,
            amplitude: self.amplitude * lambda.powi(2 - velocity_dim as i32),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> CutoffSpec {
        CutoffSpec::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn boundary_and_saturation_values() {
        let psi = unit();
        assert_eq!(psi.eval(1.0, 0.0).value, 0.0);
        assert_eq!(psi.eval(0.0, 0.0).value, 1.0);
        assert_eq!(psi.eval(0.5, 0.5).value, 0.25);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(CutoffSpec::new(1.0, 1.0, -1.0, 1.0, 1.0).is_err());
        assert!(CutoffSpec::new(1.0, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(CutoffSpec::new(f64::NAN, 1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn positive_at_origin_when_cutoffs_positive() {
        let psi = CutoffSpec::new(0.3, 0.2, 2.0, 1.0, 1.0).unwrap();
        assert!(psi.value(0.0, 0.0) > 0.0);
    }

    #[test]
    fn energy_rescale_matches_direct_evaluation() {
        let psi = CutoffSpec::new(0.7, 0.4, 1.3, 0.5, 0.2).unwrap();
        let scaled = psi.rescale_energy(2.5, 0.8);
        for &(e, i) in &[(0.0, 0.0), (0.1, 0.3), (0.25, 0.1), (-1.0, 0.35)] {
            let direct = 0.8 * psi.value(2.5 * e, i);
            assert!((scaled.value(e, i) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn value_and_eval_agree() {
        let psi = CutoffSpec::new(0.7, 0.4, 1.3, 0.5, 0.2).unwrap();
        for k in 0..50 {
            let e = -0.5 + 0.03 * k as f64;
            let i = 0.6 - 0.02 * k as f64;
            assert_eq!(psi.value(e, i), psi.eval(e, i).value);
        }
    }
}
