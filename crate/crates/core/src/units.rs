//! Physical units and material presets.
//!
//! Reduced units measure energies in `J` and temperatures in `J/k_B`.
//! Physical inputs use cm⁻¹ for couplings, Tesla for fields and Kelvin for
//! temperatures.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::model::TrimerParams;

/// `hc/k_B` in K·cm (second radiation constant, CODATA 2018): 1 cm⁻¹ ≙ 1.438776877 K.
pub const KELVIN_PER_INVERSE_CM: f64 = 1.438_776_877;

/// `μ_B/(hc)` in cm⁻¹/T (CODATA 2018).
pub const BOHR_MAGNETON_INVERSE_CM_PER_TESLA: f64 = 0.466_864_478_3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub j_cm: f64,
    pub d_cm: f64,
    pub g: f64,
    pub b_tesla: Option<f64>,
    pub t_kelvin: Option<f64>,
}

/// Reduced-unit image of a [`PhysicalParams`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedPoint {
    pub params: TrimerParams,
    /// `k_B T / J`, when a temperature was given.
    pub t: Option<f64>,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        ensure_finite("J [cm^-1]", self.j_cm)?;
        ensure_finite("D [cm^-1]", self.d_cm)?;
        ensure_finite("g", self.g)?;
        if self.j_cm <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "J must be positive, got {} cm^-1",
                self.j_cm
            )));
        }
        if self.g <= 0.0 {
            return Err(Error::InvalidParameter(format!("g must be positive, got {}", self.g)));
        }
        if let Some(b) = self.b_tesla {
            ensure_finite("B [T]", b)?;
        }
        if let Some(t) = self.t_kelvin {
            ensure_finite("T [K]", t)?;
            if t < 0.0 {
                return Err(Error::InvalidParameter(format!("T must be non-negative, got {t} K")));
            }
        }
        Ok(())
    }

    pub fn with_field(self, b_tesla: f64) -> Self {
        Self {
            b_tesla: Some(b_tesla),
            ..self
        }
    }

    pub fn with_temperature(self, t_kelvin: f64) -> Self {
        Self {
            t_kelvin: Some(t_kelvin),
            ..self
        }
    }

    /// `gμ_B B / J`.
    pub fn reduced_field(&self, b_tesla: f64) -> f64 {
        self.g * BOHR_MAGNETON_INVERSE_CM_PER_TESLA * b_tesla / self.j_cm
    }

    /// Inverse of [`Self::reduced_field`].
    pub fn field_tesla(&self, h_reduced: f64) -> f64 {
        h_reduced * self.j_cm / (self.g * BOHR_MAGNETON_INVERSE_CM_PER_TESLA)
    }

    /// `k_B T / J`.
    pub fn reduced_temperature(&self, t_kelvin: f64) -> f64 {
        t_kelvin / (self.j_cm * KELVIN_PER_INVERSE_CM)
    }

    pub fn temperature_kelvin(&self, t_reduced: f64) -> f64 {
        t_reduced * self.j_cm * KELVIN_PER_INVERSE_CM
    }

    pub fn to_reduced(&self) -> Result<ReducedPoint> {
        self.validate()?;
        let params = TrimerParams::reduced(self.d_cm / self.j_cm, self.reduced_field(self.b_tesla.unwrap_or(0.0)))?;
        Ok(ReducedPoint {
            params,
            t: self.t_kelvin.map(|t| self.reduced_temperature(t)),
        })
    }

    /// Rebuilds physical inputs from a reduced point, given `J` and `g`.
    pub fn from_reduced(point: &ReducedPoint, j_cm: f64, g: f64) -> Result<Self> {
        let base = Self {
            j_cm,
            d_cm: point.params.d() / point.params.j() * j_cm,
            g,
            b_tesla: None,
            t_kelvin: None,
        };
        base.validate()?;
        let h = point.params.h() / point.params.j();
        Ok(Self {
            b_tesla: Some(base.field_tesla(h)),
            t_kelvin: point.t.map(|t| base.temperature_kelvin(t)),
            ..base
        })
    }
}

/// Heterotrimetallic Cu–Ni–Cu complex: `J = 22.8 cm⁻¹`, `D = 0.05 cm⁻¹`, `g = 2.227`.
pub fn cunicu_preset() -> PhysicalParams {
    PhysicalParams {
        j_cm: 22.8,
        d_cm: 0.05,
        g: 2.227,
        b_tesla: None,
        t_kelvin: None,
    }
}

/// Named material presets.
pub fn preset(name: &str) -> Option<PhysicalParams> {
    match name.to_ascii_lowercase().as_str() {
        "cunicu" => Some(cunicu_preset()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn preset_scales() {
        let p = cunicu_preset();
        assert!((p.temperature_kelvin(1.0) - 32.804).abs() < 1e-3);
        assert!((p.field_tesla(1.0) - 21.93).abs() < 1e-2);
        let r = p.to_reduced().unwrap();
        assert!((r.params.d() - 0.05 / 22.8).abs() < 1e-15);
        assert_eq!(r.params.h(), 0.0);
        assert_eq!(r.t, None);
    }

    #[test]
    fn fifty_tesla() {
        let r = cunicu_preset().with_field(50.0).to_reduced().unwrap();
        assert!((r.params.h() - 2.28006).abs() < 1e-5);
    }

    #[test]
    fn invalid_inputs() {
        let mut p = cunicu_preset();
        p.j_cm = 0.0;
        assert!(p.to_reduced().is_err());
        assert!(cunicu_preset().with_temperature(-1.0).to_reduced().is_err());
        let mut p = cunicu_preset();
        p.g = -2.0;
        assert!(p.validate().is_err());
        assert!(preset("CuNiCu").is_some());
        assert!(preset("unknown").is_none());
    }

    proptest! {
        #[test]
        fn round_trip(j in 0.5f64..100.0, d in -10.0f64..10.0, g in 1.5f64..2.5, b in 0.0f64..100.0, t in 0.0f64..300.0) {
            let p = PhysicalParams { j_cm: j, d_cm: d, g, b_tesla: Some(b), t_kelvin: Some(t) };
            let back = PhysicalParams::from_reduced(&p.to_reduced().unwrap(), j, g).unwrap();
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300);
            prop_assert!(close(back.d_cm, d));
            prop_assert!(close(back.b_tesla.unwrap(), b));
            prop_assert!(close(back.t_kelvin.unwrap(), t));
        }
    }
}
