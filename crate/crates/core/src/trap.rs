//! Trap configuration and field-gradient strengths.

use serde::{Deserialize, Serialize};

use crate::angular::EulerAngles;
use crate::error::{Error, Result};

/// CODATA-2018 constants in SI units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub planck: f64,
    pub elementary_charge: f64,
    pub bohr_radius: f64,
    pub atomic_mass_unit: f64,
    pub bohr_magneton: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    planck: 6.626_070_15e-34,
    elementary_charge: 1.602_176_634e-19,
    bohr_radius: 5.291_772_109_03e-11,
    atomic_mass_unit: 1.660_539_066_60e-27,
    bohr_magneton: 9.274_010_078_3e-24,
};

impl PhysicalConstants {
    /// One e·a₀² in C·m².
    pub fn quadrupole_unit(&self) -> f64 {
        self.elementary_charge * self.bohr_radius * self.bohr_radius
    }
}

/// A value with a one-sigma uncertainty.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Measured {
    pub value: f64,
    pub uncertainty: f64,
}

impl Measured {
    pub const fn new(value: f64, uncertainty: f64) -> Self {
        Measured { value, uncertainty }
    }

    pub const fn exact(value: f64) -> Self {
        Measured { value, uncertainty: 0.0 }
    }

    pub fn relative(&self) -> f64 {
        (self.uncertainty / self.value).abs()
    }
}

/// Oscillating trap potential `A(x'²+y'²−2z'²) + ε(x'²−y'²)` times
/// `cos(Ω_rf t)`, with its orientation relative to the magnetic field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrapConfig {
    /// Ω_rf in rad/s.
    pub drive: f64,
    /// Pseudo-potential secular frequency in rad/s, when the gradient
    /// strengths were derived from it.
    pub secular: Option<Measured>,
    /// A in V/m².
    pub a: f64,
    /// ε in V/m².
    pub epsilon: f64,
    /// Ion mass in kg.
    pub mass: f64,
    pub orientation: EulerAngles,
}

impl TrapConfig {
    /// Ideal linear Paul trap: A = 0 and ε from the radial secular frequency.
    pub fn ideal_linear(mass: f64, drive: f64, secular: Measured, orientation: EulerAngles) -> Result<Self> {
        let epsilon = epsilon_from_secular(mass, drive, secular.value)?;
        Ok(TrapConfig { drive, secular: Some(secular), a: 0.0, epsilon, mass, orientation })
    }

    /// Ideal quadrupole (ring) trap: ε = 0 and A from the smaller radial
    /// secular frequency.
    pub fn ideal_quadrupole(mass: f64, drive: f64, secular: Measured, orientation: EulerAngles) -> Result<Self> {
        let a = epsilon_from_secular(mass, drive, secular.value)?;
        Ok(TrapConfig { drive, secular: Some(secular), a, epsilon: 0.0, mass, orientation })
    }

    /// Explicit gradient strengths.
    pub fn raw(mass: f64, drive: f64, a: f64, epsilon: f64, orientation: EulerAngles) -> Result<Self> {
        let cfg = TrapConfig { drive, secular: None, a, epsilon, mass, orientation };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.drive > 0.0) || !self.drive.is_finite() {
            return Err(Error::invalid(format!("drive frequency must be positive, got {}", self.drive)));
        }
        if !(self.mass > 0.0) || !self.mass.is_finite() {
            return Err(Error::invalid(format!("ion mass must be positive, got {}", self.mass)));
        }
        if !self.a.is_finite() || !self.epsilon.is_finite() {
            return Err(Error::invalid("gradient strengths must be finite"));
        }
        Ok(())
    }

    pub fn with_orientation(mut self, orientation: EulerAngles) -> Self {
        self.orientation = orientation;
        self
    }

    /// εΘ/ħ in rad/s for a quadrupole moment given in e·a₀².
    pub fn coupling_scale(&self, theta: f64) -> f64 {
        let c = CODATA_2018;
        self.epsilon * theta * c.quadrupole_unit() / c.hbar
    }
}

/// ε = mΩ_rf ω_s / (e√2). The same expression gives A for the ideal
/// quadrupole trap.
pub fn epsilon_from_secular(mass: f64, drive: f64, secular: f64) -> Result<f64> {
    for (name, v) in [("mass", mass), ("drive frequency", drive), ("secular frequency", secular)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(mass * drive * secular / (CODATA_2018.elementary_charge * std::f64::consts::SQRT_2))
}

/// Inverse of [`epsilon_from_secular`].
pub fn secular_from_epsilon(mass: f64, drive: f64, epsilon: f64) -> Result<f64> {
    for (name, v) in [("mass", mass), ("drive frequency", drive), ("epsilon", epsilon)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(epsilon * CODATA_2018.elementary_charge * std::f64::consts::SQRT_2 / (mass * drive))
}

/// Result of comparing measured secular frequencies against the ideal
/// rf-only relation ω_z = ω_x − ω_y.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecularConsistency {
    /// Mean radial frequency with the discrepancy as its uncertainty.
    pub secular: Measured,
    /// ω_z − (ω_x − ω_y), signed.
    pub asymmetry: f64,
}

pub fn secular_consistency(omega_x: f64, omega_y: f64, omega_z: f64) -> SecularConsistency {
    let asymmetry = omega_z - (omega_x - omega_y);
    SecularConsistency {
        secular: Measured::new(0.5 * (omega_x + omega_y), asymmetry.abs()),
        asymmetry,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    const BA_MASS_U: f64 = 137.905;

    #[test]
    fn barium_coupling_closes_the_loop() {
        let c = CODATA_2018;
        let eps = epsilon_from_secular(BA_MASS_U * c.atomic_mass_unit, TAU * 20.585e6, TAU * 943e3).unwrap();
        let trap = TrapConfig::raw(BA_MASS_U * c.atomic_mass_unit, TAU * 20.585e6, 0.0, eps, EulerAngles::IDENTITY).unwrap();
        let w = trap.coupling_scale(3.229) / TAU;
        assert!((w - 1694.0).abs() < 1.0, "{w}");
    }

    #[test]
    fn lutetium_scale() {
        let c = CODATA_2018;
        let eps = epsilon_from_secular(175.94 * c.atomic_mass_unit, TAU * 33e6, TAU * 1e6).unwrap();
        let w = eps * 1.77 * c.quadrupole_unit() / c.hbar / TAU;
        // hand arithmetic: 2013.4 Hz
        assert!((w - 2013.4).abs() < 0.5, "{w}");
    }

    #[test]
    fn linearity_and_inverse() {
        let e1 = epsilon_from_secular(1e-25, 1e8, 1e6).unwrap();
        assert!((epsilon_from_secular(1e-25, 1e8, 2e6).unwrap() / e1 - 2.0).abs() < 1e-15);
        assert!((epsilon_from_secular(3e-25, 1e8, 1e6).unwrap() / e1 - 3.0).abs() < 1e-15);
        assert!((epsilon_from_secular(1e-25, 0.5e8, 1e6).unwrap() / e1 - 0.5).abs() < 1e-15);
        let back = secular_from_epsilon(1e-25, 1e8, e1).unwrap();
        assert!((back / 1e6 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(epsilon_from_secular(0.0, 1.0, 1.0).is_err());
        assert!(epsilon_from_secular(1.0, -1.0, 1.0).is_err());
        assert!(epsilon_from_secular(1.0, 1.0, f64::NAN).is_err());
        assert!(TrapConfig::raw(1.0, 0.0, 0.0, 0.0, EulerAngles::IDENTITY).is_err());
    }

    #[test]
    fn measured_barium_frequencies() {
        let s = secular_consistency(TAU * 990e3, TAU * 895e3, TAU * 112e3);
        assert!((s.secular.value / TAU - 942.5e3).abs() < 1e-6);
        assert!((s.secular.uncertainty / TAU - 17e3).abs() < 1e-6);
    }

    #[test]
    fn ideal_and_symmetric_limits() {
        let s = secular_consistency(3.0, 1.0, 2.0);
        assert_eq!(s.secular.uncertainty, 0.0);
        let s = secular_consistency(5.0, 5.0, 0.0);
        assert_eq!(s.secular.value, 5.0);
        assert_eq!(s.secular.uncertainty, 0.0);
    }

    #[test]
    fn presets() {
        let m = 1e-25;
        let lin = TrapConfig::ideal_linear(m, 1e8, Measured::exact(1e6), EulerAngles::IDENTITY).unwrap();
        let quad = TrapConfig::ideal_quadrupole(m, 1e8, Measured::exact(1e6), EulerAngles::IDENTITY).unwrap();
        assert_eq!(lin.a, 0.0);
        assert_eq!(quad.epsilon, 0.0);
        assert_eq!(lin.epsilon, quad.a);
    }
}
