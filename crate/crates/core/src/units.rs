//! Unit-carrying scalars and physical constants.
//!
//! Frequencies are exchanged in THz and concentrations in μM at the API
//! surface; both newtypes store SI values (Hz, mol/m³) so that the
//! polarizability and mixing formulas can be written without scale factors.

use std::fmt;

use crate::error::{Error, Result};

/// CODATA 2018 values used by the electron polarizability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Elementary charge in C.
    pub elementary_charge: f64,
    /// Electron rest mass in kg.
    pub electron_mass: f64,
    /// Vacuum permittivity in F/m.
    pub vacuum_permittivity: f64,
    /// Avogadro constant in 1/mol.
    pub avogadro: f64,
}

/// The single shared constant set.
pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    elementary_charge: 1.602_176_634e-19,
    electron_mass: 9.109_383_701_5e-31,
    vacuum_permittivity: 8.854_187_812_8e-12,
    avogadro: 6.022_140_76e23,
};

const HZ_PER_THZ: f64 = 1e12;
const MOL_PER_M3_PER_MICROMOLAR: f64 = 1e-3;

/// A frequency, stored in Hz.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Frequency(f64);

impl Frequency {
    pub fn from_thz(thz: f64) -> Self {
        Frequency(thz * HZ_PER_THZ)
    }

    pub fn from_hz(hz: f64) -> Self {
        Frequency(hz)
    }

    pub fn thz(self) -> f64 {
        self.0 / HZ_PER_THZ
    }

    pub fn hz(self) -> f64 {
        self.0
    }

    /// Angular frequency 2πν in rad/s.
    pub fn angular(self) -> f64 {
        std::f64::consts::TAU * self.0
    }

    /// Domain check shared by every operation with a pole at ν = 0.
    pub(crate) fn require_positive(self) -> Result<Self> {
        if self.0.is_finite() && self.0 > 0.0 {
            Ok(self)
        } else {
            Err(Error::domain(format!(
                "frequency must be positive and finite, got {} THz",
                self.thz()
            )))
        }
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} THz", self.thz())
    }
}

/// A non-negative molar concentration, stored in mol/m³.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Concentration(f64);

impl Concentration {
    pub const ZERO: Concentration = Concentration(0.0);

    pub fn from_micromolar(um: f64) -> Result<Self> {
        Self::from_mol_per_m3(um * MOL_PER_M3_PER_MICROMOLAR)
    }

    pub fn from_mol_per_m3(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 0.0 {
            Ok(Concentration(value))
        } else {
            Err(Error::domain(format!(
                "concentration must be finite and non-negative, got {value} mol/m^3"
            )))
        }
    }

    pub fn micromolar(self) -> f64 {
        self.0 / MOL_PER_M3_PER_MICROMOLAR
    }

    pub fn mol_per_m3(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Concentration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} uM", self.micromolar())
    }
}

/// Convert mol/m³ to μM for values that are not guaranteed non-negative.
pub fn mol_per_m3_to_micromolar(value: f64) -> f64 {
    value / MOL_PER_M3_PER_MICROMOLAR
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_positive() {
        let c = CODATA_2018;
        for v in [c.elementary_charge, c.electron_mass, c.vacuum_permittivity, c.avogadro] {
            assert!(v > 0.0);
        }
    }

    #[test]
    fn unit_conversions() {
        let f = Frequency::from_thz(0.7);
        assert_eq!(f.hz(), 0.7e12);
        assert!((f.thz() - 0.7).abs() < 1e-15);
        let c = Concentration::from_micromolar(25.0).unwrap();
        assert!((c.mol_per_m3() - 0.025).abs() < 1e-17);
        assert!((c.micromolar() - 25.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_negative_concentration() {
        assert!(Concentration::from_micromolar(-1.0).is_err());
        assert!(Concentration::from_micromolar(f64::NAN).is_err());
    }

    #[test]
    fn rejects_non_positive_frequency() {
        assert!(Frequency::from_thz(0.0).require_positive().is_err());
        assert!(Frequency::from_thz(-0.1).require_positive().is_err());
        assert!(Frequency::from_thz(0.1).require_positive().is_ok());
    }
}
