//! The gas model: dimension, dispersion exponent, mass and unit system,
//! plus the closed-form thermal prefactors.
//!
//! All solvers work in natural units, `hbar = k_B = 1`. For an SI spec the
//! natural energy unit is `k_B * 1 K` and the natural mass unit is the
//! particle mass, which fixes the length unit at `hbar / sqrt(m k_B * 1 K)`.
//! [`UnitScale`] converts at the I/O boundary.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kv;
use crate::special::{gamma, ln_gamma_abs};

/// Reduced Planck constant, J s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J / K.
pub const K_B_SI: f64 = 1.380_649e-23;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// `hbar = k_B = 1`, mass in the caller's mass unit.
    Natural,
    /// Kelvin, kilogram, metre, pascal (J / m^d).
    Si,
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Units::Natural => f.write_str("natural"),
            Units::Si => f.write_str("si"),
        }
    }
}

impl FromStr for Units {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "natural" => Ok(Units::Natural),
            "si" => Ok(Units::Si),
            other => Err(Error::Config(format!("unknown unit system '{other}' (expected natural or si)"))),
        }
    }
}

/// Ideal Bose gas with dispersion `eps(k) = hbar^2 k^sigma / 2m` in `d` dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasSpec {
    pub d: f64,
    pub sigma: f64,
    pub mass: f64,
    pub units: Units,
}

impl GasSpec {
    pub fn new(d: f64, sigma: f64, mass: f64, units: Units) -> Result<Self> {
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::domain(format!("dimension must be positive and finite, got d = {d}")));
        }
        if !(sigma > 0.0 && sigma <= 2.0) {
            return Err(Error::domain(format!("dispersion exponent must satisfy 0 < sigma <= 2, got {sigma}")));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::domain(format!("mass must be positive, got {mass}")));
        }
        Ok(GasSpec { d, sigma, mass, units })
    }

    /// Natural units with unit mass.
    pub fn natural(d: f64, sigma: f64) -> Result<Self> {
        Self::new(d, sigma, 1.0, Units::Natural)
    }

    /// `d / sigma`, the order of the density Bose function.
    pub fn nu(&self) -> f64 {
        self.d / self.sigma
    }

    /// Mass as seen by the solvers. An SI spec measures mass in units of the
    /// particle mass, so it is 1.
    pub fn natural_mass(&self) -> f64 {
        match self.units {
            Units::Natural => self.mass,
            Units::Si => 1.0,
        }
    }

    /// `c = hbar^2 / 2m` in natural units.
    pub fn dispersion_coefficient(&self) -> f64 {
        0.5 / self.natural_mass()
    }

    pub fn unit_scale(&self) -> UnitScale {
        UnitScale::for_spec(self)
    }

    /// Flat `key = value` document with keys `d`, `sigma`, `mass`, `units`.
    pub fn to_key_value(&self) -> String {
        format!(
            "d = {}\nsigma = {}\nmass = {}\nunits = {}\n",
            fmt_real(self.d),
            fmt_real(self.sigma),
            fmt_real(self.mass),
            self.units
        )
    }

    pub fn from_key_value(text: &str) -> Result<Self> {
        let map = kv::parse(text)?;
        Self::from_map(&map)
    }

    pub(crate) fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let d = kv::required_real(map, "d")?;
        let sigma = kv::required_real(map, "sigma")?;
        let mass = kv::optional_real(map, "mass")?.unwrap_or(1.0);
        let units = match map.get("units") {
            Some(u) => u.parse()?,
            None => Units::Natural,
        };
        Self::new(d, sigma, mass, units).map_err(|e| Error::Config(e.to_string()))
    }
}

fn fmt_real(x: f64) -> String {
    format!("{x:?}")
}

/// Thermal scales at one temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoScales {
    /// `lambda_T = (2 pi hbar^2 / m k_B T)^(1/sigma)`
    pub lambda_t: f64,
    /// `lambda_0 = lambda_T T^(1/sigma)`, temperature independent.
    pub lambda_0: f64,
    /// `A(d, sigma)`
    pub a: f64,
}

impl ThermoScales {
    pub fn new(spec: &GasSpec, temperature: f64) -> Result<Self> {
        Ok(ThermoScales {
            lambda_t: thermal_wavelength(spec, temperature)?,
            lambda_0: lambda_zero(spec),
            a: prefactor_a(spec.d, spec.sigma)?,
        })
    }

    /// `lambda_T^{-d} A`, the factor in front of the Bose functions.
    pub fn density_scale(&self, d: f64) -> f64 {
        self.a * self.lambda_t.powf(-d)
    }
}

/// Thermal wavelength, natural units.
pub fn thermal_wavelength(spec: &GasSpec, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(Error::domain(format!("temperature must be positive, got {temperature}")));
    }
    Ok((2.0 * PI / (spec.natural_mass() * temperature)).powf(1.0 / spec.sigma))
}

/// `lambda_0 = (2 pi hbar^2 / m k_B)^(1/sigma)`.
pub fn lambda_zero(spec: &GasSpec) -> f64 {
    (2.0 * PI / spec.natural_mass()).powf(1.0 / spec.sigma)
}

/// Geometric prefactor
/// `A(d, sigma) = 2^(1 - d + 2d/sigma) Gamma(d/sigma) / (sigma pi^(d(1/2 - 1/sigma)) Gamma(d/2))`.
pub fn prefactor_a(d: f64, sigma: f64) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::domain(format!("prefactor A needs d > 0, got {d}")));
    }
    if !(sigma > 0.0 && sigma <= 2.0) {
        return Err(Error::domain(format!("prefactor A needs 0 < sigma <= 2, got {sigma}")));
    }
    let two_power = 1.0 - d + 2.0 * d / sigma;
    let pi_power = d * (0.5 - 1.0 / sigma);
    let nu = d / sigma;
    if nu < 170.0 && d < 340.0 {
        Ok(2f64.powf(two_power) * gamma(nu)? / (sigma * PI.powf(pi_power) * gamma(0.5 * d)?))
    } else {
        let ln_a = two_power * std::f64::consts::LN_2 + ln_gamma_abs(nu)?
            - sigma.ln()
            - pi_power * PI.ln()
            - ln_gamma_abs(0.5 * d)?;
        Ok(ln_a.exp())
    }
}

/// `eps(k) = hbar^2 k^sigma / 2m`, natural units.
pub fn dispersion(spec: &GasSpec, k: f64) -> Result<f64> {
    if !(k >= 0.0) {
        return Err(Error::domain(format!("wavenumber must be >= 0, got {k}")));
    }
    Ok(spec.dispersion_coefficient() * k.powf(spec.sigma))
}

/// Conversion factors between SI and the natural units of a spec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitScale {
    pub d: f64,
    /// Joules per natural energy unit.
    pub energy_j: f64,
    /// Kilograms per natural mass unit.
    pub mass_kg: f64,
    /// Metres per natural length unit.
    pub length_m: f64,
}

impl UnitScale {
    pub fn for_spec(spec: &GasSpec) -> Self {
        match spec.units {
            Units::Natural => UnitScale { d: spec.d, energy_j: 1.0, mass_kg: 1.0, length_m: 1.0 },
            Units::Si => {
                let energy_j = K_B_SI;
                UnitScale { d: spec.d, energy_j, mass_kg: spec.mass, length_m: HBAR_SI / (spec.mass * energy_j).sqrt() }
            }
        }
    }

    fn is_identity(&self) -> bool {
        self.energy_j == 1.0 && self.mass_kg == 1.0 && self.length_m == 1.0
    }

    /// Kelvin to natural temperature (energy).
    pub fn temperature_to_natural(&self, t: f64) -> f64 {
        if self.is_identity() {
            t
        } else {
            t * K_B_SI / self.energy_j
        }
    }

    pub fn temperature_from_natural(&self, t: f64) -> f64 {
        if self.is_identity() {
            t
        } else {
            t * self.energy_j / K_B_SI
        }
    }

    pub fn energy_to_natural(&self, e: f64) -> f64 {
        e / self.energy_j
    }

    pub fn energy_from_natural(&self, e: f64) -> f64 {
        e * self.energy_j
    }

    pub fn mass_to_natural(&self, m: f64) -> f64 {
        m / self.mass_kg
    }

    pub fn mass_from_natural(&self, m: f64) -> f64 {
        m * self.mass_kg
    }

    pub fn density_to_natural(&self, rho: f64) -> f64 {
        rho * self.length_m.powf(self.d)
    }

    pub fn density_from_natural(&self, rho: f64) -> f64 {
        rho / self.length_m.powf(self.d)
    }

    /// Pressure and energy density share units, J / m^d.
    pub fn pressure_to_natural(&self, p: f64) -> f64 {
        p * self.length_m.powf(self.d) / self.energy_j
    }

    pub fn pressure_from_natural(&self, p: f64) -> f64 {
        p * self.energy_j / self.length_m.powf(self.d)
    }

    pub fn length_from_natural(&self, l: f64) -> f64 {
        l * self.length_m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn wavelength_examples() {
        let s2 = GasSpec::natural(3.0, 2.0).unwrap();
        assert_relative_eq!(thermal_wavelength(&s2, 2.0 * PI).unwrap(), 1.0, max_relative = 1e-15);
        let ratio = thermal_wavelength(&s2, 4.0).unwrap() / thermal_wavelength(&s2, 1.0).unwrap();
        assert_relative_eq!(ratio, 0.5, max_relative = 1e-15);
        let s1 = GasSpec::natural(3.0, 1.0).unwrap();
        assert_relative_eq!(thermal_wavelength(&s1, 1.0).unwrap(), 2.0 * PI, max_relative = 1e-15);
        assert!(matches!(thermal_wavelength(&s1, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn prefactor_examples() {
        assert_relative_eq!(prefactor_a(3.0, 2.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(prefactor_a(1.7, 2.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(prefactor_a(3.0, 1.0).unwrap(), 64.0 * PI, max_relative = 1e-13);
        assert!(prefactor_a(3.0, 2.5).is_err());
        assert!(prefactor_a(-1.0, 2.0).is_err());
    }

    #[test]
    fn dispersion_examples() {
        let s2 = GasSpec::natural(3.0, 2.0).unwrap();
        assert_eq!(dispersion(&s2, 1.0).unwrap(), 0.5);
        assert_eq!(dispersion(&s2, 0.0).unwrap(), 0.0);
        let s1 = GasSpec::natural(3.0, 1.0).unwrap();
        assert_eq!(dispersion(&s1, 2.0).unwrap(), 1.0);
        assert!(dispersion(&s1, -1.0).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(GasSpec::natural(3.0, 0.0).is_err());
        assert!(GasSpec::natural(3.0, 2.1).is_err());
        assert!(GasSpec::natural(0.0, 2.0).is_err());
        assert!(GasSpec::new(3.0, 2.0, -1.0, Units::Natural).is_err());
        assert!(GasSpec::natural(2.5, 1.3).is_ok());
    }

    #[test]
    fn key_value_round_trip() {
        let spec = GasSpec::new(2.5, 1.8, 1.44e-25, Units::Si).unwrap();
        let back = GasSpec::from_key_value(&spec.to_key_value()).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn key_value_defaults_and_errors() {
        let spec = GasSpec::from_key_value("d = 3\nsigma = 2\n").unwrap();
        assert_eq!(spec.mass, 1.0);
        assert_eq!(spec.units, Units::Natural);
        assert!(matches!(GasSpec::from_key_value("d = 3\n"), Err(Error::Config(_))));
        assert!(matches!(GasSpec::from_key_value("d = 3\nsigma = two\n"), Err(Error::Config(_))));
        assert!(matches!(GasSpec::from_key_value("d = 3\nsigma = 3\n"), Err(Error::Config(_))));
    }

    #[test]
    fn si_length_unit() {
        let spec = GasSpec::new(3.0, 2.0, 1.443_160_6e-25, Units::Si).unwrap();
        let scale = spec.unit_scale();
        assert_relative_eq!(scale.length_m, HBAR_SI / (1.443_160_6e-25 * K_B_SI).sqrt(), max_relative = 1e-15);
    }

    proptest! {
        #[test]
        fn prefactor_is_one_for_quadratic_dispersion(d in 0.1f64..12.0) {
            let a = prefactor_a(d, 2.0).unwrap();
            prop_assert!((a - 1.0).abs() <= 1e-14);
        }

        #[test]
        fn wavelength_power_law(t in 1e-3f64..1e3, sigma in 0.2f64..2.0) {
            let spec = GasSpec::natural(3.0, sigma).unwrap();
            let slope = (thermal_wavelength(&spec, 2.0 * t).unwrap().ln()
                - thermal_wavelength(&spec, t).unwrap().ln()) / 2f64.ln();
            prop_assert!((slope + 1.0 / sigma).abs() < 1e-10);
        }

        #[test]
        fn si_round_trip(
            d in 1.0f64..4.0,
            m in 1e-27f64..1e-24,
            t in 1e-9f64..1e3,
            rho in 1e10f64..1e30,
            p in 1e-12f64..1e5,
        ) {
            let spec = GasSpec::new(d, 2.0, m, Units::Si).unwrap();
            let s = spec.unit_scale();
            let close = |a: f64, b: f64| ((a - b) / b).abs() <= 1e-12;
            prop_assert!(close(s.mass_from_natural(s.mass_to_natural(m)), m));
            prop_assert!(close(s.temperature_from_natural(s.temperature_to_natural(t)), t));
            prop_assert!(close(s.density_from_natural(s.density_to_natural(rho)), rho));
            prop_assert!(close(s.pressure_from_natural(s.pressure_to_natural(p)), p));
        }
    }
}
