//! Constant-density thermodynamics.
//!
//! The density equation `rho = lambda_T^{-d} A g_{d/sigma}(r/T) + rho Psi^2`
//! is inverted for the gap `r = -mu` above `T_c(rho)`; below `T_c` the gap is
//! pinned at zero and the excess density goes into the condensate.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gas::{GasSpec, ThermoScales};
use crate::roots::{solve_decreasing, SolverOptions};
use crate::special::{bose_g, bose_g_derivative, zeta};

/// `|t|` below which a state is reported as critical with `r = 0`.
pub const CRITICAL_WINDOW: f64 = 1e-8;

/// Relative density residual every solved normal state must meet.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Below this `y = r/T` Newton is skipped when `d/sigma - 1 <= 1`.
pub const NEWTON_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    #[serde(rename = "normal")]
    Normal,
    #[serde(rename = "condensed")]
    Condensed,
    #[serde(rename = "critical")]
    Critical,
    #[serde(rename = "zero_temperature_BEC")]
    ZeroTemperatureBec,
    /// Isobar at `T = T_c(P)`; also tags refused rows below `T_c(P)` in sweeps.
    #[serde(rename = "condensed_boundary")]
    CondensedBoundary,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::Normal => "normal",
            Regime::Condensed => "condensed",
            Regime::Critical => "critical",
            Regime::ZeroTemperatureBec => "zero_temperature_BEC",
            Regime::CondensedBoundary => "condensed_boundary",
        };
        f.write_str(s)
    }
}

/// One equilibrium state on an isochore.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermoPoint {
    pub temperature: f64,
    /// `(T - T_c) / T_c`
    pub t: f64,
    /// Gap `r = -mu >= 0`.
    pub r: f64,
    /// Condensate fraction `Psi^2`.
    pub psi2: f64,
    pub rho: f64,
    pub pressure: f64,
    pub regime: Regime,
}

impl ThermoPoint {
    pub fn mu(&self) -> f64 {
        0.0 - self.r
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("{name} must be positive and finite, got {x}")));
    }
    Ok(())
}

/// `T_c(rho) = (2 pi hbar^2 / m k_B) [rho / (A zeta(d/sigma))]^(sigma/d)`.
///
/// For `d <= sigma` the density Bose function diverges at `r = 0` and the
/// transition moves to `T = 0`; this is reported as
/// [`Error::ZeroTemperatureBec`].
pub fn critical_temperature_density(spec: &GasSpec, rho: f64) -> Result<f64> {
    check_positive("density", rho)?;
    if spec.d <= spec.sigma {
        return Err(Error::ZeroTemperatureBec { d: spec.d, sigma: spec.sigma });
    }
    let scales = ThermoScales::new(spec, 1.0)?;
    let zeta_nu = zeta(spec.nu())?;
    Ok(scales.lambda_0.powf(spec.sigma) * (rho / (scales.a * zeta_nu)).powf(spec.sigma / spec.d))
}

/// Normal-component density `lambda_T^{-d} A g_{d/sigma}(r/T)`.
pub fn density_normal(spec: &GasSpec, temperature: f64, r: f64) -> Result<f64> {
    let scales = ThermoScales::new(spec, temperature)?;
    check_gap(r)?;
    Ok(scales.density_scale(spec.d) * bose_g(spec.nu(), r / temperature)?.value)
}

/// `P = k_B T lambda_T^{-d} A g_{d/sigma + 1}(r/T)`.
pub fn pressure_at(spec: &GasSpec, temperature: f64, r: f64) -> Result<f64> {
    let scales = ThermoScales::new(spec, temperature)?;
    check_gap(r)?;
    Ok(temperature * scales.density_scale(spec.d) * bose_g(spec.nu() + 1.0, r / temperature)?.value)
}

fn check_gap(r: f64) -> Result<()> {
    if !(r >= 0.0) {
        return Err(Error::domain(format!(
            "gap r = -mu must be >= 0 (mu > 0 is thermodynamically forbidden), got {r}"
        )));
    }
    Ok(())
}

/// Grand potential with a real fictitious field `h` conjugate to `Psi`:
/// `Omega = -T V lambda_T^{-d} A g_{d/sigma+1}(r/T) - h^2 / (N r)`.
pub fn grand_potential(spec: &GasSpec, temperature: f64, r: f64, h: f64, volume: f64, n_particles: f64) -> Result<f64> {
    check_positive("volume", volume)?;
    check_positive("particle number", n_particles)?;
    let field_term = if h == 0.0 {
        0.0
    } else {
        if r == 0.0 {
            return Err(Error::Pole("field term h^2/(N r) diverges at r = 0".into()));
        }
        h * h / (n_particles * r)
    };
    Ok(-pressure_at(spec, temperature, r)? * volume - field_term)
}

/// `Psi = h / (N r)`, the order parameter induced by the field.
pub fn order_parameter(h: f64, r: f64, n_particles: f64) -> Result<f64> {
    Ok(h * susceptibility(r, n_particles)?)
}

/// `chi_T = dPsi/dh = 1 / (N r)`.
pub fn susceptibility(r: f64, n_particles: f64) -> Result<f64> {
    check_positive("particle number", n_particles)?;
    if r == 0.0 {
        return Err(Error::Pole("susceptibility 1/(N r) diverges at r = 0".into()));
    }
    check_gap(r)?;
    Ok(1.0 / (n_particles * r))
}

/// Entropy at fixed `mu = -r`: `S = V [(d/sigma + 1) P + rho r] / T`.
pub fn entropy(spec: &GasSpec, temperature: f64, r: f64, volume: f64) -> Result<f64> {
    check_positive("volume", volume)?;
    let p = pressure_at(spec, temperature, r)?;
    let rho = if r == 0.0 && spec.nu() <= 1.0 { 0.0 } else { density_normal(spec, temperature, r)? };
    Ok(volume * ((spec.nu() + 1.0) * p + rho * r) / temperature)
}

/// Equilibrium state at `(T, rho)`.
pub fn solve_gap_isochore(spec: &GasSpec, temperature: f64, rho: f64) -> Result<ThermoPoint> {
    check_positive("temperature", temperature)?;
    check_positive("density", rho)?;
    let tc = critical_temperature_density(spec, rho)?;
    let nu = spec.nu();
    let t = temperature / tc - 1.0;

    if t.abs() < CRITICAL_WINDOW || t < 0.0 {
        let (psi2, regime) = if t.abs() < CRITICAL_WINDOW {
            (0.0, Regime::Critical)
        } else {
            (condensate_fraction(temperature, tc, nu), Regime::Condensed)
        };
        return Ok(ThermoPoint {
            temperature,
            t,
            r: 0.0,
            psi2,
            rho,
            pressure: pressure_at(spec, temperature, 0.0)?,
            regime,
        });
    }

    let scales = ThermoScales::new(spec, temperature)?;
    let target = rho / scales.density_scale(spec.d);
    let y = invert_bose(nu, target)?;
    let r = y * temperature;

    let rebuilt = density_normal(spec, temperature, r)?;
    let residual = (rebuilt / rho - 1.0).abs();
    if residual > RESIDUAL_TOL {
        return Err(Error::Convergence(format!(
            "density residual {residual:e} exceeds {RESIDUAL_TOL:e} at T = {temperature}, rho = {rho}"
        )));
    }
    Ok(ThermoPoint {
        temperature,
        t,
        r,
        psi2: 0.0,
        rho,
        pressure: pressure_at(spec, temperature, r)?,
        regime: Regime::Normal,
    })
}

/// `Psi^2 = 1 - (T/T_c)^(d/sigma)` below `T_c`.
pub fn condensate_fraction(temperature: f64, tc: f64, nu: f64) -> f64 {
    if temperature >= tc {
        0.0
    } else {
        (1.0 - (temperature / tc).powf(nu)).clamp(0.0, 1.0)
    }
}

/// Solves `g_order(y) = target` for `y > 0`.
pub(crate) fn invert_bose(order: f64, target: f64) -> Result<f64> {
    let opts =
        SolverOptions { newton_floor: if order - 1.0 <= 1.0 { NEWTON_FLOOR } else { 0.0 }, ..SolverOptions::default() };
    let root =
        solve_decreasing(|y| Ok(bose_g(order, y)?.value), |y| Ok(bose_g_derivative(order, y)?.value), target, opts)?;
    Ok(root.y)
}
