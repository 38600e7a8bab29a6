//! Constant-pressure thermodynamics: `T_c(P)` and the normal branch above it.
//!
//! States below `T_c(P)` are refused with [`Error::CondensedRegion`]; only the
//! boundary `T = T_c(P)` and the normal branch are produced.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gas::{GasSpec, ThermoScales};
use crate::isochore::{
    critical_temperature_density, density_normal, invert_bose, pressure_at, Regime, CRITICAL_WINDOW, RESIDUAL_TOL,
};
use crate::special::zeta;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsobarPoint {
    pub temperature: f64,
    pub pressure: f64,
    pub r: f64,
    /// Infinite at the boundary when `d <= sigma`.
    pub rho: f64,
    /// Specific volume `1 / rho`.
    pub v: f64,
    /// `(T - T_c(P)) / T_c(P)`
    pub t_p: f64,
    pub regime: Regime,
}

/// `T_c(P) = [lambda_0^d P / (zeta(1 + d/sigma) A k_B)]^(sigma / (d + sigma))`, any `d > 0`.
pub fn critical_temperature_pressure(spec: &GasSpec, pressure: f64) -> Result<f64> {
    if !(pressure > 0.0) || !pressure.is_finite() {
        return Err(Error::domain(format!("pressure must be positive and finite, got {pressure}")));
    }
    let scales = ThermoScales::new(spec, 1.0)?;
    let zeta_p = zeta(1.0 + spec.nu())?;
    Ok((scales.lambda_0.powf(spec.d) * pressure / (zeta_p * scales.a)).powf(spec.sigma / (spec.d + spec.sigma)))
}

/// State at `(T, P)` for `T >= T_c(P)`.
pub fn solve_gap_isobar(spec: &GasSpec, temperature: f64, pressure: f64) -> Result<IsobarPoint> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::domain(format!("temperature must be positive and finite, got {temperature}")));
    }
    let tc = critical_temperature_pressure(spec, pressure)?;
    let t_p = temperature / tc - 1.0;
    if t_p <= -CRITICAL_WINDOW {
        return Err(Error::CondensedRegion { temperature, critical: tc });
    }
    let (r, regime) = if t_p < CRITICAL_WINDOW {
        (0.0, Regime::CondensedBoundary)
    } else {
        let scales = ThermoScales::new(spec, temperature)?;
        let target = pressure / (temperature * scales.density_scale(spec.d));
        let r = invert_bose(spec.nu() + 1.0, target)? * temperature;
        let residual = (pressure_at(spec, temperature, r)? / pressure - 1.0).abs();
        if residual > RESIDUAL_TOL {
            return Err(Error::Convergence(format!(
                "pressure residual {residual:e} exceeds {RESIDUAL_TOL:e} at T = {temperature}, P = {pressure}"
            )));
        }
        (r, Regime::Normal)
    };
    let rho = if r == 0.0 && spec.nu() <= 1.0 { f64::INFINITY } else { density_normal(spec, temperature, r)? };
    Ok(IsobarPoint { temperature, pressure, r, rho, v: 1.0 / rho, t_p, regime })
}

/// `|T_c(P_c(rho)) / T_c(rho) - 1|` where `P_c(rho)` is the pressure on the
/// coexistence line `r = 0` at `T_c(rho)`.
pub fn coexistence_consistency(spec: &GasSpec, rho: f64) -> Result<f64> {
    let t1 = critical_temperature_density(spec, rho)?;
    let pc = pressure_at(spec, t1, 0.0)?;
    let t2 = critical_temperature_pressure(spec, pc)?;
    Ok((t2 / t1 - 1.0).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec(d: f64, sigma: f64) -> GasSpec {
        GasSpec::natural(d, sigma).unwrap()
    }

    #[test]
    fn tc_round_trip() {
        for &(d, sigma) in &[(3.0, 2.0), (2.0, 2.0), (1.0, 2.0), (2.5, 1.3)] {
            let s = spec(d, sigma);
            let p = 0.37;
            let tc = critical_temperature_pressure(&s, p).unwrap();
            assert_relative_eq!(pressure_at(&s, tc, 0.0).unwrap(), p, max_relative = 1e-12);
        }
    }

    #[test]
    fn tc_power_laws() {
        let s = spec(3.0, 2.0);
        let ratio = critical_temperature_pressure(&s, 16.0).unwrap() / critical_temperature_pressure(&s, 1.0).unwrap();
        assert_relative_eq!(ratio, 16f64.powf(0.4), max_relative = 1e-14);
        let s2 = spec(2.0, 2.0);
        let ratio = critical_temperature_pressure(&s2, 4.0).unwrap() / critical_temperature_pressure(&s2, 1.0).unwrap();
        assert_relative_eq!(ratio, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn boundary_state() {
        let s = spec(3.0, 2.0);
        let p = 1.0;
        let tc = critical_temperature_pressure(&s, p).unwrap();
        let b = solve_gap_isobar(&s, tc, p).unwrap();
        assert_eq!(b.r, 0.0);
        assert_eq!(b.regime, Regime::CondensedBoundary);
        let scales = ThermoScales::new(&s, tc).unwrap();
        assert_relative_eq!(b.rho, scales.density_scale(3.0) * zeta(1.5).unwrap(), max_relative = 1e-14);
    }

    #[test]
    fn boundary_density_diverges_for_low_dimension() {
        let s = spec(2.0, 2.0);
        let tc = critical_temperature_pressure(&s, 1.0).unwrap();
        let b = solve_gap_isobar(&s, tc, 1.0).unwrap();
        assert!(b.rho.is_infinite());
        assert_eq!(b.v, 0.0);
    }

    #[test]
    fn refuses_condensed_region() {
        let s = spec(3.0, 2.0);
        let tc = critical_temperature_pressure(&s, 1.0).unwrap();
        assert!(matches!(solve_gap_isobar(&s, 0.9 * tc, 1.0), Err(Error::CondensedRegion { .. })));
    }

    #[test]
    fn normal_branch_against_bisection() {
        let s = spec(3.0, 2.0);
        let p = 1.0;
        let tc = critical_temperature_pressure(&s, p).unwrap();
        let pt = solve_gap_isobar(&s, 2.0 * tc, p).unwrap();
        let f = |r: f64| pressure_at(&s, 2.0 * tc, r).unwrap() - p;
        let (mut lo, mut hi) = (0.0, 100.0 * tc);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert_relative_eq!(pt.r, 0.5 * (lo + hi), max_relative = 1e-9);
        assert!((pressure_at(&s, 2.0 * tc, pt.r).unwrap() / p - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn coexistence_examples() {
        assert!(coexistence_consistency(&spec(3.0, 2.0), 0.8).unwrap() <= 1e-8);
        assert!(coexistence_consistency(&spec(3.0, 1.5), 0.8).unwrap() <= 1e-8);
        assert!(matches!(coexistence_consistency(&spec(2.0, 2.0), 0.8), Err(Error::ZeroTemperatureBec { .. })));
    }

    #[test]
    fn isobar_monotonicity() {
        for &(d, sigma) in &[(3.0, 2.0), (1.0, 2.0)] {
            let s = spec(d, sigma);
            let p = 0.5;
            let tc = critical_temperature_pressure(&s, p).unwrap();
            let mut last: Option<IsobarPoint> = None;
            for i in 1..30 {
                let pt = solve_gap_isobar(&s, tc * (1.0 + 0.1 * i as f64), p).unwrap();
                if let Some(prev) = last {
                    assert!(pt.r > prev.r);
                    assert!(pt.rho < prev.rho);
                }
                last = Some(pt);
            }
        }
    }
}
