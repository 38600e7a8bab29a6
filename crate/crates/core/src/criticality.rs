//! Critical-regime analytics at constant density for `sigma < d < 2 sigma`:
//! the Landau-Ginzburg free energy `f = C_f (Psi^2 + (d/sigma) t)^(d/(d-sigma))`,
//! its stationarity condition, the asymptotic chemical potential, the static
//! correlation function `chi(k) = 1 / (c k^sigma + r)`, and log-log fits of
//! critical exponents to the exact solvers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gas::{GasSpec, ThermoScales};
use crate::isobar::{critical_temperature_pressure, solve_gap_isobar};
use crate::isochore::{critical_temperature_density, invert_bose, solve_gap_isochore};
use crate::special::{bose_g, gamma, is_integer, zeta};

/// Default log-uniform fit window in `t`.
pub const DEFAULT_FIT_WINDOW: FitWindow = FitWindow { t_min: 1e-5, t_max: 1e-2, points: 16 };

/// `|t|` up to which the leading-order Landau form is treated as reliable.
pub const LANDAU_VALID_WINDOW: f64 = 1e-2;

/// Effective free energy near `T_c` at fixed density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LandauModel {
    /// `C_f = (d/sigma - 1) [zeta(d/sigma) / |Gamma(1 - d/sigma)|]^(sigma/(d-sigma)) k_B T_c rho`
    pub c_f: f64,
    pub d_over_sigma: f64,
    pub t: f64,
    pub tc: f64,
    pub rho: f64,
    pub valid_window: f64,
}

impl LandauModel {
    pub fn new(spec: &GasSpec, rho: f64, t: f64) -> Result<Self> {
        check_landau_window(spec)?;
        if !t.is_finite() || t <= -1.0 {
            return Err(Error::domain(format!("reduced temperature must be finite and > -1, got {t}")));
        }
        let nu = spec.nu();
        let tc = critical_temperature_density(spec, rho)?;
        let c_f = (nu - 1.0) * amplitude(nu)?.powf(1.0 / (nu - 1.0)) * tc * rho;
        Ok(LandauModel { c_f, d_over_sigma: nu, t, tc, rho, valid_window: LANDAU_VALID_WINDOW })
    }

    /// `d / (d - sigma)`
    pub fn power(&self) -> f64 {
        self.d_over_sigma / (self.d_over_sigma - 1.0)
    }

    /// `sigma / (d - sigma)`, the exponent of the equation of state and of `mu`.
    pub fn eos_power(&self) -> f64 {
        1.0 / (self.d_over_sigma - 1.0)
    }

    pub fn temperature(&self) -> f64 {
        self.tc * (1.0 + self.t)
    }

    /// `Psi^2 + (d/sigma) t`, with round-off residue at the ordered root mapped to 0.
    pub fn bracket(&self, psi: f64) -> Result<f64> {
        let shift = self.d_over_sigma * self.t;
        let b = psi * psi + shift;
        if b.abs() <= 8.0 * f64::EPSILON * (psi * psi).max(shift.abs()) {
            return Ok(0.0);
        }
        if b > 0.0 {
            return Ok(b);
        }
        Err(Error::Branch(b))
    }

    /// `Psi^2` of the ordered solution, present for `t < 0`.
    pub fn ordered_root(&self) -> Option<f64> {
        (self.t < 0.0).then(|| -self.d_over_sigma * self.t)
    }

    /// `f(Psi)`
    pub fn free_energy(&self, psi: f64) -> Result<f64> {
        Ok(self.c_f * self.bracket(psi)?.powf(self.power()))
    }

    /// `df/dPsi = 2 Psi C_f d/(d-sigma) (Psi^2 + (d/sigma) t)^(sigma/(d-sigma))`
    pub fn free_energy_gradient(&self, psi: f64) -> Result<f64> {
        Ok(2.0 * psi * self.c_f * self.power() * self.bracket(psi)?.powf(self.eos_power()))
    }

    /// `Psi (Psi^2 + (d/sigma) t)^(sigma/(d-sigma))`: the gradient with the
    /// positive constant `2 C_f d/(d-sigma)` stripped. Zero exactly at `Psi = 0`
    /// and at `Psi^2 = -(d/sigma) t`.
    pub fn equation_of_state(&self, psi: f64) -> Result<f64> {
        Ok(psi * self.bracket(psi)?.powf(self.eos_power()))
    }

    /// `mu = -k_B T [zeta(d/sigma)/|Gamma(1-d/sigma)|]^(sigma/(d-sigma)) (Psi^2 + (d/sigma) t)^(sigma/(d-sigma))`
    pub fn chemical_potential(&self, psi: f64) -> Result<f64> {
        let b = self.bracket(psi)?;
        if b == 0.0 {
            return Ok(0.0);
        }
        Ok(-self.temperature() * (amplitude(self.d_over_sigma)? * b).powf(self.eos_power()))
    }

    /// Coefficients of `Psi^2` and `Psi^4` in the expansion of `f` about
    /// `Psi = 0`, for `t > 0`. Both vanish as `t -> 0+`.
    pub fn taylor_coefficients(&self) -> Result<(f64, f64)> {
        if !(self.t > 0.0) {
            return Err(Error::domain("Taylor expansion about Psi = 0 needs t > 0"));
        }
        let b = self.d_over_sigma * self.t;
        let p = self.power();
        Ok((self.c_f * p * b.powf(p - 1.0), self.c_f * 0.5 * p * (p - 1.0) * b.powf(p - 2.0)))
    }
}

/// `zeta(nu) / |Gamma(1 - nu)|`
fn amplitude(nu: f64) -> Result<f64> {
    Ok(zeta(nu)? / gamma(1.0 - nu)?.abs())
}

fn check_landau_window(spec: &GasSpec) -> Result<()> {
    let nu = spec.nu();
    if !(nu > 1.0 && nu < 2.0) || is_integer(nu) {
        return Err(Error::UnsupportedRegime(format!(
            "the Landau form requires sigma < d < 2 sigma, got d = {}, sigma = {}",
            spec.d, spec.sigma
        )));
    }
    Ok(())
}

/// Exact free-energy density `F/V = Omega~/V - rho r` at `(T, rho, Psi^2)`
/// in the normal-gap branch (`T > T_c`), with the gap fixed by
/// `lambda_T^{-d} A g_{d/sigma}(r/T) = rho (1 - Psi^2)`.
pub fn exact_free_energy_density(spec: &GasSpec, temperature: f64, rho: f64, psi2: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&psi2) {
        return Err(Error::domain(format!("Psi^2 must lie in [0, 1), got {psi2}")));
    }
    let scales = ThermoScales::new(spec, temperature)?;
    let density_scale = scales.density_scale(spec.d);
    let target = rho * (1.0 - psi2) / density_scale;
    let nu = spec.nu();
    if nu > 1.0 && target >= zeta(nu)? {
        return Err(Error::domain("no normal-gap solution: (T, rho, Psi^2) lies in the condensed region"));
    }
    let y = invert_bose(nu, target)?;
    let r = y * temperature;
    Ok(-temperature * density_scale * bose_g(nu + 1.0, y)?.value + rho * r * psi2 - rho * r)
}

/// Static correlation function `chi(k) = 1 / (c k^sigma + r)` with `c = hbar^2/2m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub c: f64,
    pub r: f64,
    pub sigma: f64,
}

impl Correlation {
    /// `xi = (c / r)^(1/sigma)`; infinite at the critical point.
    pub fn xi(&self) -> Result<f64> {
        if self.r == 0.0 {
            return Err(Error::Divergent("correlation length is infinite at r = 0".into()));
        }
        Ok((self.c / self.r).powf(1.0 / self.sigma))
    }

    pub fn chi(&self, k: f64) -> Result<f64> {
        if !(k >= 0.0) {
            return Err(Error::domain(format!("wavenumber must be >= 0, got {k}")));
        }
        if k == 0.0 && self.r == 0.0 {
            return Err(Error::Divergent("chi(0) diverges at r = 0".into()));
        }
        Ok(1.0 / (self.c * k.powf(self.sigma) + self.r))
    }
}

pub fn correlation_quantities(spec: &GasSpec, r: f64) -> Result<Correlation> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("gap must be finite and >= 0, got {r}")));
    }
    Ok(Correlation { c: spec.dispersion_coefficient(), r, sigma: spec.sigma })
}

/// `eta` from the log-log slope of `chi(k)` at `r = 0`: `chi ~ k^(-2 + eta)`.
pub fn fisher_exponent(spec: &GasSpec) -> Result<f64> {
    let corr = correlation_quantities(spec, 0.0)?;
    let points = log_uniform(1e-3, 1e-1, 12)?.into_iter().map(|k| Ok((k, corr.chi(k)?))).collect::<Result<Vec<_>>>()?;
    Ok(2.0 + loglog_fit(&points)?.slope)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExponentKind {
    /// `chi_T = 1/(N r) ~ t^(-gamma)`, so `r ~ t^gamma`.
    GammaFromR,
    /// `xi ~ t^(-nu)`.
    NuFromXi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FittedExponent {
    pub value: f64,
    pub std_error: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_std_error: f64,
}

/// Ordinary least squares of `ln y` against `ln x`.
pub fn loglog_fit(points: &[(f64, f64)]) -> Result<LineFit> {
    if points.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", points.len())));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite()) {
        return Err(Error::Fit("log-log fit needs strictly positive finite data".into()));
    }
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in points {
        let dx = x.ln() - mx;
        sxx += dx * dx;
        sxy += dx * (y.ln() - my);
    }
    if sxx <= 0.0 {
        return Err(Error::Fit("abscissae are degenerate".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = points
        .iter()
        .map(|&(x, y)| {
            let e = y.ln() - (intercept + slope * x.ln());
            e * e
        })
        .sum();
    let slope_std_error = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(LineFit { slope, intercept, slope_std_error })
}

/// Fits a critical exponent to `(t, value)` pairs.
///
/// Requires at least 8 points with `t` in `(0, 1e-2]` spanning at least two decades.
pub fn fit_exponent(curve: &[(f64, f64)], kind: ExponentKind) -> Result<FittedExponent> {
    if curve.len() < 8 {
        return Err(Error::Fit(format!("need at least 8 points, got {}", curve.len())));
    }
    let t_min = curve.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let t_max = curve.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if !(t_min > 0.0) || t_max > 1e-2 * (1.0 + 1e-12) {
        return Err(Error::Fit(format!("t must lie in (0, 1e-2], got [{t_min}, {t_max}]")));
    }
    if t_max / t_min < 100.0 * (1.0 - 1e-12) {
        return Err(Error::Fit(format!("t must span two decades, got [{t_min}, {t_max}]")));
    }
    let line = loglog_fit(curve)?;
    let value = match kind {
        ExponentKind::GammaFromR => line.slope,
        ExponentKind::NuFromXi => -line.slope,
    };
    Ok(FittedExponent { value, std_error: line.slope_std_error, points: curve.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitWindow {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl FitWindow {
    pub fn ts(&self) -> Result<Vec<f64>> {
        log_uniform(self.t_min, self.t_max, self.points)
    }
}

/// Analytic and fitted exponents along one constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentSet {
    /// `eta = 2 - sigma`
    pub eta: f64,
    /// Analytic `gamma`, when derivable (constant density, `sigma < d < 2 sigma`).
    pub gamma: Option<f64>,
    pub nu: Option<f64>,
    pub fitted_gamma: FittedExponent,
    pub fitted_nu: FittedExponent,
    pub fit_window: FitWindow,
}

/// Exponents along an isochore, fitted to the exact gap `r(t)`.
pub fn isochore_exponents(spec: &GasSpec, rho: f64, window: FitWindow) -> Result<ExponentSet> {
    let tc = critical_temperature_density(spec, rho)?;
    let gaps = window
        .ts()?
        .into_iter()
        .map(|t| Ok((t, solve_gap_isochore(spec, tc * (1.0 + t), rho)?.r)))
        .collect::<Result<Vec<_>>>()?;
    let nu = spec.nu();
    let (gamma, nu_exp) =
        if nu > 1.0 && nu < 2.0 { (Some(1.0 / (nu - 1.0)), Some(1.0 / (spec.d - spec.sigma))) } else { (None, None) };
    exponent_set(spec, &gaps, window, gamma, nu_exp)
}

/// Exponents along an isobar; fitted only.
pub fn isobar_exponents(spec: &GasSpec, pressure: f64, window: FitWindow) -> Result<ExponentSet> {
    let tc = critical_temperature_pressure(spec, pressure)?;
    let gaps = window
        .ts()?
        .into_iter()
        .map(|t| Ok((t, solve_gap_isobar(spec, tc * (1.0 + t), pressure)?.r)))
        .collect::<Result<Vec<_>>>()?;
    exponent_set(spec, &gaps, window, None, None)
}

fn exponent_set(
    spec: &GasSpec,
    gaps: &[(f64, f64)],
    window: FitWindow,
    gamma: Option<f64>,
    nu: Option<f64>,
) -> Result<ExponentSet> {
    let xis = gaps.iter().map(|&(t, r)| Ok((t, correlation_quantities(spec, r)?.xi()?))).collect::<Result<Vec<_>>>()?;
    Ok(ExponentSet {
        eta: 2.0 - spec.sigma,
        gamma,
        nu,
        fitted_gamma: fit_exponent(gaps, ExponentKind::GammaFromR)?,
        fitted_nu: fit_exponent(&xis, ExponentKind::NuFromXi)?,
        fit_window: window,
    })
}

/// `n` points evenly spaced in `ln x` over `[lo, hi]`.
pub fn log_uniform(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || n < 2 {
        return Err(Error::domain(format!("log grid needs 0 < lo < hi and n >= 2, got [{lo}, {hi}], n = {n}")));
    }
    let step = (hi / lo).ln() / (n - 1) as f64;
    Ok((0..n).map(|i| if i + 1 == n { hi } else { lo * (step * i as f64).exp() }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn model(d: f64, sigma: f64, t: f64) -> LandauModel {
        LandauModel::new(&GasSpec::natural(d, sigma).unwrap(), 1.0, t).unwrap()
    }

    #[test]
    fn window_rule() {
        let rho = 1.0;
        for &(d, s) in &[(4.5, 2.0), (4.0, 2.0), (2.0, 2.0), (1.5, 2.0)] {
            let spec = GasSpec::natural(d, s).unwrap();
            assert!(matches!(LandauModel::new(&spec, rho, 0.01), Err(Error::UnsupportedRegime(_))));
        }
    }

    #[test]
    fn base_point_and_ordered_root() {
        let m = model(3.0, 2.0, 0.0);
        assert_eq!(m.free_energy(0.0).unwrap(), 0.0);
        let m = model(3.0, 2.0, -0.1);
        let psi = m.ordered_root().unwrap().sqrt();
        assert_relative_eq!(psi * psi, 0.15, max_relative = 1e-15);
        assert_eq!(m.free_energy(psi).unwrap(), 0.0);
        assert_eq!(m.free_energy_gradient(psi).unwrap(), 0.0);
        assert_eq!(m.equation_of_state(psi).unwrap(), 0.0);
        assert_eq!(m.chemical_potential(psi).unwrap(), 0.0);
    }

    #[test]
    fn eos_signs_and_branch() {
        assert_eq!(model(3.0, 2.0, 0.3).equation_of_state(0.0).unwrap(), 0.0);
        assert!(model(3.0, 2.0, 0.1).equation_of_state(0.5).unwrap() > 0.0);
        assert!(matches!(model(3.0, 2.0, -0.1).free_energy(0.0), Err(Error::Branch(_))));
        assert!(matches!(model(3.0, 1.8, -0.1).chemical_potential(0.1), Err(Error::Branch(_))));
    }

    #[test]
    fn chemical_potential_at_critical_point() {
        assert_eq!(model(3.0, 2.0, 0.0).chemical_potential(0.0).unwrap(), 0.0);
        assert!(model(3.0, 2.0, 1e-3).chemical_potential(0.0).unwrap() < 0.0);
    }

    #[test]
    fn taylor_coefficients_match_finite_differences() {
        let m = model(3.0, 1.8, 1e-3);
        let (c2, c4) = m.taylor_coefficients().unwrap();
        // f as a function of u = Psi^2
        let f = |u: f64| m.c_f * (u + m.d_over_sigma * m.t).powf(m.power());
        let h = 1e-3 * m.d_over_sigma * m.t;
        let d1 = (f(h) - f(-h)) / (2.0 * h);
        let d2 = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        assert_relative_eq!(c2, d1, max_relative = 1e-5);
        assert_relative_eq!(c4, 0.5 * d2, max_relative = 1e-4);
    }

    #[test]
    fn correlation_examples() {
        let spec = GasSpec::natural(3.0, 2.0).unwrap();
        let c = spec.dispersion_coefficient();
        assert_relative_eq!(correlation_quantities(&spec, c).unwrap().xi().unwrap(), 1.0);
        let crit = correlation_quantities(&spec, 0.0).unwrap();
        assert!(matches!(crit.xi(), Err(Error::Divergent(_))));
        assert_eq!(correlation_quantities(&spec, 0.25).unwrap().chi(0.0).unwrap(), 4.0);
    }

    #[test]
    fn fisher_exponent_is_two_minus_sigma() {
        for &s in &[0.5, 1.0, 1.5, 2.0] {
            let spec = GasSpec::natural(3.0, s).unwrap();
            assert!((fisher_exponent(&spec).unwrap() - (2.0 - s)).abs() < 1e-12);
        }
    }

    #[test]
    fn synthetic_power_law_recovered() {
        let curve: Vec<_> = log_uniform(1e-5, 1e-2, 10).unwrap().into_iter().map(|t| (t, t.powf(1.7))).collect();
        let fit = fit_exponent(&curve, ExponentKind::GammaFromR).unwrap();
        assert!((fit.value - 1.7).abs() < 1e-6);
        let xi: Vec<_> = curve.iter().map(|&(t, _)| (t, t.powf(-0.8))).collect();
        assert!((fit_exponent(&xi, ExponentKind::NuFromXi).unwrap().value - 0.8).abs() < 1e-6);
    }

    #[test]
    fn fit_preconditions() {
        let short: Vec<_> = log_uniform(1e-5, 1e-2, 7).unwrap().into_iter().map(|t| (t, t)).collect();
        assert!(matches!(fit_exponent(&short, ExponentKind::GammaFromR), Err(Error::Fit(_))));
        let narrow: Vec<_> = log_uniform(1e-3, 1e-2, 10).unwrap().into_iter().map(|t| (t, t)).collect();
        assert!(matches!(fit_exponent(&narrow, ExponentKind::GammaFromR), Err(Error::Fit(_))));
        let wide: Vec<_> = log_uniform(1e-4, 1e-1, 10).unwrap().into_iter().map(|t| (t, t)).collect();
        assert!(matches!(fit_exponent(&wide, ExponentKind::GammaFromR), Err(Error::Fit(_))));
        let mut bad: Vec<_> = log_uniform(1e-5, 1e-2, 10).unwrap().into_iter().map(|t| (t, t)).collect();
        bad[3].1 = 0.0;
        assert!(matches!(fit_exponent(&bad, ExponentKind::GammaFromR), Err(Error::Fit(_))));
    }

    #[test]
    fn exact_free_energy_ratio_is_sigma_over_d() {
        // The Psi-dependent part of the exact Legendre-transformed free energy
        // approaches (sigma/d) times the C_f-normalised Landau form as t -> 0.
        let spec = GasSpec::natural(3.0, 2.0).unwrap();
        let rho = 1.0;
        let mut last = f64::INFINITY;
        for &t in &[1e-2, 3e-3] {
            let m = LandauModel::new(&spec, rho, t).unwrap();
            let temp = m.temperature();
            let psi2 = 0.5 * t;
            let exact = exact_free_energy_density(&spec, temp, rho, psi2).unwrap()
                - exact_free_energy_density(&spec, temp, rho, 0.0).unwrap();
            let landau = m.free_energy(psi2.sqrt()).unwrap() - m.free_energy(0.0).unwrap();
            let deviation = (exact / landau - 2.0 / 3.0).abs();
            assert!(deviation < 0.02, "t = {t}: ratio {}", exact / landau);
            assert!(deviation < last);
            last = deviation;
        }
    }
}
