//! Cross-module verification suite behind `bose-eos verify`.

use std::fmt::Write as _;
use std::time::Instant;

use super::Level;
use crate::criticality::{fisher_exponent, isochore_exponents, LandauModel, DEFAULT_FIT_WINDOW};
use crate::error::Result;
use crate::gas::{prefactor_a, GasSpec};
use crate::isobar::coexistence_consistency;
use crate::isochore::{critical_temperature_density, density_normal, solve_gap_isochore};
use crate::oracle::{finite_density, finite_difference, series_sum_highprec, zeta_dirichlet, BoxSpec, Stencil};
use crate::special::bose_g;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{} {:<28} measured={:.3e} tol={:.1e} time={:.2}s",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.measured,
                c.tolerance,
                c.seconds
            );
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        out
    }

    fn record(&mut self, name: &'static str, tolerance: f64, f: impl FnOnce() -> Result<f64>) {
        let start = Instant::now();
        let measured = f().unwrap_or(f64::INFINITY);
        let passed = measured.is_finite() && measured <= tolerance;
        self.checks.push(Check { name, measured, tolerance, passed, seconds: start.elapsed().as_secs_f64() });
    }
}

fn natural(d: f64, sigma: f64) -> Result<GasSpec> {
    GasSpec::natural(d, sigma)
}

/// Runs the suite. Failed checks are reported, not raised.
pub fn run_checks(level: Level) -> Result<Report> {
    let mut report = Report::default();

    report.record("bose_g vs series oracle", 1e-12, || {
        let mut worst: f64 = 0.0;
        for nu in [1.2, 1.5, 2.5, 2.8] {
            for y in [1e-4, 1e-2, 0.1, 1.0, 5.0] {
                let a = bose_g(nu, y)?.value;
                let b = series_sum_highprec(nu, y, 1e-17)?;
                worst = worst.max((a - b).abs());
            }
            worst = worst.max((bose_g(nu, 0.0)?.value - zeta_dirichlet(nu)).abs());
        }
        Ok(worst)
    });

    report.record("A(d,2) = 1", 1e-14, || {
        let mut worst: f64 = 0.0;
        for d in [1.0, 1.7, 2.0, 3.0, 4.0] {
            worst = worst.max((prefactor_a(d, 2.0)? - 1.0).abs());
        }
        Ok(worst)
    });

    report.record("isochore round trip", 1e-10, || {
        let mut worst: f64 = 0.0;
        for (d, sigma) in [(3.0, 2.0), (3.0, 1.8), (3.0, 1.5)] {
            let spec = natural(d, sigma)?;
            let rho = 0.7;
            let tc = critical_temperature_density(&spec, rho)?;
            for i in 0..20 {
                let temp = tc * (1.001 + (3.0 - 1.001) * i as f64 / 19.0);
                let p = solve_gap_isochore(&spec, temp, rho)?;
                worst = worst.max((density_normal(&spec, temp, p.r)? / rho - 1.0).abs());
            }
        }
        Ok(worst)
    });

    report.record("coexistence closure", 1e-8, || {
        let mut worst: f64 = 0.0;
        for d in [2.5, 3.0, 4.0] {
            for sigma in [1.0, 1.5, 2.0] {
                if d > sigma {
                    worst = worst.max(coexistence_consistency(&natural(d, sigma)?, 0.3)?);
                }
            }
        }
        Ok(worst)
    });

    report.record("Landau stationarity", 1e-8, || {
        let mut worst: f64 = 0.0;
        for (d, sigma) in [(3.0, 2.0), (3.0, 1.8)] {
            let spec = natural(d, sigma)?;
            for t in [-0.2, -0.1, -0.01] {
                let m = LandauModel::new(&spec, 1.0, t)?;
                let psi = m.ordered_root().unwrap_or(0.0).sqrt();
                let h = 1e-6 * psi;
                let der = finite_difference(|x| m.free_energy(x), psi, h, Stencil::Forward, false)?;
                // derivative scaled by f's natural size C_f / Psi
                worst = worst.max((der.value * psi / m.c_f).abs());
            }
        }
        Ok(worst)
    });

    report.record("asymptotic mu at t = 1e-5", 5e-3, || {
        let spec = natural(3.0, 2.0)?;
        let t = 1e-5;
        let m = LandauModel::new(&spec, 1.0, t)?;
        let exact = solve_gap_isochore(&spec, m.temperature(), 1.0)?.mu();
        Ok((m.chemical_potential(0.0)? / exact - 1.0).abs())
    });

    for (label, d, sigma) in [("exponents (3, 2)", 3.0, 2.0), ("exponents (3, 1.8)", 3.0, 1.8)] {
        report.record(label, 2e-2, || {
            let set = isochore_exponents(&natural(d, sigma)?, 1.0, DEFAULT_FIT_WINDOW)?;
            let g = set.gamma.unwrap_or(f64::NAN);
            let n = set.nu.unwrap_or(f64::NAN);
            Ok(((set.fitted_gamma.value / g - 1.0).abs()).max((set.fitted_nu.value / n - 1.0).abs()))
        });
    }

    report.record("Fisher exponent", 1e-3, || {
        let mut worst: f64 = 0.0;
        for sigma in [1.5, 1.8, 2.0] {
            worst = worst.max((fisher_exponent(&natural(3.0, sigma)?)? - (2.0 - sigma)).abs());
        }
        Ok(worst)
    });

    let lengths: &[f64] = match level {
        Level::Quick => &[4.0, 8.0, 16.0],
        Level::Full => &[1.0, 2.0, 4.0, 8.0, 16.0, 32.0],
    };
    report.record("finite-size convergence", 1e-3, || finite_size_error(lengths));

    Ok(report)
}

/// Relative error of the box density at the largest `L`; infinite if the
/// error fails to decrease along `lengths`.
fn finite_size_error(lengths: &[f64]) -> Result<f64> {
    let spec = natural(3.0, 2.0)?;
    let (temp, r) = (1.0, 0.5);
    let exact = density_normal(&spec, temp, r)?;
    let mut prev = f64::INFINITY;
    for &l in lengths {
        let bx = BoxSpec::with_cutoff(&spec, l, temp)?;
        let err = (finite_density(&spec, &bx, temp, -r)? / exact - 1.0).abs();
        if err >= prev {
            return Ok(f64::INFINITY);
        }
        prev = err;
    }
    Ok(prev)
}
