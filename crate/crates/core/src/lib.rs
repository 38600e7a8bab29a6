//! Equilibrium thermodynamics of the ideal Bose gas with dispersion
//! `eps(k) = hbar^2 k^sigma / 2m` in `d` dimensions, at constant density and
//! at constant pressure.
//!
//! * [`special`]: Bose functions `g_nu(y)`, zeta and Gamma with error estimates.
//! * [`gas`]: the model record, thermal wavelength, `A(d, sigma)`, units.
//! * [`isochore`]: `T_c(rho)`, gap and condensate fraction at fixed density.
//! * [`isobar`]: `T_c(P)` and the normal branch at fixed pressure.
//! * [`criticality`]: Landau-Ginzburg free energy, equation of state,
//!   asymptotic chemical potential, correlation length and exponent fits.
//! * [`oracle`]: independent checks (finite box sums, plain series, finite differences).
//! * [`cli`]: the `bose-eos` command line.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod criticality;
pub mod error;
pub mod gas;
pub mod isobar;
pub mod isochore;
pub(crate) mod kv;
pub mod oracle;
pub mod roots;
pub mod special;

pub use error::{Error, Result};
pub use gas::{GasSpec, ThermoScales, Units};
pub use isobar::IsobarPoint;
pub use isochore::{Regime, ThermoPoint};
