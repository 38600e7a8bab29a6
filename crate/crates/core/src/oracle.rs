//! Independent verification engines.
//!
//! Nothing here calls into [`crate::special`]: the Bose series is summed
//! naively, zeta comes from a Dirichlet sum with an Euler-Maclaurin tail, and
//! the finite box sums occupation numbers mode by mode.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gas::GasSpec;

/// `beta * eps(k)` beyond which modes are dropped from box sums.
/// The omitted tail is below `1e-12` of the sum for `d <= 3`, `sigma >= 1`.
pub const BOLTZMANN_CUTOFF: f64 = 40.0;

/// Cubic periodic box with modes `k_j = 2 pi n_j / L`, `|n_j| <= n_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxSpec {
    pub length: f64,
    pub d: usize,
    pub n_max: usize,
}

impl BoxSpec {
    /// Box with the mode cutoff chosen from [`BOLTZMANN_CUTOFF`] at temperature `T`.
    pub fn with_cutoff(spec: &GasSpec, length: f64, temperature: f64) -> Result<Self> {
        let d = integer_dimension(spec)?;
        if !(length > 0.0) || !(temperature > 0.0) {
            return Err(Error::domain("box length and temperature must be positive"));
        }
        let k_max = (BOLTZMANN_CUTOFF * temperature / spec.dispersion_coefficient()).powf(1.0 / spec.sigma);
        let n_max = (k_max * length / (2.0 * std::f64::consts::PI)).ceil() as usize + 1;
        Ok(BoxSpec { length, d, n_max })
    }

    pub fn volume(&self) -> f64 {
        self.length.powi(self.d as i32)
    }
}

fn integer_dimension(spec: &GasSpec) -> Result<usize> {
    match spec.d {
        1.0 => Ok(1),
        2.0 => Ok(2),
        3.0 => Ok(3),
        d => Err(Error::domain(format!("box sums need d in {{1, 2, 3}}, got {d}"))),
    }
}

/// `(1/V) sum_k [e^{(eps(k) - mu)/T} - 1]^{-1}` over the box, including `k = 0`.
///
/// Deterministic: each slice along the first axis is summed with compensation
/// and the slices are reduced in index order.
pub fn finite_density(spec: &GasSpec, bx: &BoxSpec, temperature: f64, mu: f64) -> Result<f64> {
    if !(mu < 0.0) {
        return Err(Error::domain(format!(
            "finite box needs mu < 0 (the k = 0 occupation diverges at mu = 0), got {mu}"
        )));
    }
    if !(temperature > 0.0) {
        return Err(Error::domain(format!("temperature must be positive, got {temperature}")));
    }
    if integer_dimension(spec)? != bx.d {
        return Err(Error::domain("box dimension differs from the gas dimension"));
    }
    let n = bx.n_max as i64;
    let dk = 2.0 * std::f64::consts::PI / bx.length;
    let beta = 1.0 / temperature;
    let c = spec.dispersion_coefficient();
    let sigma = spec.sigma;
    let occupation = move |k2: f64| -> f64 {
        let x = beta * (c * k2.powf(0.5 * sigma) - mu);
        1.0 / x.exp_m1()
    };

    let slices: Vec<(f64, f64)> = (-n..=n)
        .into_par_iter()
        .map(|i| {
            let mut acc = Compensated::default();
            let kx2 = (dk * i as f64).powi(2);
            match bx.d {
                1 => acc.add(occupation(kx2)),
                2 => {
                    for j in -n..=n {
                        acc.add(occupation(kx2 + (dk * j as f64).powi(2)));
                    }
                }
                _ => {
                    for j in -n..=n {
                        let kxy2 = kx2 + (dk * j as f64).powi(2);
                        for l in -n..=n {
                            acc.add(occupation(kxy2 + (dk * l as f64).powi(2)));
                        }
                    }
                }
            }
            (acc.sum, acc.comp)
        })
        .collect();

    let mut total = Compensated::default();
    for (s, c) in slices {
        total.add(s);
        total.add(c);
    }
    Ok(total.value() / bx.volume())
}

/// Plain term-by-term Bose series `sum e^{-n y} / n^nu`, summed until the
/// geometric tail bound drops below `tol`. At `y = 0` falls back to
/// [`zeta_dirichlet`].
pub fn series_sum_highprec(nu: f64, y: f64, tol: f64) -> Result<f64> {
    if !(nu > 0.0) || !(y >= 0.0) {
        return Err(Error::domain(format!("series oracle needs nu > 0, y >= 0, got nu = {nu}, y = {y}")));
    }
    if y == 0.0 {
        if nu <= 1.0 {
            return Err(Error::Divergent(format!("sum 1/n^{nu} diverges")));
        }
        return Ok(zeta_dirichlet(nu));
    }
    let q = (-y).exp();
    let mut acc = Compensated::default();
    let mut n: u64 = 1;
    loop {
        let nf = n as f64;
        let term = (-nf * y).exp() / nf.powf(nu);
        acc.add(term);
        // remaining terms are each at most q times the previous one
        if term * q / (1.0 - q) < tol {
            return Ok(acc.value());
        }
        n += 1;
        if n > 500_000_000 {
            return Err(Error::Convergence("series oracle exceeded term budget".into()));
        }
    }
}

/// `zeta(s)` for `s > 1` by direct summation of the first `N - 1` terms and an
/// Euler-Maclaurin estimate of the rest.
pub fn zeta_dirichlet(s: f64) -> f64 {
    const N: usize = 64;
    // B_{2j} / (2j)!
    const B: [f64; 6] =
        [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0, -691.0 / 1307674368000.0];
    let mut acc = Compensated::default();
    for n in (1..N).rev() {
        acc.add((n as f64).powf(-s));
    }
    let nf = N as f64;
    acc.add(nf.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * nf.powf(-s));
    // s (s+1) ... (s + 2j - 2) N^{-s-2j+1}
    let mut rising = s;
    let mut power = nf.powf(-s - 1.0);
    for (j, b) in B.iter().enumerate() {
        acc.add(b * rising * power);
        let m = 2.0 * j as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        power /= nf * nf;
    }
    acc.value()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Central,
    /// One-sided, `x` and `x + h` only.
    Forward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    pub est_error: f64,
}

/// Finite-difference derivative of `f` at `x` with step `h`, optionally
/// Richardson-extrapolated between `h` and `h/2`.
pub fn finite_difference<F>(f: F, x: f64, h: f64, stencil: Stencil, richardson: bool) -> Result<Derivative>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(h > 0.0) {
        return Err(Error::domain(format!("finite-difference step must be positive, got {h}")));
    }
    let raw = |h: f64| -> Result<f64> {
        match stencil {
            Stencil::Central => Ok((f(x + h)? - f(x - h)?) / (2.0 * h)),
            Stencil::Forward => Ok((f(x + h)? - f(x)?) / h),
        }
    };
    let coarse = raw(h)?;
    let fine = raw(0.5 * h)?;
    if !richardson {
        return Ok(Derivative { value: fine, est_error: (fine - coarse).abs() });
    }
    let value = match stencil {
        Stencil::Central => (4.0 * fine - coarse) / 3.0,
        Stencil::Forward => 2.0 * fine - coarse,
    };
    Ok(Derivative { value, est_error: (value - fine).abs() })
}

#[derive(Debug, Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta_dirichlet_values() {
        assert!((zeta_dirichlet(2.0) - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta_dirichlet(1.5) - 2.612_375_348_685_488).abs() < 1e-14);
        assert!((zeta_dirichlet(2.5) - 1.341_487_257_250_917).abs() < 1e-14);
    }

    #[test]
    fn series_dominated_by_first_term() {
        let v = series_sum_highprec(1.5, 10.0, 1e-20).unwrap();
        let first_three = (-10.0f64).exp() + (-20.0f64).exp() / 2f64.powf(1.5) + (-30.0f64).exp() / 3f64.powf(1.5);
        assert!(v > 0.0 && (v - first_three).abs() < 1e-12 * v);
    }

    #[test]
    fn series_errors() {
        assert!(matches!(series_sum_highprec(1.0, 0.0, 1e-15), Err(Error::Divergent(_))));
        assert!(series_sum_highprec(1.5, -1.0, 1e-15).is_err());
    }

    #[test]
    fn finite_difference_of_square() {
        let d = finite_difference(|x| Ok(x * x), 3.0, 1e-3, Stencil::Central, true).unwrap();
        assert!((d.value - 6.0).abs() < 1e-8);
        let d = finite_difference(|x| Ok(x * x), 3.0, 1e-4, Stencil::Forward, true).unwrap();
        assert!((d.value - 6.0).abs() < 1e-8);
    }

    #[test]
    fn box_rejects_non_negative_mu() {
        let spec = GasSpec::natural(3.0, 2.0).unwrap();
        let bx = BoxSpec::with_cutoff(&spec, 5.0, 1.0).unwrap();
        assert!(finite_density(&spec, &bx, 1.0, 0.0).is_err());
    }

    #[test]
    fn box_needs_integer_dimension() {
        let spec = GasSpec::natural(2.5, 2.0).unwrap();
        assert!(BoxSpec::with_cutoff(&spec, 5.0, 1.0).is_err());
    }

    #[test]
    fn box_sum_is_deterministic() {
        let spec = GasSpec::natural(3.0, 2.0).unwrap();
        let bx = BoxSpec::with_cutoff(&spec, 6.0, 1.0).unwrap();
        let a = finite_density(&spec, &bx, 1.0, -0.5).unwrap();
        let b = finite_density(&spec, &bx, 1.0, -0.5).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
