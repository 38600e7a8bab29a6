//! Bose function `g_nu(y) = sum_{n>=1} e^{-n y} / n^nu`, Riemann zeta and Gamma.
//!
//! `g_nu` is evaluated by one of three routes:
//!
//! * `y = 0`: `g_nu(0) = zeta(nu)` (finite only for `nu > 1`);
//! * `y < SMALL_Y`: the small-argument expansion
//!   `g_nu(y) = Gamma(1-nu) y^(nu-1) + sum_k zeta(nu-k) (-y)^k / k!`,
//!   or its logarithmic counterpart when `nu` is an integer;
//! * otherwise the direct series, truncated once a geometric tail bound
//!   drops below [`TAIL_TOL`].
//!
//! Every evaluation carries an absolute error estimate, made of the
//! truncation bound plus a round-off allowance.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Below this argument the direct series is replaced by the small-`y` expansion.
pub const SMALL_Y: f64 = 1e-3;

/// Absolute tail bound at which the direct series stops.
pub const TAIL_TOL: f64 = 1e-16;

const MAX_SERIES_TERMS: usize = 50_000_000;
const MAX_EXPANSION_TERMS: usize = 80;

/// A value together with an absolute error estimate and the number of terms summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub est_error: f64,
    pub terms_used: usize,
}

impl EvalResult {
    fn exact(value: f64) -> Self {
        EvalResult { value, est_error: 4.0 * f64::EPSILON * value.abs(), terms_used: 0 }
    }

    fn negate(self) -> Self {
        EvalResult { value: -self.value, ..self }
    }
}

/// Order and argument of a Bose function evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoseArg {
    pub nu: f64,
    pub y: f64,
}

impl BoseArg {
    pub fn new(nu: f64, y: f64) -> Result<Self> {
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(Error::domain(format!("Bose function order must be positive, got nu = {nu}")));
        }
        if !(y >= 0.0) {
            return Err(Error::domain(format!("Bose function argument must be >= 0, got y = {y}")));
        }
        Ok(BoseArg { nu, y })
    }

    pub fn eval(&self) -> Result<EvalResult> {
        bose_g(self.nu, self.y)
    }
}

/// Bose function `g_nu(y)` for `nu > 0`, `y >= 0`.
///
/// `y = 0` with `nu <= 1` is divergent; that divergence is what pushes
/// condensation to zero temperature for `d <= sigma`.
pub fn bose_g(nu: f64, y: f64) -> Result<EvalResult> {
    BoseArg::new(nu, y)?;
    if y == 0.0 {
        if nu <= 1.0 {
            return Err(Error::Divergent(format!("g_{nu}(0) diverges for nu <= 1")));
        }
        return Ok(EvalResult::exact(zeta(nu)?));
    }
    if y.is_infinite() {
        return Ok(EvalResult { value: 0.0, est_error: 0.0, terms_used: 0 });
    }
    bose_g_positive(nu, y)
}

/// `g_s(y)` for any real order `s > -1` and `y > 0`.
fn bose_g_positive(order: f64, y: f64) -> Result<EvalResult> {
    debug_assert!(y > 0.0);
    if order == 1.0 {
        // g_1(y) = -ln(1 - e^{-y})
        return Ok(EvalResult::exact(-(-(-y).exp_m1()).ln()));
    }
    if order == 0.0 {
        return Ok(EvalResult::exact(1.0 / y.exp_m1()));
    }
    if y < SMALL_Y {
        return if is_integer(order) {
            integer_order_expansion(order as i64, y)
        } else {
            small_y_expansion(order, y, None)
        };
    }
    direct_series(order, y)
}

/// Small-argument expansion of `g_nu(y)` truncated after `k = k_max`.
///
/// Integer orders are rejected: their expansion has a logarithmic term.
pub fn bose_g_small_y(nu: f64, y: f64, k_max: usize) -> Result<EvalResult> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::domain(format!("order must be positive, got nu = {nu}")));
    }
    if is_integer(nu) {
        return Err(Error::domain(format!(
            "small-y expansion is only defined here for non-integer orders, got nu = {nu}"
        )));
    }
    if !(y > 0.0) {
        return Err(Error::domain(format!("small-y expansion needs y > 0, got y = {y}")));
    }
    small_y_expansion(nu, y, Some(k_max))
}

/// `d g_nu / dy = -g_{nu-1}(y)`.
pub fn bose_g_derivative(nu: f64, y: f64) -> Result<EvalResult> {
    BoseArg::new(nu, y)?;
    let order = nu - 1.0;
    if y == 0.0 {
        if order <= 1.0 {
            return Err(Error::Divergent(format!("g_{order}(0) diverges, so d g_{nu}/dy is infinite at y = 0")));
        }
        return Ok(EvalResult::exact(zeta(order)?).negate());
    }
    if y.is_infinite() {
        return Ok(EvalResult { value: 0.0, est_error: 0.0, terms_used: 0 });
    }
    Ok(bose_g_positive(order, y)?.negate())
}

fn direct_series(order: f64, y: f64) -> Result<EvalResult> {
    let one_minus_q = -(-y).exp_m1();
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut max_arg: f64 = 0.0;
    let mut n = 1usize;
    loop {
        let nf = n as f64;
        let arg = -nf * y - order * nf.ln();
        max_arg = max_arg.max(arg.abs());
        let term = arg.exp();
        neumaier_add(&mut sum, &mut comp, term);

        if n.is_multiple_of(8) || term < TAIL_TOL {
            // ratio of consecutive terms beyond n is at most e^{-y} (1 + 1/n)^{max(0, -order)}
            let growth = if order < 0.0 { (1.0 + 1.0 / nf).powf(-order) } else { 1.0 };
            let ratio = (-y).exp() * growth;
            if ratio < 1.0 {
                let tail = if order >= 0.0 { term * (-y).exp() / one_minus_q } else { term * ratio / (1.0 - ratio) };
                if tail < TAIL_TOL {
                    let value = sum + comp;
                    let est_error = tail + f64::EPSILON * (max_arg + 4.0) * value.abs();
                    return Ok(EvalResult { value, est_error, terms_used: n });
                }
            }
        }
        n += 1;
        if n > MAX_SERIES_TERMS {
            return Err(Error::Convergence(format!(
                "direct Bose series for g_{order}({y}) exceeded {MAX_SERIES_TERMS} terms"
            )));
        }
    }
}

fn small_y_expansion(order: f64, y: f64, k_max: Option<usize>) -> Result<EvalResult> {
    let leading = gamma(1.0 - order)? * y.powf(order - 1.0);
    let mut sum = leading;
    let mut comp = 0.0;
    let mut magnitude = leading.abs();
    let mut power = 1.0; // (-y)^k / k!
    let limit = k_max.unwrap_or(MAX_EXPANSION_TERMS);
    let mut k = 0usize;
    let mut small_run = 0;
    loop {
        let term = zeta(order - k as f64)? * power;
        neumaier_add(&mut sum, &mut comp, term);
        magnitude = magnitude.max(term.abs());
        power *= -y / (k as f64 + 1.0);
        k += 1;
        let next = zeta(order - k as f64)? * power;
        if k > limit || (k_max.is_none() && k >= MAX_EXPANSION_TERMS) {
            let value = sum + comp;
            let est_error = next.abs() + 8.0 * f64::EPSILON * magnitude;
            return Ok(EvalResult { value, est_error, terms_used: k + 1 });
        }
        if k_max.is_none() {
            let value = (sum + comp).abs();
            // zeta vanishes at negative even integers, so require two small terms in a row
            if next.abs() <= 1e-18 * value.max(1e-300) {
                small_run += 1;
                if small_run >= 2 {
                    let est_error = next.abs() + 8.0 * f64::EPSILON * magnitude;
                    return Ok(EvalResult { value: sum + comp, est_error, terms_used: k + 1 });
                }
            } else {
                small_run = 0;
            }
        }
    }
}

/// `g_n(y) = (-y)^{n-1}/(n-1)! (H_{n-1} - ln y) + sum_{k != n-1} zeta(n-k) (-y)^k / k!`
fn integer_order_expansion(n: i64, y: f64) -> Result<EvalResult> {
    debug_assert!(n >= 2);
    let log_index = (n - 1) as usize;
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut magnitude: f64 = 0.0;
    let mut power = 1.0;
    let mut harmonic = 0.0;
    let mut small_run = 0;
    for k in 0..=MAX_EXPANSION_TERMS {
        let term = if k == log_index { power * (harmonic - y.ln()) } else { zeta((n - k as i64) as f64)? * power };
        neumaier_add(&mut sum, &mut comp, term);
        magnitude = magnitude.max(term.abs());
        if k < log_index {
            harmonic += 1.0 / (k as f64 + 1.0);
        }
        power *= -y / (k as f64 + 1.0);
        if k > log_index {
            if term.abs() <= 1e-18 * (sum + comp).abs() {
                small_run += 1;
                if small_run >= 2 {
                    let est_error = term.abs() + 8.0 * f64::EPSILON * magnitude;
                    return Ok(EvalResult { value: sum + comp, est_error, terms_used: k + 1 });
                }
            } else {
                small_run = 0;
            }
        }
    }
    Err(Error::Convergence(format!("integer-order expansion of g_{n}({y}) did not converge")))
}

/// Riemann zeta for real `s != 1`.
///
/// `s > 0` uses Borwein's alternating-series acceleration of the Dirichlet eta
/// function; `s < 0` goes through the reflection formula.
pub fn zeta(s: f64) -> Result<f64> {
    if s.is_nan() {
        return Ok(f64::NAN);
    }
    if s == 1.0 {
        return Err(Error::Pole("zeta has a pole at s = 1".into()));
    }
    if s == 0.0 {
        return Ok(-0.5);
    }
    if s < 0.0 {
        if is_integer(s) && (s as i64) % 2 == 0 {
            return Ok(0.0);
        }
        // zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s) zeta(1-s)
        let reflected = zeta_borwein(1.0 - s);
        return Ok(2f64.powf(s) * PI.powf(s - 1.0) * sin_pi(0.5 * s) * gamma(1.0 - s)? * reflected);
    }
    if s > 60.0 {
        return Ok(1.0 + 2f64.powf(-s) + 3f64.powf(-s));
    }
    Ok(zeta_borwein(s))
}

const BORWEIN_N: usize = 32;

fn zeta_borwein(s: f64) -> f64 {
    let n = BORWEIN_N;
    let nf = n as f64;
    let mut d = [0.0f64; BORWEIN_N + 1];
    let mut term = 1.0 / nf;
    let mut acc = term;
    d[0] = nf * acc;
    for i in 0..n {
        let fi = i as f64;
        term *= 4.0 * (nf + fi) * (nf - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
        acc += term;
        d[i + 1] = nf * acc;
    }
    let dn = d[n];
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in (0..n).rev() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let t = sign * (d[k] - dn) / ((k + 1) as f64).powf(s);
        neumaier_add(&mut sum, &mut comp, t);
    }
    let eta = -(sum + comp) / dn;
    // 1 - 2^(1-s), kept accurate near s = 1
    let denom = -((1.0 - s) * std::f64::consts::LN_2).exp_m1();
    eta / denom
}

/// Gamma function for real `x`, not a non-positive integer.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Ok(f64::NAN);
    }
    if x <= 0.0 && is_integer(x) {
        return Err(Error::Pole(format!("Gamma has a pole at x = {x}")));
    }
    if x < 0.5 {
        return Ok(PI / (sin_pi(x) * gamma(1.0 - x)?));
    }
    if x > 171.7 {
        return Ok(f64::INFINITY);
    }
    const SHIFT_TO: f64 = 20.0;
    if x >= SHIFT_TO {
        return Ok(stirling_gamma(x));
    }
    let mut z = x;
    let mut product = 1.0;
    while z < SHIFT_TO {
        product *= z;
        z += 1.0;
    }
    Ok(stirling_gamma(z) / product)
}

/// `ln |Gamma(x)|` for the same domain as [`gamma`].
pub fn ln_gamma_abs(x: f64) -> Result<f64> {
    if x > 171.0 {
        Ok((x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + stirling_series(x))
    } else {
        Ok(gamma(x)?.abs().ln())
    }
}

fn stirling_series(z: f64) -> f64 {
    // B_{2k} / (2k (2k-1))
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
    ];
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in C.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// Stirling's formula for `z >= 20`, split so `z^(z-1/2)` does not overflow.
fn stirling_gamma(z: f64) -> f64 {
    let half_power = z.powf(0.5 * (z - 0.5));
    half_power * (half_power * (-z).exp()) * (2.0 * PI).sqrt() * stirling_series(z).exp()
}

/// `sin(pi x)` with exact argument reduction.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r.abs() == 0.5 {
        return r.signum();
    }
    (PI * r).sin()
}

pub(crate) fn is_integer(x: f64) -> bool {
    x.is_finite() && x == x.trunc()
}

fn neumaier_add(sum: &mut f64, comp: &mut f64, term: f64) {
    let t = *sum + term;
    if sum.abs() >= term.abs() {
        *comp += (*sum - t) + term;
    } else {
        *comp += (term - t) + *sum;
    }
    *sum = t;
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const ZETA_3_2: f64 = 2.612_375_348_685_488;

    #[test]
    fn zeta_classical_values() {
        assert_relative_eq!(zeta(2.0).unwrap(), PI * PI / 6.0, max_relative = 1e-14);
        assert_relative_eq!(zeta(4.0).unwrap(), PI.powi(4) / 90.0, max_relative = 1e-14);
        assert_relative_eq!(zeta(1.5).unwrap(), ZETA_3_2, max_relative = 1e-14);
        assert_relative_eq!(zeta(0.5).unwrap(), -1.460_354_508_809_586_8, max_relative = 1e-13);
        assert_relative_eq!(zeta(-1.0).unwrap(), -1.0 / 12.0, max_relative = 1e-13);
        assert_relative_eq!(zeta(-0.5).unwrap(), -0.207_886_224_977_354_57, max_relative = 1e-12);
        assert_eq!(zeta(-4.0).unwrap(), 0.0);
        assert_eq!(zeta(0.0).unwrap(), -0.5);
    }

    #[test]
    fn zeta_pole() {
        assert!(matches!(zeta(1.0), Err(Error::Pole(_))));
    }

    #[test]
    fn gamma_classical_values() {
        assert_relative_eq!(gamma(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(-0.5).unwrap(), -2.0 * PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0).unwrap(), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(30.0).unwrap(), 8.841_761_993_739_701e30, max_relative = 1e-13);
        assert!(matches!(gamma(-2.0), Err(Error::Pole(_))));
        assert!(matches!(gamma(0.0), Err(Error::Pole(_))));
    }

    #[test]
    fn bose_at_zero_is_zeta() {
        let g = bose_g(1.5, 0.0).unwrap();
        assert_relative_eq!(g.value, ZETA_3_2, max_relative = 1e-14);
        assert!(matches!(bose_g(1.0, 0.0), Err(Error::Divergent(_))));
        assert!(matches!(bose_g(0.5, 0.0), Err(Error::Divergent(_))));
    }

    #[test]
    fn bose_domain_errors() {
        assert!(matches!(bose_g(1.5, -0.1), Err(Error::Domain(_))));
        assert!(matches!(bose_g(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bose_g(-1.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn bose_large_argument_decays() {
        let g = bose_g(2.0, 40.0).unwrap().value;
        assert!(g > 0.0 && g <= (-40.0f64).exp() * zeta(2.0).unwrap());
        assert_eq!(bose_g(2.0, f64::INFINITY).unwrap().value, 0.0);
    }

    #[test]
    fn bose_g1_closed_form() {
        let y = 0.3;
        assert_relative_eq!(bose_g(1.0, y).unwrap().value, -(1.0 - (-y).exp()).ln(), max_relative = 1e-15);
    }

    #[test]
    fn small_y_leading_behaviour() {
        // g_{3/2}(y) ~ zeta(3/2) - 2 sqrt(pi) y^{1/2} + O(y)
        for &y in &[1e-8, 1e-10] {
            let g = bose_g(1.5, y).unwrap().value;
            let lead = ZETA_3_2 - 2.0 * PI.sqrt() * y.sqrt();
            assert!((g - lead).abs() < 2.0 * y);
        }
    }

    #[test]
    fn small_y_rejects_integer_order() {
        assert!(matches!(bose_g_small_y(2.0, 0.01, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn small_y_matches_direct_at_1e_4() {
        let expansion = bose_g_small_y(1.5, 1e-4, 2).unwrap();
        let direct = direct_series(1.5, 1e-4).unwrap();
        assert!((expansion.value - direct.value).abs() <= 1e-8);
    }

    #[test]
    fn integer_order_expansion_matches_direct_series() {
        for n in 2..=4 {
            for &y in &[5e-4, 2e-3, 0.05] {
                let e = integer_order_expansion(n, y).unwrap();
                let s = direct_series(n as f64, y).unwrap();
                assert!((e.value - s.value).abs() < 1e-12, "n={n} y={y}: {} vs {}", e.value, s.value);
            }
        }
    }

    #[test]
    fn derivative_at_zero() {
        let d = bose_g_derivative(2.5, 0.0).unwrap();
        assert_relative_eq!(d.value, -ZETA_3_2, max_relative = 1e-14);
        assert!(matches!(bose_g_derivative(1.5, 0.0), Err(Error::Divergent(_))));
    }

    #[test]
    fn derivative_for_order_below_one() {
        // g_{0.5}'(y) = -g_{-0.5}(y); compare with a centred difference
        let y = 0.7;
        let h = 1e-5;
        let fd = (bose_g(0.5, y + h).unwrap().value - bose_g(0.5, y - h).unwrap().value) / (2.0 * h);
        let d = bose_g_derivative(0.5, y).unwrap().value;
        assert_relative_eq!(d, fd, max_relative = 1e-7);
    }

    #[test]
    fn sin_pi_is_exact_at_integers() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert_eq!(sin_pi(-0.5), -1.0);
        assert_eq!(sin_pi(2.5), 1.0);
    }
}
