//! Bracketed Newton iteration for strictly decreasing functions on `y >= 0`.
//!
//! Both equation-of-state inversions reduce to `g(y) = target` with `g` a
//! Bose function, which is strictly decreasing with a known exact derivative.
//! The bracket `[0, hi]` is grown geometrically until `g(hi) < target`; each
//! step then tries Newton and falls back to bisection (geometric when the
//! bracket spans many decades) whenever Newton leaves the bracket.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stop once `|g(y) - target| <= rel_tol * target`.
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Newton is not attempted below this `y` (the derivative may blow up at 0).
    pub newton_floor: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { rel_tol: 1e-14, max_iter: 600, newton_floor: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub y: f64,
    /// `g(y) / target - 1`
    pub rel_residual: f64,
    pub iterations: usize,
}

/// Solves `value(y) = target` for a strictly decreasing `value` with
/// `value(0) > target > 0` (the value at 0 may be infinite and is never evaluated).
pub fn solve_decreasing<V, D>(value: V, derivative: D, target: f64, opts: SolverOptions) -> Result<Root>
where
    V: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    if !(target > 0.0) || !target.is_finite() {
        return Err(Error::domain(format!("root target must be positive and finite, got {target}")));
    }
    let residual = |y: f64| -> Result<f64> { Ok(value(y)? / target - 1.0) };

    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut f_hi = residual(hi)?;
    let mut iterations = 0;
    while f_hi > 0.0 {
        lo = hi;
        hi *= 2.0;
        f_hi = residual(hi)?;
        iterations += 1;
        if !hi.is_finite() || iterations > 2000 {
            return Err(Error::Convergence(format!("could not bracket root for target {target}")));
        }
    }
    if f_hi.abs() <= opts.rel_tol {
        return Ok(Root { y: hi, rel_residual: f_hi, iterations });
    }

    let mut y = hi;
    let mut f = f_hi;
    let mut best = (hi, f_hi);
    while iterations < opts.max_iter {
        iterations += 1;
        let mut next = None;
        if y >= opts.newton_floor && y > 0.0 {
            let slope = derivative(y)? / target;
            if slope < 0.0 && slope.is_finite() {
                let candidate = y - f / slope;
                if candidate > lo && candidate < hi {
                    next = Some(candidate);
                }
            }
        }
        let y_next = next.unwrap_or_else(|| {
            if lo == 0.0 {
                hi / 16.0
            } else if hi / lo > 4.0 {
                (lo * hi).sqrt()
            } else {
                0.5 * (lo + hi)
            }
        });

        y = y_next;
        f = residual(y)?;
        if f.abs() < best.1.abs() {
            best = (y, f);
        }
        if f.abs() <= opts.rel_tol {
            return Ok(Root { y, rel_residual: f, iterations });
        }
        if f > 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(Root { y: best.0, rel_residual: best.1, iterations });
        }
    }
    Err(Error::Convergence(format!(
        "bracketed Newton did not converge in {} iterations (bracket [{lo}, {hi}])",
        opts.max_iter
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let root = solve_decreasing(|y| Ok((-y).exp()), |y| Ok(-(-y).exp()), 1e-3, SolverOptions::default()).unwrap();
        assert!((root.y - 1e3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn square_root_cusp_near_zero() {
        // g(y) = 1 - sqrt(y): derivative is infinite at 0, root at 1e-20
        let target = 1.0 - 1e-10;
        let opts = SolverOptions { newton_floor: 1e-6, ..Default::default() };
        let root = solve_decreasing(|y| Ok(1.0 - y.sqrt()), |y| Ok(-0.5 / y.sqrt()), target, opts).unwrap();
        assert!(root.rel_residual.abs() <= 1e-14);
        // a 1e-14 residual pins sqrt(y) = 1e-10 to ~1e-4 relative
        assert!((root.y / 1e-20 - 1.0).abs() < 1e-3, "y = {}", root.y);
    }

    #[test]
    fn rejects_bad_target() {
        assert!(solve_decreasing(|y| Ok(-y), |_| Ok(-1.0), 0.0, SolverOptions::default()).is_err());
    }
}
