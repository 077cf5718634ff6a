//! Safeguarded Newton iteration inside a sign-changing bracket.
//!
//! Every iterate stays inside the current bracket. A Newton step is taken
//! only when it lands strictly inside and at least halves the previous step;
//! otherwise the bracket is bisected. Convergence is therefore unconditional
//! for continuous functions, and quadratic once Newton takes over.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Stop when the bracket is narrower than `x_rel_tol · |x|`.
    pub x_rel_tol: f64,
    /// Stop when `|f(x)| ≤ f_abs_tol`.
    pub f_abs_tol: f64,
    pub max_bisections: usize,
    pub max_newton: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            x_rel_tol: 4.0 * f64::EPSILON,
            f_abs_tol: 0.0,
            max_bisections: 200,
            max_newton: 50,
        }
    }
}

/// Interval endpoints with the function values already known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn evaluate<F: FnMut(f64) -> (f64, f64)>(lo: f64, hi: f64, f: &mut F) -> Self {
        Self {
            lo,
            hi,
            f_lo: f(lo).0,
            f_hi: f(hi).0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    /// Function evaluations spent inside the bracket.
    pub iterations: usize,
}

/// Finds a root of `f` (returning value and derivative) inside `bracket`.
///
/// `guess` seeds the first iterate; it is ignored when outside the bracket.
pub fn newton_bisect<F: FnMut(f64) -> (f64, f64)>(
    what: &'static str,
    mut f: F,
    bracket: Bracket,
    guess: Option<f64>,
    opts: &RootOptions,
) -> Result<Root> {
    let Bracket { lo, hi, f_lo, f_hi } = bracket;
    if f_lo == 0.0 {
        return Ok(Root { x: lo, fx: 0.0, iterations: 0 });
    }
    if f_hi == 0.0 {
        return Ok(Root { x: hi, fx: 0.0, iterations: 0 });
    }
    if f_lo.is_nan() || f_hi.is_nan() || (f_lo < 0.0) == (f_hi < 0.0) {
        return Err(Error::NoBracket { lo, hi, f_lo, f_hi });
    }
    let (mut x_neg, mut x_pos) = if f_lo < 0.0 { (lo, hi) } else { (hi, lo) };

    let mut x = match guess {
        Some(g) if g > lo.min(hi) && g < lo.max(hi) => g,
        _ => 0.5 * (lo + hi),
    };
    let mut dx = (hi - lo).abs();
    let mut dx_old = dx;
    let mut bisections = 0;
    let mut newton_steps = 0;
    let mut iterations = 0;

    loop {
        let (fx, dfx) = f(x);
        iterations += 1;
        if fx.is_nan() {
            return Err(Error::InvalidArgument(format!("{what}: function is NaN at {x}")));
        }
        if fx == 0.0 || fx.abs() <= opts.f_abs_tol {
            return Ok(Root { x, fx, iterations });
        }
        if fx < 0.0 {
            x_neg = x;
        } else {
            x_pos = x;
        }
        let width = (x_pos - x_neg).abs();
        if width <= opts.x_rel_tol * x_neg.abs().max(x_pos.abs()) || width < f64::MIN_POSITIVE {
            return Ok(Root { x, fx, iterations });
        }

        let (a, b) = (x_neg.min(x_pos), x_neg.max(x_pos));
        let step = fx / dfx;
        let newton_target = x - step;
        let newton_ok = newton_steps < opts.max_newton
            && dfx.is_finite()
            && dfx != 0.0
            && newton_target > a
            && newton_target < b
            && (2.0 * fx).abs() <= (dx_old * dfx).abs();
        dx_old = dx;
        if newton_ok {
            newton_steps += 1;
            dx = step;
            x = newton_target;
            if dx.abs() <= opts.x_rel_tol * x.abs() {
                let (fx, _) = f(x);
                return Ok(Root {
                    x,
                    fx,
                    iterations: iterations + 1,
                });
            }
        } else {
            bisections += 1;
            if bisections > opts.max_bisections {
                return Err(Error::NonConvergence { what, iterations });
            }
            dx = 0.5 * (b - a);
            x = a + dx;
        }
    }
}

#[cfg(test)]
#[allow(clippy::approx_constant, clippy::excessive_precision)]
mod tests {
    use super::*;

    fn sqrt2(x: f64) -> (f64, f64) {
        (x * x - 2.0, 2.0 * x)
    }

    #[test]
    fn finds_sqrt_two() {
        let mut f = sqrt2;
        let br = Bracket::evaluate(0.0, 2.0, &mut f);
        let r = newton_bisect("sqrt", sqrt2, br, None, &RootOptions::default()).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-15);
        assert!(r.iterations < 12);
    }

    #[test]
    fn decreasing_function_and_guess() {
        let f = |x: f64| (1.0 - x.exp(), -x.exp());
        let br = Bracket { lo: -3.0, hi: 5.0, f_lo: f(-3.0).0, f_hi: f(5.0).0 };
        let r = newton_bisect("exp", f, br, Some(4.9), &RootOptions::default()).unwrap();
        assert!(r.x.abs() < 1e-15);
    }

    #[test]
    fn bad_derivative_falls_back_to_bisection() {
        // derivative is garbage; bisection alone must still converge
        let f = |x: f64| (x.powi(3) - 0.1, f64::NAN);
        let br = Bracket { lo: 0.0, hi: 1.0, f_lo: -0.1, f_hi: 0.9 };
        let r = newton_bisect("cube", f, br, None, &RootOptions::default()).unwrap();
        assert!((r.x - 0.1f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn no_sign_change_is_rejected() {
        let br = Bracket { lo: 0.0, hi: 1.0, f_lo: 1.0, f_hi: 2.0 };
        let r = newton_bisect("none", |x| (x, 1.0), br, None, &RootOptions::default());
        assert!(matches!(r, Err(Error::NoBracket { .. })));
    }

    #[test]
    fn iteration_cap_is_reported() {
        let opts = RootOptions {
            max_bisections: 3,
            max_newton: 0,
            ..RootOptions::default()
        };
        let br = Bracket { lo: 0.0, hi: 2.0, f_lo: -2.0, f_hi: 2.0 };
        let r = newton_bisect("capped", sqrt2, br, None, &opts);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }
}
