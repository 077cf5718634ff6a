//! Double-exponential quadrature.
//!
//! `tanh_sinh` maps a finite interval through `x = tanh(π/2 · sinh t)` and
//! `exp_sinh` maps `[a, ∞)` through `x = a + exp(π/2 · sinh t)`. Both cluster
//! nodes double-exponentially at the endpoints, which absorbs the integrable
//! `log^d` singularities and `(T − t)^d` contact points met by the solver and
//! the oracle without any adaptive subdivision.
//!
//! Refinement halves the step each level and reuses every previous node, so a
//! level costs only the new midpoints. Convergence is declared when two
//! successive levels agree to `max(abs_tol, rel_tol · |I|)`; since the error
//! roughly squares per level, the returned value is usually far better than
//! the reported estimate.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Total node budget across all levels.
    pub max_nodes: usize,
    /// Levels always performed before the convergence test is trusted.
    pub min_levels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_nodes: 1 << 15,
            min_levels: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<const N: usize> {
    pub value: [f64; N],
    /// Difference between the last two levels (max over components).
    pub error: f64,
    pub nodes: usize,
}

/// Half-width of the truncated `t` range. At `|t| = 4.5` the tanh-sinh node
/// sits about `e^{-141}` from the endpoint.
const T_MAX: f64 = 4.5;

trait DeMap {
    /// Abscissa and Jacobian for parameter `t`, or `None` if the node
    /// collapses onto an endpoint in floating point.
    fn node(&self, t: f64) -> Option<(f64, f64)>;
}

struct TanhSinhMap {
    a: f64,
    b: f64,
}

impl DeMap for TanhSinhMap {
    fn node(&self, t: f64) -> Option<(f64, f64)> {
        let width = self.b - self.a;
        let u = FRAC_PI_2 * t.abs().sinh();
        let e = (-2.0 * u).exp();
        // fraction of the interval between the node and its nearest endpoint
        let frac = e / (1.0 + e);
        let jac = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e)) * 0.5 * width;
        let x = if t < 0.0 {
            self.a + width * frac
        } else if t > 0.0 {
            self.b - width * frac
        } else {
            0.5 * (self.a + self.b)
        };
        if width * frac == 0.0 || x <= self.a || x >= self.b || jac == 0.0 {
            None
        } else {
            Some((x, jac))
        }
    }
}

struct ExpSinhMap {
    a: f64,
}

impl DeMap for ExpSinhMap {
    fn node(&self, t: f64) -> Option<(f64, f64)> {
        let g = (FRAC_PI_2 * t.sinh()).exp();
        let x = self.a + g;
        let jac = FRAC_PI_2 * t.cosh() * g;
        if g == 0.0 || x <= self.a || !x.is_finite() || !jac.is_finite() {
            None
        } else {
            Some((x, jac))
        }
    }
}

fn accumulate<const N: usize, M: DeMap, F: FnMut(f64) -> [f64; N]>(
    map: &M,
    f: &mut F,
    t: f64,
    sum: &mut [f64; N],
) -> Result<bool> {
    let Some((x, w)) = map.node(t) else {
        return Ok(false);
    };
    let v = f(x);
    for (s, vi) in sum.iter_mut().zip(v) {
        if !vi.is_finite() {
            // a non-finite value far out in the tail carries no weight
            if w < 1e-100 {
                continue;
            }
            return Err(Error::InvalidArgument(format!(
                "integrand is not finite at x = {x} (value {vi})"
            )));
        }
        *s += w * vi;
    }
    Ok(true)
}

fn de_integrate<const N: usize, M: DeMap, F: FnMut(f64) -> [f64; N]>(
    map: M,
    mut f: F,
    opts: &QuadOptions,
) -> Result<Estimate<N>> {
    let mut h = 1.0;
    let mut nodes = 0usize;
    let mut sum = [0.0; N];
    let k_max = (T_MAX / h) as i64;
    for k in -k_max..=k_max {
        if accumulate(&map, &mut f, k as f64 * h, &mut sum)? {
            nodes += 1;
        }
    }
    let mut integral = sum.map(|s| s * h);
    let mut level = 0;
    loop {
        level += 1;
        h *= 0.5;
        let mut new_sum = [0.0; N];
        let j_max = ((T_MAX / h - 1.0) / 2.0).floor() as i64;
        for j in 0..=j_max {
            let t = (2 * j + 1) as f64 * h;
            for tt in [-t, t] {
                if accumulate(&map, &mut f, tt, &mut new_sum)? {
                    nodes += 1;
                }
            }
        }
        let mut next = [0.0; N];
        let mut error: f64 = 0.0;
        let mut converged = true;
        for i in 0..N {
            next[i] = 0.5 * integral[i] + h * new_sum[i];
            let diff = (next[i] - integral[i]).abs();
            error = error.max(diff);
            // each component must meet its own relative tolerance
            converged &= diff <= opts.abs_tol.max(opts.rel_tol * next[i].abs());
        }
        integral = next;
        if level >= opts.min_levels && converged {
            return Ok(Estimate {
                value: integral,
                error,
                nodes,
            });
        }
        if nodes >= opts.max_nodes {
            return Err(Error::Quadrature {
                estimate: integral[0],
                error,
                nodes,
            });
        }
    }
}

/// Integrates a vector of integrands over the finite interval `[a, b]`.
pub fn tanh_sinh_vec<const N: usize, F: FnMut(f64) -> [f64; N]>(
    f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<Estimate<N>> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("interval [{a}, {b}] is not finite")));
    }
    if a == b {
        return Ok(Estimate {
            value: [0.0; N],
            error: 0.0,
            nodes: 0,
        });
    }
    if a > b {
        let est = de_integrate(TanhSinhMap { a: b, b: a }, f, opts)?;
        return Ok(Estimate {
            value: est.value.map(|v| -v),
            ..est
        });
    }
    de_integrate(TanhSinhMap { a, b }, f, opts)
}

pub fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Estimate<1>> {
    tanh_sinh_vec(|x| [f(x)], a, b, opts)
}

/// Integrates over `[a, ∞)`; the integrand must decay at infinity.
pub fn exp_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, opts: &QuadOptions) -> Result<Estimate<1>> {
    if !a.is_finite() {
        return Err(Error::InvalidArgument(format!("lower limit {a} is not finite")));
    }
    de_integrate(ExpSinhMap { a }, |x| [f(x)], opts)
}

/// Integrates a piecewise-smooth function: tanh-sinh between consecutive
/// `breakpoints`, plus exp-sinh from the last breakpoint when `to_infinity`.
pub fn integrate_piecewise<F: FnMut(f64) -> f64>(
    mut f: F,
    breakpoints: &[f64],
    to_infinity: bool,
    opts: &QuadOptions,
) -> Result<f64> {
    let mut pts: Vec<f64> = breakpoints.to_vec();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let Some(&last) = pts.last() else {
        return Err(Error::InvalidArgument("no breakpoints".into()));
    };
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += tanh_sinh(&mut f, w[0], w[1], opts)?.value[0];
    }
    if to_infinity {
        total += exp_sinh(&mut f, last, opts)?.value[0];
    }
    Ok(total)
}

#[cfg(test)]
#[allow(clippy::approx_constant, clippy::excessive_precision)]
mod tests {
    use super::*;

    fn opts() -> QuadOptions {
        QuadOptions::default()
    }

    #[test]
    fn polynomial_and_exponential() {
        let v = tanh_sinh(|x| x * x, 0.0, 3.0, &opts()).unwrap().value[0];
        assert!((v - 9.0).abs() < 1e-13);
        let v = tanh_sinh(f64::exp, -1.0, 2.0, &opts()).unwrap().value[0];
        assert!((v - (2f64.exp() - (-1f64).exp())).abs() < 1e-13);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        let v = tanh_sinh(|x| x, 2.0, 0.0, &opts()).unwrap().value[0];
        assert!((v + 2.0).abs() < 1e-14);
        assert_eq!(tanh_sinh(|x| x, 1.0, 1.0, &opts()).unwrap().value[0], 0.0);
    }

    #[test]
    fn log_endpoint_singularity() {
        // ∫_0^1 (-ln x)^3 dx = 3! = 6
        let v = tanh_sinh(|x| (-x.ln()).powi(3), 0.0, 1.0, &opts()).unwrap().value[0];
        assert!((v - 6.0).abs() < 1e-11, "{v}");
        // ∫_0^1 x^{-1/2} dx = 2
        let v = tanh_sinh(|x| x.powf(-0.5), 0.0, 1.0, &opts()).unwrap().value[0];
        assert!((v - 2.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn half_line() {
        // ∫_0^∞ s^5 e^{-s} ds = 120
        let v = exp_sinh(|s| s.powi(5) * (-s).exp(), 0.0, &opts()).unwrap().value[0];
        assert!((v - 120.0).abs() < 1e-9, "{v}");
        let v = exp_sinh(|s| (-2.0 * s).exp(), 1.0, &opts()).unwrap().value[0];
        assert!((v - 0.5 * (-2f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn vector_integrands_share_nodes() {
        let est = tanh_sinh_vec(|x| [1.0, x, x * x], 0.0, 1.0, &opts()).unwrap();
        assert!((est.value[0] - 1.0).abs() < 1e-14);
        assert!((est.value[1] - 0.5).abs() < 1e-14);
        assert!((est.value[2] - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn piecewise_discontinuity() {
        let step = |x: f64| if x < 1.0 { 2.0 } else { (-x).exp() };
        let v = integrate_piecewise(step, &[0.0, 1.0], true, &opts()).unwrap();
        assert!((v - (2.0 + (-1f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn node_budget_exhaustion_is_an_error() {
        let tight = QuadOptions {
            max_nodes: 20,
            ..opts()
        };
        let r = tanh_sinh(|x| (50.0 * x).sin(), 0.0, 1.0, &tight);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
