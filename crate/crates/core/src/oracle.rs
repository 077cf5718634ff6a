//! Independent checks on the bounds.
//!
//! For `d = 1` a radial weight `F(z) = ρ(|z|)` makes the localization
//! operator diagonal in the Hermite basis, with eigenvalues
//!
//! ```text
//! μ_k = ∫₀^∞ g(s) s^k e^{−s} / k! ds,    g(s) = ρ(√(s/π)).
//! ```
//!
//! For nonincreasing `g` the Gamma densities are stochastically ordered in
//! `k`, so `μ_k` is nonincreasing and the operator norm is `μ₀`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{require, Error, Result};
use crate::harness::SampledField;
use crate::quadrature::{integrate_piecewise, QuadOptions};
use crate::regimes::{classify, g_eval, Regime};
use crate::report::{Check, Report};
use crate::solver::optimize;
use crate::special::{factorial, ln_factorial};
use crate::weight::RadialWeight;
use crate::ProblemParams;

pub const DEFAULT_TRUNCATION: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenSpectrum {
    /// `μ₀ … μ_K`.
    pub eigenvalues: Vec<f64>,
    pub truncation_k: usize,
    /// Certified bound on `μ_k` for every `k > K`.
    pub tail_bound: f64,
    /// Largest eigenvalue.
    pub norm: f64,
    /// Whether the computed `μ_k` are nonincreasing.
    pub monotone: bool,
}

fn quad_opts() -> QuadOptions {
    QuadOptions::default()
}

fn eigenvalue(w: &RadialWeight, k: usize) -> Result<f64> {
    let kf = k as f64;
    let ln_kfact = ln_factorial(k as u32);
    let density = |s: f64| {
        if s == 0.0 {
            return if k == 0 { 1.0 } else { 0.0 };
        }
        (kf * s.ln() - s - ln_kfact).exp()
    };
    let spread = 10.0 * kf.sqrt() + 10.0;
    let mut pts = w.area_breakpoints();
    pts.extend([(kf - spread).max(0.0), kf, kf + spread]);
    let support = w.area_support();
    if let Some(end) = support {
        pts.retain(|&s| s <= end);
        pts.push(end);
    }
    integrate_piecewise(|s| w.value_at_area(s) * density(s), &pts, support.is_none(), &quad_opts())
}

/// `μ₀ … μ_{k_max}` of a `d = 1` radial weight.
pub fn eigenvalues_radial(w: &RadialWeight, k_max: usize) -> Result<EigenSpectrum> {
    if w.dim != 1 {
        return Err(Error::UnsupportedDimension(w.dim));
    }
    let eigenvalues = (0..=k_max)
        .into_par_iter()
        .map(|k| eigenvalue(w, k))
        .collect::<Result<Vec<_>>>()?;
    let monotone = w.is_nonincreasing() && eigenvalues.windows(2).all(|m| m[1] <= m[0]);
    let last = eigenvalues[k_max];
    let tail_bound = if w.is_nonincreasing() { last } else { w.peak() };
    let norm = eigenvalues.iter().copied().fold(0.0, f64::max);
    Ok(EigenSpectrum {
        eigenvalues,
        truncation_k: k_max,
        tail_bound,
        norm,
        monotone,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorNorm {
    pub norm: f64,
    /// `μ₀ … μ₅`, for inspection.
    pub leading: Vec<f64>,
}

/// Operator norm `μ₀` of a nonincreasing `d = 1` radial weight.
pub fn operator_norm_radial(w: &RadialWeight) -> Result<OperatorNorm> {
    if !w.is_nonincreasing() {
        return Err(Error::NotMonotone);
    }
    let spectrum = eigenvalues_radial(w, 5)?;
    Ok(OperatorNorm {
        norm: spectrum.eigenvalues[0],
        leading: spectrum.eigenvalues,
    })
}

/// `‖F‖_p` over `ℝ^{2d}`, as `∫₀^∞ g(s)^p s^{d−1}/(d−1)! ds`.
pub fn lp_norm_radial(w: &RadialWeight, p: f64) -> Result<f64> {
    require(p >= 1.0 && p.is_finite(), "p", p, "must lie in [1, ∞)")?;
    let d = w.dim;
    let jac = 1.0 / factorial(d - 1);
    let di = d as i32 - 1;
    let mut pts = w.area_breakpoints();
    let support = w.area_support();
    if let Some(end) = support {
        pts.push(end);
    } else {
        // mass of a Gaussian-like tail sits around s ≈ d
        pts.push(f64::from(d));
    }
    let integral = integrate_piecewise(
        |s| {
            let g = w.value_at_area(s);
            if g == 0.0 {
                0.0
            } else {
                g.powf(p) * s.powi(di) * jac
            }
        },
        &pts,
        support.is_none(),
        &quad_opts(),
    )?;
    Ok(integral.powf(1.0 / p))
}

fn g_total(mu: f64, d: u32) -> f64 {
    if mu.is_infinite() {
        1.0
    } else {
        g_eval(mu, d).unwrap_or(1.0)
    }
}

/// `∫₀^∞ G(μ(t)) dt` for the distribution function `μ` of a radial weight.
pub fn distribution_bound_radial(w: &RadialWeight) -> Result<f64> {
    let d = w.dim;
    let pts = w.level_breakpoints();
    integrate_piecewise(|t| g_total(w.superlevel_measure(t), d), &pts, false, &quad_opts())
}

/// `∫₀^∞ G(μ(t)) dt` for samples of uniform cell measure, whose
/// distribution function is a step function: with samples sorted as
/// `v₁ ≥ v₂ ≥ …` and `v_{n+1} = 0`, the integral is `Σ (v_i − v_{i+1}) G(i · cell)`.
pub fn distribution_bound_samples(values: &[f64], cell_measure: f64, d: u32) -> Result<f64> {
    require(d >= 1, "d", f64::from(d), "must be at least 1")?;
    require(cell_measure > 0.0 && cell_measure.is_finite(), "cell_measure", cell_measure, "must be positive")?;
    if values.is_empty() {
        return Err(Error::EmptyField);
    }
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, x)| !(**x >= 0.0 && x.is_finite())) {
        return Err(Error::NegativeSample { index, value });
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v.push(0.0);
    let mut total = 0.0;
    for (i, pair) in v.windows(2).enumerate() {
        let step = pair[0] - pair[1];
        if step > 0.0 {
            total += step * g_eval((i + 1) as f64 * cell_measure, d)?;
        }
    }
    Ok(total)
}

pub fn distribution_bound_field(field: &SampledField, d: u32) -> Result<f64> {
    distribution_bound_samples(&field.values, field.cell_measure(), d)
}

/// Cross-checks the bound for `params` against the independent oracles:
/// the extremal weight must saturate its budgets, attain the bound as an
/// operator norm (`d = 1`), and attain the distribution-function bound.
pub fn verify_oracle(params: &ProblemParams, tol: f64, k_max: usize) -> Result<Report> {
    let opt = optimize(params, tol)?;
    let w = &opt.weight;
    let mut checks = Vec::new();
    let np = lp_norm_radial(w, params.p)?;
    let nq = lp_norm_radial(w, params.q)?;
    let tol_norm = 1e-6;
    match opt.decision.regime {
        Regime::Intermediate => {
            checks.push(Check::close("p-norm equals A", np, params.a, tol_norm));
            checks.push(Check::close("q-norm equals B", nq, params.b, tol_norm));
        }
        Regime::PDominant => {
            checks.push(Check::close("p-norm equals A", np, params.a, tol_norm));
            checks.push(Check::at_most("q-norm within B", nq, params.b, tol_norm));
        }
        Regime::QDominant => {
            checks.push(Check::at_most("p-norm within A", np, params.a, tol_norm));
            checks.push(Check::close("q-norm equals B", nq, params.b, tol_norm));
        }
        Regime::DegenerateEqualExponents => {
            checks.push(Check::close("norm equals min(A, B)", np, params.a.min(params.b), tol_norm));
        }
    }
    let dist = distribution_bound_radial(w)?;
    checks.push(Check::close("distribution bound equals bound", dist, opt.bound, 1e-8));
    if params.d == 1 {
        let spectrum = eigenvalues_radial(w, k_max)?;
        checks.push(Check::close(
            "operator norm equals bound",
            spectrum.eigenvalues[0],
            opt.bound,
            1e-6,
        ));
        let worst_rise = spectrum
            .eigenvalues
            .windows(2)
            .map(|m| m[1] - m[0])
            .fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check::at_most("eigenvalues nonincreasing", worst_rise.max(0.0), 0.0, 0.0));
    }
    debug_assert_eq!(classify(params).regime, opt.decision.regime);
    Ok(Report::new(checks))
}
