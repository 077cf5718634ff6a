//! Exponent bookkeeping, regime thresholds and the two Gaussian-optimal branches.
//!
//! A problem instance bounds a weight `F` on `ℝ^{2d}` by `‖F‖_p ≤ A` and
//! `‖F‖_q ≤ B`. Depending on where `B/A` sits relative to two thresholds,
//! either one constraint alone is active (the optimal weight is a Gaussian
//! and the bound has a closed form) or both are active and the bound comes
//! from the variational solver.

use std::fmt;

use serde::Serialize;

use crate::error::{require, Error, Result};
use crate::special::{ln_factorial, lower_gamma_regularized_int};
use crate::weight::RadialWeight;

/// `(d, p, q, A, B)`: dimension, the two exponents and their norm budgets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProblemParams {
    pub d: u32,
    pub p: f64,
    pub q: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

impl ProblemParams {
    pub fn new(d: u32, p: f64, q: f64, a: f64, b: f64) -> Result<Self> {
        require(d >= 1, "d", f64::from(d), "must be at least 1")?;
        check_exponent("p", p)?;
        check_exponent("q", q)?;
        require(a > 0.0 && a.is_finite(), "A", a, "must be positive and finite")?;
        require(b > 0.0 && b.is_finite(), "B", b, "must be positive and finite")?;
        Ok(Self { d, p, q, a, b })
    }

    pub fn ratio(&self) -> f64 {
        self.b / self.a
    }
}

fn check_exponent(name: &'static str, p: f64) -> Result<()> {
    require(p > 1.0 && p.is_finite(), name, p, "exponent must lie in (1, ∞)")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    /// Only the `L^p` constraint binds; Gaussian optimizer with decay `p − 1`.
    PDominant,
    /// Only the `L^q` constraint binds; Gaussian optimizer with decay `q − 1`.
    QDominant,
    /// Both constraints bind; the optimizer is the ψ-profile.
    Intermediate,
    /// `p = q`: the intermediate window is empty.
    DegenerateEqualExponents,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::PDominant => "P_DOMINANT",
            Regime::QDominant => "Q_DOMINANT",
            Regime::Intermediate => "INTERMEDIATE",
            Regime::DegenerateEqualExponents => "DEGENERATE_EQUAL_EXPONENTS",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeDecision {
    pub regime: Regime,
    pub threshold_lower: f64,
    pub threshold_upper: f64,
    pub ratio: f64,
}

/// `κ_p = (p − 1)/p`.
pub fn kappa(p: f64) -> Result<f64> {
    check_exponent("p", p)?;
    Ok((p - 1.0) / p)
}

/// `p' = p/(p − 1)`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    check_exponent("p", p)?;
    Ok(p / (p - 1.0))
}

/// `max(−ln x, 0)`.
pub fn log_minus(x: f64) -> Result<f64> {
    require(x > 0.0, "x", x, "must be positive")?;
    Ok((-x.ln()).max(0.0))
}

/// `G(s) = ∫_0^s exp(−(d!·τ)^{1/d}) dτ`.
///
/// Substituting `w = (d!τ)^{1/d}` turns this into the regularized incomplete
/// gamma function `P(d, w)` evaluated at `w = (d!·s)^{1/d}`.
pub fn g_eval(s: f64, d: u32) -> Result<f64> {
    require(s >= 0.0, "s", s, "must be nonnegative")?;
    require(d >= 1, "d", f64::from(d), "must be at least 1")?;
    if s == 0.0 {
        return Ok(0.0);
    }
    if d == 1 {
        return Ok(-(-s).exp_m1());
    }
    let w = ((ln_factorial(d) + s.ln()) / f64::from(d)).exp();
    Ok(lower_gamma_regularized_int(d, w))
}

/// `G` expressed through `w = (d!·s)^{1/d}` directly, skipping the root.
pub(crate) fn g_of_root(w: f64, d: u32) -> f64 {
    if d == 1 {
        -(-w).exp_m1()
    } else {
        lower_gamma_regularized_int(d, w)
    }
}

/// Upper ratio threshold `κ_p^{d(1/q − 1/p)} (p/q)^{d/q}`; at or above it the
/// `L^p`-optimal Gaussian already satisfies the `L^q` budget.
pub fn threshold_upper(p: f64, q: f64, d: u32) -> Result<f64> {
    let kp = kappa(p)?;
    check_exponent("q", q)?;
    let d = f64::from(d);
    Ok((d * (1.0 / q - 1.0 / p) * kp.ln() + d / q * (p / q).ln()).exp())
}

/// Lower ratio threshold `κ_q^{d(1/q − 1/p)} (p/q)^{d/p}`.
pub fn threshold_lower(p: f64, q: f64, d: u32) -> Result<f64> {
    check_exponent("p", p)?;
    let kq = kappa(q).map_err(|_| Error::Domain {
        name: "q",
        value: q,
        requirement: "exponent must lie in (1, ∞)",
    })?;
    let d = f64::from(d);
    Ok((d * (1.0 / q - 1.0 / p) * kq.ln() + d / p * (p / q).ln()).exp())
}

/// Assigns the regime. Ratios exactly on a threshold go to the Gaussian branch.
pub fn classify(params: &ProblemParams) -> RegimeDecision {
    let ProblemParams { d, p, q, .. } = *params;
    let ratio = params.ratio();
    // params are validated on construction, so the thresholds cannot fail
    let threshold_upper = threshold_upper(p, q, d).expect("validated exponents");
    let threshold_lower = threshold_lower(p, q, d).expect("validated exponents");
    let regime = if p == q {
        Regime::DegenerateEqualExponents
    } else if ratio >= threshold_upper {
        Regime::PDominant
    } else if ratio <= threshold_lower {
        Regime::QDominant
    } else {
        Regime::Intermediate
    };
    RegimeDecision {
        regime,
        threshold_lower,
        threshold_upper,
        ratio,
    }
}

/// Single-constraint bound `κ_r^{dκ_r} · budget` for `‖F‖_r ≤ budget`.
pub fn lieb_bound(r: f64, budget: f64, d: u32) -> Result<f64> {
    let k = kappa(r)?;
    Ok((f64::from(d) * k * k.ln()).exp() * budget)
}

/// Bound and extremal weight for a Gaussian-optimal regime.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub bound: f64,
    pub weight: RadialWeight,
}

/// Closed-form bound for the `P_DOMINANT`, `Q_DOMINANT` and degenerate regimes,
/// together with the Gaussian `λ·exp(−π|z|²/(r − 1))`, `λ = κ_r^{−d/r}·budget`,
/// that attains it.
pub fn closed_form_bound(params: &ProblemParams, decision: &RegimeDecision) -> Result<ClosedForm> {
    let (r, budget) = match decision.regime {
        Regime::PDominant => (params.p, params.a),
        Regime::QDominant => (params.q, params.b),
        Regime::DegenerateEqualExponents => (params.p, params.a.min(params.b)),
        Regime::Intermediate => {
            return Err(Error::WrongRegime {
                operation: "closed_form_bound",
                regime: decision.regime,
            })
        }
    };
    let k = kappa(r)?;
    let d = f64::from(params.d);
    let amplitude = (-d / r * k.ln()).exp() * budget;
    Ok(ClosedForm {
        bound: lieb_bound(r, budget, params.d)?,
        weight: RadialWeight::gaussian(amplitude, r - 1.0, params.d)?,
    })
}
