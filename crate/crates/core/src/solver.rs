//! The intermediate regime: both norm constraints bind.
//!
//! The extremal distribution function is
//! `u(t) = Log₋(λ₁ t^{p−1} + λ₂ t^{q−1})^d / d!`, supported on `(0, T)` where
//! `λ₁T^{p−1} + λ₂T^{q−1} = 1`. The multipliers are fixed by
//!
//! ```text
//! f(c₁, c₂) = p ∫₀ᵀ t^{p−1} u dt = A^p,    g(c₁, c₂) = q ∫₀ᵀ t^{q−1} u dt = B^q
//! ```
//!
//! with `λ₁ = c₁^{p−1}`, `λ₂ = c₂^{q−1}`. Both `f` and `g` are strictly
//! decreasing in each argument, so for each `c₁ ∈ (0, c_{1,f})` the level set
//! `f = A^p` is the graph of a function `c₂ = φ(c₁)`, and `c₁ ↦ g(c₁, φ(c₁))`
//! crosses `B^q` exactly once. The solver follows that structure: an inner
//! 1-D root in `c₂`, an outer 1-D root in `c₁`, both bracketed by the
//! axis intercepts, then a short 2-D Newton polish.

use serde::Serialize;

use crate::error::{require, Error, Result};
use crate::quadrature::{tanh_sinh, tanh_sinh_vec, QuadOptions};
use crate::regimes::{classify, closed_form_bound, g_of_root, kappa, ProblemParams, Regime, RegimeDecision};
use crate::roots::{newton_bisect, Bracket, RootOptions};
use crate::special::factorial;
use crate::weight::{Profile, ProfileMeta, RadialWeight};

/// The map `t ↦ λ₁ t^{p−1} + λ₂ t^{q−1}` and its inverse.
///
/// Either multiplier may be zero here (the axis intercepts of the solver),
/// but not both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Kernel {
    p: f64,
    q: f64,
    lambda1: f64,
    lambda2: f64,
}

impl Kernel {
    pub(crate) fn new(lambda1: f64, lambda2: f64, p: f64, q: f64) -> Self {
        debug_assert!(lambda1 >= 0.0 && lambda2 >= 0.0 && lambda1 + lambda2 > 0.0);
        Self { p, q, lambda1, lambda2 }
    }

    fn terms(&self) -> impl Iterator<Item = (f64, f64)> {
        [(self.lambda1, self.p - 1.0), (self.lambda2, self.q - 1.0)]
            .into_iter()
            .filter(|(l, _)| *l > 0.0)
            .map(|(l, e)| (l.ln(), e))
    }

    pub(crate) fn eval(&self, t: f64) -> f64 {
        let mut s = 0.0;
        if self.lambda1 > 0.0 {
            s += self.lambda1 * t.powf(self.p - 1.0);
        }
        if self.lambda2 > 0.0 {
            s += self.lambda2 * t.powf(self.q - 1.0);
        }
        s
    }

    /// `Log₋` of the kernel at `t`.
    pub(crate) fn log_minus_s(&self, t: f64) -> f64 {
        (-self.eval(t).ln()).max(0.0)
    }

    /// `ln S(e^x)` and its derivative in `x`, via log-sum-exp.
    fn log_s_at_log(&self, x: f64) -> (f64, f64) {
        let mut m = f64::NEG_INFINITY;
        for (ll, e) in self.terms() {
            m = m.max(ll + e * x);
        }
        let mut sum = 0.0;
        let mut dsum = 0.0;
        for (ll, e) in self.terms() {
            let w = (ll + e * x - m).exp();
            sum += w;
            dsum += e * w;
        }
        (m + sum.ln(), dsum / sum)
    }

    /// The unique `t > 0` with `−ln S(t) = v`, found in `x = ln t`.
    pub(crate) fn inverse(&self, v: f64) -> Result<f64> {
        if v == f64::INFINITY {
            return Ok(0.0);
        }
        let mut x_hi = f64::INFINITY;
        let mut x_lo = f64::INFINITY;
        let mut active = 0;
        for (ll, e) in self.terms() {
            active += 1;
            x_hi = x_hi.min((-v - ll) / e);
            x_lo = x_lo.min((-v - std::f64::consts::LN_2 - ll) / e);
        }
        if active == 1 {
            return Ok(x_hi.exp());
        }
        let mut h = |x: f64| {
            let (ls, dls) = self.log_s_at_log(x);
            (ls + v, dls)
        };
        let bracket = Bracket::evaluate(x_lo, x_hi, &mut h);
        // at x_hi one term alone reaches e^{−v}; a negative value there is rounding
        if bracket.f_hi <= 0.0 {
            return Ok(x_hi.exp());
        }
        let opts = RootOptions {
            f_abs_tol: 1e-15,
            ..RootOptions::default()
        };
        Ok(newton_bisect("kernel inversion", h, bracket, None, &opts)?.x.exp())
    }
}

fn check_multiplier(name: &'static str, l: f64) -> Result<()> {
    require(l > 0.0 && l.is_finite(), name, l, "multiplier must be positive and finite")
}

fn check_exponents(p: f64, q: f64) -> Result<()> {
    require(p > 1.0 && p.is_finite(), "p", p, "exponent must lie in (1, ∞)")?;
    require(q > 1.0 && q.is_finite(), "q", q, "exponent must lie in (1, ∞)")
}

/// `u(t) = Log₋(λ₁ t^{p−1} + λ₂ t^{q−1})^d / d!`.
pub fn u_eval(t: f64, lambda1: f64, lambda2: f64, p: f64, q: f64, d: u32) -> Result<f64> {
    require(t > 0.0, "t", t, "must be positive")?;
    check_multiplier("lambda1", lambda1)?;
    check_multiplier("lambda2", lambda2)?;
    check_exponents(p, q)?;
    require(d >= 1, "d", f64::from(d), "must be at least 1")?;
    let l = Kernel::new(lambda1, lambda2, p, q).log_minus_s(t);
    Ok(l.powi(d as i32) / factorial(d))
}

/// The unique `T > 0` with `λ₁T^{p−1} + λ₂T^{q−1} = 1`.
pub fn support_endpoint(lambda1: f64, lambda2: f64, p: f64, q: f64) -> Result<f64> {
    check_multiplier("lambda1", lambda1)?;
    check_multiplier("lambda2", lambda2)?;
    check_exponents(p, q)?;
    Kernel::new(lambda1, lambda2, p, q).inverse(0.0)
}

/// Constraint values and their partial derivatives in `(c₁, c₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintJacobian {
    pub f: f64,
    pub g: f64,
    pub df_dc1: f64,
    pub df_dc2: f64,
    pub dg_dc1: f64,
    pub dg_dc2: f64,
    pub t_end: f64,
}

fn quad_opts() -> QuadOptions {
    QuadOptions::default()
}

/// Evaluates `f`, `g` and all four partials in one quadrature sweep.
///
/// The partials differentiate under the integral; the moving endpoint adds
/// nothing because `u(T) = 0`. For example
/// `∂f/∂c₁ = −p(p−1)c₁^{p−2}/(d−1)! ∫₀ᵀ t^{2(p−1)} L^{d−1}/S dt` with `L = −ln S`.
pub fn constraint_system(c1: f64, c2: f64, p: f64, q: f64, d: u32) -> Result<ConstraintJacobian> {
    require(c1 >= 0.0 && c1.is_finite(), "c1", c1, "must be nonnegative")?;
    require(c2 >= 0.0 && c2.is_finite(), "c2", c2, "must be nonnegative")?;
    require(c1 + c2 > 0.0, "c1 + c2", c1 + c2, "not both zero")?;
    check_exponents(p, q)?;
    let kernel = Kernel::new(c1.powf(p - 1.0), c2.powf(q - 1.0), p, q);
    let t_end = kernel.inverse(0.0)?;
    let di = d as i32;
    let inv_dfact = 1.0 / factorial(d);
    let est = tanh_sinh_vec(
        |t| {
            let s = kernel.eval(t);
            let l = (-s.ln()).max(0.0);
            let ud = l.powi(di) * inv_dfact;
            let w = l.powi(di - 1) / s;
            let tp = t.powf(p - 1.0);
            let tq = t.powf(q - 1.0);
            [p * tp * ud, q * tq * ud, tp * tp * w, tp * tq * w, tq * tq * w]
        },
        0.0,
        t_end,
        &quad_opts(),
    )?;
    let [f, g, j11, j12, j22] = est.value;
    let inv_dm1 = 1.0 / factorial(d - 1);
    let a1 = (p - 1.0) * c1.powf(p - 2.0) * inv_dm1;
    let a2 = (q - 1.0) * c2.powf(q - 2.0) * inv_dm1;
    Ok(ConstraintJacobian {
        f,
        g,
        df_dc1: -p * a1 * j11,
        df_dc2: -p * a2 * j12,
        dg_dc1: -q * a1 * j12,
        dg_dc2: -q * a2 * j22,
        t_end,
    })
}

/// `(f(c₁, c₂), g(c₁, c₂))`, the two constraint integrals.
pub fn constraint_integrals(c1: f64, c2: f64, params: &ProblemParams) -> Result<(f64, f64)> {
    let j = constraint_system(c1, c2, params.p, params.q, params.d)?;
    Ok((j.f, j.g))
}

/// Solved intermediate-regime instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationalSolution {
    pub params: ProblemParams,
    pub lambda1: f64,
    pub lambda2: f64,
    pub c1: f64,
    pub c2: f64,
    #[serde(rename = "T")]
    pub t_end: f64,
    pub bound: f64,
    /// `f − A^p` at the returned multipliers.
    pub residual_p: f64,
    /// `g − B^q` at the returned multipliers.
    pub residual_q: f64,
    /// Constraint-system evaluations spent by the solve.
    pub iterations: usize,
}

impl VariationalSolution {
    /// Forward direction: fixes the multipliers and derives the budgets
    /// `A = f^{1/p}`, `B = g^{1/q}` they solve for.
    pub fn from_multipliers(d: u32, p: f64, q: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        check_multiplier("lambda1", lambda1)?;
        check_multiplier("lambda2", lambda2)?;
        check_exponents(p, q)?;
        let c1 = lambda1.powf(1.0 / (p - 1.0));
        let c2 = lambda2.powf(1.0 / (q - 1.0));
        let j = constraint_system(c1, c2, p, q, d)?;
        let params = ProblemParams::new(d, p, q, j.f.powf(1.0 / p), j.g.powf(1.0 / q))?;
        let mut sol = Self {
            params,
            lambda1,
            lambda2,
            c1,
            c2,
            t_end: j.t_end,
            bound: f64::NAN,
            residual_p: 0.0,
            residual_q: 0.0,
            iterations: 1,
        };
        sol.bound = bound_value(&sol)?;
        Ok(sol)
    }

    pub(crate) fn kernel(&self) -> Kernel {
        Kernel::new(self.lambda1, self.lambda2, self.params.p, self.params.q)
    }

    /// `ψ(v)`: the `t ∈ (0, T]` with `−ln(λ₁t^{p−1} + λ₂t^{q−1}) = v`.
    pub fn psi(&self, v: f64) -> Result<f64> {
        require(v >= 0.0, "v", v, "must be nonnegative")?;
        if v == 0.0 {
            return Ok(self.t_end);
        }
        Ok(self.kernel().inverse(v)?.min(self.t_end))
    }

    /// `u(t)` at the solved multipliers; zero for `t ≥ T`.
    pub fn u(&self, t: f64) -> Result<f64> {
        u_eval(t, self.lambda1, self.lambda2, self.params.p, self.params.q, self.params.d)
    }
}

pub fn psi_eval(v: f64, solution: &VariationalSolution) -> Result<f64> {
    solution.psi(v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Bound on `|f − A^p| / A^p` and `|g − B^q| / B^q`.
    pub tol: f64,
    /// Optional starting bracket for `c₁`, as fractions of `c_{1,f}`. Falls back
    /// to the full certified bracket when it holds no sign change.
    pub outer_bracket: Option<(f64, f64)>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            outer_bracket: None,
        }
    }
}

pub fn solve_multipliers(params: &ProblemParams, tol: f64) -> Result<VariationalSolution> {
    solve_multipliers_with(
        params,
        &SolverOptions {
            tol,
            ..SolverOptions::default()
        },
    )
}

struct MultiplierSystem {
    p: f64,
    q: f64,
    d: u32,
    ap: f64,
    bq: f64,
    c1_f: f64,
    c2_f: f64,
    kp_d: f64,
    evaluations: usize,
    failure: Option<Error>,
    last_c2: Option<f64>,
}

impl MultiplierSystem {
    fn eval(&mut self, c1: f64, c2: f64) -> Option<ConstraintJacobian> {
        self.evaluations += 1;
        match constraint_system(c1, c2, self.p, self.q, self.d) {
            Ok(j) => Some(j),
            Err(e) => {
                self.failure.get_or_insert(e);
                None
            }
        }
    }

    fn take_failure(&mut self, fallback: Error) -> Error {
        self.failure.take().unwrap_or(fallback)
    }

    /// `φ(c₁)`: the `c₂ ∈ [0, c_{2,f}]` with `f(c₁, c₂) = A^p`.
    fn level_curve(&mut self, c1: f64) -> Result<f64> {
        // f(c₁, 0) = κ_p^d c₁^{−p} in closed form
        let f_lo = self.kp_d * c1.powf(-self.p) / self.ap - 1.0;
        if f_lo <= 0.0 {
            return Ok(0.0);
        }
        let c2_f = self.c2_f;
        let f_hi = match self.eval(c1, c2_f) {
            Some(j) => j.f / self.ap - 1.0,
            None => return Err(self.take_failure(Error::EmptyField)),
        };
        if f_hi >= 0.0 {
            return Ok(c2_f);
        }
        let guess = self.last_c2;
        let ap = self.ap;
        let opts = RootOptions {
            f_abs_tol: 1e-15,
            ..RootOptions::default()
        };
        let bracket = Bracket {
            lo: 0.0,
            hi: c2_f,
            f_lo,
            f_hi,
        };
        let root = newton_bisect(
            "level-curve solve in c2",
            |c2| match self.eval(c1, c2) {
                Some(j) => (j.f / ap - 1.0, j.df_dc2 / ap),
                None => (f64::NAN, f64::NAN),
            },
            bracket,
            guess,
            &opts,
        );
        match root {
            Ok(r) => {
                self.last_c2 = Some(r.x);
                Ok(r.x)
            }
            Err(e) => Err(self.take_failure(e)),
        }
    }

    /// `g(c₁, φ(c₁))/B^q − 1` and its total derivative in `c₁`.
    fn outer(&mut self, c1: f64) -> (f64, f64) {
        let c2 = match self.level_curve(c1) {
            Ok(c2) => c2,
            Err(e) => {
                self.failure.get_or_insert(e);
                return (f64::NAN, f64::NAN);
            }
        };
        let Some(j) = self.eval(c1, c2) else {
            return (f64::NAN, f64::NAN);
        };
        let dphi = -j.df_dc1 / j.df_dc2;
        let dh = (j.dg_dc1 + j.dg_dc2 * dphi) / self.bq;
        (j.g / self.bq - 1.0, if dh.is_finite() { dh } else { f64::NAN })
    }

    fn residual(&self, j: &ConstraintJacobian) -> f64 {
        (j.f / self.ap - 1.0).abs().max((j.g / self.bq - 1.0).abs())
    }
}

/// Solves for the multipliers of an intermediate-regime instance.
pub fn solve_multipliers_with(params: &ProblemParams, opts: &SolverOptions) -> Result<VariationalSolution> {
    let decision = classify(params);
    if decision.regime != Regime::Intermediate {
        return Err(Error::WrongRegime {
            operation: "solve_multipliers",
            regime: decision.regime,
        });
    }
    require(opts.tol > 0.0, "tol", opts.tol, "must be positive")?;
    let ProblemParams { d, p, q, a, b } = *params;
    let df = f64::from(d);
    let kp = kappa(p)?;
    let kq = kappa(q)?;
    let mut sys = MultiplierSystem {
        p,
        q,
        d,
        ap: a.powf(p),
        bq: b.powf(q),
        c1_f: kp.powf(df / p) / a,
        c2_f: ((q - 1.0) / p).powf(df / p) / a,
        kp_d: kp.powf(df),
        evaluations: 0,
        failure: None,
        last_c2: None,
    };

    // Axis intercepts: φ(0) = c_{2,f} and φ(c_{1,f}) = 0, so h has closed forms there.
    let h_at_zero = kq.powf(df) * sys.c2_f.powf(-q) / sys.bq - 1.0;
    let h_at_c1f = ((p - 1.0) / q).powf(df) * sys.c1_f.powf(-q) / sys.bq - 1.0;
    let full = Bracket {
        lo: 0.0,
        hi: sys.c1_f,
        f_lo: h_at_zero,
        f_hi: h_at_c1f,
    };
    let bracket = match opts.outer_bracket {
        Some((lo, hi)) if 0.0 < lo && lo < hi && hi < 1.0 => {
            let (lo, hi) = (lo * sys.c1_f, hi * sys.c1_f);
            let f_lo = sys.outer(lo).0;
            let f_hi = sys.outer(hi).0;
            if f_lo < 0.0 && f_hi > 0.0 {
                Bracket { lo, hi, f_lo, f_hi }
            } else {
                full
            }
        }
        _ => full,
    };
    let root_opts = RootOptions {
        f_abs_tol: 1e-15,
        ..RootOptions::default()
    };
    let root = newton_bisect("multiplier solve in c1", |c1| sys.outer(c1), bracket, None, &root_opts);
    let c1_root = match root {
        Ok(r) => r.x,
        Err(e) => return Err(sys.take_failure(e)),
    };
    let mut c1 = c1_root;
    let mut c2 = sys.level_curve(c1)?;
    let mut j = sys.eval(c1, c2).ok_or_else(|| sys.take_failure(Error::EmptyField))?;
    let mut res = sys.residual(&j);

    // Newton polish on the coupled system; accepted only while it helps.
    for _ in 0..3 {
        if res <= 1e-14 {
            break;
        }
        let (rf, rg) = (j.f / sys.ap - 1.0, j.g / sys.bq - 1.0);
        let (a11, a12) = (j.df_dc1 / sys.ap, j.df_dc2 / sys.ap);
        let (a21, a22) = (j.dg_dc1 / sys.bq, j.dg_dc2 / sys.bq);
        let det = a11 * a22 - a12 * a21;
        let n1 = c1 + (-rf * a22 + rg * a12) / det;
        let n2 = c2 + (-rg * a11 + rf * a21) / det;
        if !(n1 > 0.0 && n2 > 0.0 && n1.is_finite() && n2.is_finite()) {
            break;
        }
        let Some(jn) = sys.eval(n1, n2) else { break };
        let rn = sys.residual(&jn);
        if rn >= res {
            break;
        }
        (c1, c2, j, res) = (n1, n2, jn, rn);
    }

    if res > opts.tol {
        return Err(Error::NonConvergence {
            what: "multiplier solve (residual above tolerance)",
            iterations: sys.evaluations,
        });
    }
    let mut sol = VariationalSolution {
        params: *params,
        lambda1: c1.powf(p - 1.0),
        lambda2: c2.powf(q - 1.0),
        c1,
        c2,
        t_end: j.t_end,
        bound: f64::NAN,
        residual_p: j.f - sys.ap,
        residual_q: j.g - sys.bq,
        iterations: sys.evaluations,
    };
    sol.bound = bound_value(&sol)?;
    Ok(sol)
}

/// `∫₀ᵀ G(u(t)) dt` by quadrature, whatever the dimension.
pub fn bound_integral(solution: &VariationalSolution) -> Result<f64> {
    let kernel = solution.kernel();
    let d = solution.params.d;
    let est = tanh_sinh(|t| g_of_root(kernel.log_minus_s(t), d), 0.0, solution.t_end, &quad_opts())?;
    Ok(est.value[0])
}

/// Maximal value `∫₀ᵀ G(u(t)) dt` of the variational problem.
///
/// For `d = 1` this reduces to `T − λ₁T^p/p − λ₂T^q/q`; the closed form is
/// returned after checking it against the quadrature to `1e−8`.
pub fn bound_value(solution: &VariationalSolution) -> Result<f64> {
    let quad = bound_integral(solution)?;
    if solution.params.d != 1 {
        return Ok(quad);
    }
    let VariationalSolution {
        lambda1, lambda2, t_end, ..
    } = *solution;
    let ProblemParams { p, q, .. } = solution.params;
    let closed = t_end - lambda1 * t_end.powf(p) / p - lambda2 * t_end.powf(q) / q;
    let gap = (closed - quad).abs();
    if gap > 1e-8 {
        return Err(Error::Quadrature {
            estimate: quad,
            error: gap,
            nodes: 0,
        });
    }
    Ok(closed)
}

/// Tabulates a radial weight at `n` equispaced radii in `[0, r_max]`.
pub fn sample_profile(weight: &RadialWeight, r_max: f64, n: usize) -> Result<RadialWeight> {
    require(r_max > 0.0 && r_max.is_finite(), "rmax", r_max, "must be positive")?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {n}")));
    }
    let step = r_max / (n - 1) as f64;
    let r: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { r_max } else { i as f64 * step })
        .collect();
    let (f, meta) = match &weight.profile {
        Profile::OptimalPsi(sol) => {
            let f = r
                .iter()
                .map(|ri| sol.psi(std::f64::consts::PI * ri * ri))
                .collect::<Result<Vec<_>>>()?;
            let meta = ProfileMeta::Multipliers {
                lambda1: sol.lambda1,
                lambda2: sol.lambda2,
                t_end: sol.t_end,
            };
            (f, Some(meta))
        }
        Profile::Gaussian { amplitude, decay } => (
            r.iter().map(|&ri| weight.value_at_radius(ri)).collect(),
            Some(ProfileMeta::Gaussian {
                amplitude: *amplitude,
                decay: *decay,
            }),
        ),
        Profile::Tabulated(t) => (r.iter().map(|&ri| weight.value_at_radius(ri)).collect(), t.meta),
        Profile::Disk { .. } => (r.iter().map(|&ri| weight.value_at_radius(ri)).collect(), None),
    };
    let mut out = RadialWeight::tabulated(r, f, meta, weight.dim)?;
    out.center.clone_from(&weight.center);
    out.phase = weight.phase;
    Ok(out)
}

/// Sharp bound and extremal weight for any regime.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub params: ProblemParams,
    pub decision: RegimeDecision,
    pub bound: f64,
    pub weight: RadialWeight,
    /// Present in the intermediate regime only.
    pub solution: Option<VariationalSolution>,
}

pub fn optimize(params: &ProblemParams, tol: f64) -> Result<Optimum> {
    let decision = classify(params);
    if decision.regime == Regime::Intermediate {
        let sol = solve_multipliers(params, tol)?;
        Ok(Optimum {
            params: *params,
            decision,
            bound: sol.bound,
            weight: RadialWeight::optimal(sol.clone()),
            solution: Some(sol),
        })
    } else {
        let cf = closed_form_bound(params, &decision)?;
        Ok(Optimum {
            params: *params,
            decision,
            bound: cf.bound,
            weight: cf.weight,
            solution: None,
        })
    }
}

#[cfg(test)]
#[allow(clippy::approx_constant, clippy::excessive_precision)]
mod tests {
    use super::*;

    #[test]
    fn u_examples() {
        assert_eq!(u_eval(1.0, 0.5, 0.5, 2.0, 3.0, 1).unwrap(), 0.0);
        assert!((u_eval(0.5, 0.5, 0.5, 2.0, 3.0, 1).unwrap() - 0.98082925301172624).abs() < 1e-14);
        assert!((u_eval(0.5, 0.5, 0.5, 2.0, 3.0, 2).unwrap() - 0.48101301178177044).abs() < 1e-14);
        assert_eq!(u_eval(2.0, 0.5, 0.5, 2.0, 3.0, 2).unwrap(), 0.0);
        assert!(u_eval(0.0, 0.5, 0.5, 2.0, 3.0, 1).is_err());
        assert!(u_eval(-1.0, 0.5, 0.5, 2.0, 3.0, 1).is_err());
    }

    #[test]
    fn endpoint_examples() {
        let t = support_endpoint(0.5, 0.5, 2.0, 3.0).unwrap();
        assert!((t - 1.0).abs() < 1e-15);
        assert!((0.5 * t + 0.5 * t * t - 1.0).abs() < 1e-12);
        let l1 = 0.5f64.sqrt();
        let t = support_endpoint(l1, 1e-12, 2.0, 3.0).unwrap();
        assert!((t - 1.4142135623702666).abs() < 1e-14);
        assert!(support_endpoint(1.0, 0.0, 2.0, 3.0).is_err());
        assert!(support_endpoint(-1.0, 1.0, 2.0, 3.0).is_err());
    }

    #[test]
    fn endpoint_extreme_multipliers() {
        // λ₂ = 1e−300 is admissible and leaves T ≈ 1/λ₁
        let t = support_endpoint(1.0, 1e-300, 2.0, 3.0).unwrap();
        assert!((t - 1.0).abs() < 1e-15);
        for &(l1, l2, p, q) in &[(1e-8, 3.0, 1.01, 40.0), (1e6, 1e-6, 7.0, 1.2), (0.3, 0.9, 20.0, 1.5)] {
            let t = support_endpoint(l1, l2, p, q).unwrap();
            let defect = l1 * t.powf(p - 1.0) + l2 * t.powf(q - 1.0) - 1.0;
            assert!(defect.abs() < 1e-12, "{l1} {l2} {p} {q}: {defect}");
        }
    }

    #[test]
    fn psi_examples() {
        let sol = VariationalSolution::from_multipliers(1, 2.0, 3.0, 0.5, 0.5).unwrap();
        assert_eq!(sol.psi(0.0).unwrap(), sol.t_end);
        assert!((sol.psi(0.98082925301172624).unwrap() - 0.5).abs() < 1e-12);
        assert!(sol.psi(40.0).unwrap() < 1e-10 * sol.t_end);
        assert!(sol.psi(-0.1).is_err());
    }

    #[test]
    fn constraint_axis_intercepts() {
        // f(κ_p^{d/p}/A, 0) = A^p and g(0, κ_q^{d/q}/B) = B^q
        let params = ProblemParams::new(1, 2.0, 3.0, 1.0, 1.0).unwrap();
        let (f, _) = constraint_integrals(0.5f64.sqrt(), 0.0, &params).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
        let (_, g) = constraint_integrals(0.0, (2.0f64 / 3.0).cbrt(), &params).unwrap();
        assert!((g - 1.0).abs() < 1e-12);
        assert!(constraint_integrals(0.0, 0.0, &params).is_err());
        assert!(constraint_integrals(-1.0, 1.0, &params).is_err());
    }

    #[test]
    fn partials_match_finite_differences() {
        let (p, q, d) = (1.7, 3.2, 2);
        let (c1, c2) = (0.6, 0.45);
        let j = constraint_system(c1, c2, p, q, d).unwrap();
        let h = 1e-6;
        let fd = |dc1: f64, dc2: f64| {
            let plus = constraint_system(c1 + dc1, c2 + dc2, p, q, d).unwrap();
            let minus = constraint_system(c1 - dc1, c2 - dc2, p, q, d).unwrap();
            ((plus.f - minus.f) / (2.0 * h), (plus.g - minus.g) / (2.0 * h))
        };
        let (f1, g1) = fd(h, 0.0);
        let (f2, g2) = fd(0.0, h);
        for (analytic, numeric) in [(j.df_dc1, f1), (j.dg_dc1, g1), (j.df_dc2, f2), (j.dg_dc2, g2)] {
            assert!((analytic - numeric).abs() < 1e-6 * analytic.abs().max(1.0), "{analytic} vs {numeric}");
            assert!(analytic < 0.0);
        }
    }

    #[test]
    fn solve_rejects_gaussian_regimes() {
        let params = ProblemParams::new(1, 2.0, 3.0, 1.0, 1.5).unwrap();
        assert!(matches!(
            solve_multipliers(&params, 1e-9),
            Err(Error::WrongRegime { regime: Regime::PDominant, .. })
        ));
    }

    #[test]
    fn bound_closed_form_example() {
        let sol = VariationalSolution::from_multipliers(1, 2.0, 3.0, 0.5, 0.5).unwrap();
        assert!((sol.bound - 7.0 / 12.0).abs() < 1e-15);
        assert!((bound_integral(&sol).unwrap() - 7.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn frozen_constraint_values() {
        let c = 0.5f64.sqrt();
        for (d, f, g) in [
            (1, 0.69314718055994531, 0.47351948610672136),
            (2, 0.44898790150310455, 0.21326534618134901),
            (3, 0.27485618146720349, 0.091814666738581462),
        ] {
            let j = constraint_system(0.5, c, 2.0, 3.0, d).unwrap();
            assert!((j.f - f).abs() < 1e-12 * f, "d={d}: {}", j.f);
            assert!((j.g - g).abs() < 1e-12 * g, "d={d}: {}", j.g);
        }
    }

    #[test]
    fn frozen_bounds_higher_dimension() {
        for (d, b) in [(2, 0.33112662384222678), (3, 0.18333542410289247)] {
            let sol = VariationalSolution::from_multipliers(d, 2.0, 3.0, 0.5, 0.5).unwrap();
            assert!((sol.bound - b).abs() < 1e-11, "d={d}: {}", sol.bound);
        }
    }

    #[test]
    fn forward_backward_round_trip() {
        for d in 1..=3 {
            let fwd = VariationalSolution::from_multipliers(d, 2.0, 3.0, 0.5, 0.5).unwrap();
            assert_eq!(classify(&fwd.params).regime, Regime::Intermediate);
            let sol = solve_multipliers(&fwd.params, 1e-9).unwrap();
            assert!((sol.lambda1 - 0.5).abs() < 1e-8, "d={d}: {}", sol.lambda1);
            assert!((sol.lambda2 - 0.5).abs() < 1e-8, "d={d}: {}", sol.lambda2);
            assert!((sol.bound - fwd.bound).abs() < 1e-9);
        }
    }

    #[test]
    fn wide_exponent_instance() {
        let params = ProblemParams::new(1, 1.5, 20.0, 1.0, 1.0).unwrap();
        let sol = solve_multipliers(&params, 1e-9).unwrap();
        assert!(sol.lambda1 > 0.0 && sol.lambda2 > 0.0);
        assert!(sol.residual_p.abs() < 1e-8 && sol.residual_q.abs() < 1e-8);
        let defect = sol.lambda1 * sol.t_end.powf(0.5) + sol.lambda2 * sol.t_end.powi(19) - 1.0;
        assert!(defect.abs() < 1e-12);
    }

    #[test]
    fn bracket_choice_does_not_change_the_answer() {
        let params = ProblemParams::new(1, 2.0, 3.0, 1.0, 0.93).unwrap();
        let a = solve_multipliers(&params, 1e-9).unwrap();
        for br in [(0.1, 0.9), (0.5, 0.99), (0.01, 0.02)] {
            let b = solve_multipliers_with(&params, &SolverOptions { tol: 1e-9, outer_bracket: Some(br) }).unwrap();
            assert!((a.lambda1 - b.lambda1).abs() < 1e-10);
            assert!((a.lambda2 - b.lambda2).abs() < 1e-10);
        }
    }

    #[test]
    fn continuity_at_both_thresholds() {
        let (p, q) = (2.0, 3.0);
        let up = crate::regimes::threshold_upper(p, q, 1).unwrap();
        let lo = crate::regimes::threshold_lower(p, q, 1).unwrap();
        let near_p = ProblemParams::new(1, p, q, 1.0, up - 1e-4).unwrap();
        let sol = solve_multipliers(&near_p, 1e-9).unwrap();
        assert!((sol.bound - 0.5f64.sqrt()).abs() < 1e-4, "{}", sol.bound);
        let near_q = ProblemParams::new(1, p, q, 1.0, lo + 1e-4).unwrap();
        let sol = solve_multipliers(&near_q, 1e-9).unwrap();
        let closed = (2.0f64 / 3.0).powf(2.0 / 3.0) * (lo + 1e-4);
        assert!((sol.bound - closed).abs() < 1e-4, "{} vs {closed}", sol.bound);
    }

    #[test]
    fn sample_profile_validation() {
        let w = RadialWeight::gaussian(1.0, 1.0, 1).unwrap();
        assert!(sample_profile(&w, 0.0, 10).is_err());
        assert!(sample_profile(&w, 1.0, 1).is_err());
        let t = sample_profile(&w, 2.0, 5).unwrap();
        match t.profile {
            Profile::Tabulated(table) => {
                assert_eq!(table.r, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
                assert_eq!(table.f[0], 1.0);
            }
            _ => unreachable!(),
        }
    }
}
