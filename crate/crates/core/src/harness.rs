//! Discretized spectrogram experiments in `d = 1`.
//!
//! Signals are sampled on a uniform time grid, the short-time Fourier
//! transform with the window `φ(t) = 2^{1/4} e^{−πt²}` is evaluated by direct
//! Riemann sums at every point of a square phase-space grid, and the
//! resulting spectrogram is measured in the `L^p + L^q` norm.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{require, Error, Result};
use crate::regimes::{conjugate_exponent, Regime};
use crate::solver::optimize;
use crate::weight::RadialWeight;
use crate::ProblemParams;

/// Nonnegative samples on the square grid `{−R, −R + h, …, R}²`, stored
/// row-major with the first coordinate (time) as the row index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledField {
    pub half_width: f64,
    pub step: f64,
    /// Grid points per side.
    pub side: usize,
    pub values: Vec<f64>,
}

fn grid_side(half_width: f64, step: f64) -> Result<usize> {
    require(half_width > 0.0 && half_width.is_finite(), "R", half_width, "must be positive")?;
    require(step > 0.0 && step <= half_width, "h", step, "must lie in (0, R]")?;
    let cells = 2.0 * half_width / step;
    if (cells - cells.round()).abs() > 1e-9 * cells {
        return Err(Error::InvalidArgument(format!(
            "grid step {step} does not divide the width {}",
            2.0 * half_width
        )));
    }
    Ok(cells.round() as usize + 1)
}

impl SampledField {
    pub fn new(half_width: f64, step: f64, values: Vec<f64>) -> Result<Self> {
        let side = grid_side(half_width, step)?;
        if values.len() != side * side {
            return Err(Error::GridMismatch);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::NegativeSample { index, value });
        }
        Ok(Self {
            half_width,
            step,
            side,
            values,
        })
    }

    pub fn from_fn<F: Fn(f64, f64) -> f64 + Sync>(half_width: f64, step: f64, f: F) -> Result<Self> {
        let side = grid_side(half_width, step)?;
        let values: Vec<f64> = (0..side * side)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / side, idx % side);
                f(-half_width + i as f64 * step, -half_width + j as f64 * step)
            })
            .collect();
        Self::new(half_width, step, values)
    }

    /// Samples `|F|` of a `d = 1` radial weight.
    pub fn from_radial(w: &RadialWeight, half_width: f64, step: f64) -> Result<Self> {
        if w.dim != 1 {
            return Err(Error::UnsupportedDimension(w.dim));
        }
        Self::from_fn(half_width, step, |x, y| w.value_at(&[x, y]))
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.step
    }

    pub fn cell_measure(&self) -> f64 {
        self.step * self.step
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.side + j]
    }

    /// `Σ v · h²`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_measure()
    }

    fn same_grid(&self, other: &Self) -> bool {
        self.side == other.side && self.half_width == other.half_width && self.step == other.step
    }
}

/// Discrete inner product `Σ F · S · h²`.
pub fn pairing(weight: &SampledField, spec: &SampledField) -> Result<f64> {
    if !weight.same_grid(spec) {
        return Err(Error::GridMismatch);
    }
    let dot: f64 = weight.values.iter().zip(&spec.values).map(|(a, b)| a * b).sum();
    Ok(dot * weight.cell_measure())
}

/// `h_k(t) = (2π)^{1/4} ψ_k(√(2π) t)`, with `ψ_k` the orthonormal Hermite
/// functions; `h₀` is the window `φ`.
pub fn hermite_function(k: usize, t: f64) -> f64 {
    let x = (2.0 * PI).sqrt() * t;
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for n in 0..k {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (2.0 * PI).powf(0.25) * cur
}

pub fn window(t: f64) -> f64 {
    hermite_function(0, t)
}

/// A signal sampled at `t_i = t0 + i·dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub t0: f64,
    pub dt: f64,
    pub samples: Vec<Complex64>,
}

pub const DEFAULT_DT: f64 = 1.0 / 64.0;
pub const DEFAULT_SUPPORT: (f64, f64) = (-8.0, 8.0);

impl Signal {
    pub fn from_fn<F: Fn(f64) -> Complex64>(support: (f64, f64), dt: f64, f: F) -> Result<Self> {
        let (lo, hi) = support;
        require(dt > 0.0 && dt.is_finite(), "dt", dt, "must be positive")?;
        require(hi > lo, "support end", hi, "must exceed the start")?;
        let n = ((hi - lo) / dt).round() as usize + 1;
        let samples = (0..n).map(|i| f(lo + i as f64 * dt)).collect();
        Ok(Self { t0: lo, dt, samples })
    }

    pub fn gaussian(support: (f64, f64), dt: f64) -> Result<Self> {
        Self::hermite(0, support, dt)
    }

    pub fn hermite(k: usize, support: (f64, f64), dt: f64) -> Result<Self> {
        Self::from_fn(support, dt, |t| Complex64::new(hermite_function(k, t), 0.0))
    }

    /// `Σ_{k ≤ k_max} c_k h_k` with seeded random complex coefficients,
    /// normalized so that `Σ |c_k|² = 1`.
    pub fn random_mixture(seed: u64, k_max: usize, support: (f64, f64), dt: f64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs: Vec<Complex64> = (0..=k_max)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in &mut coeffs {
            *c /= norm;
        }
        Self::from_fn(support, dt, |t| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * hermite_function(k, t))
                .sum()
        })
    }

    pub fn t_end(&self) -> f64 {
        self.t0 + (self.samples.len().max(1) - 1) as f64 * self.dt
    }

    /// `Σ |f|² dt`.
    pub fn norm_sqr(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * self.dt
    }
}

/// Beyond this distance the window is below `e^{−9π} ≈ 5·10⁻¹³`.
pub const WINDOW_REACH: f64 = 3.0;

/// `|V_φ f(x, ω)|²` on the grid `{−R, …, R}²`, by direct Riemann sums.
pub fn spectrogram(signal: &Signal, half_width: f64, step: f64) -> Result<SampledField> {
    let side = grid_side(half_width, step)?;
    let need = half_width + WINDOW_REACH;
    let slack = 0.5 * signal.dt;
    if signal.t0 > -need + slack || signal.t_end() < need - slack {
        return Err(Error::InsufficientSupport {
            have_lo: signal.t0,
            have_hi: signal.t_end(),
            need_lo: -need,
            need_hi: need,
        });
    }
    let n = signal.samples.len();
    let times: Vec<f64> = (0..n).map(|j| signal.t0 + j as f64 * signal.dt).collect();
    // e^{−2πiωt} for every frequency row and time sample
    let phases: Vec<Complex64> = (0..side)
        .flat_map(|m| {
            let omega = -half_width + m as f64 * step;
            times.iter().map(move |&t| Complex64::from_polar(1.0, -2.0 * PI * omega * t))
        })
        .collect();
    let reach = 2.0 * WINDOW_REACH;
    let rows: Vec<Vec<f64>> = (0..side)
        .into_par_iter()
        .map(|i| {
            let x = -half_width + i as f64 * step;
            let lo = (((x - reach - signal.t0) / signal.dt).floor().max(0.0)) as usize;
            let hi = ((((x + reach - signal.t0) / signal.dt).ceil()) as usize).min(n - 1);
            let windowed: Vec<Complex64> = (lo..=hi)
                .map(|j| signal.samples[j] * (window(times[j] - x) * signal.dt))
                .collect();
            (0..side)
                .map(|m| {
                    let row = &phases[m * n + lo..=m * n + hi];
                    let v: Complex64 = windowed.iter().zip(row).map(|(a, e)| a * e).sum();
                    v.norm_sqr()
                })
                .collect()
        })
        .collect();
    SampledField::new(half_width, step, rows.concat())
}

/// Two-sided estimate of a discrete `L^p + L^q` norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumNorm {
    pub lower: f64,
    pub upper: f64,
}

fn lp(values: &[f64], p: f64, cell: f64) -> f64 {
    (values.iter().map(|v| v.powf(p)).sum::<f64>() * cell).powf(1.0 / p)
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimization of `f` on `[a, b]` down to width `tol`.
fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Scan `f` on an even grid over `[a, b]`, then refine the best cell.
fn scan_then_refine<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, points: usize, tol: f64) -> (f64, f64) {
    let dx = (b - a) / (points - 1) as f64;
    let (mut best_i, mut best) = (0, f64::INFINITY);
    for i in 0..points {
        let v = f(a + i as f64 * dx);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let lo = a + best_i.saturating_sub(1) as f64 * dx;
    let hi = a + (best_i + 1).min(points - 1) as f64 * dx;
    let (x, v) = golden_min(&mut f, lo, hi, tol);
    if v < best {
        (x, v)
    } else {
        (a + best_i as f64 * dx, best)
    }
}

/// `y` with `y^α + b y^β = v`, warm-started at `x = ln y`. The left side is
/// convex in `ln y`, so plain Newton converges from any start.
fn kkt_level(v: f64, ln_b: f64, alpha: f64, beta: f64, mut x: f64) -> f64 {
    let ln_v = v.ln();
    for _ in 0..100 {
        let a = alpha * x;
        let b = ln_b + beta * x;
        let m = a.max(b);
        let (ea, eb) = ((a - m).exp(), (b - m).exp());
        let h = m + (ea + eb).ln() - ln_v;
        let dh = (alpha * ea + beta * eb) / (ea + eb);
        let step = h / dh;
        x -= step;
        if step.abs() <= 1e-14 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Optimal splits `F = f₁ + f₂` satisfy `f₁^{p−1} ∝ f₂^{q−1}` pointwise, so
/// they form the one-parameter family `f₁ = y^{1/(p−1)}`,
/// `f₂ = b·y^{1/(q−1)}`. Returns the split cost and the levels `ln y`.
struct KktFamily<'a> {
    sorted: &'a [f64],
    p: f64,
    q: f64,
    cell: f64,
    levels: Vec<f64>,
}

impl KktFamily<'_> {
    fn cost(&mut self, ln_b: f64) -> f64 {
        let (alpha, beta) = (1.0 / (self.p - 1.0), 1.0 / (self.q - 1.0));
        let mut x = (self.sorted[0].ln() - LN_2) / alpha;
        let (mut s1, mut s2) = (0.0, 0.0);
        for (i, &v) in self.sorted.iter().enumerate() {
            x = kkt_level(v, ln_b, alpha, beta, x);
            self.levels[i] = x;
            let f1 = (alpha * x).exp().min(v);
            let f2 = v - f1;
            s1 += f1.powf(self.p);
            s2 += f2.powf(self.q);
        }
        (s1 * self.cell).powf(1.0 / self.p) + (s2 * self.cell).powf(1.0 / self.q)
    }
}

/// Bracket for `‖F‖_{L^p + L^q} = inf { ‖f₁‖_p + ‖f₂‖_q : F = f₁ + f₂ }`.
///
/// `upper` is the cheapest split found among truncations `min(F, τ)` and the
/// pointwise-optimal family; `lower` is the best dual pairing
/// `⟨F, Φ⟩ / max(‖Φ‖_{p′}, ‖Φ‖_{q′})` over a candidate set that includes the
/// dual certificate of the best split. `extra` adds candidates on the same grid.
pub fn lp_lq_sum_norm_with(field: &SampledField, p: f64, q: f64, extra: &[&SampledField]) -> Result<SumNorm> {
    require(p > 1.0 && p.is_finite(), "p", p, "exponent must lie in (1, ∞)")?;
    require(q > 1.0 && q.is_finite(), "q", q, "exponent must lie in (1, ∞)")?;
    if field.values.is_empty() {
        return Err(Error::EmptyField);
    }
    if extra.iter().any(|e| !e.same_grid(field)) {
        return Err(Error::GridMismatch);
    }
    let (p, q) = if p <= q { (p, q) } else { (q, p) };
    let cell = field.cell_measure();
    let mut sorted: Vec<f64> = field.values.iter().copied().filter(|&v| v > 0.0).collect();
    if sorted.is_empty() {
        return Ok(SumNorm { lower: 0.0, upper: 0.0 });
    }
    if p == q {
        let n = lp(&sorted, p, cell);
        return Ok(SumNorm { lower: n, upper: n });
    }
    sorted.sort_by(f64::total_cmp);
    let v_max = sorted[sorted.len() - 1];

    let truncation = |tau: f64| {
        let (mut hi_p, mut hi_q, mut lo_p, mut lo_q) = (0.0, 0.0, 0.0, 0.0);
        for &v in &sorted {
            let top = (v - tau).max(0.0);
            let base = v.min(tau);
            hi_p += top.powf(p);
            hi_q += top.powf(q);
            lo_p += base.powf(p);
            lo_q += base.powf(q);
        }
        let r = |s: f64, e: f64| (s * cell).powf(1.0 / e);
        (r(hi_p, p) + r(lo_q, q)).min(r(hi_q, q) + r(lo_p, p))
    };
    let (_, trunc_cost) = scan_then_refine(truncation, 0.0, v_max, 65, 1e-8 * v_max);

    let (alpha, beta) = (1.0 / (p - 1.0), 1.0 / (q - 1.0));
    let mut family = KktFamily {
        sorted: &sorted,
        p,
        q,
        cell,
        levels: vec![0.0; sorted.len()],
    };
    // b at which the two parts of the peak value are equal
    let centre = (alpha - beta) * (0.5 * v_max).ln() / alpha;
    let (ln_b, kkt_cost) = scan_then_refine(|lb| family.cost(lb), centre - 40.0, centre + 40.0, 41, 1e-7);
    family.cost(ln_b);
    let upper = trunc_cost.min(kkt_cost);

    let (pc, qc) = (conjugate_exponent(p)?, conjugate_exponent(q)?);
    let ratio = |phi: &[f64], vals: &[f64]| {
        let dot: f64 = vals.iter().zip(phi).map(|(a, b)| a * b).sum::<f64>() * cell;
        let denom = lp(phi, pc, cell).max(lp(phi, qc, cell));
        if denom > 0.0 {
            dot / denom
        } else {
            0.0
        }
    };
    // the dual certificate of the best split is y itself
    let certificate: Vec<f64> = family.levels.iter().map(|x| x.exp()).collect();
    let mut lower = ratio(&certificate, &sorted);
    for a in [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0] {
        let phi: Vec<f64> = sorted.iter().map(|v| v.powf(a)).collect();
        lower = lower.max(ratio(&phi, &sorted));
    }
    for k in 0..=24 {
        let sigma = 10f64.powf(-1.0 + k as f64 / 12.0);
        let g = SampledField::from_fn(field.half_width, field.step, |x, y| (-PI * (x * x + y * y) / sigma).exp())?;
        lower = lower.max(ratio(&g.values, &field.values));
    }
    for e in extra {
        lower = lower.max(ratio(&e.values, &field.values));
    }
    Ok(SumNorm { lower, upper })
}

pub fn lp_lq_sum_norm(field: &SampledField, p: f64, q: f64) -> Result<SumNorm> {
    lp_lq_sum_norm_with(field, p, q, &[])
}

/// Phase-space grid used by the spectrogram experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub half_width: f64,
    pub step: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            half_width: 4.0,
            step: 1.0 / 16.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiebReport {
    pub p: f64,
    pub q: f64,
    pub p_conjugate: f64,
    pub q_conjugate: f64,
    /// Regime of the dual problem at `(p′, q′)` with unit budgets.
    pub regime: Regime,
    /// `C(p, q)`: the sharp bound at `(p′, q′, A = B = 1)`.
    pub constant: f64,
    pub norm_sqr: f64,
    /// `Σ S h² − ‖f‖₂²`.
    pub isometry_defect: f64,
    pub lower: f64,
    pub upper: f64,
    /// `upper − C‖f‖₂²`.
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// `C(p, q)`: operator-norm bound for weights in the unit ball of
/// `L^{p′} ∩ L^{q′}`, which by duality bounds `‖|V_φ f|²‖_{L^p + L^q} / ‖f‖₂²`.
pub fn spectrogram_constant(p: f64, q: f64) -> Result<(f64, Regime, RadialWeight)> {
    let params = ProblemParams::new(1, conjugate_exponent(p)?, conjugate_exponent(q)?, 1.0, 1.0)?;
    let opt = optimize(&params, 1e-10)?;
    Ok((opt.bound, opt.decision.regime, opt.weight))
}

/// Measures the spectrogram of `signal` in `L^p + L^q` and compares it with
/// `C(p, q)·‖f‖₂²`.
pub fn verify_lieb_extension(signal: &Signal, p: f64, q: f64, grid: Grid, tolerance: f64) -> Result<LiebReport> {
    let spec = spectrogram(signal, grid.half_width, grid.step)?;
    let (constant, regime, weight) = spectrogram_constant(p, q)?;
    // the extremal weight, centred on the spectrogram peak
    let peak = (0..spec.values.len())
        .max_by(|&a, &b| spec.values[a].total_cmp(&spec.values[b]))
        .unwrap_or(0);
    let centre = vec![spec.coordinate(peak / spec.side), spec.coordinate(peak % spec.side)];
    let candidate = SampledField::from_radial(&weight.with_center(centre)?, grid.half_width, grid.step)?;
    let norm = lp_lq_sum_norm_with(&spec, p, q, &[&candidate])?;
    let norm_sqr = signal.norm_sqr();
    let bound = constant * norm_sqr;
    let gap = norm.upper - bound;
    Ok(LiebReport {
        p,
        q,
        p_conjugate: conjugate_exponent(p)?,
        q_conjugate: conjugate_exponent(q)?,
        regime,
        constant,
        norm_sqr,
        isometry_defect: spec.integral() - norm_sqr,
        lower: norm.lower,
        upper: norm.upper,
        gap,
        tolerance,
        // both sides are rounded sums; they can cross by a few ulps at equality
        pass: gap <= tolerance && norm.lower <= norm.upper * (1.0 + 1e-12),
    })
}

#[cfg(test)]
#[allow(clippy::approx_constant, clippy::excessive_precision)]
mod tests {
    use super::*;

    fn default_spec(signal: &Signal) -> SampledField {
        let g = Grid::default();
        spectrogram(signal, g.half_width, g.step).unwrap()
    }

    #[test]
    fn hermite_functions_are_orthonormal() {
        let dt = 1.0 / 64.0;
        for j in 0..6 {
            for k in 0..6 {
                let ip: f64 = (-640..=640)
                    .map(|i| {
                        let t = i as f64 * dt;
                        hermite_function(j, t) * hermite_function(k, t)
                    })
                    .sum::<f64>()
                    * dt;
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-12, "{j},{k}: {ip}");
            }
        }
        assert!((window(0.0) - 2f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn window_spectrogram_is_gaussian() {
        let s = Signal::gaussian(DEFAULT_SUPPORT, DEFAULT_DT).unwrap();
        let spec = default_spec(&s);
        let mut worst: f64 = 0.0;
        for i in 0..spec.side {
            for j in 0..spec.side {
                let (x, w) = (spec.coordinate(i), spec.coordinate(j));
                worst = worst.max((spec.get(i, j) - (-PI * (x * x + w * w)).exp()).abs());
            }
        }
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn first_hermite_spectrogram() {
        let s = Signal::hermite(1, DEFAULT_SUPPORT, DEFAULT_DT).unwrap();
        let spec = default_spec(&s);
        let mut worst: f64 = 0.0;
        for i in 0..spec.side {
            for j in 0..spec.side {
                let r2 = PI * (spec.coordinate(i).powi(2) + spec.coordinate(j).powi(2));
                worst = worst.max((spec.get(i, j) - r2 * (-r2).exp()).abs());
            }
        }
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn zero_signal_and_narrow_support() {
        let zero = Signal::from_fn(DEFAULT_SUPPORT, DEFAULT_DT, |_| Complex64::new(0.0, 0.0)).unwrap();
        assert!(default_spec(&zero).values.iter().all(|&v| v == 0.0));
        let narrow = Signal::gaussian((-5.0, 5.0), DEFAULT_DT).unwrap();
        assert!(matches!(
            spectrogram(&narrow, 4.0, 1.0 / 16.0),
            Err(Error::InsufficientSupport { .. })
        ));
    }

    #[test]
    fn isometry_for_mixtures() {
        for seed in 0..3 {
            let s = Signal::random_mixture(seed, 5, DEFAULT_SUPPORT, DEFAULT_DT).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
            assert!((default_spec(&s).integral() - s.norm_sqr()).abs() < 1e-4);
        }
    }

    #[test]
    fn pairing_examples() {
        let g = SampledField::from_fn(4.0, 1.0 / 16.0, |x, y| (-PI * (x * x + y * y)).exp()).unwrap();
        assert!((pairing(&g, &g).unwrap() - 0.5).abs() < 2e-4);
        let zero = SampledField::from_fn(4.0, 1.0 / 16.0, |_, _| 0.0).unwrap();
        assert_eq!(pairing(&zero, &g).unwrap(), 0.0);
        let other = SampledField::from_fn(4.0, 1.0 / 8.0, |_, _| 1.0).unwrap();
        assert_eq!(pairing(&other, &g), Err(Error::GridMismatch));
    }

    #[test]
    fn sum_norm_examples() {
        // 256 cells of measure 1/256: an indicator of measure 1
        let ind = SampledField::from_fn(4.0, 1.0 / 16.0, |x, y| {
            if (0.0..1.0).contains(&x) && (0.0..1.0).contains(&y) {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        assert_eq!(ind.values.iter().filter(|&&v| v > 0.0).count(), 256);
        for (p, q) in [(1.5, 3.0), (2.0, 7.0), (4.0, 1.2)] {
            let n = lp_lq_sum_norm(&ind, p, q).unwrap();
            assert!((n.upper - 1.0).abs() < 1e-9 && (n.lower - 1.0).abs() < 1e-9, "{n:?}");
        }
        let g = SampledField::from_fn(4.0, 1.0 / 16.0, |x, y| (-PI * (x * x + y * y)).exp()).unwrap();
        let n = lp_lq_sum_norm(&g, 2.0, 2.0).unwrap();
        assert!((n.upper - 0.5f64.sqrt()).abs() < 1e-6);
        let zero = SampledField::from_fn(4.0, 1.0 / 16.0, |_, _| 0.0).unwrap();
        assert_eq!(lp_lq_sum_norm(&zero, 1.5, 3.0).unwrap(), SumNorm { lower: 0.0, upper: 0.0 });
    }

    #[test]
    fn duality_bracket_is_tight_for_smooth_fields() {
        let g = SampledField::from_fn(4.0, 1.0 / 16.0, |x, y| 3.0 * (-PI * (x * x + y * y) / 0.7).exp()).unwrap();
        for (p, q) in [(1.5, 3.0), (2.4, 1.8), (1.1, 9.0)] {
            let n = lp_lq_sum_norm(&g, p, q).unwrap();
            assert!(n.lower <= n.upper * (1.0 + 1e-12), "{n:?}");
            assert!(n.upper - n.lower < 1e-6 * n.upper, "{p} {q}: {n:?}");
        }
    }

    #[test]
    fn translation_shifts_the_grid() {
        let shift = 0.5;
        let s = Signal::gaussian(DEFAULT_SUPPORT, DEFAULT_DT).unwrap();
        let t = Signal::from_fn(DEFAULT_SUPPORT, DEFAULT_DT, |t| Complex64::new(window(t - shift), 0.0)).unwrap();
        let (a, b) = (default_spec(&s), default_spec(&t));
        let cells = (shift / a.step).round() as usize;
        let mut worst: f64 = 0.0;
        for i in 0..a.side - cells {
            for j in 0..a.side {
                worst = worst.max((a.get(i, j) - b.get(i + cells, j)).abs());
            }
        }
        assert!(worst < 1e-6, "{worst}");
    }
}
