#![allow(dead_code)]

use rand::Rng;
use tfloc::weight::RadialWeight;

/// Smooth nonincreasing profile `Σ a_i e^{−π r²/σ_i}`, finely tabulated.
pub fn random_monotone_weight<R: Rng>(rng: &mut R) -> RadialWeight {
    let terms: Vec<(f64, f64)> = (0..rng.random_range(1..=4))
        .map(|_| (rng.random_range(0.05..2.0), rng.random_range(0.1..3.0)))
        .collect();
    let n = 600;
    let r_max = 6.0;
    let r: Vec<f64> = (0..n).map(|i| r_max * i as f64 / (n - 1) as f64).collect();
    let f = r
        .iter()
        .map(|&ri| {
            terms
                .iter()
                .map(|(a, s)| a * (-std::f64::consts::PI * ri * ri / s).exp())
                .sum()
        })
        .collect();
    RadialWeight::tabulated(r, f, None, 1).unwrap()
}

/// A ring-shaped profile peaking away from the origin.
pub fn random_ring_weight<R: Rng>(rng: &mut R) -> RadialWeight {
    let centre = rng.random_range(0.5..1.5);
    let width = rng.random_range(0.2..0.6);
    let height = rng.random_range(0.5..2.0);
    let n = 600;
    let r: Vec<f64> = (0..n).map(|i| 6.0 * i as f64 / (n - 1) as f64).collect();
    let f = r
        .iter()
        .map(|&ri| height * (-((ri - centre) / width).powi(2)).exp())
        .collect();
    RadialWeight::tabulated(r, f, None, 1).unwrap()
}

pub fn scaled(w: &RadialWeight, c: f64) -> RadialWeight {
    match &w.profile {
        tfloc::Profile::Tabulated(t) => {
            RadialWeight::tabulated(t.r.clone(), t.f.iter().map(|v| v * c).collect(), None, w.dim).unwrap()
        }
        _ => panic!("only tables are rescaled here"),
    }
}

/// `G` by composite Simpson after the graded substitution `τ = s·x^d`,
/// which leaves the smooth integrand `s d x^{d−1} e^{−(d!s)^{1/d} x}` on `[0, 1]`.
pub fn g_riemann(s: f64, d: u32) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let df = f64::from(d);
    let fact: f64 = (1..=d).map(f64::from).product();
    let w = (fact * s).powf(1.0 / df);
    let f = |x: f64| s * df * x.powi(d as i32 - 1) * (-w * x).exp();
    let n = 20_000;
    let h = 1.0 / n as f64;
    let mut sum = f(0.0) + f(1.0);
    for i in 1..n {
        sum += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}
