//! Small special-function kernels shared by the bound, solver and oracle code.

/// `ln(n!)` by direct accumulation; exact enough for the `n` used here (≤ a few hundred).
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| f64::from(k).ln()).sum()
}

pub fn factorial(n: u32) -> f64 {
    (2..=n).map(f64::from).product()
}

/// Regularized lower incomplete gamma `P(n, w)` for a positive integer order `n`.
///
/// Uses the power series below `w < n + 1` and the finite complement
/// `1 - e^{-w} Σ_{k<n} w^k/k!` above it, so neither branch cancels badly.
pub fn lower_gamma_regularized_int(n: u32, w: f64) -> f64 {
    debug_assert!(n >= 1);
    if w <= 0.0 {
        return 0.0;
    }
    if w.is_infinite() {
        return 1.0;
    }
    let nf = f64::from(n);
    if w < nf + 1.0 {
        // e^{-w} w^n / n! · Σ_{j≥0} w^j / ((n+1)…(n+j))
        let log_prefactor = -w + nf * w.ln() - ln_factorial(n);
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut j = 1.0;
        while term > sum * 1e-17 {
            term *= w / (nf + j);
            sum += term;
            j += 1.0;
        }
        (log_prefactor.exp() * sum).min(1.0)
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..n {
            term *= w / f64::from(k);
            sum += term;
        }
        1.0 - (-w).exp() * sum
    }
}
