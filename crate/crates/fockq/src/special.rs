//! Special functions needed by the Gaussian-measure integrals: log-gamma and
//! the regularized incomplete gamma pair.

/// Lanczos coefficients for g = 7, n = 9.
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (std::f64::consts::TAU).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// ln(k!).
pub fn ln_factorial(k: usize) -> f64 {
    ln_gamma(k as f64 + 1.0)
}

const MAX_ITER: usize = 500;
const EPS: f64 = 1e-15;

/// Regularized lower incomplete gamma P(a, x) = γ(a, x)/Γ(a), a > 0, x ≥ 0.
pub fn reg_lower_gamma(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    let log_prefactor = a * x.ln() - x - ln_gamma(a);
    if log_prefactor < -745.0 {
        // prefactor underflows; the mass sits entirely on one side
        return if x > a { 1.0 } else { 0.0 };
    }
    if x < a + 1.0 {
        series_p(a, x, log_prefactor.exp())
    } else {
        1.0 - cf_q(a, x, log_prefactor.exp())
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 − P(a, x).
pub fn reg_upper_gamma(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 1.0;
    }
    let log_prefactor = a * x.ln() - x - ln_gamma(a);
    if log_prefactor < -745.0 {
        return if x > a { 0.0 } else { 1.0 };
    }
    if x < a + 1.0 {
        1.0 - series_p(a, x, log_prefactor.exp())
    } else {
        cf_q(a, x, log_prefactor.exp())
    }
}

/// Series γ(a,x) = x^a e^{−x} Σ_n x^n Γ(a)/Γ(a+1+n); converges for x < a+1.
fn series_p(a: f64, x: f64, prefactor: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    for n in 1..MAX_ITER {
        term *= x / (a + n as f64);
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    (prefactor * sum).clamp(0.0, 1.0)
}

/// Continued fraction for Q(a,x) by the modified Lentz method; x ≥ a+1.
fn cf_q(a: f64, x: f64, prefactor: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (prefactor * h).clamp(0.0, 1.0)
}

/// Poisson tail Σ_{k ≥ n} e^{−λ} λ^k / k!, which equals P(n, λ).
pub fn poisson_tail_ge(n: usize, lambda: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    reg_lower_gamma(n as f64, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut lf = 0.0;
        for k in 1..=170usize {
            lf += (k as f64).ln();
            let lg = ln_gamma(k as f64 + 1.0);
            assert!((lg - lf).abs() <= 1e-11 * lf.max(1.0), "k = {k}");
        }
        // Γ(1/2) = √π
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
    }

    #[test]
    fn p_of_one_is_exponential() {
        for x in [0.0, 0.1, 1.0, 5.0, 40.0] {
            let p = reg_lower_gamma(1.0, x);
            assert!((p - (1.0 - (-x).exp())).abs() < 1e-14, "x = {x}");
        }
    }

    #[test]
    fn matches_poisson_partial_sums() {
        // Q(k+1, x) = e^{−x} Σ_{m ≤ k} x^m/m!
        for &(k, x) in &[(0usize, 0.5f64), (3, 2.0), (10, 10.0), (60, 40.0), (200, 180.0)] {
            let mut sum = 0.0;
            for m in 0..=k {
                sum += (-x + m as f64 * x.ln() - ln_factorial(m)).exp();
            }
            let q = reg_upper_gamma(k as f64 + 1.0, x);
            assert!((q - sum).abs() < 1e-12, "k = {k}, x = {x}: {q} vs {sum}");
        }
    }

    #[test]
    fn complementarity() {
        for &(a, x) in &[(0.5, 0.2), (2.0, 3.0), (100.0, 80.0), (512.0, 600.0)] {
            let p = reg_lower_gamma(a, x);
            let q = reg_upper_gamma(a, x);
            assert!((p + q - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn extreme_arguments_saturate() {
        assert_eq!(reg_lower_gamma(3.0, 1e12), 1.0);
        assert_eq!(reg_lower_gamma(500.0, 1e-4), 0.0);
        assert_eq!(reg_upper_gamma(3.0, 1e12), 0.0);
    }

    #[test]
    fn poisson_tail_sanity() {
        // λ = 1: P(X ≥ 2) = 1 − 2e^{−1}
        let tail = poisson_tail_ge(2, 1.0);
        let exact = 1.0 - 2.0 * (-1.0f64).exp();
        assert!((tail - exact).abs() < 1e-14);
    }
}
