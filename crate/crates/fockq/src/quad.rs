//! Quadrature rules for the Gaussian-measure integrals.
//!
//! The measure μ_t in polar coordinates reduces to the Laguerre weight e^{−u}
//! after u = |z|²/(4t), composed with an angular average over the circle, so
//! the two workhorse rules are Gauss–Laguerre and the equispaced (trapezoid)
//! angular rule. Gauss–Hermite and Gauss–Legendre are provided for oracle
//! integrals and for smooth segments between step-profile breakpoints.

use nalgebra::DMatrix;

use crate::error::{FockError, Result};
use crate::special::ln_factorial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleKind {
    /// Nodes/weights for ∫₀^∞ f(u) e^{−u} du.
    Laguerre,
    /// Nodes/weights for ∫_{−∞}^∞ f(x) e^{−x²} dx.
    Hermite,
    /// Nodes/weights for ∫_{−1}^1 f(x) dx.
    Legendre,
    /// Equispaced angles with weights 1/n: the average over the circle.
    Angular,
}

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Nodes and weights from the symmetric Jacobi matrix of the orthogonal
/// polynomial recurrence (Golub–Welsch). `mu0` is the total weight mass.
fn golub_welsch(diag: &[f64], offdiag: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jac[(i, i)] = diag[i];
    }
    for i in 0..n - 1 {
        jac[(i, i + 1)] = offdiag[i];
        jac[(i + 1, i)] = offdiag[i];
    }
    let eig = jac.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

/// Laguerre values (L_n(x), L_{n−1}(x)) by the three-term recurrence, with a
/// common rescale factor tracked as a count of 1e±150 shifts so that large
/// orders do not overflow. Returns (l_n, l_nm1, shift_count).
fn laguerre_pair(n: usize, x: f64) -> (f64, f64, i32) {
    if n == 0 {
        return (1.0, 0.0, 0);
    }
    let mut lkm1 = 1.0f64;
    let mut lk = 1.0 - x;
    let mut shifts = 0i32;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * lk - kf * lkm1) / (kf + 1.0);
        lkm1 = lk;
        lk = next;
        let mag = lk.abs().max(lkm1.abs());
        if mag > 1e150 {
            lk *= 1e-150;
            lkm1 *= 1e-150;
            shifts += 1;
        } else if mag < 1e-150 && mag > 0.0 {
            lk *= 1e150;
            lkm1 *= 1e150;
            shifts -= 1;
        }
    }
    (lk, lkm1, shifts)
}

impl QuadratureRule {
    /// Gauss–Laguerre for weight e^{−u} on [0, ∞). Nodes start from the
    /// Jacobi-matrix eigenvalues and are polished by Newton steps on the
    /// Laguerre recurrence; weights come from the derivative formula
    /// w_i = x_i / ((n+1)² L_{n+1}(x_i)²). Validated against the factorial
    /// moments ∫ u^k e^{−u} du = k!.
    pub fn gauss_laguerre(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(FockError::InvalidParameter("quadrature order 0".into()));
        }
        let diag: Vec<f64> = (0..order).map(|k| 2.0 * k as f64 + 1.0).collect();
        let offdiag: Vec<f64> = (1..order).map(|k| k as f64).collect();
        let (mut nodes, _) = golub_welsch(&diag, &offdiag, 1.0);
        let nf = order as f64;
        let mut weights = vec![0.0f64; order];
        for (x, w) in nodes.iter_mut().zip(weights.iter_mut()) {
            for _ in 0..4 {
                let (ln, lnm1, _) = laguerre_pair(order, *x);
                // x L_n'(x) = n (L_n(x) − L_{n−1}(x))
                let deriv = nf * (ln - lnm1) / *x;
                let step = ln / deriv;
                *x -= step;
                if step.abs() <= 1e-16 * x.abs() {
                    break;
                }
            }
            let (lnp1, _, shifts) = laguerre_pair(order + 1, *x);
            let ln_w = x.ln()
                - 2.0 * (nf + 1.0).ln()
                - 2.0 * (lnp1.abs().ln() + shifts as f64 * 150.0 * std::f64::consts::LN_10);
            *w = ln_w.exp();
        }
        // The weight mass is exactly 1 (μ_t is a probability measure); pin it.
        let mut mass = 0.0f64;
        let mut comp = 0.0f64;
        for &w in &weights {
            let y = w - comp;
            let s = mass + y;
            comp = (s - mass) - y;
            mass = s;
        }
        for w in &mut weights {
            *w /= mass;
        }
        let rule = QuadratureRule {
            kind: RuleKind::Laguerre,
            order,
            nodes,
            weights,
        };
        rule.validate()?;
        Ok(rule)
    }

    /// Gauss–Hermite for weight e^{−x²} on ℝ.
    pub fn gauss_hermite(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(FockError::InvalidParameter("quadrature order 0".into()));
        }
        let diag = vec![0.0; order];
        let offdiag: Vec<f64> = (1..order).map(|k| (k as f64 / 2.0).sqrt()).collect();
        let (nodes, weights) = golub_welsch(&diag, &offdiag, std::f64::consts::PI.sqrt());
        let rule = QuadratureRule {
            kind: RuleKind::Hermite,
            order,
            nodes,
            weights,
        };
        rule.validate()?;
        Ok(rule)
    }

    /// Gauss–Legendre on [−1, 1].
    pub fn gauss_legendre(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(FockError::InvalidParameter("quadrature order 0".into()));
        }
        let diag = vec![0.0; order];
        let offdiag: Vec<f64> = (1..order)
            .map(|k| {
                let k = k as f64;
                k / (4.0 * k * k - 1.0).sqrt()
            })
            .collect();
        let (nodes, weights) = golub_welsch(&diag, &offdiag, 2.0);
        let rule = QuadratureRule {
            kind: RuleKind::Legendre,
            order,
            nodes,
            weights,
        };
        rule.validate()?;
        Ok(rule)
    }

    /// Equispaced angles θ_j = 2πj/n with weights 1/n. Averages
    /// trigonometric polynomials of degree < n exactly.
    pub fn angular(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(FockError::InvalidParameter("quadrature order 0".into()));
        }
        let nodes = (0..order)
            .map(|j| std::f64::consts::TAU * j as f64 / order as f64)
            .collect();
        let weights = vec![1.0 / order as f64; order];
        Ok(QuadratureRule {
            kind: RuleKind::Angular,
            order,
            nodes,
            weights,
        })
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    fn validate(&self) -> Result<()> {
        if self.weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(FockError::QuadratureValidation(format!(
                "{:?} order {}: nonpositive weight",
                self.kind, self.order
            )));
        }
        match self.kind {
            RuleKind::Laguerre => {
                let kmax = (2 * self.order - 1).min(20);
                for k in 0..=kmax {
                    let got = self.integrate(|u| u.powi(k as i32));
                    let exact = ln_factorial(k).exp();
                    if (got - exact).abs() > 1e-12 * exact {
                        return Err(FockError::QuadratureValidation(format!(
                            "Laguerre order {}: moment {k} = {got} vs {exact}",
                            self.order
                        )));
                    }
                }
            }
            RuleKind::Hermite => {
                // ∫ x^{2k} e^{−x²} dx = √π (2k)! / (k! 4^k)
                let kmax = ((2 * self.order - 1) / 2).min(10);
                for k in 0..=kmax {
                    let got = self.integrate(|x| x.powi(2 * k as i32));
                    let exact = std::f64::consts::PI.sqrt()
                        * (ln_factorial(2 * k) - ln_factorial(k) - (k as f64) * 4.0f64.ln()).exp();
                    if (got - exact).abs() > 1e-12 * exact.max(1.0) {
                        return Err(FockError::QuadratureValidation(format!(
                            "Hermite order {}: moment {} = {got} vs {exact}",
                            self.order,
                            2 * k
                        )));
                    }
                }
            }
            RuleKind::Legendre => {
                let kmax = (2 * self.order - 1).min(16);
                for k in (0..=kmax).step_by(2) {
                    let got = self.integrate(|x| x.powi(k as i32));
                    let exact = 2.0 / (k as f64 + 1.0);
                    if (got - exact).abs() > 1e-13 * exact.max(1.0) {
                        return Err(FockError::QuadratureValidation(format!(
                            "Legendre order {}: moment {k} = {got} vs {exact}",
                            self.order
                        )));
                    }
                }
            }
            RuleKind::Angular => {}
        }
        Ok(())
    }
}
