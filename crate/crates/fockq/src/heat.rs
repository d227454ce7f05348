//! Heat transform against the Gaussian family μ_t and the oscillation
//! functionals built on it: mean oscillation, the BMO seminorm, ball
//! variance and the Hardy–Littlewood maximal function.
//!
//! The heat transform is f̃^(t)(w) = ∫ f(w−z) dμ_t(z) with
//! dμ_t = (4πt)^{−1} exp(−|z|²/4t) dv. In polar coordinates u = |z|²/(4t)
//! this is a Laguerre integral of the angular average, which drives the
//! quadrature layout: Gauss–Laguerre radially, trapezoid angularly.
//! Step-profile symbols bypass quadrature through closed forms.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{FockError, Result};
use crate::grid::disk_samples;
use crate::quad::QuadratureRule;
use crate::symbol::{step_profile, StepProfile, Symbol, SymbolNode};

/// Radial × angular quadrature pair, plus a Legendre rule for the smooth
/// segments between step-profile breakpoints.
#[derive(Clone, Debug)]
pub struct PolarRule {
    pub radial: QuadratureRule,
    pub angular: QuadratureRule,
    pub segment: QuadratureRule,
}

impl PolarRule {
    pub fn new(radial_order: usize, angular_order: usize) -> Result<Self> {
        Ok(PolarRule {
            radial: QuadratureRule::gauss_laguerre(radial_order)?,
            angular: QuadratureRule::angular(angular_order)?,
            segment: QuadratureRule::gauss_legendre(24)?,
        })
    }
}

impl Default for PolarRule {
    fn default() -> Self {
        PolarRule::new(64, 128).expect("default orders are valid")
    }
}

fn check_weight(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(FockError::InvalidParameter(format!(
            "weight parameter t must be positive and finite, got {t}"
        )));
    }
    Ok(())
}

/// ∫ g(w − z) dμ_t(z) by polar quadrature for an arbitrary integrand.
pub fn heat_quadrature_fn(
    g: &dyn Fn(Complex64) -> Result<Complex64>,
    t: f64,
    w: Complex64,
    rule: &PolarRule,
) -> Result<Complex64> {
    check_weight(t)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (&u, &wu) in rule.radial.nodes.iter().zip(&rule.radial.weights) {
        if wu == 0.0 {
            continue;
        }
        let r = 2.0 * (t * u).sqrt();
        let mut ring = Complex64::new(0.0, 0.0);
        for (&theta, &wa) in rule.angular.nodes.iter().zip(&rule.angular.weights) {
            ring += wa * g(w - Complex64::from_polar(r, theta))?;
        }
        acc += wu * ring;
    }
    Ok(acc)
}

/// Mass of μ_t beyond this value of u = |z|²/4t is below 2e-22.
const U_CUTOFF: f64 = 50.0;

/// Angular fraction of the circle {w + r·e^{iθ}} lying inside B(0, b),
/// for center distance d = |w|.
fn circle_fraction_inside(d: f64, r: f64, b: f64) -> f64 {
    if b <= 0.0 {
        return 0.0;
    }
    if r == 0.0 {
        return if d < b { 1.0 } else { 0.0 };
    }
    let c = (d * d + r * r - b * b) / (2.0 * d * r);
    c.clamp(-1.0, 1.0).acos() / std::f64::consts::PI
}

/// Angular average of the step profile over the circle of radius r about a
/// point at distance d from the origin.
fn step_ring_average(sp: &StepProfile, d: f64, r: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prev = 0.0;
    for (i, &b) in sp.breaks.iter().enumerate() {
        let frac = circle_fraction_inside(d, r, b);
        let piece = frac - prev;
        if i == 0 {
            acc += sp.at_zero * piece;
        } else {
            acc += sp.values[i - 1] * piece;
        }
        prev = frac;
    }
    if let Some(last) = sp.values.last() {
        acc += *last * (1.0 - prev);
    } else {
        acc = sp.at_zero;
    }
    acc
}

/// Heat transform of a step-profile symbol: exact exponential differences
/// when centered, and composite Legendre between the kink radii of the
/// exact angular coverage otherwise.
fn heat_step_profile(sp: &StepProfile, t: f64, w: Complex64, rule: &PolarRule) -> Complex64 {
    let d = w.norm();
    if d == 0.0 {
        // ∫ f dμ_t = at_zero (1 − e^{−u_0}) + Σ v_i (e^{−u_i} − e^{−u_{i+1}})
        let mut acc = Complex64::new(0.0, 0.0);
        let mut prev_mass = 0.0; // 1 − e^{−u} accumulated from the origin
        for (i, &b) in sp.breaks.iter().enumerate() {
            let u = b * b / (4.0 * t);
            let mass = 1.0 - (-u).exp();
            let piece = mass - prev_mass;
            if i == 0 {
                acc += sp.at_zero * piece;
            } else {
                acc += sp.values[i - 1] * piece;
            }
            prev_mass = mass;
        }
        if let Some(last) = sp.values.last() {
            acc += *last * (1.0 - prev_mass);
        } else {
            acc = sp.at_zero;
        }
        return acc;
    }
    // Kinks of the angular coverage sit where circles about w become tangent
    // to a break circle: radius |b ± d|, i.e. u = (b ± d)²/(4t).
    let mut cuts = vec![0.0, U_CUTOFF];
    for &b in &sp.breaks {
        for s in [(b - d).abs(), b + d] {
            let u = s * s / (4.0 * t);
            if u > 0.0 && u < U_CUTOFF {
                cuts.push(u);
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut acc = Complex64::new(0.0, 0.0);
    for seg in cuts.windows(2) {
        let (ua, ub) = (seg[0], seg[1]);
        let half = 0.5 * (ub - ua);
        let mid = 0.5 * (ub + ua);
        for (&x, &wx) in rule.segment.nodes.iter().zip(&rule.segment.weights) {
            let u = mid + half * x;
            let r = 2.0 * (t * u).sqrt();
            acc += (wx * half * (-u).exp()) * step_ring_average(sp, d, r);
        }
    }
    acc
}

/// Heat transform f̃^(t)(w) = ∫ f(w−z) dμ_t(z).
///
/// Structural reductions keep the computation exact where the tree allows:
/// sums split, dilations rescale the weight (f(s·)~^(t) = f̃^(ts²)(s·)),
/// translations shift the argument, and step profiles integrate in closed
/// form. Everything else falls back to polar quadrature.
pub fn heat_transform(f: &Symbol, t: f64, w: Complex64, rule: &PolarRule) -> Result<Complex64> {
    check_weight(t)?;
    match f.node() {
        SymbolNode::Constant(c) => Ok(*c),
        SymbolNode::CoordZ => Ok(w),
        SymbolNode::CoordZbar => Ok(w.conj()),
        SymbolNode::Sum(l, r) => Ok(heat_transform(l, t, w, rule)? + heat_transform(r, t, w, rule)?),
        SymbolNode::Conjugate(g) => Ok(heat_transform(g, t, w, rule)?.conj()),
        SymbolNode::Scaled(g, s) => heat_transform(g, t * s * s, w * *s, rule),
        SymbolNode::Translated(g, v) => heat_transform(g, t, v - w, rule),
        SymbolNode::Product(l, r) => {
            if let Some(c) = l.fold_constant() {
                return Ok(c * heat_transform(r, t, w, rule)?);
            }
            if let Some(c) = r.fold_constant() {
                return Ok(heat_transform(l, t, w, rule)? * c);
            }
            if let Some(sp) = step_profile(f) {
                return Ok(heat_step_profile(&sp, t, w, rule));
            }
            heat_fallback(f, t, w, rule)
        }
        SymbolNode::RadialPiecewise { .. } => {
            let sp = step_profile(f).expect("piecewise node has a step profile");
            Ok(heat_step_profile(&sp, t, w, rule))
        }
        _ => heat_fallback(f, t, w, rule),
    }
}

fn heat_fallback(f: &Symbol, t: f64, w: Complex64, rule: &PolarRule) -> Result<Complex64> {
    if w == Complex64::new(0.0, 0.0) && f.is_radial() {
        // f(−z) = f(z); the angular average is f itself.
        let mut acc = Complex64::new(0.0, 0.0);
        for (&u, &wu) in rule.radial.nodes.iter().zip(&rule.radial.weights) {
            if wu == 0.0 {
                continue;
            }
            acc += wu * f.eval(Complex64::new(2.0 * (t * u).sqrt(), 0.0))?;
        }
        return Ok(acc);
    }
    heat_quadrature_fn(&|z| f.eval(z), t, w, rule)
}

/// Heat transform recomputed with doubled quadrature orders; flags
/// non-convergence when the two results disagree beyond `tol`.
pub fn heat_transform_verified(
    f: &Symbol,
    t: f64,
    w: Complex64,
    rule: &PolarRule,
    tol: f64,
) -> Result<Complex64> {
    let coarse = heat_transform(f, t, w, rule)?;
    let fine_rule = PolarRule::new(2 * rule.radial.order, 2 * rule.angular.order)?;
    let fine = heat_transform(f, t, w, &fine_rule)?;
    if (coarse - fine).norm() > tol {
        return Err(FockError::NonConvergence {
            context: "heat transform order doubling",
            iterations: 2,
            last: fine.norm(),
            prev: coarse.norm(),
        });
    }
    Ok(fine)
}

/// Mean oscillation MO^t(f)(w) = (|f|²)~^(t)(w) − |f̃^(t)(w)|².
///
/// Both terms use the same rule; roundoff can drive the difference a hair
/// below zero, which is clipped at −1e-12 (it is a variance).
pub fn mean_oscillation(f: &Symbol, t: f64, w: Complex64, rule: &PolarRule) -> Result<f64> {
    let abs_sq = f.clone() * f.conj();
    let second = heat_transform(&abs_sq, t, w, rule)?;
    let first = heat_transform(f, t, w, rule)?;
    let mo = second.re - first.norm_sqr();
    let clip = 1e-12 * second.re.abs().max(1.0);
    if mo < -clip {
        return Err(FockError::Inconsistent(format!(
            "mean oscillation {mo:.3e} below the round-off clip at w = {w}"
        )));
    }
    Ok(mo.max(0.0))
}

/// Grid maximum of √MO^t(f): a certified lower bound of ‖f‖_{BMO*^t}.
pub fn bmo_seminorm(f: &Symbol, t: f64, grid: &[Complex64], rule: &PolarRule) -> Result<f64> {
    let mos = grid
        .par_iter()
        .map(|&w| mean_oscillation(f, t, w, rule))
        .collect::<Result<Vec<f64>>>()?;
    Ok(mos.into_iter().fold(0.0f64, f64::max).sqrt())
}

/// Heat-transform values over a grid.
#[derive(Clone, Debug)]
pub struct HeatField {
    pub t: f64,
    pub grid: Vec<Complex64>,
    pub values: Vec<Complex64>,
}

/// Evaluates the heat field and verifies the L^∞ contraction against the
/// symbol's certified bound when one exists.
pub fn heat_field(f: &Symbol, t: f64, grid: &[Complex64], rule: &PolarRule) -> Result<HeatField> {
    let values = grid
        .par_iter()
        .map(|&w| heat_transform(f, t, w, rule))
        .collect::<Result<Vec<Complex64>>>()?;
    if let Some(bound) = f.bound() {
        for (v, w) in values.iter().zip(grid) {
            if v.norm() > bound + 1e-8 {
                return Err(FockError::Inconsistent(format!(
                    "contraction violated: |f̃({w})| = {} > bound {bound}",
                    v.norm()
                )));
            }
        }
    }
    Ok(HeatField {
        t,
        grid: grid.to_vec(),
        values,
    })
}

/// Per-point heat and mean-oscillation data over a grid.
#[derive(Clone, Debug)]
pub struct OscillationReport {
    pub t: f64,
    pub grid: Vec<Complex64>,
    pub heat: Vec<Complex64>,
    pub mo: Vec<f64>,
    pub bmo_estimate: f64,
}

pub fn oscillation_report(
    f: &Symbol,
    t: f64,
    grid: &[Complex64],
    rule: &PolarRule,
) -> Result<OscillationReport> {
    let rows = grid
        .par_iter()
        .map(|&w| Ok((heat_transform(f, t, w, rule)?, mean_oscillation(f, t, w, rule)?)))
        .collect::<Result<Vec<(Complex64, f64)>>>()?;
    let (heat, mo): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let bmo_estimate = mo.iter().fold(0.0f64, |a, &m| a.max(m)).sqrt();
    Ok(OscillationReport {
        t,
        grid: grid.to_vec(),
        heat,
        mo,
        bmo_estimate,
    })
}

/// Left: heat transform at time s of the field z ↦ f̃^(t)(z) by nested
/// quadrature. Right: f̃^(s+t)(w) directly. The semigroup property makes
/// them equal.
pub fn heat_semigroup_check(
    f: &Symbol,
    s: f64,
    t: f64,
    w: Complex64,
    rule: &PolarRule,
) -> Result<(Complex64, Complex64)> {
    check_weight(s)?;
    let lhs = heat_quadrature_fn(&|z| heat_transform(f, t, z, rule), s, w, rule)?;
    let rhs = heat_transform(f, s + t, w, rule)?;
    Ok((lhs, rhs))
}

/// Variance of f over the disk B(center, radius) on a deterministic polar
/// grid, computed both as the mean of |f − f_E|² and through the symmetric
/// double integral; the two discrete forms must agree to rounding.
pub fn variance_on_ball(
    f: &Symbol,
    center: Complex64,
    radius: f64,
    samples: usize,
) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(FockError::InvalidParameter(
            "ball radius must be positive".into(),
        ));
    }
    let (pts, wts) = disk_samples(center, radius, samples);
    let vals = pts
        .iter()
        .map(|&z| f.eval(z))
        .collect::<Result<Vec<Complex64>>>()?;
    let mean: Complex64 = vals
        .iter()
        .zip(&wts)
        .map(|(v, &w)| v * w)
        .sum();
    let var_mean: f64 = vals
        .iter()
        .zip(&wts)
        .map(|(v, &w)| w * (v - mean).norm_sqr())
        .sum();
    // (1/2) Σ_ij w_i w_j |f_i − f_j|², folded over ordered pairs.
    let mut var_pairs = 0.0;
    for i in 0..vals.len() {
        for j in (i + 1)..vals.len() {
            var_pairs += wts[i] * wts[j] * (vals[i] - vals[j]).norm_sqr();
        }
    }
    let scale = var_mean.max(var_pairs).max(1e-30);
    if (var_mean - var_pairs).abs() > 1e-8 * scale {
        return Err(FockError::Inconsistent(format!(
            "ball variance mismatch: {var_mean} vs {var_pairs}"
        )));
    }
    Ok(var_mean)
}

/// Mean oscillation against its ball-variance floor
/// MO^t(f)(a) ≥ e^{−1/2}/16 · Var_{B(a,√t)}(f) in one complex variable.
pub fn mo_lower_bound_check(
    f: &Symbol,
    a: Complex64,
    t: f64,
    rule: &PolarRule,
    samples: usize,
) -> Result<(f64, f64)> {
    let mo = mean_oscillation(f, t, a, rule)?;
    let var = variance_on_ball(f, a, t.sqrt(), samples)?;
    let floor = (-0.5f64).exp() / 16.0 * var;
    Ok((mo, floor))
}

/// Hardy–Littlewood maximal function over a finite radius panel:
/// max_r of the disk average of |f(w−·)|. A lower bound of f*(w).
pub fn maximal_function(
    f: &Symbol,
    w: Complex64,
    radii: &[f64],
    samples: usize,
) -> Result<f64> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(FockError::InvalidParameter(
            "maximal function needs a nonempty list of positive radii".into(),
        ));
    }
    let mut best = 0.0f64;
    for &r in radii {
        let (pts, wts) = disk_samples(Complex64::new(0.0, 0.0), r, samples);
        let mut avg = 0.0;
        for (&z, &wt) in pts.iter().zip(&wts) {
            avg += wt * f.eval(w - z)?.norm();
        }
        best = best.max(avg);
    }
    Ok(best)
}

/// The dimension constant of the heat ↔ maximal-function domination in one
/// complex variable, Σ_{k=1}^{60} k·e^{−(k−1)}.
pub fn hardy_littlewood_constant() -> f64 {
    (1..=60).map(|k| k as f64 * (-(k as f64 - 1.0)).exp()).sum()
}
