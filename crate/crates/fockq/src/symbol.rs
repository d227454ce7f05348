//! Symbol algebra: functions on the complex plane with structural metadata.
//!
//! A [`Symbol`] is an immutable expression tree describing f: ℂ → ℂ. The tree
//! keeps enough structure to decide radiality and boundedness exactly and to
//! route integrals through exact paths (piecewise-constant radial profiles,
//! quadratic phases, plane waves) where those exist.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{FockError, Result};

/// Evaluation handle for a sampled radial profile g(|z|).
pub type RadialFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub enum SymbolNode {
    /// The constant function c.
    Constant(Complex64),
    /// The coordinate function z.
    CoordZ,
    /// The conjugate coordinate z̄.
    CoordZbar,
    /// Piecewise-constant radial step function. `values[i]` holds on
    /// [breaks[i], breaks[i+1]) with the last value extending to infinity;
    /// `at_zero` holds on [0, breaks[0]). Intervals are closed on the left.
    RadialPiecewise {
        breaks: Vec<f64>,
        values: Vec<Complex64>,
        at_zero: Complex64,
    },
    /// exp(i·alpha·|z|²).
    QuadraticPhase(f64),
    /// exp(i·Re(z·conj(xi))).
    PlaneWave(Complex64),
    /// g(|z|) for an arbitrary sampled profile; `bound` is a sup-norm bound
    /// (infinite when none is known).
    RadialSampled { profile: RadialFn, bound: f64 },
    Sum(Symbol, Symbol),
    Product(Symbol, Symbol),
    Conjugate(Symbol),
    /// z ↦ f(factor·z) with factor > 0.
    Scaled(Symbol, f64),
    /// z ↦ f(w − z), the translation f∘τ_w.
    Translated(Symbol, Complex64),
}

/// Immutable symbol; cheap to clone and safe to share across workers.
#[derive(Clone)]
pub struct Symbol(Arc<SymbolNode>);

impl Symbol {
    pub fn node(&self) -> &SymbolNode {
        &self.0
    }

    pub fn constant(c: impl Into<Complex64>) -> Self {
        Symbol(Arc::new(SymbolNode::Constant(c.into())))
    }

    pub fn coord_z() -> Self {
        Symbol(Arc::new(SymbolNode::CoordZ))
    }

    pub fn coord_zbar() -> Self {
        Symbol(Arc::new(SymbolNode::CoordZbar))
    }

    /// Re z as a symbol, (z + z̄)/2.
    pub fn re_z() -> Self {
        Symbol::constant(0.5) * (Symbol::coord_z() + Symbol::coord_zbar())
    }

    /// |z|² as a symbol, z̄·z.
    pub fn abs_squared() -> Self {
        Symbol::coord_zbar() * Symbol::coord_z()
    }

    pub fn quadratic_phase(alpha: f64) -> Self {
        Symbol(Arc::new(SymbolNode::QuadraticPhase(alpha)))
    }

    pub fn plane_wave(xi: impl Into<Complex64>) -> Self {
        Symbol(Arc::new(SymbolNode::PlaneWave(xi.into())))
    }

    pub fn radial_piecewise(
        breaks: Vec<f64>,
        values: Vec<Complex64>,
        at_zero: Complex64,
    ) -> Result<Self> {
        if breaks.len() != values.len() {
            return Err(FockError::InvalidParameter(format!(
                "radial_piecewise: {} breaks but {} values",
                breaks.len(),
                values.len()
            )));
        }
        if breaks.iter().any(|b| !b.is_finite() || *b <= 0.0) {
            return Err(FockError::InvalidParameter(
                "radial_piecewise: breaks must be finite and positive".into(),
            ));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FockError::InvalidParameter(
                "radial_piecewise: breaks must be strictly increasing".into(),
            ));
        }
        Ok(Symbol(Arc::new(SymbolNode::RadialPiecewise {
            breaks,
            values,
            at_zero,
        })))
    }

    pub fn radial_sampled(
        profile: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        bound: f64,
    ) -> Self {
        Symbol(Arc::new(SymbolNode::RadialSampled {
            profile: Arc::new(profile),
            bound,
        }))
    }

    /// The dyadic ±1 step symbol: +1 on shells 2^j ≤ |z| < 2^{j+1} with j
    /// even, −1 with j odd, 0 at the origin. Shells are materialized for
    /// j ∈ [−j_max, j_max]; the outermost values extend beyond that range.
    /// It satisfies f(z/2) = −f(z) on the covered shells.
    pub fn radial_dyadic(j_max: u32) -> Self {
        let j_max = j_max as i32;
        let mut breaks = Vec::with_capacity((2 * j_max + 1) as usize);
        let mut values = Vec::with_capacity((2 * j_max + 1) as usize);
        for j in -j_max..=j_max {
            breaks.push((j as f64).exp2());
            let v = if j.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            values.push(Complex64::new(v, 0.0));
        }
        Symbol(Arc::new(SymbolNode::RadialPiecewise {
            breaks,
            values,
            at_zero: Complex64::new(0.0, 0.0),
        }))
    }

    /// Indicator of the open disk B(0, radius).
    pub fn indicator_disk(radius: f64) -> Result<Self> {
        Symbol::radial_piecewise(
            vec![radius],
            vec![Complex64::new(0.0, 0.0)],
            Complex64::new(1.0, 0.0),
        )
    }

    pub fn conj(&self) -> Self {
        Symbol(Arc::new(SymbolNode::Conjugate(self.clone())))
    }

    /// z ↦ f(w − z).
    pub fn translate(&self, w: impl Into<Complex64>) -> Self {
        Symbol(Arc::new(SymbolNode::Translated(self.clone(), w.into())))
    }

    /// z ↦ f(s·z) for s > 0. Rewrites the tree so that primitive leaves
    /// absorb the dilation exactly: phases map to phases, plane waves to
    /// plane waves and step profiles to step profiles with rescaled breaks.
    pub fn scale(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(FockError::InvalidParameter(format!(
                "scale factor must be positive and finite, got {s}"
            )));
        }
        Ok(self.scale_unchecked(s))
    }

    fn scale_unchecked(&self, s: f64) -> Self {
        match self.node() {
            SymbolNode::Constant(_) => self.clone(),
            SymbolNode::CoordZ => Symbol::constant(s) * Symbol::coord_z(),
            SymbolNode::CoordZbar => Symbol::constant(s) * Symbol::coord_zbar(),
            SymbolNode::RadialPiecewise {
                breaks,
                values,
                at_zero,
            } => {
                // f(s·z) jumps where s|z| = b, i.e. at |z| = b/s.
                let breaks = breaks.iter().map(|b| b / s).collect();
                Symbol(Arc::new(SymbolNode::RadialPiecewise {
                    breaks,
                    values: values.clone(),
                    at_zero: *at_zero,
                }))
            }
            SymbolNode::QuadraticPhase(alpha) => Symbol::quadratic_phase(alpha * s * s),
            SymbolNode::PlaneWave(xi) => Symbol::plane_wave(xi * s),
            SymbolNode::RadialSampled { profile, bound } => {
                let inner = profile.clone();
                let bound = *bound;
                Symbol(Arc::new(SymbolNode::RadialSampled {
                    profile: Arc::new(move |r| inner(s * r)),
                    bound,
                }))
            }
            SymbolNode::Sum(l, r) => l.scale_unchecked(s) + r.scale_unchecked(s),
            SymbolNode::Product(l, r) => l.scale_unchecked(s) * r.scale_unchecked(s),
            SymbolNode::Conjugate(f) => f.scale_unchecked(s).conj(),
            SymbolNode::Scaled(f, factor) => f.scale_unchecked(s * factor),
            SymbolNode::Translated(f, w) => f.scale_unchecked(s).translate(w / s),
        }
    }

    /// Raw dilation node; [`Symbol::scale`] is usually preferable.
    pub fn scaled_node(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(FockError::InvalidParameter(format!(
                "scale factor must be positive and finite, got {factor}"
            )));
        }
        Ok(Symbol(Arc::new(SymbolNode::Scaled(self.clone(), factor))))
    }

    /// Pointwise evaluation by structural recursion.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self.node() {
            SymbolNode::Constant(c) => Ok(*c),
            SymbolNode::CoordZ => Ok(z),
            SymbolNode::CoordZbar => Ok(z.conj()),
            SymbolNode::RadialPiecewise {
                breaks,
                values,
                at_zero,
            } => {
                let r = z.norm();
                if breaks.is_empty() || r < breaks[0] {
                    return Ok(*at_zero);
                }
                // First break strictly above r; r == break lands in the
                // right-closed shell [b_i, b_{i+1}).
                let idx = breaks.partition_point(|b| *b <= r);
                Ok(values[idx - 1])
            }
            SymbolNode::QuadraticPhase(alpha) => {
                Ok(Complex64::from_polar(1.0, alpha * z.norm_sqr()))
            }
            SymbolNode::PlaneWave(xi) => Ok(Complex64::from_polar(1.0, (z * xi.conj()).re)),
            SymbolNode::RadialSampled { profile, .. } => {
                let v = profile(z.norm());
                if v.re.is_finite() && v.im.is_finite() {
                    Ok(v)
                } else {
                    Err(FockError::NonFiniteEval { at: z })
                }
            }
            SymbolNode::Sum(l, r) => Ok(l.eval(z)? + r.eval(z)?),
            SymbolNode::Product(l, r) => Ok(l.eval(z)? * r.eval(z)?),
            SymbolNode::Conjugate(f) => Ok(f.eval(z)?.conj()),
            SymbolNode::Scaled(f, factor) => f.eval(z * *factor),
            SymbolNode::Translated(f, w) => f.eval(w - z),
        }
    }

    /// True exactly when the tree contains no coordinate, plane-wave or
    /// (nontrivially) translated node, so f(z) depends on |z| only.
    pub fn is_radial(&self) -> bool {
        match self.node() {
            SymbolNode::Constant(_)
            | SymbolNode::RadialPiecewise { .. }
            | SymbolNode::QuadraticPhase(_)
            | SymbolNode::RadialSampled { .. } => true,
            SymbolNode::CoordZ | SymbolNode::CoordZbar | SymbolNode::PlaneWave(_) => false,
            SymbolNode::Sum(l, r) | SymbolNode::Product(l, r) => l.is_radial() && r.is_radial(),
            SymbolNode::Conjugate(f) | SymbolNode::Scaled(f, _) => f.is_radial(),
            SymbolNode::Translated(f, w) => *w == Complex64::new(0.0, 0.0) && f.is_radial(),
        }
    }

    /// Sound sup-norm over-approximation: when `Some(b)` is returned,
    /// |f(z)| ≤ b everywhere.
    pub fn bound(&self) -> Option<f64> {
        match self.node() {
            SymbolNode::Constant(c) => Some(c.norm()),
            SymbolNode::CoordZ | SymbolNode::CoordZbar => None,
            SymbolNode::RadialPiecewise {
                values, at_zero, ..
            } => Some(
                values
                    .iter()
                    .map(|v| v.norm())
                    .fold(at_zero.norm(), f64::max),
            ),
            SymbolNode::QuadraticPhase(_) | SymbolNode::PlaneWave(_) => Some(1.0),
            SymbolNode::RadialSampled { bound, .. } => bound.is_finite().then_some(*bound),
            SymbolNode::Sum(l, r) => Some(l.bound()? + r.bound()?),
            SymbolNode::Product(l, r) => Some(l.bound()? * r.bound()?),
            SymbolNode::Conjugate(f)
            | SymbolNode::Scaled(f, _)
            | SymbolNode::Translated(f, _) => f.bound(),
        }
    }

    /// True when the tree provably takes real values only.
    pub(crate) fn is_real_valued(&self) -> bool {
        match self.node() {
            SymbolNode::Constant(c) => c.im == 0.0,
            SymbolNode::RadialPiecewise {
                values, at_zero, ..
            } => at_zero.im == 0.0 && values.iter().all(|v| v.im == 0.0),
            SymbolNode::Sum(l, r) | SymbolNode::Product(l, r) => {
                l.is_real_valued() && r.is_real_valued()
            }
            SymbolNode::Conjugate(f)
            | SymbolNode::Scaled(f, _)
            | SymbolNode::Translated(f, _) => f.is_real_valued(),
            _ => false,
        }
    }

    /// Folds a tree of constants to its value.
    pub fn fold_constant(&self) -> Option<Complex64> {
        match self.node() {
            SymbolNode::Constant(c) => Some(*c),
            SymbolNode::Sum(l, r) => Some(l.fold_constant()? + r.fold_constant()?),
            SymbolNode::Product(l, r) => Some(l.fold_constant()? * r.fold_constant()?),
            SymbolNode::Conjugate(f) => Some(f.fold_constant()?.conj()),
            SymbolNode::Scaled(f, _) | SymbolNode::Translated(f, _) => f.fold_constant(),
            _ => None,
        }
    }

    /// Largest |f(z) − f(w)| over a deterministic polar grid of about
    /// `samples` points w in the open disk of the given radius around z.
    /// A lower bound of the oscillation sup, converging from below.
    pub fn oscillation_at(&self, z: Complex64, radius: f64, samples: usize) -> Result<f64> {
        if !(radius > 0.0) {
            return Err(FockError::InvalidParameter(
                "oscillation radius must be positive".into(),
            ));
        }
        let nr = (samples as f64).sqrt().floor().max(1.0) as usize;
        let na = samples.div_ceil(nr).max(1);
        let fz = self.eval(z)?;
        let mut sup = 0.0f64;
        for i in 0..nr {
            let r = radius * (i as f64 + 0.5) / nr as f64;
            for j in 0..na {
                let theta = std::f64::consts::TAU * j as f64 / na as f64;
                let w = z + Complex64::from_polar(r, theta);
                sup = sup.max((fz - self.eval(w)?).norm());
            }
        }
        Ok(sup)
    }

    /// Max of |f| over the grid; exact (grid-independent) for constants,
    /// unimodular phases/waves and radial step functions.
    pub fn sup_norm_estimate(&self, grid: &[Complex64]) -> Result<f64> {
        match self.node() {
            SymbolNode::Constant(c) => Ok(c.norm()),
            SymbolNode::QuadraticPhase(_) | SymbolNode::PlaneWave(_) => Ok(1.0),
            SymbolNode::RadialPiecewise { .. } => Ok(self.bound().unwrap()),
            SymbolNode::Conjugate(f) | SymbolNode::Scaled(f, _) => f.sup_norm_estimate(grid),
            _ => {
                let mut sup = 0.0f64;
                for &z in grid {
                    sup = sup.max(self.eval(z)?.norm());
                }
                Ok(sup)
            }
        }
    }
}

impl std::ops::Add for Symbol {
    type Output = Symbol;
    fn add(self, rhs: Symbol) -> Symbol {
        Symbol(Arc::new(SymbolNode::Sum(self, rhs)))
    }
}

impl std::ops::Mul for Symbol {
    type Output = Symbol;
    fn mul(self, rhs: Symbol) -> Symbol {
        Symbol(Arc::new(SymbolNode::Product(self, rhs)))
    }
}

impl std::ops::Neg for Symbol {
    type Output = Symbol;
    fn neg(self) -> Symbol {
        Symbol::constant(-1.0) * self
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        match (self.node(), other.node()) {
            (SymbolNode::Constant(a), SymbolNode::Constant(b)) => a == b,
            (SymbolNode::CoordZ, SymbolNode::CoordZ) => true,
            (SymbolNode::CoordZbar, SymbolNode::CoordZbar) => true,
            (
                SymbolNode::RadialPiecewise {
                    breaks: b1,
                    values: v1,
                    at_zero: z1,
                },
                SymbolNode::RadialPiecewise {
                    breaks: b2,
                    values: v2,
                    at_zero: z2,
                },
            ) => b1 == b2 && v1 == v2 && z1 == z2,
            (SymbolNode::QuadraticPhase(a), SymbolNode::QuadraticPhase(b)) => a == b,
            (SymbolNode::PlaneWave(a), SymbolNode::PlaneWave(b)) => a == b,
            (
                SymbolNode::RadialSampled { profile: p1, .. },
                SymbolNode::RadialSampled { profile: p2, .. },
            ) => Arc::ptr_eq(p1, p2),
            (SymbolNode::Sum(a1, a2), SymbolNode::Sum(b1, b2))
            | (SymbolNode::Product(a1, a2), SymbolNode::Product(b1, b2)) => a1 == b1 && a2 == b2,
            (SymbolNode::Conjugate(a), SymbolNode::Conjugate(b)) => a == b,
            (SymbolNode::Scaled(a, s1), SymbolNode::Scaled(b, s2)) => s1 == s2 && a == b,
            (SymbolNode::Translated(a, w1), SymbolNode::Translated(b, w2)) => w1 == w2 && a == b,
            _ => false,
        }
    }
}

/// Piecewise-constant radial profile extracted from a symbol tree; closed
/// under sums, products, conjugation and dilation, which keeps Gaussian
/// integrals of such symbols exactly computable.
#[derive(Clone, Debug)]
pub(crate) struct StepProfile {
    /// Strictly increasing positive radii.
    pub breaks: Vec<f64>,
    /// values[i] on [breaks[i], breaks[i+1]), last extends to infinity.
    pub values: Vec<Complex64>,
    /// Value on [0, breaks[0]).
    pub at_zero: Complex64,
}

impl StepProfile {
    pub fn value_at(&self, r: f64) -> Complex64 {
        if self.breaks.is_empty() || r < self.breaks[0] {
            return self.at_zero;
        }
        let idx = self.breaks.partition_point(|b| *b <= r);
        self.values[idx - 1]
    }

    fn combine(l: &StepProfile, r: &StepProfile, op: impl Fn(Complex64, Complex64) -> Complex64) -> StepProfile {
        let mut breaks: Vec<f64> = l.breaks.iter().chain(r.breaks.iter()).copied().collect();
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup();
        let values = breaks
            .iter()
            .map(|&b| op(l.value_at(b), r.value_at(b)))
            .collect();
        StepProfile {
            breaks,
            values,
            at_zero: op(l.at_zero, r.at_zero),
        }
    }

    fn map(&self, op: impl Fn(Complex64) -> Complex64) -> StepProfile {
        StepProfile {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|v| op(*v)).collect(),
            at_zero: op(self.at_zero),
        }
    }

    /// Profile of z ↦ f(s·z): jumps move to b/s.
    fn scale_arg(&self, s: f64) -> StepProfile {
        StepProfile {
            breaks: self.breaks.iter().map(|b| b / s).collect(),
            values: self.values.clone(),
            at_zero: self.at_zero,
        }
    }
}

/// Extracts a step profile when the tree is built from constants and radial
/// step functions under sum/product/conjugation/dilation.
pub(crate) fn step_profile(sym: &Symbol) -> Option<StepProfile> {
    match sym.node() {
        SymbolNode::Constant(c) => Some(StepProfile {
            breaks: vec![],
            values: vec![],
            at_zero: *c,
        }),
        SymbolNode::RadialPiecewise {
            breaks,
            values,
            at_zero,
        } => Some(StepProfile {
            breaks: breaks.clone(),
            values: values.clone(),
            at_zero: *at_zero,
        }),
        SymbolNode::Sum(l, r) => Some(StepProfile::combine(
            &step_profile(l)?,
            &step_profile(r)?,
            |a, b| a + b,
        )),
        SymbolNode::Product(l, r) => Some(StepProfile::combine(
            &step_profile(l)?,
            &step_profile(r)?,
            |a, b| a * b,
        )),
        SymbolNode::Conjugate(f) => Some(step_profile(f)?.map(|v| v.conj())),
        SymbolNode::Scaled(f, s) => Some(step_profile(f)?.scale_arg(*s)),
        _ => None,
    }
}

/// Recognizes c·exp(i·Re(z·conj(xi))) up to products, conjugation, dilation
/// and translation; returns (c, xi).
pub(crate) fn plane_wave_form(sym: &Symbol) -> Option<(Complex64, Complex64)> {
    match sym.node() {
        SymbolNode::Constant(c) => Some((*c, Complex64::new(0.0, 0.0))),
        SymbolNode::PlaneWave(xi) => Some((Complex64::new(1.0, 0.0), *xi)),
        SymbolNode::Product(l, r) => {
            let (cl, xl) = plane_wave_form(l)?;
            let (cr, xr) = plane_wave_form(r)?;
            Some((cl * cr, xl + xr))
        }
        SymbolNode::Conjugate(f) => {
            let (c, xi) = plane_wave_form(f)?;
            Some((c.conj(), -xi))
        }
        SymbolNode::Scaled(f, s) => {
            let (c, xi) = plane_wave_form(f)?;
            Some((c, xi * *s))
        }
        SymbolNode::Translated(f, w) => {
            // exp(i·Re((w−z)·conj(xi))) = exp(i·Re(w·conj(xi)))·exp(i·Re(z·conj(−xi)))
            let (c, xi) = plane_wave_form(f)?;
            Some((c * Complex64::from_polar(1.0, (w * xi.conj()).re), -xi))
        }
        _ => None,
    }
}

/// Recognizes c·exp(i·alpha·|z|²); returns (c, alpha).
pub(crate) fn radial_phase_form(sym: &Symbol) -> Option<(Complex64, f64)> {
    match sym.node() {
        SymbolNode::Constant(c) => Some((*c, 0.0)),
        SymbolNode::QuadraticPhase(alpha) => Some((Complex64::new(1.0, 0.0), *alpha)),
        SymbolNode::Product(l, r) => {
            let (cl, al) = radial_phase_form(l)?;
            let (cr, ar) = radial_phase_form(r)?;
            Some((cl * cr, al + ar))
        }
        SymbolNode::Conjugate(f) => {
            let (c, a) = radial_phase_form(f)?;
            Some((c.conj(), -a))
        }
        SymbolNode::Scaled(f, s) => {
            let (c, a) = radial_phase_form(f)?;
            Some((c, a * s * s))
        }
        _ => None,
    }
}

fn fmt_real(x: f64, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(out, "{x}")
}

fn fmt_const(c: Complex64, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.im == 0.0 {
        fmt_real(c.re, out)
    } else if c.re == 0.0 {
        write!(out, "{}i", c.im)
    } else {
        write!(out, "complex({}, {})", c.re, c.im)
    }
}

impl Symbol {
    fn fmt_prec(&self, out: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
        let prec = match self.node() {
            SymbolNode::Sum(..) => 1,
            SymbolNode::Product(..) => 2,
            _ => 3,
        };
        if prec < parent {
            write!(out, "(")?;
        }
        match self.node() {
            SymbolNode::Constant(c) => fmt_const(*c, out)?,
            SymbolNode::CoordZ => write!(out, "z")?,
            SymbolNode::CoordZbar => write!(out, "zbar")?,
            SymbolNode::RadialPiecewise {
                breaks,
                values,
                at_zero,
            } => {
                write!(out, "steps(")?;
                fmt_const(*at_zero, out)?;
                for (b, v) in breaks.iter().zip(values) {
                    write!(out, ", {b}, ")?;
                    fmt_const(*v, out)?;
                }
                write!(out, ")")?;
            }
            SymbolNode::QuadraticPhase(alpha) => write!(out, "phase({alpha})")?,
            SymbolNode::PlaneWave(xi) => {
                write!(out, "planewave(")?;
                fmt_const(*xi, out)?;
                write!(out, ")")?;
            }
            SymbolNode::RadialSampled { .. } => write!(out, "radial_sampled(#)")?,
            SymbolNode::Sum(l, r) => {
                l.fmt_prec(out, 1)?;
                write!(out, " + ")?;
                r.fmt_prec(out, 1)?;
            }
            SymbolNode::Product(l, r) => {
                l.fmt_prec(out, 2)?;
                write!(out, "*")?;
                r.fmt_prec(out, 2)?;
            }
            SymbolNode::Conjugate(f) => {
                write!(out, "conj(")?;
                f.fmt_prec(out, 0)?;
                write!(out, ")")?;
            }
            SymbolNode::Scaled(f, s) => {
                write!(out, "scale(")?;
                f.fmt_prec(out, 0)?;
                write!(out, ", {s})")?;
            }
            SymbolNode::Translated(f, w) => {
                write!(out, "translate(")?;
                f.fmt_prec(out, 0)?;
                write!(out, ", ")?;
                fmt_const(*w, out)?;
                write!(out, ")")?;
            }
        }
        if prec < parent {
            write!(out, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(out, 0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "Symbol({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_eval() {
        let f = Symbol::constant(5.0);
        assert_eq!(f.eval(c(1.0, 2.0)).unwrap(), c(5.0, 0.0));
    }

    #[test]
    fn quadratic_phase_at_pi() {
        // |z|² = π gives exp(iπ) = −1.
        let f = Symbol::quadratic_phase(1.0);
        let z = c(std::f64::consts::PI.sqrt(), 0.0);
        let v = f.eval(z).unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dyadic_shell_values() {
        let f = Symbol::radial_dyadic(24);
        // 3 ∈ [2, 4), j = 1 odd → −1; 0.3 ∈ [0.25, 0.5), j = −2 even → +1.
        assert_eq!(f.eval(c(3.0, 0.0)).unwrap(), c(-1.0, 0.0));
        assert_eq!(f.eval(c(0.3, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(f.eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        // Left-closed shells: |z| = 2 lies in [2, 4).
        assert_eq!(f.eval(c(0.0, 2.0)).unwrap(), c(-1.0, 0.0));
    }

    #[test]
    fn dyadic_halving_identity() {
        let f = Symbol::radial_dyadic(24);
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..10_000 {
            let r = 1e-4 * (1e8f64).powf(next());
            let theta = std::f64::consts::TAU * next();
            let z = Complex64::from_polar(r, theta);
            let lhs = f.eval(z / 2.0).unwrap();
            let rhs = -f.eval(z).unwrap();
            assert_eq!(lhs, rhs, "z = {z}");
        }
    }

    #[test]
    fn scale_dyadic_flips_sign() {
        let f = Symbol::radial_dyadic(24);
        let g = f.scale(0.5).unwrap();
        for r in [0.11, 0.3, 0.77, 1.0, 2.5, 9.0, 100.0] {
            let z = Complex64::from_polar(r, 0.37);
            assert_eq!(g.eval(z).unwrap(), -f.eval(z).unwrap());
        }
    }

    #[test]
    fn scale_rewrites_leaves() {
        let f = Symbol::quadratic_phase(1.0).scale(2.0).unwrap();
        assert_eq!(f, Symbol::quadratic_phase(4.0));
        let g = Symbol::constant(c(2.0, 1.0)).scale(3.0).unwrap();
        assert_eq!(g, Symbol::constant(c(2.0, 1.0)));
        let z = c(1.0, 1.0);
        let h = Symbol::coord_z().scale(2.0).unwrap();
        assert_eq!(h.eval(z).unwrap(), c(2.0, 2.0));
    }

    #[test]
    fn scale_rejects_nonpositive() {
        assert!(Symbol::coord_z().scale(0.0).is_err());
        assert!(Symbol::coord_z().scale(-1.0).is_err());
    }

    #[test]
    fn translated_eval() {
        let f = Symbol::coord_z().translate(c(3.0, 0.0));
        assert_eq!(f.eval(c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
    }

    #[test]
    fn radiality_rules() {
        assert!(Symbol::quadratic_phase(2.0).is_radial());
        assert!(Symbol::radial_dyadic(4).is_radial());
        assert!(!Symbol::coord_z().is_radial());
        assert!(!Symbol::plane_wave(c(1.0, 0.0)).is_radial());
        assert!(!Symbol::quadratic_phase(1.0).translate(c(1.0, 0.0)).is_radial());
        assert!(Symbol::quadratic_phase(1.0).translate(c(0.0, 0.0)).is_radial());
        let prod = Symbol::radial_dyadic(3) * Symbol::quadratic_phase(1.0);
        assert!(prod.is_radial());
    }

    #[test]
    fn bounds_are_sound() {
        assert_eq!(Symbol::quadratic_phase(3.0).bound(), Some(1.0));
        assert_eq!(Symbol::radial_dyadic(8).bound(), Some(1.0));
        assert_eq!(Symbol::coord_z().bound(), None);
        let f = Symbol::constant(2.0) + Symbol::plane_wave(c(1.0, 0.0));
        assert_eq!(f.bound(), Some(3.0));
    }

    #[test]
    fn oscillation_of_constant_vanishes() {
        let f = Symbol::constant(c(2.0, -1.0));
        assert_eq!(f.eval(c(0.3, 0.1)).unwrap(), c(2.0, -1.0));
        let osc = f.oscillation_at(c(5.0, 5.0), 1.0, 500).unwrap();
        assert_eq!(osc, 0.0);
    }

    #[test]
    fn oscillation_of_sqrt_phase_decays() {
        // z ↦ exp(i√|z|) oscillates ever slower at infinity.
        let f = Symbol::radial_sampled(|r| Complex64::from_polar(1.0, r.sqrt()), 1.0);
        let osc: Vec<f64> = [10.0, 100.0, 1000.0]
            .iter()
            .map(|&r| f.oscillation_at(c(r, 0.0), 1.0, 2000).unwrap())
            .collect();
        assert!(osc[0] > osc[1] && osc[1] > osc[2], "{osc:?}");
        assert!(osc[2] < 0.05);
    }

    #[test]
    fn oscillation_of_re_z_near_one() {
        let f = Symbol::re_z();
        let osc = f.oscillation_at(c(7.0, -2.0), 1.0, 10_000).unwrap();
        assert!((0.99..1.0).contains(&osc), "osc = {osc}");
    }

    #[test]
    fn sup_norm_exact_cases() {
        assert_eq!(Symbol::quadratic_phase(2.5).sup_norm_estimate(&[]).unwrap(), 1.0);
        assert_eq!(Symbol::radial_dyadic(24).sup_norm_estimate(&[]).unwrap(), 1.0);
    }

    #[test]
    fn sup_norm_on_grid() {
        // max |1 + e^{i|z|²}| = 2 at |z|² = 2πk.
        let f = Symbol::constant(1.0) + Symbol::quadratic_phase(1.0);
        let grid: Vec<Complex64> = (0..4000)
            .map(|i| c((std::f64::consts::TAU * i as f64 / 4000.0).sqrt(), 0.0))
            .collect();
        let sup = f.sup_norm_estimate(&grid).unwrap();
        assert!((sup - 2.0).abs() < 1e-3, "sup = {sup}");
    }

    #[test]
    fn step_profile_product_of_dyadic() {
        let f = Symbol::radial_dyadic(6);
        let sq = f.clone() * f.conj();
        let sp = step_profile(&sq).expect("product of steps is a step");
        assert_eq!(sp.value_at(3.0), c(1.0, 0.0));
        assert_eq!(sp.at_zero, c(0.0, 0.0));
    }

    #[test]
    fn plane_wave_form_product() {
        let f = Symbol::plane_wave(c(1.0, 0.0));
        let (coef, xi) = plane_wave_form(&(f.clone() * f.clone())).unwrap();
        assert_eq!(coef, c(1.0, 0.0));
        assert_eq!(xi, c(2.0, 0.0));
        let (coef, xi) = plane_wave_form(&f.conj()).unwrap();
        assert_eq!(coef, c(1.0, 0.0));
        assert_eq!(xi, c(-1.0, 0.0));
    }

    #[test]
    fn symbols_are_shareable() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Symbol>();
    }
}
