//! Deterministic sampling grids used wherever a supremum or a disk average
//! is estimated.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Polar grid: the origin plus `radial` rings of `angular` equispaced points
/// each, with radii r_max·(i+1)/radial.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolarGrid {
    pub r_max: f64,
    pub radial: usize,
    pub angular: usize,
}

impl PolarGrid {
    pub fn new(r_max: f64, radial: usize, angular: usize) -> Self {
        PolarGrid {
            r_max,
            radial,
            angular,
        }
    }

    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(1 + self.radial * self.angular);
        pts.push(Complex64::new(0.0, 0.0));
        for i in 0..self.radial {
            let r = self.r_max * (i + 1) as f64 / self.radial as f64;
            for j in 0..self.angular {
                let theta = std::f64::consts::TAU * j as f64 / self.angular as f64;
                pts.push(Complex64::from_polar(r, theta));
            }
        }
        pts
    }
}

impl Default for PolarGrid {
    fn default() -> Self {
        PolarGrid::new(6.0, 64, 32)
    }
}

/// Points on the positive real axis; sufficient for radial symbols whose
/// oscillation data depend on |w| only.
pub fn radial_points(radii: &[f64]) -> Vec<Complex64> {
    radii.iter().map(|&r| Complex64::new(r, 0.0)).collect()
}

/// Midpoint polar grid over the disk B(center, radius) together with
/// normalized area weights (they sum to one). About `samples` points.
pub fn disk_samples(
    center: Complex64,
    radius: f64,
    samples: usize,
) -> (Vec<Complex64>, Vec<f64>) {
    let nr = ((samples as f64).sqrt().floor() as usize).max(1);
    let na = samples.div_ceil(nr).max(1);
    let mut pts = Vec::with_capacity(nr * na);
    let mut wts = Vec::with_capacity(nr * na);
    // ring weight ∝ r_i; Σ_i r_i·Δr = radius²/2 exactly for midpoints.
    let total: f64 = (0..nr).map(|i| i as f64 + 0.5).sum::<f64>() * na as f64;
    for i in 0..nr {
        let ri = i as f64 + 0.5;
        let r = radius * ri / nr as f64;
        for j in 0..na {
            let theta = std::f64::consts::TAU * j as f64 / na as f64;
            pts.push(center + Complex64::from_polar(r, theta));
            wts.push(ri / total);
        }
    }
    (pts, wts)
}
