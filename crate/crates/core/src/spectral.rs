//! Plane-wave decomposition on the periodic grid.
//!
//! Discrete momenta follow q_j = 2π·j/N with j wrapped into the symmetric
//! zone [−⌊N/2⌋, ⌈N/2⌉−1]. On even grids the unpaired Nyquist mode gets a
//! zero momentum multiplier: that keeps the derivative operator odd under
//! complex conjugation (K p̂ K = −p̂), which the charge-conjugation algebra
//! of the Majorana evolution relies on.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Momentum value for each FFT bin of an N-point grid.
pub fn momenta(n: usize) -> Vec<f64> {
    let half = n.div_ceil(2);
    (0..n)
        .map(|j| {
            let jj = if j < half {
                j as i64
            } else {
                j as i64 - n as i64
            };
            if n.is_multiple_of(2) && j == n / 2 {
                0.0
            } else {
                2.0 * std::f64::consts::PI * jj as f64 / n as f64
            }
        })
        .collect()
}

/// Cached forward/inverse FFT pair for one grid size.
pub struct SpectralGrid {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    pub q: Vec<f64>,
}

impl SpectralGrid {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            q: momenta(n),
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n);
        self.forward.process(data);
    }

    /// Unnormalized inverse followed by the 1/N scale.
    pub fn inverse(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n);
        self.inverse.process(data);
        let scale = 1.0 / self.n as f64;
        for a in data.iter_mut() {
            *a *= scale;
        }
    }

    /// Apply the momentum operator p̂ = −i∂ₙ spectrally.
    pub fn apply_momentum(&self, data: &mut [Complex64]) {
        self.forward(data);
        for (a, &qj) in data.iter_mut().zip(&self.q) {
            *a *= qj;
        }
        self.inverse(data);
    }
}
