//! Thin wrapper over `rustfft` with one fixed normalisation convention.
//!
//! Forward transforms are unnormalised, `ψ̂_k = Σ_j ψ_j e^{-2πi jk/M}`.
//! The inverse carries the `1/M`, so `dx·Σ|ψ_j|² = (dx/M)·Σ|ψ̂_k|²`.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::Complex64;

/// Forward/inverse plans of one length plus scratch space.
///
/// Not `Sync`-shared: one instance per thread.
pub struct FourierPair {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    transforms: u64,
}

impl FourierPair {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        FourierPair {
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            transforms: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn forward(&mut self, buf: &mut [Complex64]) {
        self.forward.process_with_scratch(buf, &mut self.scratch);
        self.transforms += 1;
    }

    /// Inverse transform *without* the `1/M` factor; callers fold it into
    /// whatever multiplier they apply in Fourier space.
    pub fn inverse_unscaled(&mut self, buf: &mut [Complex64]) {
        self.inverse.process_with_scratch(buf, &mut self.scratch);
        self.transforms += 1;
    }

    pub fn inverse(&mut self, buf: &mut [Complex64]) {
        self.inverse_unscaled(buf);
        let scale = 1.0 / buf.len() as f64;
        buf.iter_mut().for_each(|z| *z *= scale);
    }

    /// Number of transforms (either direction) executed so far.
    pub fn transform_count(&self) -> u64 {
        self.transforms
    }
}
