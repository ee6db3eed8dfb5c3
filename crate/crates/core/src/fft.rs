//! Cached FFT plans with the normalization convention used crate-wide:
//! `forward` is the plain DFT, `inverse` carries the 1/N factor, so a
//! round trip is the identity.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::sync::Arc;

pub(crate) struct FftPlan {
    fwd: Arc<dyn rustfft::Fft<f64>>,
    inv: Arc<dyn rustfft::Fft<f64>>,
    scratch: Vec<Complex64>,
    n: usize,
}

impl FftPlan {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let scratch_len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        Self {
            fwd,
            inv,
            scratch: vec![Complex64::default(); scratch_len],
            n,
        }
    }

    /// In-place DFT, no normalization.
    pub fn forward(&mut self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n);
        self.fwd.process_with_scratch(data, &mut self.scratch);
    }

    /// In-place inverse DFT including the 1/N factor.
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n);
        self.inv.process_with_scratch(data, &mut self.scratch);
        let norm = 1.0 / self.n as f64;
        for v in data.iter_mut() {
            *v *= norm;
        }
    }
}

impl Clone for FftPlan {
    fn clone(&self) -> Self {
        Self {
            fwd: Arc::clone(&self.fwd),
            inv: Arc::clone(&self.inv),
            scratch: vec![Complex64::default(); self.scratch.len()],
            n: self.n,
        }
    }
}
