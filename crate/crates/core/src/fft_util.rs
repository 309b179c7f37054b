//! Shared FFT plumbing: thread-local plan cache over `rustfft`.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place forward DFT, `X_j = Σ_k x_k e^{-2πi jk/len}` (unnormalized).
pub(crate) fn fft_forward(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
}

/// In-place inverse DFT normalized by `1/len`.
pub(crate) fn fft_inverse(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Angular frequency of FFT bin `j` for a grid of `len` points with spacing
/// `dx` (standard wrap-around ordering).
pub(crate) fn angular_frequency(j: usize, len: usize, dx: f64) -> f64 {
    let f = if j < len / 2 {
        j as f64
    } else {
        j as f64 - len as f64
    };
    std::f64::consts::TAU * f / (len as f64 * dx)
}
