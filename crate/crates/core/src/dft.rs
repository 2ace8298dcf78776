//! N-point DFT helpers.
//!
//! Forward transform is unscaled, `X(k) = sum_n x[n] exp(-i 2 pi k n / N)`;
//! the inverse carries the `1/N` factor.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

pub fn forward_real(x: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward_in_place(&mut buf);
    buf
}

pub fn forward_in_place(buf: &mut [Complex64]) {
    if buf.is_empty() {
        return;
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(buf.len()).process(buf);
}

/// Inverse DFT with `1/N` scaling, keeping only the real part.
pub fn inverse_real(mut spectrum: Vec<Complex64>) -> Vec<f64> {
    let n = spectrum.len();
    if n == 0 {
        return Vec::new();
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(n).process(&mut spectrum);
    let scale = 1.0 / n as f64;
    spectrum.into_iter().map(|c| c.re * scale).collect()
}

/// Reduce a possibly negative bin index modulo `n`.
pub fn wrap_bin(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}
