//! Brute-force reference computations shared by the integration tests.
//! Everything here uses direct O(N^2) sums, never the library's FFT path.
#![allow(dead_code)]

use std::f64::consts::PI;

use holdfix::kernels::InterpKernel;
use holdfix::modular::ModuleCoeffs;
use holdfix::Complex64;

pub fn naive_dft(x: &[f64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(m, &v)| {
                    Complex64::from_polar(v, -2.0 * PI * ((k * m) % n) as f64 / n as f64)
                })
                .sum()
        })
        .collect()
}

/// `H(k)` by direct summation over the origin-aligned taps.
pub fn naive_response(kernel: &InterpKernel, n: usize, k: i64) -> Complex64 {
    kernel
        .taps()
        .iter()
        .enumerate()
        .map(|(m, &tap)| {
            let shift = m as i64 - kernel.origin() as i64;
            let phase = (k * shift).rem_euclid(n as i64) as f64;
            Complex64::from_polar(tap, -2.0 * PI * phase / n as f64)
        })
        .sum()
}

/// `G(k) = (1/T) sum_{|j|<=M} c_|j| H(k - jN/T)` by direct summation.
pub fn naive_gain(kernel: &InterpKernel, coeffs: &ModuleCoeffs, n: usize, k: i64) -> Complex64 {
    let t = coeffs.period();
    let stride = (n / t) as i64;
    let m = coeffs.modules() as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in -m..=m {
        let c = if j == 0 {
            1.0
        } else {
            coeffs.values()[j.unsigned_abs() as usize - 1]
        };
        acc += naive_response(kernel, n, k - j * stride) * c;
    }
    acc / t as f64
}

pub fn naive_error(kernel: &InterpKernel, coeffs: &ModuleCoeffs, n: usize, half: usize) -> f64 {
    let half = half as i64;
    (-half..=half)
        .map(|k| (naive_gain(kernel, coeffs, n, k) - 1.0).norm_sqr())
        .sum()
}

/// Inverse DFT of `G(k) X(k)` restricted to `|k| <= half`.
pub fn frequency_synthesis(
    x: &[f64],
    kernel: &InterpKernel,
    coeffs: &ModuleCoeffs,
    half: usize,
) -> Vec<f64> {
    let n = x.len();
    let spectrum = naive_dft(x);
    let half = half as i64;
    let weighted: Vec<(i64, Complex64)> = (-half..=half)
        .map(|k| {
            let bin = k.rem_euclid(n as i64) as usize;
            (k, naive_gain(kernel, coeffs, n, k) * spectrum[bin])
        })
        .collect();
    (0..n)
        .map(|t| {
            weighted
                .iter()
                .map(|&(k, v)| {
                    let phase = 2.0 * PI * ((k * t as i64).rem_euclid(n as i64)) as f64 / n as f64;
                    (v * Complex64::from_polar(1.0, phase)).re
                })
                .sum::<f64>()
                / n as f64
        })
        .collect()
}

pub fn relative_error(reference: &[f64], estimate: &[f64]) -> f64 {
    let num: f64 = reference
        .iter()
        .zip(estimate)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let den: f64 = reference.iter().map(|a| a * a).sum();
    (num / den).sqrt()
}

/// Minimum of `e(c) = sum |G0 + c (G1 - G0) - 1|^2` over a uniform grid on `[lo, hi]`.
///
/// `g0` and `g1` are the passband gains at `c_1 = 0` and `c_1 = 1`; the gain
/// is affine in `c_1`, so this scans the exact single-module error.
pub fn grid_scan(g0: &[Complex64], g1: &[Complex64], lo: f64, hi: f64, step: f64) -> (f64, f64) {
    let steps = ((hi - lo) / step).round() as usize;
    let mut best = (f64::INFINITY, lo);
    for i in 0..=steps {
        let c = lo + i as f64 * step;
        let e: f64 = g0
            .iter()
            .zip(g1)
            .map(|(a, b)| (a + (b - a) * c - 1.0).norm_sqr())
            .sum();
        if e < best.0 {
            best = (e, c);
        }
    }
    best
}
