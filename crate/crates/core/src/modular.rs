//! Modular reconstruction: mix the interpolated signal with a bank of
//! harmonic cosines at multiples of `1/T` and lowpass the result.
//!
//! Weighting module `j` by `c_j` gives the modulation kernel
//! `m[n] = 1 + sum_j 2 c_j cos(2 pi j n / T)`. Its effect on the passband is
//! the replica-sum gain
//!
//! ```text
//! G(k) = (1/T) sum_{j=-M..M} c_|j| H((k - jN/T) mod N),   c_0 = 1
//! ```
//!
//! and reconstruction is exact when `G(k) = 1` across the passband.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use crate::dft;
use crate::error::{Error, Result};
use crate::kernels::{frequency_response, InterpKernel};
use crate::signals::{ideal_lowpass, Passband, Signal};

/// Module weights `c_1..c_M` for a period `T`, with `M <= floor(T/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleCoeffs {
    period: usize,
    c: Vec<f64>,
}

impl ModuleCoeffs {
    pub fn new(period: usize, c: Vec<f64>) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidParameter("period must be at least 1".into()));
        }
        let max = max_modules(period);
        if c.len() > max {
            return Err(Error::ModuleCap {
                requested: c.len(),
                period,
                max,
            });
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "module coefficients must be finite".into(),
            ));
        }
        Ok(ModuleCoeffs { period, c })
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn modules(&self) -> usize {
        self.c.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.c
    }

    /// `c_|j|` with `c_0 = 1`.
    fn weight(&self, j: usize) -> f64 {
        if j == 0 {
            1.0
        } else {
            self.c[j - 1]
        }
    }
}

/// The most modules that can be applied at period `T`: `floor(T/2)`.
///
/// Module `T/2 + j` aliases onto `(-1)^n` times module `j`, so extra modules
/// only disturb the ones already present.
pub fn max_modules(period: usize) -> usize {
    period / 2
}

/// All-ones weights: the unweighted modular method with `M` modules.
pub fn classical_coeffs(period: usize, modules: usize) -> Result<ModuleCoeffs> {
    ModuleCoeffs::new(period, vec![1.0; modules])
}

/// Weights whose modulation kernel is `T` times a period-`T` impulse train.
///
/// Even `T` halves the last (Nyquist) module; odd `T` needs no halving.
pub fn comb_coeffs(period: usize) -> Result<ModuleCoeffs> {
    let m = max_modules(period);
    let mut c = vec![1.0; m];
    if period.is_multiple_of(2) {
        if let Some(last) = c.last_mut() {
            *last = 0.5;
        }
    }
    ModuleCoeffs::new(period, c)
}

fn check_divides(period: usize, len: usize) -> Result<()> {
    if period == 0 || !len.is_multiple_of(period) {
        return Err(Error::NotDivisible { period, len });
    }
    Ok(())
}

/// `m[n] = 1 + sum_j 2 c_j cos(2 pi j n / T)` for `n = 0..N`.
pub fn modulation_kernel(coeffs: &ModuleCoeffs, len: usize) -> Result<Signal> {
    let t = coeffs.period;
    check_divides(t, len)?;
    let one_period: Vec<f64> = (0..t)
        .map(|n| {
            1.0 + coeffs
                .c
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    // Reduce j*n mod T first so the phase stays exact.
                    let phase = 2.0 * PI * (((i + 1) * n) % t) as f64 / t as f64;
                    2.0 * c * phase.cos()
                })
                .sum::<f64>()
        })
        .collect();
    Signal::new(one_period.iter().copied().cycle().take(len).collect())
}

/// `ideal_lowpass(s * m, K)`.
pub fn reconstruct(s: &Signal, coeffs: &ModuleCoeffs, passband: Passband) -> Result<Signal> {
    passband.check(s.len())?;
    let m = modulation_kernel(coeffs, s.len())?;
    let mixed = Signal::new(
        s.samples()
            .iter()
            .zip(m.samples())
            .map(|(a, b)| a * b)
            .collect(),
    )?;
    ideal_lowpass(&mixed, passband)
}

/// Replica-sum gain over `k = -K..=K` (index `k + K`) for a precomputed
/// response `H` of length `N`.
pub(crate) fn gain_from_response(
    response: &[Complex64],
    coeffs: &ModuleCoeffs,
    passband: Passband,
) -> Vec<Complex64> {
    let n = response.len();
    let stride = (n / coeffs.period) as i64;
    let m = coeffs.modules() as i64;
    let half = passband.half_width() as i64;
    let scale = 1.0 / coeffs.period as f64;
    (-half..=half)
        .map(|k| {
            (-m..=m)
                .map(|j| {
                    response[dft::wrap_bin(k - j * stride, n)]
                        * coeffs.weight(j.unsigned_abs() as usize)
                })
                .sum::<Complex64>()
                * scale
        })
        .collect()
}

fn check_gain_inputs(
    kernel: &InterpKernel,
    coeffs: &ModuleCoeffs,
    len: usize,
    passband: Passband,
) -> Result<()> {
    if kernel.period() != coeffs.period() {
        return Err(Error::MetaMismatch(format!(
            "kernel period {} differs from coefficient period {}",
            kernel.period(),
            coeffs.period()
        )));
    }
    check_divides(coeffs.period(), len)?;
    passband.check(len)
}

/// Passband gain `G(k)` for `k = -K..=K`; element `i` is `G(i - K)`.
pub fn passband_gain(
    kernel: &InterpKernel,
    coeffs: &ModuleCoeffs,
    len: usize,
    passband: Passband,
) -> Result<Vec<Complex64>> {
    check_gain_inputs(kernel, coeffs, len, passband)?;
    let response = frequency_response(kernel, len)?;
    Ok(gain_from_response(&response, coeffs, passband))
}

/// `e = sum_{k=-K..K} |G(k) - 1|^2`.
pub fn error_metric(
    kernel: &InterpKernel,
    coeffs: &ModuleCoeffs,
    len: usize,
    passband: Passband,
) -> Result<f64> {
    let gain = passband_gain(kernel, coeffs, len, passband)?;
    Ok(gain_error(&gain))
}

pub(crate) fn gain_error(gain: &[Complex64]) -> f64 {
    gain.iter().map(|g| (g - 1.0).norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{li_kernel, sh_kernel};

    #[test]
    fn cap() {
        assert_eq!(max_modules(1), 0);
        assert_eq!(max_modules(2), 1);
        assert_eq!(max_modules(7), 3);
        assert_eq!(max_modules(16), 8);
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical_coeffs(16, 3).unwrap().values(), &[1.0, 1.0, 1.0]);
        assert!(classical_coeffs(16, 0).unwrap().values().is_empty());
        match classical_coeffs(4, 3) {
            Err(Error::ModuleCap {
                requested: 3,
                period: 4,
                max: 2,
            }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn cap_error_message_names_the_bound() {
        let msg = classical_coeffs(4, 3).unwrap_err().to_string();
        assert!(msg.contains("at most floor(T/2) = 2"), "{msg}");
    }

    #[test]
    fn comb_examples() {
        assert_eq!(comb_coeffs(2).unwrap().values(), &[0.5]);
        assert_eq!(comb_coeffs(4).unwrap().values(), &[1.0, 0.5]);
        assert_eq!(comb_coeffs(3).unwrap().values(), &[1.0]);
        assert!(comb_coeffs(1).unwrap().values().is_empty());
        let m = modulation_kernel(&comb_coeffs(3).unwrap(), 3 * 2).unwrap();
        let expected = [3.0, 0.0, 0.0, 3.0, 0.0, 0.0];
        for (v, e) in m.samples().iter().zip(expected) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn comb_kernel_is_scaled_impulse_train() {
        for t in 1..=17 {
            let m = modulation_kernel(&comb_coeffs(t).unwrap(), 4 * t).unwrap();
            for (n, v) in m.samples().iter().enumerate() {
                let expected = if n % t == 0 { t as f64 } else { 0.0 };
                assert!((v - expected).abs() < 1e-12, "T={t} n={n} v={v}");
            }
        }
    }

    #[test]
    fn modulation_examples() {
        let empty = ModuleCoeffs::new(4, vec![]).unwrap();
        assert_eq!(modulation_kernel(&empty, 8).unwrap().samples(), &[1.0; 8]);

        let m = modulation_kernel(&ModuleCoeffs::new(2, vec![0.5]).unwrap(), 4).unwrap();
        for (v, e) in m.samples().iter().zip([2.0, 0.0, 2.0, 0.0]) {
            assert!((v - e).abs() < 1e-15);
        }

        let m = modulation_kernel(&classical_coeffs(4, 2).unwrap(), 4).unwrap();
        for (v, e) in m.samples().iter().zip([5.0, -1.0, 1.0, -1.0]) {
            assert!((v - e).abs() < 1e-14);
        }

        assert!(matches!(
            modulation_kernel(&classical_coeffs(4, 1).unwrap(), 6),
            Err(Error::NotDivisible { period: 4, len: 6 })
        ));
    }

    #[test]
    fn modulation_is_periodic_with_unit_mean() {
        let coeffs = ModuleCoeffs::new(6, vec![0.3, -1.2, 2.0]).unwrap();
        let m = modulation_kernel(&coeffs, 36).unwrap();
        let s = m.samples();
        for n in 0..30 {
            assert_eq!(s[n], s[n + 6]);
        }
        let mean_offset: f64 = s[..6].iter().map(|v| v - 1.0).sum();
        assert!(mean_offset.abs() < 1e-12);
    }

    #[test]
    fn aliasing_identity_beyond_cap() {
        // cos(2 (j + T/2) pi n / T) = (-1)^n cos(2 j pi n / T)
        for t in [4usize, 8] {
            for j in 1..=3 {
                for n in 0..4 * t {
                    let lhs = (2.0 * PI * ((j + t / 2) * n) as f64 / t as f64).cos();
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    let rhs = sign * (2.0 * PI * (j * n) as f64 / t as f64).cos();
                    assert!((lhs - rhs).abs() < 1e-12, "T={t} j={j} n={n}");
                }
            }
        }
    }

    #[test]
    fn sh_comb_gain_is_unity() {
        let kernel = sh_kernel(2).unwrap();
        let gain = passband_gain(&kernel, &comb_coeffs(2).unwrap(), 64, Passband(15)).unwrap();
        assert_eq!(gain.len(), 31);
        assert!(gain.iter().all(|g| (g - 1.0).norm() < 1e-14));
    }

    #[test]
    fn unmodulated_dc_gain_is_one() {
        for kernel in [sh_kernel(5).unwrap(), li_kernel(4).unwrap()] {
            let coeffs = ModuleCoeffs::new(kernel.period(), vec![]).unwrap();
            let gain = passband_gain(&kernel, &coeffs, 40, Passband(0)).unwrap();
            assert!((gain[0] - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn sh_classical_dc_gain_is_one() {
        let kernel = sh_kernel(4).unwrap();
        let gain =
            passband_gain(&kernel, &classical_coeffs(4, 2).unwrap(), 64, Passband(7)).unwrap();
        assert!((gain[7] - 1.0).norm() < 1e-14);
    }

    #[test]
    fn identity_interpolator_has_zero_error() {
        let kernel = sh_kernel(1).unwrap();
        let coeffs = ModuleCoeffs::new(1, vec![]).unwrap();
        assert_eq!(
            error_metric(&kernel, &coeffs, 32, Passband(10)).unwrap(),
            0.0
        );
    }

    #[test]
    fn comb_error_vanishes() {
        for t in [2usize, 3, 4, 8, 16] {
            let n = 64 * t;
            let k = Passband::below_nyquist(n, t).unwrap();
            for kernel in [sh_kernel(t).unwrap(), li_kernel(t).unwrap()] {
                let e = error_metric(&kernel, &comb_coeffs(t).unwrap(), n, k).unwrap();
                assert!(e < 1e-20, "{} T={t}: {e}", kernel.id());
            }
        }
    }

    #[test]
    fn gain_rejects_period_mismatch() {
        let kernel = sh_kernel(8).unwrap();
        let coeffs = comb_coeffs(4).unwrap();
        assert!(matches!(
            passband_gain(&kernel, &coeffs, 64, Passband(3)),
            Err(Error::MetaMismatch(_))
        ));
    }

    #[test]
    fn reconstruct_without_modules_is_lowpass() {
        let s = Signal::new((0..32).map(|n| ((n * 13) % 7) as f64).collect()).unwrap();
        let coeffs = ModuleCoeffs::new(4, vec![]).unwrap();
        let a = reconstruct(&s, &coeffs, Passband(3)).unwrap();
        let b = ideal_lowpass(&s, Passband(3)).unwrap();
        assert_eq!(a, b);
    }
}
