//! Signal container, band-limited test signals, ideal lowpass filtering,
//! sampling trains, noise injection and SNR measurement.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dft;
use crate::error::{Error, Result};

/// A finite real-valued sequence of length `N >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal(Vec<f64>);

impl Signal {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::SignalTooShort { len: samples.len() });
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Signal(samples))
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Signal::new(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.0
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.0
    }

    /// Mean power, `sum x^2 / N`.
    pub fn power(&self) -> f64 {
        self.energy() / self.len() as f64
    }

    pub fn energy(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Signal, b: f64) -> Result<Signal> {
        check_same_len(self, other)?;
        Signal::new(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }
}

impl AsRef<[f64]> for Signal {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Signal {
    type Error = Error;

    fn try_from(samples: Vec<f64>) -> Result<Self> {
        Signal::new(samples)
    }
}

/// Half-width `K` of an ideal lowpass passband, in DFT bins.
///
/// Bins `0..=K` and `N-K..N` are retained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Passband(pub usize);

impl Passband {
    pub fn half_width(self) -> usize {
        self.0
    }

    /// The widest passband strictly inside the Nyquist bin of a period-`T`
    /// sampling grid: `N/(2T) - 1`.
    pub fn below_nyquist(len: usize, period: usize) -> Result<Self> {
        if period == 0 || !len.is_multiple_of(period) {
            return Err(Error::NotDivisible { period, len });
        }
        let nyquist = len / (2 * period);
        if nyquist == 0 {
            return Err(Error::InvalidParameter(format!(
                "no bins lie strictly below the Nyquist bin for N = {len}, T = {period}"
            )));
        }
        Ok(Passband(nyquist - 1))
    }

    pub fn check(self, len: usize) -> Result<()> {
        let max = len / 2;
        if self.0 > max {
            return Err(Error::PassbandOutOfRange {
                half_width: self.0,
                max,
                len,
            });
        }
        Ok(())
    }
}

fn check_same_len(a: &Signal, b: &Signal) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// Zero every DFT bin outside the passband and transform back.
pub fn ideal_lowpass(x: &Signal, passband: Passband) -> Result<Signal> {
    let n = x.len();
    passband.check(n)?;
    let k = passband.half_width();
    let mut spectrum = dft::forward_real(x.samples());
    // Retained: [0, K] and [N-K, N-1].
    for bin in spectrum.iter_mut().take(n - k).skip(k + 1) {
        *bin = Default::default();
    }
    Signal::new(dft::inverse_real(spectrum))
}

/// White Gaussian noise of length `len`, deviation `sigma`, filtered to the passband.
///
/// No power renormalization is applied after filtering.
pub fn gen_bandlimited(len: usize, passband: Passband, sigma: f64, seed: u64) -> Result<Signal> {
    passband.check(len)?;
    let raw = gaussian_noise(len, sigma, seed)?;
    ideal_lowpass(&Signal::new(raw)?, passband)
}

pub(crate) fn gaussian_noise(len: usize, sigma: f64, seed: u64) -> Result<Vec<f64>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise deviation must be positive and finite, got {sigma}"
        )));
    }
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| Error::InvalidParameter(format!("normal distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..len).map(|_| normal.sample(&mut rng)).collect())
}

/// Keep every `T`-th sample (starting at index 0) and zero the rest.
pub fn sample_train(x: &Signal, period: usize) -> Result<Signal> {
    if period == 0 || !x.len().is_multiple_of(period) {
        return Err(Error::NotDivisible {
            period,
            len: x.len(),
        });
    }
    Signal::new(
        x.samples()
            .iter()
            .enumerate()
            .map(|(n, &v)| if n % period == 0 { v } else { 0.0 })
            .collect(),
    )
}

/// Add full-band white Gaussian noise whose expected power sits
/// `target_snr_db` below the power of `x`.
pub fn add_noise(x: &Signal, target_snr_db: f64, seed: u64) -> Result<Signal> {
    if !target_snr_db.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "target SNR must be finite, got {target_snr_db}"
        )));
    }
    let power = x.power();
    if power == 0.0 {
        return Err(Error::ZeroPower);
    }
    let sigma = (power / 10f64.powf(target_snr_db / 10.0)).sqrt();
    if sigma == 0.0 {
        // Underflow: the requested noise is below the smallest representable deviation.
        return Ok(x.clone());
    }
    let noise = gaussian_noise(x.len(), sigma, seed)?;
    Signal::new(x.samples().iter().zip(noise).map(|(a, w)| a + w).collect())
}

/// `10 log10(sum ref^2 / sum (ref - est)^2)` over the interior window.
///
/// `floor(guard_fraction * N)` samples are dropped from each end. Returns
/// `f64::INFINITY` when the interior error is exactly zero.
pub fn snr_db(reference: &Signal, estimate: &Signal, guard_fraction: f64) -> Result<f64> {
    check_same_len(reference, estimate)?;
    let n = reference.len();
    if !(0.0..0.5).contains(&guard_fraction) {
        return Err(Error::InvalidParameter(format!(
            "guard fraction must lie in [0, 0.5), got {guard_fraction}"
        )));
    }
    let guard = (guard_fraction * n as f64).floor() as usize;
    if 2 * guard >= n {
        return Err(Error::EmptyWindow {
            guard: guard_fraction,
            len: n,
        });
    }
    let window = guard..n - guard;
    let r = &reference.samples()[window.clone()];
    let e = &estimate.samples()[window];
    let signal: f64 = r.iter().map(|v| v * v).sum();
    let error: f64 = r.iter().zip(e).map(|(a, b)| (a - b) * (a - b)).sum();
    if error == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (signal / error).log10())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(v: &[f64]) -> Signal {
        Signal::new(v.to_vec()).unwrap()
    }

    fn max_abs_diff(a: &Signal, b: &Signal) -> f64 {
        a.samples()
            .iter()
            .zip(b.samples())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn signal_rejects_short_and_non_finite() {
        assert!(matches!(
            Signal::new(vec![1.0]),
            Err(Error::SignalTooShort { len: 1 })
        ));
        assert!(matches!(
            Signal::new(vec![1.0, f64::NAN]),
            Err(Error::NonFiniteSample { index: 1 })
        ));
    }

    #[test]
    fn lowpass_keeps_dc() {
        let x = sig(&[1.0; 4]);
        let y = ideal_lowpass(&x, Passband(0)).unwrap();
        assert!(max_abs_diff(&x, &y) < 1e-15);
    }

    #[test]
    fn lowpass_removes_out_of_band_tone() {
        let x = Signal::new(
            (0..8)
                .map(|n| (2.0 * std::f64::consts::PI * n as f64 / 4.0).cos())
                .collect(),
        )
        .unwrap();
        let y = ideal_lowpass(&x, Passband(1)).unwrap();
        assert!(y.samples().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn lowpass_full_band_is_identity() {
        let x = Signal::new((0..16).map(|n| ((n * 7) % 5) as f64 - 2.0).collect()).unwrap();
        let y = ideal_lowpass(&x, Passband(8)).unwrap();
        assert!(max_abs_diff(&x, &y) < 1e-14);
    }

    #[test]
    fn lowpass_rejects_wide_passband() {
        let x = sig(&[1.0; 16]);
        assert!(matches!(
            ideal_lowpass(&x, Passband(9)),
            Err(Error::PassbandOutOfRange {
                half_width: 9,
                max: 8,
                len: 16
            })
        ));
    }

    #[test]
    fn bandlimited_full_band_equals_raw_noise() {
        let x = gen_bandlimited(16, Passband(8), 1.0, 7).unwrap();
        let raw = gaussian_noise(16, 1.0, 7).unwrap();
        let a = dft::forward_real(x.samples());
        let b = dft::forward_real(&raw);
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).norm() < 1e-12);
        }
    }

    #[test]
    fn bandlimited_is_zero_outside_band() {
        let x = gen_bandlimited(16, Passband(3), 1.0, 7).unwrap();
        let spectrum = dft::forward_real(x.samples());
        for bin in &spectrum[4..=12] {
            assert!(bin.norm() < 1e-12);
        }
    }

    #[test]
    fn bandlimited_is_deterministic() {
        let a = gen_bandlimited(64, Passband(10), 1.0, 99).unwrap();
        let b = gen_bandlimited(64, Passband(10), 1.0, 99).unwrap();
        assert_eq!(a, b);
        let c = gen_bandlimited(64, Passband(10), 1.0, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn bandlimited_rejects_bad_sigma() {
        assert!(gen_bandlimited(16, Passband(3), 0.0, 1).is_err());
        assert!(gen_bandlimited(16, Passband(3), -1.0, 1).is_err());
    }

    #[test]
    fn bandlimited_variance_tracks_retained_bins() {
        // Parseval: expected variance is sigma^2 (2K+1)/N.
        let (n, k) = (4096, 1023);
        let expected = (2 * k + 1) as f64 / n as f64;
        for seed in 0..20 {
            let x = gen_bandlimited(n, Passband(k), 1.0, seed).unwrap();
            let var = x.power();
            assert!(
                (var - expected).abs() < 0.1 * expected,
                "seed {seed}: variance {var} vs {expected}"
            );
        }
    }

    #[test]
    fn train_examples() {
        let x = sig(&[5.0, 6.0, 7.0, 8.0]);
        assert_eq!(sample_train(&x, 2).unwrap(), sig(&[5.0, 0.0, 7.0, 0.0]));
        assert_eq!(sample_train(&x, 1).unwrap(), x);
        let y = sig(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(
            sample_train(&y, 3).unwrap(),
            sig(&[1.0, 0.0, 0.0, 4.0, 0.0, 0.0])
        );
        assert!(matches!(
            sample_train(&y, 4),
            Err(Error::NotDivisible { period: 4, len: 6 })
        ));
    }

    #[test]
    fn noise_at_300_db_is_negligible() {
        let x = gen_bandlimited(256, Passband(20), 1.0, 3).unwrap();
        let y = add_noise(&x, 300.0, 11).unwrap();
        let diff: f64 = x
            .samples()
            .iter()
            .zip(y.samples())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        assert!(diff / x.energy() < 1e-29);
    }

    #[test]
    fn noise_is_deterministic() {
        let x = gen_bandlimited(128, Passband(10), 1.0, 3).unwrap();
        assert_eq!(
            add_noise(&x, 10.0, 5).unwrap(),
            add_noise(&x, 10.0, 5).unwrap()
        );
    }

    #[test]
    fn noise_hits_target_snr() {
        for seed in 0..20 {
            let x = gen_bandlimited(4096, Passband(500), 1.0, seed).unwrap();
            let y = add_noise(&x, 20.0, 1000 + seed).unwrap();
            let snr = snr_db(&x, &y, 0.0).unwrap();
            assert!((snr - 20.0).abs() < 0.5, "seed {seed}: {snr}");
        }
    }

    #[test]
    fn noise_rejects_zero_power() {
        let x = Signal::zeros(8).unwrap();
        assert!(matches!(add_noise(&x, 10.0, 1), Err(Error::ZeroPower)));
    }

    #[test]
    fn snr_examples() {
        let r = sig(&[1.0, -2.0, 3.0, 0.5]);
        assert_eq!(snr_db(&r, &r, 0.0).unwrap(), f64::INFINITY);
        let zero = Signal::zeros(4).unwrap();
        assert!(snr_db(&r, &zero, 0.0).unwrap().abs() < 1e-12);

        let mut v = vec![0.0; 10];
        v[0] = 1.0;
        v[9] = 1e3;
        let reference = Signal::new(v.clone()).unwrap();
        v[0] = 2.0;
        let estimate = Signal::new(v).unwrap();
        assert_eq!(snr_db(&reference, &estimate, 0.1).unwrap(), f64::INFINITY);
        assert!(snr_db(&reference, &estimate, 0.0).unwrap().is_finite());
    }

    #[test]
    fn snr_errors() {
        let a = sig(&[1.0, 2.0, 3.0]);
        let b = sig(&[1.0, 2.0]);
        assert!(matches!(
            snr_db(&a, &b, 0.0),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            snr_db(&a, &a, 0.5),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            snr_db(&a, &a, -0.1),
            Err(Error::InvalidParameter(_))
        ));
        // floor(0.499 * 200) = 99 per end still leaves two samples.
        let g = sig(&[1.0; 200]);
        assert_eq!(snr_db(&g, &g, 0.499).unwrap(), f64::INFINITY);
    }
}
