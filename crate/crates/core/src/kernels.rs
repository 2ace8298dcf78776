//! Interpolation impulse responses and their application to sample trains.
//!
//! Every kernel is normalized so its taps sum to the hold period `T`, which
//! makes `H(0) = T`. The sample-and-hold kernel is causal (origin 0); the
//! higher-order holds are centred.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rustfft::num_complex::Complex64;

use crate::dft;
use crate::error::{Error, Result};
use crate::signals::Signal;

const SUM_TOLERANCE: f64 = 1e-9;

/// Interpolation impulse response `h[n]` with a hold period `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpKernel {
    taps: Vec<f64>,
    origin: usize,
    period: usize,
    id: String,
}

impl InterpKernel {
    /// Build a kernel from raw taps. `origin` is the tap index that lands on
    /// the sample position.
    pub fn custom(
        taps: Vec<f64>,
        origin: usize,
        period: usize,
        id: impl Into<String>,
    ) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidKernel("period must be at least 1".into()));
        }
        if taps.is_empty() {
            return Err(Error::InvalidKernel("no taps".into()));
        }
        if taps.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidKernel("taps must be finite".into()));
        }
        if origin >= taps.len() {
            return Err(Error::InvalidKernel(format!(
                "origin {origin} outside {} taps",
                taps.len()
            )));
        }
        let sum: f64 = taps.iter().sum();
        let target = period as f64;
        if (sum - target).abs() > SUM_TOLERANCE * target {
            return Err(Error::InvalidKernel(format!(
                "taps sum to {sum}, expected the period {period}"
            )));
        }
        Ok(InterpKernel {
            taps,
            origin,
            period,
            id: id.into(),
        })
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn id(&self) -> &str {
        &self.id
    }
}

/// Sample and hold: `T` ones starting at the sample.
pub fn sh_kernel(period: usize) -> Result<InterpKernel> {
    check_period(period)?;
    InterpKernel::custom(vec![1.0; period], 0, period, "sh")
}

/// Linear interpolation: a unit-peak triangle of length `2T - 1`, centred.
pub fn li_kernel(period: usize) -> Result<InterpKernel> {
    check_period(period)?;
    let t = period as f64;
    let centre = period - 1;
    let taps = (0..2 * period - 1)
        .map(|j| 1.0 - (j as f64 - centre as f64).abs() / t)
        .collect();
    InterpKernel::custom(taps, centre, period, "li")
}

/// `(n+1)`-fold convolution of a length-`T` rectangle, scaled by `1/T^n`.
pub fn nth_order_hold(order: usize, period: usize) -> Result<InterpKernel> {
    check_period(period)?;
    let rect = vec![1.0; period];
    let mut taps = rect.clone();
    for _ in 0..order {
        taps = convolve(&taps, &rect);
    }
    let scale = (period as f64).powi(order as i32);
    for t in &mut taps {
        *t /= scale;
    }
    let origin = if order == 0 { 0 } else { (taps.len() - 1) / 2 };
    InterpKernel::custom(taps, origin, period, format!("hold:{order}"))
}

fn check_period(period: usize) -> Result<()> {
    if period == 0 {
        return Err(Error::InvalidParameter("period must be at least 1".into()));
    }
    Ok(())
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn check_fits(kernel: &InterpKernel, len: usize) -> Result<()> {
    if kernel.taps.len() > len {
        return Err(Error::KernelTooLong {
            taps: kernel.taps.len(),
            len,
        });
    }
    Ok(())
}

/// Circular convolution of the train with the origin-aligned taps.
pub fn interpolate(train: &Signal, kernel: &InterpKernel) -> Result<Signal> {
    let n = train.len();
    if !n.is_multiple_of(kernel.period) {
        return Err(Error::NotDivisible {
            period: kernel.period,
            len: n,
        });
    }
    check_fits(kernel, n)?;
    let x = train.samples();
    let mut out = vec![0.0; n];
    // Only non-zero train entries contribute; for a sampling train this
    // skips T-1 of every T positions and keeps held values exact.
    for (pos, &value) in x.iter().enumerate() {
        if value == 0.0 {
            continue;
        }
        for (m, &tap) in kernel.taps.iter().enumerate() {
            let idx = (pos + n + m - kernel.origin) % n;
            out[idx] += tap * value;
        }
    }
    Signal::new(out)
}

/// `H(k) = sum_m taps[m] exp(-i 2 pi k (m - origin) / N)` for `k = 0..N`.
pub fn frequency_response(kernel: &InterpKernel, len: usize) -> Result<Vec<Complex64>> {
    if len == 0 {
        return Err(Error::InvalidParameter(
            "response length must be positive".into(),
        ));
    }
    check_fits(kernel, len)?;
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (m, &tap) in kernel.taps.iter().enumerate() {
        buf[(m + len - kernel.origin) % len].re += tap;
    }
    dft::forward_in_place(&mut buf);
    Ok(buf)
}

/// Parsed form of the kernel id grammar: `sh`, `li`, `hold:<n>`, `custom:<path>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelSpec {
    SampleHold,
    Linear,
    Hold(usize),
    Custom(PathBuf),
}

impl KernelSpec {
    pub fn build(&self, period: usize) -> Result<InterpKernel> {
        match self {
            KernelSpec::SampleHold => sh_kernel(period),
            KernelSpec::Linear => li_kernel(period),
            KernelSpec::Hold(order) => nth_order_hold(*order, period),
            KernelSpec::Custom(path) => load_custom(path, period, &self.to_string()),
        }
    }
}

impl FromStr for KernelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sh" => return Ok(KernelSpec::SampleHold),
            "li" => return Ok(KernelSpec::Linear),
            _ => {}
        }
        if let Some(order) = s.strip_prefix("hold:") {
            return order
                .parse()
                .map(KernelSpec::Hold)
                .map_err(|_| Error::InvalidKernel(format!("bad hold order in {s:?}")));
        }
        if let Some(path) = s.strip_prefix("custom:") {
            if path.is_empty() {
                return Err(Error::InvalidKernel("custom kernel needs a path".into()));
            }
            return Ok(KernelSpec::Custom(PathBuf::from(path)));
        }
        Err(Error::InvalidKernel(format!(
            "unknown kernel {s:?} (expected sh, li, hold:<n> or custom:<path>)"
        )))
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::SampleHold => f.write_str("sh"),
            KernelSpec::Linear => f.write_str("li"),
            KernelSpec::Hold(order) => write!(f, "hold:{order}"),
            KernelSpec::Custom(path) => write!(f, "custom:{}", path.display()),
        }
    }
}

/// Read a custom kernel file: whitespace-separated taps, then a line `origin=<int>`.
pub fn load_custom(path: &Path, period: usize, id: &str) -> Result<InterpKernel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_custom(&text, period, id)
}

fn parse_custom(text: &str, period: usize, id: &str) -> Result<InterpKernel> {
    let mut taps = Vec::new();
    let mut origin = None;
    for line in text.lines() {
        let line = line.trim();
        if let Some(value) = line.strip_prefix("origin=") {
            let value = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidKernel(format!("bad origin line {line:?}")))?;
            origin = Some(value);
            continue;
        }
        if origin.is_some() && !line.is_empty() {
            return Err(Error::InvalidKernel("taps after the origin line".into()));
        }
        for token in line.split_whitespace() {
            let tap: f64 = token
                .parse()
                .map_err(|_| Error::InvalidKernel(format!("bad tap {token:?}")))?;
            taps.push(tap);
        }
    }
    let origin = origin.ok_or_else(|| Error::InvalidKernel("missing origin=<int> line".into()))?;
    InterpKernel::custom(taps, origin, period, id)
}
