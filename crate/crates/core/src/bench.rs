//! Deterministic Monte Carlo harness for module-count and noise sweeps.
//!
//! Trial `i` draws its test signal from seed `master_seed + i`, so every
//! trial is independent of scheduling and sweeps can run in parallel while
//! producing identical rows.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{interpolate, InterpKernel, KernelSpec};
use crate::modular::{classical_coeffs, comb_coeffs, max_modules, reconstruct, ModuleCoeffs};
use crate::optimizer;
use crate::signals::{add_noise, gen_bandlimited, sample_train, snr_db, Passband};

/// Per-trial SNRs above this (including exact recovery) are clamped before averaging.
pub const SNR_CLAMP_DB: f64 = 300.0;

const NOISE_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

pub const CSV_HEADER: &str =
    "method,modules,input_snr_db,mean_output_snr_db,std_output_snr_db,trials";

/// How the module weights are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// All weights one.
    Classical,
    /// Impulse-train weights at the full module budget; the module count is ignored.
    Comb,
    /// Least-squares weights from [`optimizer`].
    Optimized,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Classical, Method::Comb, Method::Optimized];

    pub fn name(self) -> &'static str {
        match self {
            Method::Classical => "classical",
            Method::Comb => "comb",
            Method::Optimized => "optimized",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown method {s:?} (expected classical, optimized or comb)"
                ))
            })
    }
}

/// Declarative description of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kernel: KernelSpec,
    pub period: usize,
    pub len: usize,
    /// Band of the random test signals; also the reconstruction passband.
    pub signal_band: Passband,
    pub methods: Vec<Method>,
    pub modules: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    pub noise_snrs_db: Option<Vec<f64>>,
    pub guard_fraction: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            kernel: KernelSpec::SampleHold,
            period: 16,
            len: 2048,
            signal_band: Passband(63),
            methods: vec![Method::Classical, Method::Optimized],
            modules: (1..=8).collect(),
            trials: 100,
            master_seed: 0,
            noise_snrs_db: None,
            guard_fraction: 0.10,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let (t, n) = (self.period, self.len);
        if t == 0 || n % t != 0 {
            return Err(Error::NotDivisible { period: t, len: n });
        }
        let max = max_modules(t);
        if let Some(&m) = self.modules.iter().find(|&&m| m > max) {
            return Err(Error::ModuleCap {
                requested: m,
                period: t,
                max,
            });
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        let limit = Passband::below_nyquist(n, t)?;
        if self.signal_band > limit {
            return Err(Error::InvalidParameter(format!(
                "signal passband {} exceeds N/(2T) - 1 = {}",
                self.signal_band.half_width(),
                limit.half_width()
            )));
        }
        if !(0.0..0.5).contains(&self.guard_fraction) {
            return Err(Error::InvalidParameter(format!(
                "guard fraction must lie in [0, 0.5), got {}",
                self.guard_fraction
            )));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidParameter("no methods selected".into()));
        }
        if self.modules.is_empty() && self.methods.iter().any(|m| *m != Method::Comb) {
            return Err(Error::InvalidParameter("no module counts selected".into()));
        }
        if let Some(snrs) = &self.noise_snrs_db {
            if snrs.iter().any(|s| !s.is_finite()) {
                return Err(Error::InvalidParameter("input SNRs must be finite".into()));
            }
        }
        Ok(())
    }
}

/// One aggregated result line.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub method: Method,
    pub modules: usize,
    /// `None` for noiseless runs.
    pub input_snr_db: Option<f64>,
    pub mean_output_snr_db: f64,
    pub std_output_snr_db: f64,
    pub trials: usize,
}

/// A validated spec with its kernel built, ready to run trials.
struct Harness<'a> {
    spec: &'a SweepSpec,
    kernel: InterpKernel,
}

impl<'a> Harness<'a> {
    fn new(spec: &'a SweepSpec) -> Result<Self> {
        spec.validate()?;
        let kernel = spec.kernel.build(spec.period)?;
        Ok(Harness { spec, kernel })
    }

    fn coeffs(&self, method: Method, modules: usize) -> Result<ModuleCoeffs> {
        let t = self.spec.period;
        match method {
            Method::Classical => classical_coeffs(t, modules),
            Method::Comb => comb_coeffs(t),
            Method::Optimized if modules == 0 => ModuleCoeffs::new(t, Vec::new()),
            Method::Optimized => Ok(optimizer::optimize(
                &self.kernel,
                self.spec.len,
                modules,
                self.spec.signal_band,
            )?
            .coeffs),
        }
    }

    fn trial(&self, coeffs: &ModuleCoeffs, input_snr_db: Option<f64>, index: u64) -> Result<f64> {
        let spec = self.spec;
        let seed = spec.master_seed.wrapping_add(index);
        let clean = gen_bandlimited(spec.len, spec.signal_band, 1.0, seed)?;
        let observed = match input_snr_db {
            Some(snr) => add_noise(&clean, snr, seed ^ NOISE_SEED_SALT)?,
            None => clean.clone(),
        };
        let held = interpolate(&sample_train(&observed, spec.period)?, &self.kernel)?;
        let estimate = reconstruct(&held, coeffs, spec.signal_band)?;
        snr_db(&clean, &estimate, spec.guard_fraction)
    }

    fn row(&self, method: Method, modules: usize, input_snr_db: Option<f64>) -> Result<SweepRow> {
        let coeffs = self.coeffs(method, modules)?;
        let snrs = (0..self.spec.trials as u64)
            .into_par_iter()
            .map(|i| self.trial(&coeffs, input_snr_db, i).map(clamp_snr))
            .collect::<Result<Vec<f64>>>()?;
        let (mean, std) = mean_std(&snrs);
        Ok(SweepRow {
            method,
            modules: coeffs.modules(),
            input_snr_db,
            mean_output_snr_db: mean,
            std_output_snr_db: std,
            trials: snrs.len(),
        })
    }

    /// Module counts to run for a method; comb always runs once at its own length.
    fn module_grid(&self, method: Method) -> Vec<usize> {
        if method == Method::Comb {
            return vec![max_modules(self.spec.period)];
        }
        let mut grid = self.spec.modules.clone();
        grid.sort_unstable();
        grid.dedup();
        grid
    }

    fn methods(&self) -> Vec<Method> {
        let mut methods = self.spec.methods.clone();
        methods.sort();
        methods.dedup();
        methods
    }
}

fn clamp_snr(snr: f64) -> f64 {
    snr.min(SNR_CLAMP_DB)
}

/// Mean and population standard deviation.
fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Output SNR (dB, unclamped) of one trial.
///
/// The signal is drawn from seed `master_seed + trial_index`; noise, when
/// requested, is added before sampling. Comb ignores `modules`.
pub fn run_trial(
    spec: &SweepSpec,
    method: Method,
    modules: usize,
    input_snr_db: Option<f64>,
    trial_index: u64,
) -> Result<f64> {
    let harness = Harness::new(spec)?;
    let coeffs = harness.coeffs(method, modules)?;
    harness.trial(&coeffs, input_snr_db, trial_index)
}

/// Noiseless sweep over `methods x modules`, rows ordered by (method, modules).
pub fn run_module_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let harness = Harness::new(spec)?;
    let mut rows = Vec::new();
    for method in harness.methods() {
        for m in harness.module_grid(method) {
            rows.push(harness.row(method, m, None)?);
        }
    }
    Ok(rows)
}

/// Sweep over input SNRs (outer, in the given order) and methods (inner) at a
/// single module count.
pub fn run_noise_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let harness = Harness::new(spec)?;
    let snrs = match &spec.noise_snrs_db {
        Some(s) if !s.is_empty() => s,
        _ => {
            return Err(Error::InvalidParameter(
                "noise sweep needs at least one input SNR".into(),
            ))
        }
    };
    let modules = match spec.modules.as_slice() {
        [m] => *m,
        _ if spec.methods.iter().all(|m| *m == Method::Comb) => max_modules(spec.period),
        other => {
            return Err(Error::InvalidParameter(format!(
                "noise sweep takes exactly one module count, got {}",
                other.len()
            )))
        }
    };
    let mut rows = Vec::new();
    for &snr in snrs {
        for method in harness.methods() {
            rows.push(harness.row(method, modules, Some(snr))?);
        }
    }
    Ok(rows)
}

fn format_row(row: &SweepRow) -> String {
    let input = match row.input_snr_db {
        Some(v) => format!("{v:.6}"),
        None => "clean".to_string(),
    };
    format!(
        "{},{},{},{:.6},{:.6},{}",
        row.method, row.modules, input, row.mean_output_snr_db, row.std_output_snr_db, row.trials
    )
}

/// CSV text with header, one newline-terminated line per row.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format_row(row));
        out.push('\n');
    }
    out
}

pub fn write_csv(rows: &[SweepRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(to_csv(rows).as_bytes())
        .map_err(|e| Error::io(path, e))
}
