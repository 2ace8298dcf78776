//! Least-squares design of module weights.
//!
//! With `Ĥ = H/T` and the paired replica response
//! `H_j(k) = Ĥ(k - jN/T) + Ĥ(k + jN/T)`, the passband gain is
//! `G(k) = Ĥ(k) + sum_j c_j H_j(k)`. Driving `G` to one over the passband is
//! the overdetermined complex system `sum_j c_j H_j(k) = 1 - Ĥ(k)`, which is
//! split into real and imaginary row blocks so the weights stay real.
//!
//! Only `k = 0..=K` is assembled: real taps make the `-k` rows the complex
//! conjugates of the `+k` rows. Rows with `k >= 1` are scaled by `sqrt(2)` so
//! that `||A c - b||^2` is exactly the two-sided error `sum_{|k|<=K} |G(k) - 1|^2`.
//!
//! Solutions can be persisted as a small JSON lookup table so the weights for
//! a given interpolator are computed once.

use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dft;
use crate::error::{Error, Result};
use crate::kernels::{frequency_response, InterpKernel};
use crate::modular::{max_modules, ModuleCoeffs};
use crate::signals::Passband;

pub const COEFF_SCHEMA: &str = "holdfix-coeffs/1";

/// Paired replica response `H_j(k)` of the normalized kernel.
pub fn replica_response(kernel: &InterpKernel, len: usize, j: usize, k: i64) -> Result<Complex64> {
    check_modules(kernel.period(), len, j)?;
    if j == 0 {
        return Err(Error::InvalidParameter(
            "replica index must be at least 1".into(),
        ));
    }
    let response = frequency_response(kernel, len)?;
    Ok(replica_from_response(&response, kernel.period(), j, k))
}

fn replica_from_response(response: &[Complex64], period: usize, j: usize, k: i64) -> Complex64 {
    let n = response.len();
    let shift = (j * n / period) as i64;
    (response[dft::wrap_bin(k - shift, n)] + response[dft::wrap_bin(k + shift, n)]) / period as f64
}

fn check_modules(period: usize, len: usize, modules: usize) -> Result<()> {
    if !len.is_multiple_of(period) {
        return Err(Error::NotDivisible { period, len });
    }
    let max = max_modules(period);
    if modules > max {
        return Err(Error::ModuleCap {
            requested: modules,
            period,
            max,
        });
    }
    Ok(())
}

/// Where a design system or solution came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignMeta {
    pub kernel_id: String,
    pub period: usize,
    pub len: usize,
    pub passband: Passband,
}

/// Real-stacked least-squares system `A c ≈ b`.
///
/// Rows `0..=K` hold real parts for `k = 0..=K`, rows `K+1..=2K+1` the
/// imaginary parts. Rows with `k >= 1` carry a `sqrt(2)` weight.
#[derive(Debug, Clone)]
pub struct DesignSystem {
    matrix: DMatrix<f64>,
    target: DVector<f64>,
    meta: DesignMeta,
}

impl DesignSystem {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn target(&self) -> &DVector<f64> {
        &self.target
    }

    pub fn meta(&self) -> &DesignMeta {
        &self.meta
    }

    pub fn modules(&self) -> usize {
        self.matrix.ncols()
    }
}

pub fn assemble_system(
    kernel: &InterpKernel,
    len: usize,
    modules: usize,
    passband: Passband,
) -> Result<DesignSystem> {
    let period = kernel.period();
    check_modules(period, len, modules)?;
    if modules == 0 {
        return Err(Error::InvalidParameter(
            "design needs at least one module".into(),
        ));
    }
    passband.check(len)?;
    let response = frequency_response(kernel, len)?;
    let half = passband.half_width();
    let rows = half + 1;
    let mut matrix = DMatrix::zeros(2 * rows, modules);
    let mut target = DVector::zeros(2 * rows);
    for k in 0..rows {
        let weight = if k == 0 {
            1.0
        } else {
            std::f64::consts::SQRT_2
        };
        for j in 1..=modules {
            let h = replica_from_response(&response, period, j, k as i64) * weight;
            matrix[(k, j - 1)] = h.re;
            matrix[(rows + k, j - 1)] = h.im;
        }
        let beta = (Complex64::new(1.0, 0.0) - response[k] / period as f64) * weight;
        target[k] = beta.re;
        target[rows + k] = beta.im;
    }
    Ok(DesignSystem {
        matrix,
        target,
        meta: DesignMeta {
            kernel_id: kernel.id().to_string(),
            period,
            len,
            passband,
        },
    })
}

/// Solved module weights with their two-sided passband error.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSolution {
    pub coeffs: ModuleCoeffs,
    /// `sum_{|k|<=K} |G(k) - 1|^2` at the solution.
    pub residual: f64,
    pub kernel_id: String,
    pub len: usize,
    pub passband: Passband,
    /// The design matrix lacked full column rank; `coeffs` is the
    /// minimum-norm least-squares solution.
    pub rank_deficient: bool,
}

impl CoeffSolution {
    /// Reject use with a kernel, length or passband other than the one solved for.
    pub fn check_matches(
        &self,
        kernel: &InterpKernel,
        len: usize,
        passband: Passband,
    ) -> Result<()> {
        let mut problems = Vec::new();
        if self.kernel_id != kernel.id() {
            problems.push(format!("kernel {:?} vs {:?}", self.kernel_id, kernel.id()));
        }
        if self.coeffs.period() != kernel.period() {
            problems.push(format!(
                "period {} vs {}",
                self.coeffs.period(),
                kernel.period()
            ));
        }
        if self.len != len {
            problems.push(format!("length {} vs {}", self.len, len));
        }
        if self.passband != passband {
            problems.push(format!(
                "passband {} vs {}",
                self.passband.half_width(),
                passband.half_width()
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::MetaMismatch(format!(
                "coefficients were solved for a different setup: {}",
                problems.join(", ")
            )))
        }
    }
}

/// Minimum-norm least-squares solution via SVD.
pub fn solve_coefficients(system: &DesignSystem) -> Result<CoeffSolution> {
    let a = &system.matrix;
    let b = &system.target;
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    let tol = sigma_max * a.nrows().max(a.ncols()) as f64 * f64::EPSILON;
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    let c = if rank == 0 {
        DVector::zeros(a.ncols())
    } else {
        svd.solve(b, tol)
            .map_err(|e| Error::InvalidParameter(format!("least-squares solve failed: {e}")))?
    };
    let residual = (a * &c - b).norm_squared();
    let meta = &system.meta;
    Ok(CoeffSolution {
        coeffs: ModuleCoeffs::new(meta.period, c.iter().copied().collect())?,
        residual,
        kernel_id: meta.kernel_id.clone(),
        len: meta.len,
        passband: meta.passband,
        rank_deficient: rank < a.ncols(),
    })
}

/// Assemble and solve in one step.
pub fn optimize(
    kernel: &InterpKernel,
    len: usize,
    modules: usize,
    passband: Passband,
) -> Result<CoeffSolution> {
    solve_coefficients(&assemble_system(kernel, len, modules, passband)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct CoeffRecord {
    schema: String,
    kernel_id: String,
    #[serde(rename = "T")]
    period: usize,
    #[serde(rename = "N")]
    len: usize,
    #[serde(rename = "K")]
    passband: usize,
    #[serde(rename = "M")]
    modules: usize,
    coefficients: Vec<f64>,
    residual: f64,
    #[serde(default)]
    rank_deficient: bool,
}

/// Compact JSON with every float written to 17 significant digits.
struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Write the solution as a lookup-table file, replacing any existing file atomically.
pub fn store_coeffs(solution: &CoeffSolution, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let record = CoeffRecord {
        schema: COEFF_SCHEMA.to_string(),
        kernel_id: solution.kernel_id.clone(),
        period: solution.coeffs.period(),
        len: solution.len,
        passband: solution.passband.half_width(),
        modules: solution.coeffs.modules(),
        coefficients: solution.coeffs.values().to_vec(),
        residual: solution.residual,
        rank_deficient: solution.rank_deficient,
    };
    let mut bytes = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut bytes, FullPrecision);
    record
        .serialize(&mut ser)
        .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
    bytes.push(b'\n');

    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(&bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn load_coeffs(path: impl AsRef<Path>) -> Result<CoeffSolution> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let malformed = |reason: String| Error::CoeffFile {
        path: path.to_path_buf(),
        reason,
    };
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| malformed(e.to_string()))?;
    match value.get("schema").and_then(|s| s.as_str()) {
        Some(COEFF_SCHEMA) => {}
        Some(other) => {
            return Err(Error::Schema {
                found: other.to_string(),
                expected: COEFF_SCHEMA,
            })
        }
        None => return Err(malformed("missing string field `schema`".into())),
    }
    let record: CoeffRecord =
        serde_json::from_value(value).map_err(|e| malformed(e.to_string()))?;
    if record.modules != record.coefficients.len() {
        return Err(malformed(format!(
            "M = {} but {} coefficients listed",
            record.modules,
            record.coefficients.len()
        )));
    }
    if record.period == 0 || !record.len.is_multiple_of(record.period) {
        return Err(malformed(format!(
            "T = {} does not divide N = {}",
            record.period, record.len
        )));
    }
    Ok(CoeffSolution {
        coeffs: ModuleCoeffs::new(record.period, record.coefficients)?,
        residual: record.residual,
        kernel_id: record.kernel_id,
        len: record.len,
        passband: Passband(record.passband),
        rank_deficient: record.rank_deficient,
    })
}

/// Load a lookup-table entry and verify it was solved for this setup.
pub fn load_coeffs_for(
    path: impl AsRef<Path>,
    kernel: &InterpKernel,
    len: usize,
    passband: Passband,
) -> Result<CoeffSolution> {
    let solution = load_coeffs(path)?;
    solution.check_matches(kernel, len, passband)?;
    Ok(solution)
}
