//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on flag or validation errors, 1 on runtime
//! errors (I/O, unreadable coefficient files).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bench::{self, Method, SweepSpec};
use crate::error::Error;
use crate::kernels::{interpolate, KernelSpec};
use crate::modular::{classical_coeffs, comb_coeffs, max_modules, reconstruct, ModuleCoeffs};
use crate::optimizer::{self, load_coeffs_for, store_coeffs};
use crate::signals::{add_noise, gen_bandlimited, sample_train, snr_db, Passband};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "holdfix",
    version,
    about = "Modular reconstruction of band-limited signals from hold interpolations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve least-squares module weights and write a coefficient file
    Solve(SolveArgs),
    /// Reconstruct a generated test signal and print the achieved SNR
    Reconstruct(ReconstructArgs),
    /// Sweep the module count on clean signals and write CSV
    SweepModules(SweepArgs),
    /// Sweep the input noise level at a fixed module count and write CSV
    SweepNoise(NoiseArgs),
    /// Print a kernel's taps and origin
    ShowKernel(KernelArgs),
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Interpolation kernel: sh, li, hold:<n> or custom:<path>
    #[arg(long, default_value = "sh")]
    pub kernel: String,
    /// Hold period T in samples
    #[arg(long, default_value_t = 16)]
    pub period: usize,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Signal length N (a multiple of the period)
    #[arg(long, default_value_t = 2048)]
    pub length: usize,
    /// Passband half-width K in DFT bins [default: N/(2T) - 1]
    #[arg(long)]
    pub passband: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Number of modules M (at most floor(T/2))
    #[arg(long)]
    pub modules: usize,
    /// Output coefficient file (JSON)
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Weighting method: classical, optimized or comb
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    /// Number of modules M [default: floor(T/2)]
    #[arg(long)]
    pub modules: Option<usize>,
    /// Use optimized weights from this coefficient file instead of solving
    #[arg(long)]
    pub coeff_file: Option<PathBuf>,
    /// Seed of the generated test signal
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Add white noise at this input SNR (dB) before sampling
    #[arg(long, allow_hyphen_values = true)]
    pub snr: Option<f64>,
    /// Fraction of samples ignored at each end when measuring SNR
    #[arg(long, default_value_t = 0.10)]
    pub guard: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Number of random signals per row
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Master seed; trial i uses seed + i
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated methods: classical, optimized, comb
    #[arg(long, default_value = "classical,optimized", value_parser = parse_method, value_delimiter = ',')]
    pub methods: Vec<Method>,
    /// Module counts: a range like 1..8, or a comma list [default: 1..floor(T/2)]
    #[arg(long, value_parser = parse_module_list)]
    pub modules: Option<ModuleList>,
    /// Fraction of samples ignored at each end when measuring SNR
    #[arg(long, default_value_t = 0.10)]
    pub guard: f64,
    /// Output CSV path [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Number of random signals per row
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Master seed; trial i uses seed + i
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated methods: classical, optimized, comb
    #[arg(long, default_value = "classical,optimized", value_parser = parse_method, value_delimiter = ',')]
    pub methods: Vec<Method>,
    /// Module count M
    #[arg(long, default_value_t = 5)]
    pub modules: usize,
    /// Comma-separated input SNRs in dB
    #[arg(
        long,
        default_value = "0,10,20,30,40,50,60,70,80",
        value_parser = parse_snr,
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub snrs: Vec<f64>,
    /// Fraction of samples ignored at each end when measuring SNR
    #[arg(long, default_value_t = 0.10)]
    pub guard: f64,
    /// Output CSV path [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.trim().parse().map_err(|e: Error| e.to_string())
}

/// Module counts given on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleList(pub Vec<usize>);

fn parse_module_list(s: &str) -> Result<ModuleList, String> {
    parse_modules(s).map(ModuleList)
}

/// `3`, `1,2,5`, `1..8` or `1..=8` (both range forms are inclusive).
pub fn parse_modules(s: &str) -> Result<Vec<usize>, String> {
    let s = s.trim();
    if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|_| format!("bad range start in {s:?}"))?;
        let hi: usize = hi
            .trim()
            .parse()
            .map_err(|_| format!("bad range end in {s:?}"))?;
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| format!("bad module count {v:?}"))
        })
        .collect()
}

fn parse_snr(s: &str) -> Result<f64, String> {
    let v = s.trim();
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("bad SNR {v:?}")),
    }
}

/// A failure tagged with its exit code and, for validation errors, the flag at fault.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(flag: &str, message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("{flag}: {message}"),
        }
    }

    fn from_error(err: Error, flag: &str) -> Self {
        if err.is_validation() {
            Failure::usage(flag, err)
        } else {
            Failure {
                code: EXIT_RUNTIME,
                message: err.to_string(),
            }
        }
    }
}

/// Flag most responsible for a library validation error.
fn blame(err: &Error) -> &'static str {
    match err {
        Error::ModuleCap { .. } => "--modules",
        Error::NotDivisible { .. } => "--period/--length",
        Error::PassbandOutOfRange { .. } => "--passband",
        Error::InvalidKernel(_) | Error::KernelTooLong { .. } => "--kernel",
        Error::MetaMismatch(_) => "--coeff-file",
        _ => "arguments",
    }
}

fn check<T>(result: crate::Result<T>) -> Result<T, Failure> {
    result.map_err(|e| {
        let flag = blame(&e);
        Failure::from_error(e, flag)
    })
}

fn check_flag<T>(result: crate::Result<T>, flag: &str) -> Result<T, Failure> {
    result.map_err(|e| Failure::from_error(e, flag))
}

fn kernel_spec(args: &KernelArgs) -> Result<KernelSpec, Failure> {
    if args.period == 0 {
        return Err(Failure::usage("--period", "must be at least 1"));
    }
    args.kernel
        .parse::<KernelSpec>()
        .map_err(|e| Failure::usage("--kernel", e))
}

fn passband(grid: &GridArgs) -> Result<Passband, Failure> {
    let (n, t) = (grid.length, grid.kernel.period);
    if n % t != 0 {
        return Err(Failure::usage(
            "--length",
            Error::NotDivisible { period: t, len: n },
        ));
    }
    match grid.passband {
        Some(k) => {
            let band = Passband(k);
            check_flag(band.check(n), "--passband")?;
            Ok(band)
        }
        None => check_flag(Passband::below_nyquist(n, t), "--passband"),
    }
}

fn check_modules(modules: usize, period: usize) -> Result<(), Failure> {
    let max = max_modules(period);
    if modules > max {
        return Err(Failure::usage(
            "--modules",
            Error::ModuleCap {
                requested: modules,
                period,
                max,
            },
        ));
    }
    Ok(())
}

fn check_guard(guard: f64) -> Result<(), Failure> {
    if !(0.0..0.5).contains(&guard) {
        return Err(Failure::usage(
            "--guard",
            format!("must lie in [0, 0.5), got {guard}"),
        ));
    }
    Ok(())
}

fn run_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let spec = kernel_spec(&args.grid.kernel)?;
    let band = passband(&args.grid)?;
    check_modules(args.modules, args.grid.kernel.period)?;
    if args.modules == 0 {
        return Err(Failure::usage("--modules", "must be at least 1"));
    }
    let kernel = check(spec.build(args.grid.kernel.period))?;
    let solution = check(optimizer::optimize(
        &kernel,
        args.grid.length,
        args.modules,
        band,
    ))?;
    check(store_coeffs(&solution, &args.out))?;
    let _ = writeln!(out, "coefficients: {:?}", solution.coeffs.values());
    let _ = writeln!(out, "residual: {:e}", solution.residual);
    if solution.rank_deficient {
        let _ = writeln!(
            out,
            "warning: design matrix is rank deficient; minimum-norm solution written"
        );
    }
    Ok(())
}

fn run_reconstruct(args: &ReconstructArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let t = args.grid.kernel.period;
    let n = args.grid.length;
    let spec = kernel_spec(&args.grid.kernel)?;
    let band = passband(&args.grid)?;
    check_guard(args.guard)?;
    let modules = args.modules.unwrap_or(max_modules(t));
    check_modules(modules, t)?;
    if args.coeff_file.is_some() && args.method != Method::Optimized {
        return Err(Failure::usage(
            "--coeff-file",
            "only applies to --method optimized",
        ));
    }
    let kernel = check(spec.build(t))?;
    let coeffs: ModuleCoeffs = match args.method {
        Method::Classical => check(classical_coeffs(t, modules))?,
        Method::Comb => check(comb_coeffs(t))?,
        Method::Optimized => match &args.coeff_file {
            Some(path) => check(load_coeffs_for(path, &kernel, n, band))?.coeffs,
            None if modules == 0 => check(ModuleCoeffs::new(t, Vec::new()))?,
            None => check(optimizer::optimize(&kernel, n, modules, band))?.coeffs,
        },
    };
    let clean = check(gen_bandlimited(n, band, 1.0, args.seed))?;
    let observed = match args.snr {
        Some(snr) => check_flag(
            add_noise(&clean, snr, args.seed ^ 0x9e37_79b9_7f4a_7c15),
            "--snr",
        )?,
        None => clean.clone(),
    };
    let held = check(interpolate(&check(sample_train(&observed, t))?, &kernel))?;
    let estimate = check(reconstruct(&held, &coeffs, band))?;
    let snr = check(snr_db(&clean, &estimate, args.guard))?;
    let _ = writeln!(
        out,
        "method: {} ({} modules)",
        args.method,
        coeffs.modules()
    );
    let _ = writeln!(out, "snr_db: {snr:.6}");
    Ok(())
}

fn emit_csv(
    rows: &[bench::SweepRow],
    path: Option<&PathBuf>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    match path {
        Some(path) => check(bench::write_csv(rows, path)),
        None => out
            .write_all(bench::to_csv(rows).as_bytes())
            .map_err(|e| Failure {
                code: EXIT_RUNTIME,
                message: format!("writing CSV to stdout: {e}"),
            }),
    }
}

fn sweep_spec(
    grid: &GridArgs,
    methods: &[Method],
    modules: Vec<usize>,
    trials: usize,
    seed: u64,
    guard: f64,
) -> Result<SweepSpec, Failure> {
    let kernel = kernel_spec(&grid.kernel)?;
    let band = passband(grid)?;
    check_guard(guard)?;
    for &m in &modules {
        check_modules(m, grid.kernel.period)?;
    }
    if trials == 0 {
        return Err(Failure::usage("--trials", "must be at least 1"));
    }
    let limit = check_flag(
        Passband::below_nyquist(grid.length, grid.kernel.period),
        "--passband",
    )?;
    if band > limit {
        return Err(Failure::usage(
            "--passband",
            format!(
                "signal passband must not exceed N/(2T) - 1 = {}",
                limit.half_width()
            ),
        ));
    }
    Ok(SweepSpec {
        kernel,
        period: grid.kernel.period,
        len: grid.length,
        signal_band: band,
        methods: methods.to_vec(),
        modules,
        trials,
        master_seed: seed,
        noise_snrs_db: None,
        guard_fraction: guard,
    })
}

fn run_sweep_modules(args: &SweepArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let modules = args
        .modules
        .clone()
        .map(|m| m.0)
        .unwrap_or_else(|| (1..=max_modules(args.grid.kernel.period)).collect());
    let spec = sweep_spec(
        &args.grid,
        &args.methods,
        modules,
        args.trials,
        args.seed,
        args.guard,
    )?;
    let rows = check(bench::run_module_sweep(&spec))?;
    emit_csv(&rows, args.out.as_ref(), out)
}

fn run_sweep_noise(args: &NoiseArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let mut spec = sweep_spec(
        &args.grid,
        &args.methods,
        vec![args.modules],
        args.trials,
        args.seed,
        args.guard,
    )?;
    if args.snrs.is_empty() {
        return Err(Failure::usage("--snrs", "needs at least one value"));
    }
    spec.noise_snrs_db = Some(args.snrs.clone());
    let rows = check(bench::run_noise_sweep(&spec))?;
    emit_csv(&rows, args.out.as_ref(), out)
}

fn run_show_kernel(args: &KernelArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let kernel = check(kernel_spec(args)?.build(args.period))?;
    let taps: Vec<String> = kernel.taps().iter().map(|t| t.to_string()).collect();
    let _ = writeln!(out, "id: {}", kernel.id());
    let _ = writeln!(out, "period: {}", kernel.period());
    let _ = writeln!(out, "taps: {}", taps.join(" "));
    let _ = writeln!(out, "origin: {}", kernel.origin());
    Ok(())
}

/// Parse `argv` (including the program name) and run, writing to the given streams.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => run_solve(a, out),
        Command::Reconstruct(a) => run_reconstruct(a, out),
        Command::SweepModules(a) => run_sweep_modules(a, out),
        Command::SweepNoise(a) => run_sweep_noise(a, out),
        Command::ShowKernel(a) => run_show_kernel(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
