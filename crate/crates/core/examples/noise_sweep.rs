//! Output SNR against input SNR with a fixed module budget.
use holdfix::bench::run_noise_sweep;
use holdfix::prelude::*;

fn main() -> holdfix::Result<()> {
    let spec = SweepSpec {
        kernel: KernelSpec::Linear,
        modules: vec![3],
        trials: 20,
        noise_snrs_db: Some(vec![0.0, 20.0, 40.0, 60.0, 80.0]),
        ..SweepSpec::default()
    };
    for row in run_noise_sweep(&spec)? {
        println!(
            "{:<10} in {:>5.1} dB -> out {:>6.2} +- {:.2} dB",
            row.method.name(),
            row.input_snr_db.unwrap_or(f64::INFINITY),
            row.mean_output_snr_db,
            row.std_output_snr_db
        );
    }
    Ok(())
}
