//! Monte-Carlo sweep of output SNR against module count.
//!
//! Pass a trial count as the first argument (default 20).
use holdfix::bench::{run_module_sweep, to_csv};
use holdfix::prelude::*;

fn main() -> holdfix::Result<()> {
    let trials = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(20);
    let spec = SweepSpec {
        kernel: KernelSpec::SampleHold,
        methods: vec![Method::Classical, Method::Comb, Method::Optimized],
        modules: (1..=8).collect(),
        trials,
        ..SweepSpec::default()
    };
    print!("{}", to_csv(&run_module_sweep(&spec)?));
    Ok(())
}
