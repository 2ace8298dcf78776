//! Tabulate the design error of unit and optimized weights for every module
//! count, for a few kernels.
use holdfix::optimizer::optimize;
use holdfix::prelude::*;

fn db(err: f64, bins: usize) -> f64 {
    (10.0 * (bins as f64 / err).log10()).min(300.0)
}

fn main() -> holdfix::Result<()> {
    let (n, t) = (2048, 16);
    let band = Passband(63);
    let bins = 2 * band.half_width() + 1;
    println!(
        "passband SNR (dB) from the gain error, N = {n}, T = {t}, K = {}",
        band.half_width()
    );
    for id in ["sh", "li", "hold:2"] {
        let kernel = id.parse::<KernelSpec>()?.build(t)?;
        println!("{id}");
        println!("   M  classical  optimized");
        for m in 1..=max_modules(t) {
            let classical = error_metric(&kernel, &classical_coeffs(t, m)?, n, band)?;
            let opt = optimize(&kernel, n, m, band)?;
            let flag = if opt.rank_deficient {
                "  (rank deficient)"
            } else {
                ""
            };
            println!(
                "  {m:>2} {:>10.2} {:>10.2}{flag}",
                db(classical, bins),
                db(opt.residual, bins)
            );
        }
    }
    Ok(())
}
