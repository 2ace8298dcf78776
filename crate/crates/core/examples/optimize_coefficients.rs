//! Solve least-squares module weights, store them as JSON, load them back
//! and use them for reconstruction.
use holdfix::optimizer::load_coeffs_for;
use holdfix::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, t, m) = (2048, 16, 2);
    let kernel = sh_kernel(t)?;
    let band = Passband(63);

    let system = assemble_system(&kernel, n, m, band)?;
    println!(
        "design matrix {}x{}",
        system.matrix().nrows(),
        system.matrix().ncols()
    );
    let solution = solve_coefficients(&system)?;
    println!("weights {:?}", solution.coeffs.values());
    println!(
        "error: optimized {:.3e}, unit weights {:.3e}",
        solution.residual,
        error_metric(&kernel, &classical_coeffs(t, m)?, n, band)?
    );

    let dir = std::env::temp_dir().join("holdfix-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("sh16.json");
    store_coeffs(&solution, &path)?;
    println!("wrote {}", path.display());
    print!("{}", std::fs::read_to_string(&path)?);

    let loaded = load_coeffs_for(&path, &kernel, n, band)?;
    let x = gen_bandlimited(n, band, 1.0, 11)?;
    let held = interpolate(&sample_train(&x, t)?, &kernel)?;
    let y = reconstruct(&held, &loaded.coeffs, band)?;
    println!("reconstruction SNR {:.2} dB", snr_db(&x, &y, 0.1)?);
    Ok(())
}
