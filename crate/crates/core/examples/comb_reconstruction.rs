//! Full-budget comb modulation recovers a band-limited signal exactly from
//! its sample-and-hold interpolation.
use holdfix::prelude::*;

fn main() -> holdfix::Result<()> {
    let (n, t) = (1024, 16);
    let band = Passband::below_nyquist(n, t)?;
    let x = gen_bandlimited(n, band, 1.0, 3)?;
    let held = interpolate(&sample_train(&x, t)?, &sh_kernel(t)?)?;

    let direct = ideal_lowpass(&held, band)?;
    println!(
        "lowpass only:         {:>7.2} dB",
        snr_db(&x, &direct, 0.1)?
    );

    for m in [1, 4, max_modules(t)] {
        let y = reconstruct(&held, &classical_coeffs(t, m)?, band)?;
        println!(
            "unit weights, M = {m}:  {:>7.2} dB",
            snr_db(&x, &y, 0.1)?.min(300.0)
        );
    }
    let comb = comb_coeffs(t)?;
    let y = reconstruct(&held, &comb, band)?;
    println!("comb weights {:?}", comb.values());
    println!(
        "comb:                 {:>7.2} dB",
        snr_db(&x, &y, 0.1)?.min(300.0)
    );
    Ok(())
}
