//! Generate a band-limited test signal, sample it and measure what an ideal
//! lowpass alone recovers from the impulse train.
use holdfix::prelude::*;

fn main() -> holdfix::Result<()> {
    let (n, t) = (1024, 8);
    let band = Passband::below_nyquist(n, t)?;
    let x = gen_bandlimited(n, band, 1.0, 7)?;
    println!("N = {n}, T = {t}, passband |k| <= {}", band.half_width());
    println!("signal power {:.4}", x.power());

    let filtered = ideal_lowpass(&x, band)?;
    println!(
        "lowpass leaves it unchanged: SNR {:.1} dB",
        snr_db(&x, &filtered, 0.1)?.min(300.0)
    );

    // The impulse train carries a 1/T copy of the baseband plus replicas.
    let train = sample_train(&x, t)?;
    let baseband = ideal_lowpass(&train, band)?;
    let scaled = Signal::zeros(n)?.combine(0.0, &baseband, t as f64)?;
    println!(
        "T * lowpass(train) vs x: SNR {:.1} dB",
        snr_db(&x, &scaled, 0.1)?.min(300.0)
    );

    let noisy = add_noise(&x, 20.0, 99)?;
    println!(
        "after adding 20 dB noise: SNR {:.2} dB",
        snr_db(&x, &noisy, 0.0)?
    );
    Ok(())
}
