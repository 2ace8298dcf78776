//! Print the built-in hold kernels and their passband droop.
use holdfix::prelude::*;

fn main() -> holdfix::Result<()> {
    let (n, t) = (256, 4);
    for spec in ["sh", "li", "hold:2", "hold:3"] {
        let kernel: InterpKernel = spec.parse::<KernelSpec>()?.build(t)?;
        let h = frequency_response(&kernel, n)?;
        let edge = n / (2 * t);
        let taps: Vec<String> = kernel.taps().iter().map(|v| format!("{v:.4}")).collect();
        println!(
            "{:<7} origin {:>2}  taps [{}]",
            kernel.id(),
            kernel.origin(),
            taps.join(" ")
        );
        println!(
            "        |H(0)| = {:.3}, |H(N/2T)| = {:.3}, |H(N/T)| = {:.3}",
            h[0].norm(),
            h[edge].norm(),
            h[2 * edge].norm()
        );
    }
    Ok(())
}
