//! Reconstruction of band-limited signals from hold-type interpolations.
//!
//! A sampled signal that has been interpolated by a sample-and-hold, linear
//! or higher-order hold is multiplied by a bank of cosine "modules" at the
//! harmonics of the sampling rate and then ideally lowpass filtered. Each
//! module folds one pair of spectral replicas back into the passband. The
//! [`optimizer`] picks real module weights by least squares so that the
//! folded replica sum is as close to unity as possible, which typically
//! reaches far higher SNR with fewer modules than unit weights.
//!
//! ```
//! use holdfix::prelude::*;
//!
//! let (n, t) = (512, 8);
//! let band = Passband::below_nyquist(n, t).unwrap();
//! let x = gen_bandlimited(n, band, 1.0, 42).unwrap();
//! let held = interpolate(&sample_train(&x, t).unwrap(), &sh_kernel(t).unwrap()).unwrap();
//! let y = reconstruct(&held, &comb_coeffs(t).unwrap(), band).unwrap();
//! assert!(snr_db(&x, &y, 0.1).unwrap() > 200.0);
//! ```

pub mod bench;
pub mod cli;
mod dft;
pub mod error;
pub mod kernels;
pub mod modular;
pub mod optimizer;
pub mod signals;

pub use error::{Error, Result};
pub use rustfft::num_complex::Complex64;

pub mod prelude {
    pub use crate::bench::{Method, SweepRow, SweepSpec};
    pub use crate::error::{Error, Result};
    pub use crate::kernels::{
        frequency_response, interpolate, li_kernel, nth_order_hold, sh_kernel, InterpKernel,
        KernelSpec,
    };
    pub use crate::modular::{
        classical_coeffs, comb_coeffs, error_metric, max_modules, modulation_kernel, passband_gain,
        reconstruct, ModuleCoeffs,
    };
    pub use crate::optimizer::{
        assemble_system, load_coeffs, solve_coefficients, store_coeffs, CoeffSolution, DesignSystem,
    };
    pub use crate::signals::{
        add_noise, gen_bandlimited, ideal_lowpass, sample_train, snr_db, Passband, Signal,
    };
}
