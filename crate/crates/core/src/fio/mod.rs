//! Fourier integral operators
//!
//! ```text
//! T f(x) = (2 pi)^-n int a(x, xi) e^{i phi(x, xi)} f^(xi) dxi
//!        ~ L^-n sum_k a(x, xi_k) e^{i phi(x, xi_k)} F(xi_k)
//! ```
//!
//! applied by direct quadrature over the frequency lattice ([`apply_fio`],
//! cost `O(N^{2n})`) or, when the amplitude does not depend on `x` and the
//! phase is `x.xi + phi(0, xi)`, as a Fourier multiplier ([`apply`],
//! [`apply_multiplier`]). Homogeneous phases are singular at `xi = 0`; the
//! quadrature uses phase 0 there and relies on windows to suppress the term.

mod amplitude;
mod kernel;
mod one_dim;
mod operator;
mod phase;

pub use amplitude::{amplitude_seminorm_probe, Amplitude, CompactXAmplitude, ConstantAmplitude, JapaneseAmplitude};
pub use kernel::{low_freq_kernel_decay, low_frequency_kernel, KernelDecay, DECAY_BINS, NOISE_FLOOR};
pub use one_dim::{hilbert_symbol, hilbert_transform, sampled_indicator, sharpness_operator_1d, sharpness_symbol};
pub use operator::{apply, apply_fio, apply_multiplier, critical_order, split_low_high, FioOperator, FioPlan, Window};
pub use phase::{
    homogeneity_defect, phase_class_probe, snd_margin, AnisotropicPhase, LinearPhase, MixedHessian, Phase, ShiftedPhase,
    WavePhase, XI_STEP, X_STEP,
};
