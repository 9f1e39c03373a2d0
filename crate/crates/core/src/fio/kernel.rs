use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::operator::{FioOperator, Window};
use crate::error::{Error, Result};
use crate::fit::fit_line;
use crate::grid::{dot, inverse_transform, GridFunction, GridSpec, Point, Spectrum};
use crate::spaces::japanese_bracket;

/// Number of logarithmic bins in `4 <= <y> <= L/4`.
pub const DECAY_BINS: usize = 12;
/// Bins whose maximum falls below this fraction of `max |K|` are dropped.
pub const NOISE_FLOOR: f64 = 1e-12;

/// `K(y) = int e^{-i y.xi} psi_0(xi) a(x0, xi) e^{i(phi(x0, xi) - x0.xi)} dxi`
/// sampled at the grid points `y`. Requires the `Low` window.
pub fn low_frequency_kernel(op: &FioOperator, spec: &GridSpec, x0: Point) -> Result<GridFunction> {
    if op.window() != Window::Low {
        return Err(Error::Parameter(format!("kernel decay needs the Low window, got {:?}", op.window())));
    }
    let coeffs = (0..spec.len())
        .map(|i| {
            let xi = spec.frequency(i);
            let w = op.window().weight(op.profile(), &xi);
            if w == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let theta = if xi == [0.0, 0.0] { 0.0 } else { op.phase().eval(&x0, &xi) - dot(&x0, &xi) };
            let v = op.amplitude().eval(&x0, &xi) * Complex64::cis(theta) * w;
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::Evaluation { what: "low-frequency symbol", x: x0, xi })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    // inverse_transform evaluates sum e^{+i x.xi}; K(y) is that sum at x = -y.
    Ok(reflect(&inverse_transform(&Spectrum::new(*spec, coeffs)?)))
}

fn reflect(g: &GridFunction) -> GridFunction {
    let spec = *g.spec();
    let n = spec.samples();
    let flip = |i: usize| (n - i) % n;
    let values = (0..spec.len())
        .map(|idx| match spec.dim() {
            1 => g.values()[flip(idx)],
            _ => g.values()[flip(idx / n) * n + flip(idx % n)],
        })
        .collect();
    GridFunction::from_parts(spec, values)
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelDecay {
    /// Least-squares slope of `log max|K|` against `log <y>` over the bins.
    pub slope: f64,
    pub intercept: f64,
    /// `sup_y <y>^{n + 1/2} |K(y)|`.
    pub envelope: f64,
    /// `max |K|`.
    pub peak: f64,
    /// `(log <y>_bin, log max_bin |K|)` for the bins that were fitted.
    pub bins: Vec<(f64, f64)>,
}

/// Fit the decay of [`low_frequency_kernel`] on `4 <= <y> <= L/4`.
///
/// The fit uses the per-bin maximum of `|K|` over [`DECAY_BINS`]
/// logarithmic bins (the kernel oscillates, so raw samples would mostly fit
/// its zeros). Bins below [`NOISE_FLOOR`] times the peak are round-off and
/// are dropped; if fewer than two bins remain the kernel has already decayed
/// to round-off within the window, and the slope is taken from the line
/// through the first bin and the floor at the far end of the window.
pub fn low_freq_kernel_decay(op: &FioOperator, spec: &GridSpec, x0: Point) -> Result<KernelDecay> {
    let kernel = low_frequency_kernel(op, spec, x0)?;
    let dim = spec.dim() as f64;
    let peak = kernel.max_abs();
    if peak < 1e-14 {
        return Err(Error::InsufficientRange(format!("kernel maximum {peak:e} is below 1e-14")));
    }
    let (lo, hi) = (4.0f64, 0.25 * spec.length());
    if hi <= lo {
        return Err(Error::InsufficientRange(format!("box length {} leaves no fitting window", spec.length())));
    }
    let mut bin_max = alloc::vec![0.0f64; DECAY_BINS];
    let mut envelope = 0.0f64;
    let log_span = (hi / lo).ln();
    for (i, z) in kernel.values().iter().enumerate() {
        let y = spec.point(i);
        let b = japanese_bracket(&y);
        envelope = envelope.max(b.powf(dim + 0.5) * z.norm());
        if b >= lo && b <= hi {
            let k = (((b / lo).ln() / log_span) * DECAY_BINS as f64).floor() as usize;
            let k = k.min(DECAY_BINS - 1);
            bin_max[k] = bin_max[k].max(z.norm());
        }
    }
    let centre = |k: usize| lo.ln() + (k as f64 + 0.5) / DECAY_BINS as f64 * log_span;
    let floor = NOISE_FLOOR * peak;
    let bins: Vec<(f64, f64)> =
        bin_max.iter().enumerate().filter(|(_, &m)| m >= floor).map(|(k, &m)| (centre(k), m.ln())).collect();
    let (slope, intercept) = match bins.len() {
        0 => (f64::NEG_INFINITY, floor.ln()),
        1 => {
            let end = hi.ln();
            let s = (floor.ln() - bins[0].1) / (end - bins[0].0);
            (s, bins[0].1 - s * bins[0].0)
        }
        _ => fit_line(&bins).ok_or_else(|| Error::InsufficientRange("degenerate fit".into()))?,
    };
    Ok(KernelDecay { slope, intercept, envelope, peak, bins })
}
