use alloc::vec::Vec;

use num_complex::Complex64;

use super::operator::apply_multiplier;
use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridSpec};

fn require_1d(spec: &GridSpec) -> Result<()> {
    if spec.dim() == 1 {
        Ok(())
    } else {
        Err(Error::Structural(alloc::format!("operator is one-dimensional, grid has dimension {}", spec.dim())))
    }
}

/// `-i sgn(xi)`, with `sgn(0) = 0` and the unpaired Nyquist mode zeroed.
pub fn hilbert_symbol(spec: &GridSpec) -> Vec<Complex64> {
    (0..spec.len())
        .map(|i| {
            let k = spec.wavenumber(i)[0];
            if k == 0 || spec.is_nyquist(i) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -(k.signum() as f64))
            }
        })
        .collect()
}

pub fn hilbert_transform(f: &GridFunction) -> Result<GridFunction> {
    require_1d(f.spec())?;
    apply_multiplier(&hilbert_symbol(f.spec()), f)
}

/// `e^{i |xi|}`.
pub fn sharpness_symbol(spec: &GridSpec) -> Vec<Complex64> {
    (0..spec.len()).map(|i| Complex64::cis(spec.frequency(i)[0].abs())).collect()
}

/// `T f = int e^{i(x xi + |xi|)} f^(xi) dxi / 2 pi`, which equals
/// `(f(x+1) + f(x-1))/2 + i (Hf(x+1) - Hf(x-1))/2`.
pub fn sharpness_operator_1d(f: &GridFunction) -> Result<GridFunction> {
    require_1d(f.spec())?;
    apply_multiplier(&sharpness_symbol(f.spec()), f)
}

/// Sampled indicator of `[a, b]`, with value `1/2` at samples that hit an
/// endpoint exactly so that the Riemann sum equals `b - a`.
pub fn sampled_indicator(spec: &GridSpec, a: f64, b: f64) -> GridFunction {
    let values = (0..spec.len())
        .map(|i| {
            let x = spec.point(i)[0];
            let v = if x == a || x == b {
                0.5
            } else if x > a && x < b {
                1.0
            } else {
                0.0
            };
            Complex64::new(v, 0.0)
        })
        .collect();
    GridFunction::from_parts(*spec, values)
}
