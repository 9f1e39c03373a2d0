//! Operators selectable by name on the command line or in a config file.
//!
//! Amplitudes: `one`, `jap` (`<xi>^m`), `compact_x` (`<xi>^m` times a smooth
//! window on the ball of radius 1 about the origin). Phases: `linear`
//! (`x.xi`), `wave` (`x.xi + t|xi|`), `anisotropic` (`x.A xi + |xi|` with
//! `A = diag(2, 1/2)`), or any expression accepted by [`ExprPhase`].

use std::sync::Arc;

use fiolab_core::fio::{
    Amplitude, AnisotropicPhase, CompactXAmplitude, ConstantAmplitude, JapaneseAmplitude, LinearPhase, Phase, WavePhase,
};

use crate::error::{Error, Result};
use crate::expr::ExprPhase;

pub fn amplitude(name: &str, m: f64) -> Result<Arc<dyn Amplitude>> {
    match name {
        "one" => Ok(Arc::new(ConstantAmplitude::one())),
        "jap" | "jap_m" => Ok(Arc::new(JapaneseAmplitude { m })),
        "compact_x" => Ok(Arc::new(CompactXAmplitude { m, center: [0.0, 0.0], radius: 1.0 })),
        other => Err(Error::Usage(format!("unknown amplitude {other:?} (expected one, jap, compact_x)"))),
    }
}

/// A named phase, or an expression when `spec` is not one of the names.
pub fn phase(spec: &str, t: f64, dim: usize) -> Result<Arc<dyn Phase>> {
    match spec {
        "linear" => Ok(Arc::new(LinearPhase)),
        "wave" => Ok(Arc::new(WavePhase { t })),
        "anisotropic" => Ok(Arc::new(AnisotropicPhase::default())),
        expr => Ok(Arc::new(ExprPhase::parse(expr, dim)?)),
    }
}
