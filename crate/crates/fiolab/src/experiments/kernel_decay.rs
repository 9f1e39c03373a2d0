//! Decay of the kernel of `psi_0(D)`-windowed operators with amplitude 1.
//! The kernel is a smooth function of compact frequency support, so it
//! decays faster than any power; the fit must at least beat `<y>^{-(n+0.4)}`.

use std::sync::Arc;

use fiolab_core::fio::{
    low_freq_kernel_decay, ConstantAmplitude, FioOperator, KernelDecay, LinearPhase, Phase, WavePhase, Window,
};
use fiolab_core::GridSpec;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::{Output, Summary, Table};

/// The fitted slope must not exceed `-(n + DECAY_MARGIN)`.
pub const DECAY_MARGIN: f64 = 0.4;

#[derive(Clone, Debug, PartialEq)]
pub struct DecayRow {
    pub dim: usize,
    pub phase: &'static str,
    pub fit: KernelDecay,
    pub threshold: f64,
    pub ok: bool,
}

/// Both phases (`linear`, `wave` at time `t`) in one and two dimensions on
/// boxes of the configured `L` and `N`.
pub fn kernel_decay_experiment(config: &ExperimentConfig) -> Result<Vec<DecayRow>> {
    config.validate()?;
    let margin = config.tolerance("decay_margin", DECAY_MARGIN);
    let mut rows = Vec::new();
    for dim in [1, 2] {
        let spec = GridSpec::new(dim, config.grid.length, config.grid.samples)?;
        let phases: [(&'static str, Arc<dyn Phase>); 2] =
            [("linear", Arc::new(LinearPhase)), ("wave", Arc::new(WavePhase { t: config.operator.t }))];
        for (name, phase) in phases {
            let op = FioOperator::new(Arc::new(ConstantAmplitude::one()), phase).with_window(Window::Low);
            let fit = low_freq_kernel_decay(&op, &spec, [0.0, 0.0])?;
            let threshold = -(dim as f64 + margin);
            let ok = fit.slope <= threshold;
            rows.push(DecayRow { dim, phase: name, fit, threshold, ok });
        }
    }
    Ok(rows)
}

pub fn to_output(rows: &[DecayRow], config_hash: &str) -> Output {
    let mut table = Table::new("kernel_decay", &["n", "phase", "slope", "threshold", "envelope", "peak", "bins", "config_hash"]);
    let mut summary = Summary::new("kernel-decay", config_hash);
    for r in rows {
        table.push(vec![
            r.dim.to_string(),
            r.phase.into(),
            r.fit.slope.to_string(),
            r.threshold.to_string(),
            r.fit.envelope.to_string(),
            r.fit.peak.to_string(),
            r.fit.bins.len().to_string(),
            config_hash.into(),
        ]);
        summary.verdict(format!("decay[n={},{}]", r.dim, r.phase), r.ok);
        summary.maximum(format!("slope[n={},{}]", r.dim, r.phase), r.fit.slope);
    }
    Output { tables: vec![table], summary, plots: Vec::new() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ExperimentKind, GridConfig};

    #[test]
    fn small_boxes_already_decay_fast() {
        let mut c = ExperimentConfig::default_for(ExperimentKind::KernelDecay);
        c.grid = GridConfig { n: 2, length: 128.0, samples: 256 };
        let rows = kernel_decay_experiment(&c).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.ok), "{rows:?}");
    }
}
