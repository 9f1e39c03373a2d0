//! The verification experiments. Each takes an [`ExperimentConfig`] and
//! returns a report whose rows are in a fixed key order.

pub mod atoms;
pub mod envelope;
pub mod kernel_decay;
pub mod scaling;
pub mod sharpness;
pub mod wave_sweep;

use fiolab_core::fio::{apply_multiplier, FioOperator, FioPlan};
use fiolab_core::{BumpProfile, DyadicCutoffFamily, GridFunction, GridSpec};

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::{named, parallel};

pub fn operator(config: &ExperimentConfig, m: f64) -> Result<FioOperator> {
    let op = &config.operator;
    Ok(FioOperator::new(named::amplitude(&op.amplitude, m)?, named::phase(&op.phase, op.t, config.grid.n)?))
}

pub fn family(spec: GridSpec) -> Result<DyadicCutoffFamily> {
    Ok(DyadicCutoffFamily::build(spec, BumpProfile::default())?)
}

/// `T f`: multiplier fast path when available, otherwise direct quadrature
/// spread over the current thread pool.
pub fn apply_op(op: &FioOperator, f: &GridFunction) -> Result<GridFunction> {
    match op.multiplier_symbol(f.spec()) {
        Some(symbol) => Ok(apply_multiplier(&symbol?, f)?),
        None => parallel::evaluate_plan(&FioPlan::new(op, f)),
    }
}

/// `p` for report columns: `inf` rather than a JSON-incompatible float.
pub fn exponent_label(p: f64) -> String {
    if p == f64::INFINITY {
        "inf".into()
    } else {
        format!("{p}")
    }
}

pub(crate) fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
