//! Fitted constants of the cone-kernel envelope
//! `|K_j^nu(x, y)| <= C 2^{j(m + (n+1)/2)} (1 + |2^j d_1|^2)^{-N} (1 + |2^{j/2} d'|^2)^{-N}`
//! across levels. A level-independent `C` means the envelope holds with a
//! uniform constant.

use fiolab_core::cones::{build_directions, cone_kernel, envelope_fit, KernelForm};
use fiolab_core::BumpProfile;

use super::operator;
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::parallel::try_map;
use crate::report::{Output, Summary, Table};

pub const SPREAD_TOLERANCE: f64 = 4.0;
/// The envelope order that is judged.
pub const JUDGED_ORDER: u32 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeRow {
    pub level: usize,
    pub nu: usize,
    pub n_env: u32,
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeReport {
    pub m: f64,
    pub rows: Vec<EnvelopeRow>,
    /// `(N_env, max C / min C)` over the levels.
    pub spreads: Vec<(u32, f64)>,
    pub tolerance: f64,
}

impl EnvelopeReport {
    pub fn spread(&self, n_env: u32) -> Option<f64> {
        self.spreads.iter().find(|s| s.0 == n_env).map(|s| s.1)
    }
}

/// Envelope constants for cone `nu = 0` at `y = 0` on every configured level.
pub fn envelope_experiment(config: &ExperimentConfig) -> Result<EnvelopeReport> {
    config.validate()?;
    let spec = config.grid.spec()?;
    if spec.dim() != 2 {
        return Err(Error::Config("the envelope experiment runs in two dimensions".into()));
    }
    let orders = if config.n_env.is_empty() { vec![JUDGED_ORDER] } else { config.n_env.clone() };
    let m = config.operator.m;
    let op = operator(config, m)?;
    let levels: Vec<usize> = (config.levels.min.max(1)..=config.levels.max).collect();
    let y_ref = [0.0, 0.0];
    let per_level = try_map(&levels, |&j| {
        let cover = build_directions(j as u32, 2, BumpProfile::default())?;
        let nu = 0;
        let kernel = cone_kernel(&op, &spec, j, Some((&cover, nu)), y_ref, KernelForm::Standard)?;
        let direction = cover.directions()[nu];
        Ok(orders
            .iter()
            .map(|&n_env| EnvelopeRow {
                level: j,
                nu,
                n_env,
                constant: envelope_fit(&kernel, j, direction, op.phase(), m, n_env, y_ref, KernelForm::Standard),
            })
            .collect::<Vec<_>>())
    })?;
    let rows: Vec<EnvelopeRow> = per_level.into_iter().flatten().collect();
    let spreads = orders
        .iter()
        .map(|&n| {
            let cs = rows.iter().filter(|r| r.n_env == n).map(|r| r.constant);
            let (lo, hi) = cs.fold((f64::INFINITY, 0.0f64), |(lo, hi), c| (lo.min(c), hi.max(c)));
            (n, hi / lo)
        })
        .collect();
    Ok(EnvelopeReport { m, rows, spreads, tolerance: config.tolerance("spread", SPREAD_TOLERANCE) })
}

pub fn to_output(report: &EnvelopeReport, config_hash: &str) -> Output {
    let mut table = Table::new("envelope", &["j", "nu", "m", "N_env", "C", "config_hash"]);
    for r in &report.rows {
        table.push(vec![
            r.level.to_string(),
            r.nu.to_string(),
            report.m.to_string(),
            r.n_env.to_string(),
            r.constant.to_string(),
            config_hash.into(),
        ]);
    }
    let mut summary = Summary::new("envelope", config_hash);
    for &(n, spread) in &report.spreads {
        summary.maximum(format!("spread[N_env={n}]"), spread);
        if n == JUDGED_ORDER {
            summary.verdict(format!("spread_ok[N_env={n}]"), spread <= report.tolerance);
        }
    }
    let plot = "set datafile separator ','\nset logscale y\nset xlabel 'j'\nset ylabel 'C_j'\n\
                plot for [n=0:2] 'envelope.csv' every ::1 using 1:($4==n ? $5 : 1/0) with linespoints title 'N_env='.n\n";
    Output { tables: vec![table], summary, plots: vec![("envelope.gp".into(), plot.into())] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ExperimentKind, GridConfig, LevelRange};

    #[test]
    fn zeroth_order_constants_are_level_independent() {
        let mut c = ExperimentConfig::default_for(ExperimentKind::Envelope);
        c.grid = GridConfig { n: 2, length: 4.0, samples: 128 };
        c.levels = LevelRange { min: 2, max: 5 };
        c.n_env = vec![0];
        let r = envelope_experiment(&c).unwrap();
        assert_eq!(r.rows.len(), 4);
        assert!(r.spread(0).unwrap() < 1.5, "{:?}", r.rows);
    }
}
