//! Uniformity of `||T_high a||_p` over random `h^p` atoms for an operator of
//! critical order `m_c(p)`.

use fiolab_core::atoms::make_atom;
use fiolab_core::fio::{critical_order, snd_margin, Window};
use fiolab_core::grid::lp_quasinorm;
use rand::Rng;

use super::{apply_op, median, operator};
use crate::config::ExperimentConfig;
use crate::corpus::member_rng;
use crate::error::{Error, Result};
use crate::parallel::try_map;
use crate::report::{Output, Summary, Table};

pub const MAX_OVER_MEDIAN: f64 = 5.0;
pub const MIN_LOG2_RADIUS: f64 = -4.0;
pub const MAX_LOG2_RADIUS: f64 = 1.0;

#[derive(Clone, Debug, PartialEq)]
pub struct AtomRow {
    pub index: usize,
    pub radius: f64,
    pub center: [f64; 2],
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtomReport {
    pub p: f64,
    pub m: f64,
    pub rows: Vec<AtomRow>,
    pub max: f64,
    pub median: f64,
    pub max_over_median: f64,
    pub tolerance: f64,
    pub uniform: bool,
}

/// Radius (log-uniform in `[2^-4, 2]`) and a center keeping the doubled
/// ball inside the box.
pub fn atom_geometry(seed: u64, index: usize, length: f64, dim: usize) -> ([f64; 2], f64) {
    let mut rng = member_rng(seed, index);
    let radius = rng.gen_range(MIN_LOG2_RADIUS..=MAX_LOG2_RADIUS).exp2();
    // slightly inside, so that rounding cannot push the ball out
    let reach = 0.999 * (0.5 * length - 2.0 * radius);
    let mut coord = || if reach > 0.0 { rng.gen_range(-reach..=reach) } else { 0.0 };
    let center = [coord(), if dim == 2 { coord() } else { 0.0 }];
    (center, radius)
}

fn sphere(count: usize) -> Vec<[f64; 2]> {
    (0..count)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            [a.cos(), a.sin()]
        })
        .collect()
}

/// One report per exponent in `config.space.p`; `m = m_c(p)` regardless of
/// `config.operator.m`.
pub fn atom_uniformity(config: &ExperimentConfig) -> Result<Vec<AtomReport>> {
    config.validate()?;
    let spec = config.grid.spec()?;
    if spec.dim() != 2 {
        return Err(Error::Config("the atom experiment runs in two dimensions".into()));
    }
    if config.corpus.size == 0 {
        return Err(Error::Config("atom corpus is empty".into()));
    }
    let tolerance = config.tolerance("max_over_median", MAX_OVER_MEDIAN);
    let indices: Vec<usize> = (0..config.corpus.size).collect();
    config
        .space
        .p
        .iter()
        .enumerate()
        .map(|(pi, &p)| {
            let m = critical_order(p, spec.dim())?;
            let op = operator(config, m)?.with_window(Window::High);
            let probes = [[0.0, 0.0], [1.0, -0.5], [-2.0, 1.5]];
            let margin = snd_margin(op.phase(), spec.dim(), &probes, &sphere(16))?;
            if margin <= 0.0 {
                return Err(Error::Config(format!("phase {:?} is degenerate (SND margin {margin})", config.operator.phase)));
            }
            let seed = config.seed.wrapping_add(pi as u64);
            let rows = try_map(&indices, |&index| {
                let (center, radius) = atom_geometry(seed, index, spec.length(), spec.dim());
                let atom = make_atom(&spec, center, radius, p, seed ^ index as u64)?;
                let norm = lp_quasinorm(&apply_op(&op, atom.values())?, p)?;
                Ok(AtomRow { index, radius, center, norm })
            })?;
            let norms: Vec<f64> = rows.iter().map(|r| r.norm).collect();
            let max = norms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let median = median(&norms);
            let max_over_median = max / median;
            Ok(AtomReport { p, m, rows, max, median, max_over_median, tolerance, uniform: max_over_median <= tolerance })
        })
        .collect()
}

pub fn to_output(reports: &[AtomReport], config_hash: &str) -> Output {
    let mut table = Table::new("atoms", &["p", "m", "atom", "radius", "c1", "c2", "norm", "config_hash"]);
    let mut summary = Summary::new("atoms", config_hash);
    for r in reports {
        for row in &r.rows {
            table.push(vec![
                r.p.to_string(),
                r.m.to_string(),
                row.index.to_string(),
                row.radius.to_string(),
                row.center[0].to_string(),
                row.center[1].to_string(),
                row.norm.to_string(),
                config_hash.into(),
            ]);
        }
        summary.verdict(format!("max_over_median_ok[p={}]", r.p), r.uniform);
        summary.maximum(format!("max[p={}]", r.p), r.max);
        summary.maximum(format!("median[p={}]", r.p), r.median);
        summary.maximum(format!("max_over_median[p={}]", r.p), r.max_over_median);
    }
    let plot = "set datafile separator ','\nset logscale x\nset xlabel 'atom radius'\nset ylabel '||T a||_p'\n\
                plot 'atoms.csv' every ::1 using 4:7 with points title 'atoms'\n";
    Output { tables: vec![table], summary, plots: vec![("atoms.gp".into(), plot.into())] }
}
