//! Ratios of the two sides of the global Besov and Triebel-Lizorkin
//! estimates for the wave equation, over a parameter grid and a corpus of
//! Cauchy data, on a base grid and on its `N`- and `L`-doubled versions.

use fiolab_core::spaces::{BandDecomposition, SpaceKind, SpaceParams};
use fiolab_core::wave::{estimate_ratio_from_bands, solve_wave};
use fiolab_core::GridSpec;

use super::{exponent_label, family};
use crate::config::ExperimentConfig;
use crate::corpus::wave_member;
use crate::error::{Error, Result};
use crate::parallel::try_map;
use crate::report::{Output, Summary, Table};

pub const STABILITY_TOLERANCE: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub params: SpaceParams,
    pub t: f64,
}

impl Cell {
    pub fn label(&self) -> String {
        format!(
            "{} s={} p={} q={} t={}",
            self.params.kind().label(),
            self.params.s(),
            exponent_label(self.params.p()),
            exponent_label(self.params.q()),
            self.t
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resolution {
    Base,
    /// `N` doubled on the same box.
    DoubledN,
    /// `L` and `N` doubled, so the spacing is unchanged.
    DoubledL,
}

impl Resolution {
    pub const ALL: [Resolution; 3] = [Resolution::Base, Resolution::DoubledN, Resolution::DoubledL];

    pub fn name(self) -> &'static str {
        match self {
            Resolution::Base => "base",
            Resolution::DoubledN => "double_N",
            Resolution::DoubledL => "double_L",
        }
    }

    pub fn grid(self, base: &GridSpec) -> Result<GridSpec> {
        let (l, n) = (base.length(), base.samples());
        Ok(match self {
            Resolution::Base => *base,
            Resolution::DoubledN => GridSpec::new(base.dim(), l, 2 * n)?,
            Resolution::DoubledL => GridSpec::new(base.dim(), 2.0 * l, 2 * n)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellSummary {
    pub cell: Cell,
    pub in_paper_range: bool,
    /// Corpus maximum on each resolution, in [`Resolution::ALL`] order.
    pub max: [f64; 3],
    pub change_n: f64,
    pub change_l: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaveSweepReport {
    pub cells: Vec<Cell>,
    /// `ratios[resolution][member][cell]`
    pub ratios: Vec<Vec<Vec<f64>>>,
    pub summaries: Vec<CellSummary>,
    pub tolerance: f64,
    pub all_finite: bool,
    pub stable_n: bool,
    pub stable_l: bool,
}

/// Admissible cells of the configured grid, in `(X, s, p, q, t)` order.
/// Cells the norms reject (Triebel-Lizorkin with `p = inf`, `q != 2`) are
/// skipped.
pub fn cells(config: &ExperimentConfig) -> Result<Vec<Cell>> {
    let grid = &config.space;
    let mut out = Vec::new();
    for kind in &grid.kinds {
        let kind = match kind.as_str() {
            "B" => SpaceKind::Besov,
            "F" => SpaceKind::TriebelLizorkin,
            other => return Err(Error::Config(format!("space kind {other:?} is not B or F"))),
        };
        for &s in &grid.s {
            for &p in &grid.p {
                let mut qs = grid.q.clone();
                if grid.q_equal_p {
                    qs.push(p);
                }
                let mut seen: Vec<f64> = Vec::new();
                for q in qs {
                    if seen.contains(&q) {
                        continue;
                    }
                    seen.push(q);
                    let Ok(params) = SpaceParams::new(kind, s, p, q) else { continue };
                    for &t in &grid.times {
                        out.push(Cell { params, t });
                    }
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Config("the parameter grid has no admissible cell".into()));
    }
    Ok(out)
}

fn sweep_grid(config: &ExperimentConfig, spec: GridSpec, cells: &[Cell]) -> Result<Vec<Vec<f64>>> {
    let fam = family(spec)?;
    let shells = config.levels.min..=config.levels.max;
    let size = config.corpus.size;
    let mut times: Vec<f64> = Vec::new();
    for c in cells {
        if !times.contains(&c.t) {
            times.push(c.t);
        }
    }
    let members: Vec<usize> = (0..size).collect();
    try_map(&members, |&k| {
        let data = wave_member(&fam, shells.clone(), config.seed, size, k)?;
        let f0 = BandDecomposition::new(data.position(), &fam)?;
        let f1 = BandDecomposition::new(data.velocity(), &fam)?;
        let mut row = vec![f64::NAN; cells.len()];
        for &t in &times {
            let u = BandDecomposition::new(&solve_wave(&data, t)?, &fam)?;
            for (slot, cell) in row.iter_mut().zip(cells) {
                if cell.t == t {
                    *slot = estimate_ratio_from_bands(&u, &f0, &f1, &cell.params, spec.dim()).ratio;
                }
            }
        }
        Ok(row)
    })
}

pub fn wave_sweep(config: &ExperimentConfig) -> Result<WaveSweepReport> {
    config.validate()?;
    if config.corpus.size == 0 {
        return Err(Error::Config("wave corpus is empty".into()));
    }
    let cells = cells(config)?;
    let base = config.grid.spec()?;
    let ratios = Resolution::ALL.iter().map(|r| sweep_grid(config, r.grid(&base)?, &cells)).collect::<Result<Vec<_>>>()?;
    let tolerance = config.tolerance("stability", STABILITY_TOLERANCE);
    let corpus_max = |res: usize, c: usize| ratios[res].iter().map(|m| m[c]).fold(f64::NEG_INFINITY, f64::max);
    let summaries: Vec<CellSummary> = cells
        .iter()
        .enumerate()
        .map(|(c, cell)| {
            let max = [corpus_max(0, c), corpus_max(1, c), corpus_max(2, c)];
            CellSummary {
                cell: *cell,
                in_paper_range: fiolab_core::wave::in_estimate_range(&cell.params, base.dim()),
                max,
                change_n: (max[1] / max[0] - 1.0).abs(),
                change_l: (max[2] / max[0] - 1.0).abs(),
            }
        })
        .collect();
    let all_finite = ratios.iter().flatten().flatten().all(|r| r.is_finite());
    let stable_n = summaries.iter().all(|s| s.change_n <= tolerance);
    let stable_l = summaries.iter().all(|s| s.change_l <= tolerance);
    Ok(WaveSweepReport { cells, ratios, summaries, tolerance, all_finite, stable_n, stable_l })
}

pub fn to_output(report: &WaveSweepReport, config_hash: &str) -> Output {
    let mut rows =
        Table::new("wave_sweep", &["grid", "X", "s", "p", "q", "t", "corpus_id", "ratio", "in_paper_range", "config_hash"]);
    for (res, per_member) in Resolution::ALL.iter().zip(&report.ratios) {
        for (k, member) in per_member.iter().enumerate() {
            for ((cell, ratio), s) in report.cells.iter().zip(member).zip(&report.summaries) {
                rows.push(vec![
                    res.name().into(),
                    cell.params.kind().label().into(),
                    cell.params.s().to_string(),
                    exponent_label(cell.params.p()),
                    exponent_label(cell.params.q()),
                    cell.t.to_string(),
                    k.to_string(),
                    ratio.to_string(),
                    s.in_paper_range.to_string(),
                    config_hash.into(),
                ]);
            }
        }
    }
    let mut cells = Table::new(
        "wave_sweep_cells",
        &["X", "s", "p", "q", "t", "max_base", "max_double_N", "max_double_L", "change_N", "change_L", "config_hash"],
    );
    let mut summary = Summary::new("wave-sweep", config_hash);
    for s in &report.summaries {
        let p = &s.cell.params;
        cells.push(vec![
            p.kind().label().into(),
            p.s().to_string(),
            exponent_label(p.p()),
            exponent_label(p.q()),
            s.cell.t.to_string(),
            s.max[0].to_string(),
            s.max[1].to_string(),
            s.max[2].to_string(),
            s.change_n.to_string(),
            s.change_l.to_string(),
            config_hash.into(),
        ]);
        summary.maximum(s.cell.label(), s.max[0]);
    }
    summary.verdict("all_ratios_finite", report.all_finite);
    summary.verdict("stable_under_N_doubling", report.stable_n);
    summary.verdict("stable_under_L_doubling", report.stable_l);
    summary.maximum("max_change_N", report.summaries.iter().map(|s| s.change_n).fold(0.0, f64::max));
    summary.maximum("max_change_L", report.summaries.iter().map(|s| s.change_l).fold(0.0, f64::max));
    let plot = "set datafile separator ','\nset logscale y\nset xlabel 'cell'\nset ylabel 'corpus max ratio'\n\
                plot 'wave_sweep_cells.csv' every ::1 using 0:6 with points title 'base', \
                '' every ::1 using 0:7 with points title 'N doubled', \
                '' every ::1 using 0:8 with points title 'L doubled'\n";
    Output { tables: vec![rows, cells], summary, plots: vec![("wave_sweep.gp".into(), plot.into())] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ExperimentKind, GridConfig, LevelRange};

    fn small() -> ExperimentConfig {
        let mut c = ExperimentConfig::default_for(ExperimentKind::WaveSweep);
        c.grid = GridConfig { n: 2, length: 8.0, samples: 64 };
        c.levels = LevelRange { min: 2, max: 3 };
        c.space.p = vec![1.0, 2.0, f64::INFINITY];
        c.corpus.size = 4;
        c
    }

    #[test]
    fn cell_enumeration_skips_inadmissible_triebel_cells() {
        let cells = cells(&small()).unwrap();
        // B: 3 p values, q in {2, p} gives 2 + 1 + 2 = 5 q cells; F drops (inf, inf)
        assert_eq!(cells.len(), (5 + 4) * 2 * 2);
        assert!(!cells
            .iter()
            .any(|c| c.params.kind() == SpaceKind::TriebelLizorkin && c.params.p().is_infinite() && c.params.q() != 2.0));
    }

    #[test]
    fn l2_cell_is_bounded_by_two() {
        let mut c = small();
        c.space.kinds = vec!["B".into()];
        c.space.s = vec![0.0];
        c.space.p = vec![2.0];
        c.space.times = vec![1.0];
        let r = wave_sweep(&c).unwrap();
        assert!(r.all_finite);
        assert_eq!(r.summaries.len(), 1);
        assert!(r.summaries[0].max.iter().all(|&m| m > 0.0 && m <= 2.0), "{:?}", r.summaries[0].max);
    }
}
