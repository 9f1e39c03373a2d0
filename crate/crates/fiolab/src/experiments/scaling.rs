//! Growth of the Littlewood-Paley pieces `T_j` of an operator.
//!
//! `R_j = max_f ||T_j f||_p / ||Psi_j(D) f||_p` over a corpus, where `T_j`
//! carries the window `psi_j(xi) (1 - psi_0(2 xi))` and `Psi_j` is the
//! fattened cutoff. The slope of `log2 R_j` against `j` is compared with
//! `m - m_c(p)`.

use fiolab_core::fio::{critical_order, Window};
use fiolab_core::fit::fit_line;
use fiolab_core::grid::lp_quasinorm;
use fiolab_core::GridFunction;

use super::{apply_op, exponent_label, family, operator};
use crate::config::ExperimentConfig;
use crate::corpus::{scaling_member, ScalingCorpus};
use crate::error::{Error, Result};
use crate::parallel::try_map;
use crate::report::{Output, Summary, Table};

pub const SLOPE_TOLERANCE: f64 = 0.15;

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport {
    pub corpus: ScalingCorpus,
    pub dim: usize,
    pub p: f64,
    pub m: f64,
    pub levels: Vec<usize>,
    /// Per-level corpus maximum of the ratio.
    pub ratios: Vec<f64>,
    /// Corpus member attaining each maximum (first one on ties).
    pub worst_member: Vec<usize>,
    pub slope: f64,
    pub intercept: f64,
    /// `m - m_c(p)`
    pub target: f64,
    pub tolerance: f64,
    pub upper_bound_ok: bool,
    pub attainment_observed: bool,
}

/// One report per exponent in `config.space.p`.
pub fn scaling_experiment(config: &ExperimentConfig) -> Result<Vec<ScalingReport>> {
    config.validate()?;
    let spec = config.grid.spec()?;
    let fam = family(spec)?;
    let kind = ScalingCorpus::parse(&config.corpus.kind)?;
    if config.corpus.size == 0 {
        return Err(Error::Config("scaling corpus is empty".into()));
    }
    if config.space.p.is_empty() {
        return Err(Error::Config("no exponent p given".into()));
    }
    let levels: Vec<usize> = (config.levels.min..=config.levels.max).collect();
    if levels.len() < 2 {
        return Err(Error::Config("a slope needs at least two levels".into()));
    }
    let m = config.operator.m;
    let op = operator(config, m)?;
    let ps = &config.space.p;
    let t = config.operator.t;

    // ratios[member][level][p]
    let members: Vec<usize> = (0..config.corpus.size).collect();
    let ratios = try_map(&members, |&k| {
        let shared = if kind.per_level() { None } else { Some(scaling_member(kind, &fam, config.seed, k, 0, t)?) };
        levels
            .iter()
            .map(|&j| {
                let owned;
                let f: &GridFunction = match &shared {
                    Some(f) => f,
                    None => {
                        owned = scaling_member(kind, &fam, config.seed, k, j, t)?;
                        &owned
                    }
                };
                let tf = apply_op(&op.clone().with_window(Window::Band(j)), f)?;
                let pf = fam.big_band_project(f, j)?;
                ps.iter().map(|&p| Ok(lp_quasinorm(&tf, p)? / lp_quasinorm(&pf, p)?)).collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let tolerance = config.tolerance("slope", SLOPE_TOLERANCE);
    ps.iter()
        .enumerate()
        .map(|(pi, &p)| {
            let mut per_level = Vec::with_capacity(levels.len());
            let mut worst = Vec::with_capacity(levels.len());
            for li in 0..levels.len() {
                let (k, r) = ratios
                    .iter()
                    .enumerate()
                    .map(|(k, member)| (k, member[li][pi]))
                    .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
                if !(r.is_finite() && r > 0.0) {
                    return Err(Error::Config(format!("level {} gives ratio {r} at p = {p}", levels[li])));
                }
                per_level.push(r);
                worst.push(k);
            }
            let points: Vec<(f64, f64)> = levels.iter().zip(&per_level).map(|(&j, r)| (j as f64, r.log2())).collect();
            let (slope, intercept) = fit_line(&points).expect("at least two distinct levels");
            let target = m - critical_order(p, config.grid.n)?;
            Ok(ScalingReport {
                corpus: kind,
                dim: config.grid.n,
                p,
                m,
                levels: levels.clone(),
                ratios: per_level,
                worst_member: worst,
                slope,
                intercept,
                target,
                tolerance,
                upper_bound_ok: slope <= target + tolerance,
                attainment_observed: slope >= target - tolerance,
            })
        })
        .collect()
}

pub fn to_output(reports: &[ScalingReport], config_hash: &str) -> Output {
    let mut levels = Table::new("scaling", &["corpus", "p", "m", "j", "ratio", "log2_ratio", "worst_member", "config_hash"]);
    let mut fits = Table::new(
        "scaling_fit",
        &["corpus", "p", "m", "slope", "intercept", "target", "upper_bound_ok", "attainment_observed", "config_hash"],
    );
    let mut summary = Summary::new("scaling", config_hash);
    for r in reports {
        let p = exponent_label(r.p);
        for ((j, ratio), k) in r.levels.iter().zip(&r.ratios).zip(&r.worst_member) {
            levels.push(vec![
                r.corpus.name().into(),
                p.clone(),
                r.m.to_string(),
                j.to_string(),
                ratio.to_string(),
                ratio.log2().to_string(),
                k.to_string(),
                config_hash.into(),
            ]);
        }
        fits.push(vec![
            r.corpus.name().into(),
            p.clone(),
            r.m.to_string(),
            r.slope.to_string(),
            r.intercept.to_string(),
            r.target.to_string(),
            r.upper_bound_ok.to_string(),
            r.attainment_observed.to_string(),
            config_hash.into(),
        ]);
        summary.verdict(format!("upper_bound_ok[p={p}]"), r.upper_bound_ok);
        // attainment is an observation, reported but never asserted
        summary.observation(format!("attainment_observed[p={p}]"), r.attainment_observed);
        summary.maximum(format!("slope[p={p}]"), r.slope);
        summary.maximum(format!("max_ratio[p={p}]"), r.ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    }
    let plot = format!(
        "set datafile separator ','\nset xlabel 'j'\nset ylabel 'log2 R_j'\nset key left top\n\
         plot 'scaling.csv' every ::1 using 4:6 with linespoints title 'log2 R_j ({})'\n",
        reports.first().map_or("", |r| r.corpus.name())
    );
    Output { tables: vec![levels, fits], summary, plots: vec![("scaling.gp".into(), plot)] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ExperimentKind, GridConfig};

    fn small(p: f64, m: f64, corpus: &str) -> ExperimentConfig {
        let mut c = ExperimentConfig::default_for(ExperimentKind::Scaling);
        c.grid = GridConfig { n: 2, length: 4.0, samples: 128 };
        c.levels.min = 2;
        c.levels.max = 4;
        c.space.p = vec![p];
        c.operator.m = m;
        c.corpus.kind = corpus.into();
        c.corpus.size = 3;
        c
    }

    #[test]
    fn l2_slope_follows_amplitude_order() {
        for (m, lo, hi) in [(0.0, -0.1, 0.1), (1.0, 0.9, 1.1)] {
            let r = &scaling_experiment(&small(2.0, m, "random")).unwrap()[0];
            assert!(r.slope >= lo && r.slope <= hi, "m = {m}: slope {}", r.slope);
            assert!(r.upper_bound_ok);
            assert_eq!(r.target, m);
        }
    }

    #[test]
    fn rejects_levels_beyond_resolution_and_empty_corpus() {
        let mut c = small(2.0, 0.0, "random");
        c.levels.max = 9;
        assert!(matches!(scaling_experiment(&c), Err(Error::Config(_))));
        let mut c = small(2.0, 0.0, "random");
        c.corpus.size = 0;
        assert!(matches!(scaling_experiment(&c), Err(Error::Config(_))));
    }

    #[test]
    fn output_rows_carry_the_hash() {
        let c = small(2.0, 0.0, "knapp");
        let reports = scaling_experiment(&c).unwrap();
        let out = to_output(&reports, &c.hash());
        assert_eq!(out.tables[0].rows.len(), 3);
        assert!(out.tables.iter().all(|t| t.rows.iter().all(|r| r.last().unwrap() == &c.hash())));
    }
}
