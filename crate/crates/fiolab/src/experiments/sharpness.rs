//! The one-dimensional operator `T f = int e^{i(x xi + |xi|)} f^(xi) dxi / 2 pi`
//! applied to the indicator of `[-1, 1]`.
//!
//! Away from the jumps `Tf(x) = i (Hf(x+1) - Hf(x-1)) / 2`, whose imaginary
//! part behaves like `-2/(pi x^2)`. That tail is what keeps `Tf` out of
//! `B^0_{p,p}` for `p <= 1/2`: on a box of side `L` the quasi-norm picks up
//! `int^{L/2} x^{-2p} dx`, which grows with `L` exactly when `p < 1/2`.
//!
//! The tail oracle is the periodic version of that integral. On the torus
//! the tail is the sum over images, `(2/pi) (pi/L)^2 / sin^2(pi x/L)`, and
//! `S_tail(L) = 2 int_8^{L/2} ((2/pi)(pi/L)^2 / sin^2(pi x/L))^p dx`. The
//! part of `sum_j ||psi_j(D) Tf||_p^p` that changes with `L` should change
//! by `S_tail(2L) - S_tail(L)`.

use std::f64::consts::PI;

use fiolab_core::fio::sampled_indicator;
use fiolab_core::quadrature::{gauss_legendre, integrate};
use fiolab_core::spaces::{BandDecomposition, SpaceParams};
use fiolab_core::GridSpec;

use super::{apply_op, family, operator};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::parallel::try_map;
use crate::report::{Output, Summary, Table};

pub const TAIL_WINDOW: (f64, f64) = (20.0, 60.0);
pub const TAIL_TOLERANCE: f64 = 0.02;
pub const ORACLE_TOLERANCE: f64 = 0.15;
/// Required growth per doubling for `p <= DIVERGENT_P`.
pub const DIVERGENT_GROWTH: f64 = 1.2;
/// The divergence rate drops to 1 as `p` approaches 1/2, so a fixed growth
/// threshold is only judged at or below this exponent.
pub const DIVERGENT_P: f64 = 0.4;
/// Allowed growth per doubling for `p >= 3/4`.
pub const CONVERGENT_GROWTH: f64 = 1.05;
/// Lower end of the oracle integral; the tail form is accurate beyond it.
pub const ORACLE_START: f64 = 8.0;

pub fn tail_constant() -> f64 {
    -2.0 / PI
}

/// `S_tail(L)` for exponent `p`.
pub fn tail_oracle(length: f64, p: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(20);
    let (a, b) = (ORACLE_START, 0.5 * length);
    let panels = 64;
    let ratio = (b / a).powf(1.0 / panels as f64);
    let density = |x: f64| {
        let s = (PI * x / length).sin();
        (2.0 / PI * (PI / length).powi(2) / (s * s)).powf(p)
    };
    let mut total = 0.0;
    let mut lo = a;
    for _ in 0..panels {
        let hi = lo * ratio;
        total += integrate(&nodes, &weights, lo, hi, density);
        lo = hi;
    }
    2.0 * total
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailFit {
    pub length: f64,
    pub samples: usize,
    pub mean: f64,
    pub relative_error: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiNormRow {
    pub p: f64,
    pub length: f64,
    pub samples: usize,
    /// `||Tf||_{B^0_{p,p}}`
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Doubling {
    pub p: f64,
    pub from: f64,
    pub to: f64,
    pub growth: f64,
    pub oracle_growth: f64,
    /// `(S(2L) - S(L)) / (S_tail(2L) - S_tail(L))`, with `S = norm^p`.
    pub increment_ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SharpnessReport {
    pub tail: TailFit,
    pub rows: Vec<QuasiNormRow>,
    pub doublings: Vec<Doubling>,
    pub oracle_tolerance: f64,
}

impl SharpnessReport {
    pub fn doublings_for(&self, p: f64) -> impl Iterator<Item = &Doubling> {
        self.doublings.iter().filter(move |d| d.p == p)
    }

    /// Growth verdict for `p`: divergent up to `DIVERGENT_P`, convergent from
    /// 3/4 on, not judged in between.
    pub fn growth_ok(&self, p: f64) -> Option<bool> {
        let mut it = self.doublings_for(p).peekable();
        it.peek()?;
        if p <= DIVERGENT_P {
            Some(it.all(|d| d.growth >= DIVERGENT_GROWTH))
        } else if p >= 0.75 {
            Some(it.all(|d| d.growth <= CONVERGENT_GROWTH))
        } else {
            None
        }
    }

    pub fn oracle_ok(&self, p: f64) -> bool {
        self.doublings_for(p).all(|d| (d.increment_ratio - 1.0).abs() <= self.oracle_tolerance)
    }
}

pub fn sharpness_experiment(config: &ExperimentConfig) -> Result<SharpnessReport> {
    config.validate()?;
    let base = config.grid.spec()?;
    if base.dim() != 1 {
        return Err(Error::Config("the sharpness experiment is one-dimensional".into()));
    }
    if base.length() < 2.0 * TAIL_WINDOW.1 + 2.0 {
        return Err(Error::Config(format!("box length {} is too small for the tail window", base.length())));
    }
    let op = operator(config, config.operator.m)?;
    let tf = |spec: GridSpec| apply_op(&op, &sampled_indicator(&spec, -1.0, 1.0));

    let image = tf(base)?;
    let tail: Vec<f64> = (0..base.len())
        .filter_map(|i| {
            let x = base.point(i)[0];
            (x >= TAIL_WINDOW.0 && x <= TAIL_WINDOW.1).then(|| x * x * image.values()[i].im)
        })
        .collect();
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let relative_error = (mean / tail_constant() - 1.0).abs();
    let tail = TailFit {
        length: base.length(),
        samples: base.samples(),
        mean,
        relative_error,
        ok: relative_error <= config.tolerance("tail", TAIL_TOLERANCE),
    };

    let spacing = base.spacing();
    let mut boxes = config.boxes.clone();
    if boxes.is_empty() {
        boxes.push(base.length());
    }
    let grids = boxes
        .iter()
        .map(|&length| {
            let samples = (length / spacing).round() as usize;
            if !samples.is_power_of_two() || (samples as f64 * spacing - length).abs() > 1e-9 * length {
                return Err(Error::Config(format!("box {length} is not a power-of-two multiple of the spacing {spacing}")));
            }
            Ok(GridSpec::new(1, length, samples)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let ps = config.space.p.clone();
    let per_box = try_map(&grids, |&spec| {
        let bands = BandDecomposition::new(&tf(spec)?, &family(spec)?)?;
        ps.iter().map(|&p| Ok(bands.norm(&SpaceParams::besov(0.0, p, p)?))).collect::<Result<Vec<f64>>>()
    })?;

    let mut rows = Vec::new();
    for &p in &ps {
        for (spec, norms) in grids.iter().zip(&per_box) {
            let pi = ps.iter().position(|&q| q == p).expect("p from the list");
            rows.push(QuasiNormRow { p, length: spec.length(), samples: spec.samples(), norm: norms[pi] });
        }
    }
    let mut doublings = Vec::new();
    for (pi, &p) in ps.iter().enumerate() {
        for w in 0..grids.len().saturating_sub(1) {
            let (l0, l1) = (grids[w].length(), grids[w + 1].length());
            let (n0, n1) = (per_box[w][pi], per_box[w + 1][pi]);
            let (s0, s1) = (n0.powf(p), n1.powf(p));
            let d_oracle = tail_oracle(l1, p) - tail_oracle(l0, p);
            doublings.push(Doubling {
                p,
                from: l0,
                to: l1,
                growth: n1 / n0,
                oracle_growth: ((s0 + d_oracle) / s0).powf(1.0 / p),
                increment_ratio: (s1 - s0) / d_oracle,
            });
        }
    }
    Ok(SharpnessReport { tail, rows, doublings, oracle_tolerance: config.tolerance("oracle", ORACLE_TOLERANCE) })
}

pub fn to_output(report: &SharpnessReport, config_hash: &str) -> Output {
    let mut norms = Table::new("sharpness_norms", &["p", "L", "N", "quasinorm", "config_hash"]);
    for r in &report.rows {
        norms.push(vec![r.p.to_string(), r.length.to_string(), r.samples.to_string(), r.norm.to_string(), config_hash.into()]);
    }
    let mut growth =
        Table::new("sharpness_growth", &["p", "L_from", "L_to", "growth", "oracle_growth", "increment_ratio", "config_hash"]);
    for d in &report.doublings {
        growth.push(vec![
            d.p.to_string(),
            d.from.to_string(),
            d.to.to_string(),
            d.growth.to_string(),
            d.oracle_growth.to_string(),
            d.increment_ratio.to_string(),
            config_hash.into(),
        ]);
    }
    let mut tail = Table::new("sharpness_tail", &["L", "N", "mean_x2_im_Tf", "target", "relative_error", "config_hash"]);
    let t = &report.tail;
    tail.push(vec![
        t.length.to_string(),
        t.samples.to_string(),
        t.mean.to_string(),
        tail_constant().to_string(),
        t.relative_error.to_string(),
        config_hash.into(),
    ]);
    let mut summary = Summary::new("sharpness-1d", config_hash);
    summary.verdict("tail_constant", t.ok);
    summary.maximum("tail_relative_error", t.relative_error);
    let mut ps: Vec<f64> = report.rows.iter().map(|r| r.p).collect();
    ps.dedup();
    for p in ps {
        if let Some(ok) = report.growth_ok(p) {
            summary.verdict(format!("growth[p={p}]"), ok);
        }
        summary.observation(format!("oracle_agreement[p={p}]"), report.oracle_ok(p));
        let worst = report.doublings_for(p).map(|d| d.growth).fold(f64::NEG_INFINITY, f64::max);
        summary.maximum(format!("growth[p={p}]"), worst);
    }
    let plot = "set datafile separator ','\nset logscale xy\nset xlabel 'L'\nset ylabel 'B^0_{p,p} quasi-norm of Tf'\n\
                plot for [p in '0.4 0.45 0.6 0.75'] 'sharpness_norms.csv' every ::1 using 2:($1==p+0 ? $4 : 1/0) \
                with linespoints title 'p='.p\n";
    Output { tables: vec![tail, norms, growth], summary, plots: vec![("sharpness.gp".into(), plot.into())] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ExperimentKind, GridConfig};
    use fiolab_core::fio::sharpness_operator_1d;

    #[test]
    fn oracle_matches_closed_form_for_p_one() {
        // int (pi/L)^2 / sin^2(pi x/L) dx = (pi/L) cot(pi a/L) - (pi/L) cot(pi b/L)
        let length = 512.0;
        let k = PI / length;
        let exact = 2.0 * (2.0 / PI) * k * (1.0 / (k * ORACLE_START).tan() - 0.0);
        assert!((tail_oracle(length, 1.0) / exact - 1.0).abs() < 1e-10);
    }

    #[test]
    fn config_operator_matches_the_dedicated_multiplier() {
        let spec = GridSpec::new(1, 256.0, 1 << 12).unwrap();
        let c = ExperimentConfig::default_for(ExperimentKind::Sharpness1d);
        let op = operator(&c, 0.0).unwrap();
        let f = sampled_indicator(&spec, -1.0, 1.0);
        let a = apply_op(&op, &f).unwrap();
        let b = sharpness_operator_1d(&f).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn small_run_has_negative_tail_and_growth_rows() {
        let mut c = ExperimentConfig::default_for(ExperimentKind::Sharpness1d);
        c.grid = GridConfig { n: 1, length: 256.0, samples: 1 << 12 };
        c.boxes = vec![256.0, 512.0];
        c.space.p = vec![0.4, 0.75];
        let r = sharpness_experiment(&c).unwrap();
        assert!(r.tail.mean < -0.5 && r.tail.mean > -0.7, "{}", r.tail.mean);
        assert_eq!(r.doublings.len(), 2);
        assert!(r.doublings_for(0.4).all(|d| d.growth > 1.0));
        c.boxes = vec![300.0];
        assert!(matches!(sharpness_experiment(&c), Err(Error::Config(_))));
    }
}
