//! Command-line front end.
//!
//! Exit status: 0 on success, 2 when an experiment verdict or a selftest
//! check fails, 1 on usage, configuration or IO errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fiolab_core::cones::build_directions;
use fiolab_core::fio::{FioOperator, Window};
use fiolab_core::spaces::{space_norm, SpaceKind, SpaceParams};
use fiolab_core::{BumpProfile, GridFunction};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{Error, Result};
use crate::experiments::{self, apply_op, atoms, envelope, kernel_decay, scaling, sharpness, wave_sweep};
use crate::report::{Output, Table};
use crate::{io, named, parallel, selftest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ASSERTION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fiolab", version, about = "Dyadic analysis and Fourier integral operator experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Experiment configuration (TOML)
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory for reports
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Worker threads (0: one per core); results do not depend on it
    #[arg(long, global = true, value_name = "INT")]
    pub threads: Option<usize>,
    /// Also write gnuplot scripts
    #[arg(long, global = true)]
    pub plots: bool,
    /// Dimension
    #[arg(long = "n", global = true)]
    pub dim: Option<usize>,
    /// Samples per axis
    #[arg(long = "N", global = true)]
    pub samples: Option<usize>,
    /// Box side
    #[arg(long = "L", global = true)]
    pub length: Option<f64>,
    /// Integrability exponent (`inf` allowed)
    #[arg(long, global = true)]
    pub p: Option<f64>,
    #[arg(long, global = true)]
    pub q: Option<f64>,
    /// Smoothness
    #[arg(long, global = true)]
    pub s: Option<f64>,
    /// Amplitude order
    #[arg(long, global = true)]
    pub m: Option<f64>,
    /// Phase name (linear, wave, anisotropic) or expression in x1 x2 xi1 xi2
    #[arg(long, global = true, value_name = "NAME|EXPR")]
    pub phase: Option<String>,
    /// Time parameter of the wave phase
    #[arg(long, global = true)]
    pub t: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Besov or Triebel-Lizorkin quasi-norm of a stored grid function
    Norm {
        input: PathBuf,
        /// B or F
        #[arg(long, default_value = "B")]
        kind: String,
    },
    /// Littlewood-Paley bands of a stored grid function, plus the cutoff table
    Decompose {
        input: PathBuf,
    },
    /// Apply a named or expression operator to a stored grid function
    FioApply {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, default_value = "jap")]
        amplitude: String,
        /// all, low, high or band:J
        #[arg(long, default_value = "all")]
        window: String,
    },
    /// Cone directions per level and the cone-kernel envelope report
    Cones,
    Scaling,
    WaveSweep,
    Atoms,
    #[command(name = "sharpness-1d")]
    Sharpness1d,
    KernelDecay,
    /// Exact identities that every build must satisfy
    Selftest,
}

impl Command {
    fn experiment(&self) -> Option<ExperimentKind> {
        Some(match self {
            Command::Cones => ExperimentKind::Envelope,
            Command::Scaling => ExperimentKind::Scaling,
            Command::WaveSweep => ExperimentKind::WaveSweep,
            Command::Atoms => ExperimentKind::Atoms,
            Command::Sharpness1d => ExperimentKind::Sharpness1d,
            Command::KernelDecay => ExperimentKind::KernelDecay,
            _ => return None,
        })
    }
}

/// Config from `--config` (or the experiment default) with the flags applied.
pub fn resolve_config(kind: ExperimentKind, args: &GlobalArgs) -> Result<ExperimentConfig> {
    let mut c = match &args.config {
        Some(path) => {
            let c = ExperimentConfig::load(path)?;
            if c.experiment != kind {
                return Err(Error::Config(format!(
                    "{} describes experiment {}, not {}",
                    path.display(),
                    c.experiment.name(),
                    kind.name()
                )));
            }
            c
        }
        None => ExperimentConfig::default_for(kind),
    };
    if let Some(v) = args.seed {
        c.seed = v;
    }
    if let Some(v) = args.dim {
        c.grid.n = v;
    }
    if let Some(v) = args.samples {
        c.grid.samples = v;
    }
    if let Some(v) = args.length {
        c.grid.length = v;
    }
    if let Some(v) = args.p {
        c.space.p = vec![v];
    }
    if let Some(v) = args.q {
        c.space.q = vec![v];
        c.space.q_equal_p = false;
    }
    if let Some(v) = args.s {
        c.space.s = vec![v];
    }
    if let Some(v) = args.m {
        c.operator.m = v;
    }
    if let Some(v) = &args.phase {
        c.operator.phase = v.clone();
    }
    if let Some(v) = args.t {
        c.operator.t = v;
        c.space.times = vec![v];
    }
    if let Some(v) = &args.out {
        c.output.dir = Some(v.clone());
    }
    if args.plots {
        c.output.plots = true;
    }
    c.validate()?;
    Ok(c)
}

fn out_dir(args: &GlobalArgs, config: Option<&ExperimentConfig>) -> PathBuf {
    args.out.clone().or_else(|| config.and_then(|c| c.output.dir.clone())).unwrap_or_else(|| PathBuf::from("fiolab-out"))
}

fn params(kind: &str, args: &GlobalArgs) -> Result<SpaceParams> {
    let kind = match kind {
        "B" => SpaceKind::Besov,
        "F" => SpaceKind::TriebelLizorkin,
        other => return Err(Error::Usage(format!("space kind {other:?} is not B or F"))),
    };
    Ok(SpaceParams::new(kind, args.s.unwrap_or(0.0), args.p.unwrap_or(2.0), args.q.unwrap_or(2.0))?)
}

fn read_any(path: &Path) -> Result<GridFunction> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => io::read_grid_csv(path),
        _ => io::read_grid(path),
    }
}

fn window(spec: &str) -> Result<Window> {
    match spec {
        "all" => Ok(Window::All),
        "low" => Ok(Window::Low),
        "high" => Ok(Window::High),
        other => other
            .strip_prefix("band:")
            .and_then(|j| j.parse().ok())
            .map(Window::Band)
            .ok_or_else(|| Error::Usage(format!("window {other:?} is not all, low, high or band:J"))),
    }
}

/// What a command produced: reports to write and whether all verdicts held.
struct Outcome {
    /// Reports with their directory and whether to emit plot scripts.
    output: Option<(Output, PathBuf, bool)>,
    passed: bool,
}

fn run_experiment(kind: ExperimentKind, config: &ExperimentConfig) -> Result<Output> {
    let hash = config.hash();
    Ok(match kind {
        ExperimentKind::Scaling => scaling::to_output(&scaling::scaling_experiment(config)?, &hash),
        ExperimentKind::WaveSweep => wave_sweep::to_output(&wave_sweep::wave_sweep(config)?, &hash),
        ExperimentKind::Atoms => atoms::to_output(&atoms::atom_uniformity(config)?, &hash),
        ExperimentKind::Sharpness1d => sharpness::to_output(&sharpness::sharpness_experiment(config)?, &hash),
        ExperimentKind::Envelope => {
            let mut out = envelope::to_output(&envelope::envelope_experiment(config)?, &hash);
            let mut dirs = Table::new("cone_directions", &["j", "nu", "xi1", "xi2", "config_hash"]);
            for j in config.levels.min.max(1)..=config.levels.max {
                let cover = build_directions(j as u32, config.grid.n, BumpProfile::default())?;
                for (nu, d) in cover.directions().iter().enumerate() {
                    dirs.push(vec![j.to_string(), nu.to_string(), d[0].to_string(), d[1].to_string(), hash.clone()]);
                }
            }
            out.tables.push(dirs);
            out
        }
        ExperimentKind::KernelDecay => kernel_decay::to_output(&kernel_decay::kernel_decay_experiment(config)?, &hash),
    })
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<Outcome> {
    let args = &cli.global;
    if let Some(kind) = cli.command.experiment() {
        let config = resolve_config(kind, args)?;
        let output = parallel::with_threads(args.threads.unwrap_or(0), || run_experiment(kind, &config))??;
        let dir = out_dir(args, Some(&config));
        return Ok(Outcome { passed: output.summary.passed(), output: Some((output, dir, config.output.plots)) });
    }
    match &cli.command {
        Command::Norm { input, kind } => {
            let f = read_any(input)?;
            let params = params(kind, args)?;
            let fam = experiments::family(*f.spec())?;
            let value = space_norm(&f, &params, &fam)?;
            let mut t = Table::new("norm", &["kind", "s", "p", "q", "J", "value"]);
            t.push(vec![
                params.kind().label().into(),
                params.s().to_string(),
                experiments::exponent_label(params.p()),
                experiments::exponent_label(params.q()),
                fam.max_level().to_string(),
                value.to_string(),
            ]);
            write!(stdout, "{}", t.to_csv()).map_err(|e| Error::io("<stdout>", e))?;
            Ok(Outcome { output: None, passed: true })
        }
        Command::Decompose { input } => {
            let f = read_any(input)?;
            let fam = experiments::family(*f.spec())?;
            let dir = out_dir(args, None);
            std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            for j in 0..=fam.max_level() {
                io::write_grid(&fam.band_project(&f, j)?, &dir.join(format!("band_{j}.bin")))?;
            }
            let mut header = vec!["abs_xi".to_string()];
            header.extend((0..=fam.max_level()).map(|j| format!("psi_{j}")));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut t = Table::new("cutoffs", &header);
            for row in fam.radial_table(513) {
                t.push(row.iter().map(f64::to_string).collect());
            }
            let path = dir.join("cutoffs.csv");
            std::fs::write(&path, t.to_csv()).map_err(|e| Error::io(&path, e))?;
            writeln!(stdout, "wrote {} bands and cutoffs.csv to {}", fam.max_level() + 1, dir.display())
                .map_err(|e| Error::io("<stdout>", e))?;
            Ok(Outcome { output: None, passed: true })
        }
        Command::FioApply { input, output, amplitude, window: w } => {
            let f = read_any(input)?;
            let dim = f.spec().dim();
            let op = FioOperator::new(
                named::amplitude(amplitude, args.m.unwrap_or(0.0))?,
                named::phase(args.phase.as_deref().unwrap_or("wave"), args.t.unwrap_or(1.0), dim)?,
            )
            .with_window(window(w)?);
            let g = parallel::with_threads(args.threads.unwrap_or(0), || apply_op(&op, &f))??;
            match output.extension().and_then(|e| e.to_str()) {
                Some("csv") => io::write_grid_csv(&g, output)?,
                _ => io::write_grid(&g, output)?,
            }
            Ok(Outcome { output: None, passed: true })
        }
        Command::Selftest => {
            let checks = selftest::run()?;
            let mut passed = true;
            for c in &checks {
                passed &= c.ok();
                writeln!(stdout, "{} {} ({:e} <= {:e})", if c.ok() { "ok  " } else { "FAIL" }, c.name, c.value, c.tolerance)
                    .map_err(|e| Error::io("<stdout>", e))?;
            }
            Ok(Outcome { output: None, passed })
        }
        _ => unreachable!("experiments are handled above"),
    }
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            let _ = if informational { write!(stdout, "{}", e.render()) } else { write!(stderr, "{}", e.render()) };
            return if informational { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let outcome = match execute(&cli, stdout) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Some((output, dir, plots)) = &outcome.output {
        match output.write(dir, *plots) {
            Ok(paths) => {
                for p in paths {
                    let _ = writeln!(stdout, "wrote {}", p.display());
                }
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
        }
        for (name, ok) in &output.summary.verdicts {
            let _ = writeln!(stdout, "{} {name}", if *ok { "PASS" } else { "FAIL" });
        }
    }
    if outcome.passed {
        EXIT_OK
    } else {
        EXIT_ASSERTION
    }
}
