//! Command-line frontend.
//!
//! Exit codes: 0 on success, 2 on invalid arguments, 1 on numerical or I/O
//! failure. A nonconvergent quadrature still prints its best estimate to
//! stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{bounds_for_model, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::experiments::{
    run_fig1, run_fig2a, run_fig2b, SweepSettings, FIG1_SIZES, FIG2A_SIZES, FIG2B_ANTENNAS,
    FIG2_ALPHAS, DEFAULT_EIGEN_SAMPLES,
};
use crate::numerics::SirModel;
use crate::output::{self, emit, Format};
use crate::simulator::{
    estimate_se, SimConfig, SimMode, DEFAULT_DROPS, DEFAULT_INTERFERERS, DEFAULT_LAMBDA,
    DEFAULT_SEED,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "svdmimo",
    version,
    about = "Spectral-efficiency bounds and Monte-Carlo simulation for SVD-precoded MIMO in Poisson cellular networks"
)]
pub struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Upper and lower bounds on the ergodic spectral efficiency.
    Bounds(BoundsArgs),
    /// Monte-Carlo estimate of the ergodic spectral efficiency.
    Simulate(SimulateArgs),
    /// Approximate versus empirical mean of ordered eigenvalues σ_i²/N.
    Eigen(EigenArgs),
    /// Reproduce a figure's data table.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Interference fading drawn as Gamma(m, 1).
    DirectGamma,
    /// Interference fading from explicit channels and SVD precoders.
    FullChannel,
}

impl From<ModeArg> for SimMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::DirectGamma => SimMode::DirectGamma,
            ModeArg::FullChannel => SimMode::FullChannel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2a,
    Fig2b,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Antennas at each end.
    #[arg(long)]
    pub n: usize,
    /// Spatial streams, 1 <= m <= N.
    #[arg(long)]
    pub m: usize,
    /// Pathloss exponent, > 2.
    #[arg(long)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file (a directory for `sweep`); stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format [default: json for bounds and simulate, csv for eigen and sweep].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Base-station intensity per unit area.
    #[arg(long, default_value_t = DEFAULT_LAMBDA)]
    pub lambda: f64,
    /// Monte-Carlo drops per point.
    #[arg(long, default_value_t = DEFAULT_DROPS)]
    pub drops: usize,
    /// Master random seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Nearest interferers simulated explicitly.
    #[arg(long, default_value_t = DEFAULT_INTERFERERS)]
    pub interferers: usize,
    /// Interference fading model.
    #[arg(long, value_enum, default_value_t = ModeArg::DirectGamma)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Absolute quadrature tolerance in bits/s/Hz.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EigenArgs {
    /// Matrix size.
    #[arg(long)]
    pub n: usize,
    /// Random matrices sampled.
    #[arg(long, default_value_t = DEFAULT_EIGEN_SAMPLES)]
    pub samples: usize,
    /// Master random seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Figure to reproduce.
    #[arg(long, value_enum)]
    pub figure: Figure,
    #[command(flatten)]
    pub sim: SimArgs,
    /// Random matrices sampled per size (fig1).
    #[arg(long, default_value_t = DEFAULT_EIGEN_SAMPLES)]
    pub samples: usize,
    /// Absolute quadrature tolerance in bits/s/Hz.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Report bounds only.
    #[arg(long)]
    pub no_sim: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `argv` and runs the command, writing results to `stdout` and
/// diagnostics to `stderr`. Returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };

    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker pool: {e}");
            return EXIT_NUMERICAL;
        }
    };

    let result = pool
        .install(|| dispatch(&cli.command))
        .and_then(|outputs| {
            outputs
                .iter()
                .try_for_each(|(path, text)| emit(text, path.as_deref(), stdout))
        });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::InvalidParameter(_) | Error::Domain { .. } => EXIT_USAGE,
                Error::Quadrature { value, error_estimate, .. } => {
                    let _ = writeln!(stderr, "best estimate: {value} (error estimate {error_estimate})");
                    EXIT_NUMERICAL
                }
                _ => EXIT_NUMERICAL,
            }
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("tolerance must be positive (got {tol})")))
    }
}

fn sim_config(model: SirModel, sim: &SimArgs) -> Result<SimConfig> {
    let config = SimConfig {
        model,
        lambda: sim.lambda,
        interferer_count: sim.interferers,
        drops: sim.drops,
        seed: sim.seed,
        mode: sim.mode.into(),
        tail_compensation: true,
    };
    config.validate()?;
    Ok(config)
}

/// Rendered documents and their destinations (`None` for stdout).
type Outputs = Vec<(Option<PathBuf>, String)>;

fn dispatch(command: &Command) -> Result<Outputs> {
    match command {
        Command::Bounds(a) => {
            check_tol(a.tol)?;
            let model = SirModel::new(a.model.n, a.model.m, a.model.alpha)?;
            let r = bounds_for_model(&model, a.tol)?;
            let text = match a.output.format.unwrap_or(Format::Json) {
                Format::Json => output::to_json(&r)?,
                Format::Csv => output::bounds_csv(&r)?,
            };
            Ok(vec![(a.output.out.clone(), text)])
        }
        Command::Simulate(a) => {
            let model = SirModel::new(a.model.n, a.model.m, a.model.alpha)?;
            let config = sim_config(model, &a.sim)?;
            let est = estimate_se(&config)?;
            let text = match a.output.format.unwrap_or(Format::Json) {
                Format::Json => output::to_json(&est)?,
                Format::Csv => output::simulate_csv(&config, &est)?,
            };
            Ok(vec![(a.output.out.clone(), text)])
        }
        Command::Eigen(a) => {
            let rows = run_fig1(&[a.n], a.samples, a.seed)?;
            let text = match a.output.format.unwrap_or(Format::Csv) {
                Format::Json => output::to_json(&rows)?,
                Format::Csv => output::fig1_csv(&rows)?,
            };
            Ok(vec![(a.output.out.clone(), text)])
        }
        Command::Sweep(a) => sweep(a),
    }
}

fn sweep(a: &SweepArgs) -> Result<Outputs> {
    check_tol(a.tol)?;
    let format = a.output.format.unwrap_or(Format::Csv);
    let settings = SweepSettings {
        lambda: a.sim.lambda,
        interferer_count: a.sim.interferers,
        drops: a.sim.drops,
        seed: a.sim.seed,
        mode: a.sim.mode.into(),
        tol: a.tol,
        simulate: !a.no_sim,
    };
    // Validates the simulation settings once, up front.
    sim_config(SirModel::new(1, 1, 4.0)?, &a.sim)?;

    if let Some(dir) = &a.output.out {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.clone(),
            source,
        })?;
    }
    let target = |stem: &str| -> Option<PathBuf> {
        a.output
            .out
            .as_ref()
            .map(|d| d.join(format!("{stem}.{}", format.extension())))
    };

    match a.figure {
        Figure::Fig1 => {
            let rows = run_fig1(&FIG1_SIZES, a.samples, a.sim.seed)?;
            let text = match format {
                Format::Json => output::to_json(&rows)?,
                Format::Csv => output::fig1_csv(&rows)?,
            };
            Ok(vec![(target("fig1"), text)])
        }
        Figure::Fig2a => {
            let rows = run_fig2a(&FIG2_ALPHAS, &FIG2A_SIZES, &settings)?;
            let text = match format {
                Format::Json => output::to_json(&rows)?,
                Format::Csv => output::sweep_csv(&rows)?,
            };
            Ok(vec![(target("fig2a"), text)])
        }
        Figure::Fig2b => {
            let fig = run_fig2b(FIG2B_ANTENNAS, &FIG2_ALPHAS, &settings)?;
            Ok(match format {
                Format::Json => vec![(target("fig2b"), output::to_json(&fig)?)],
                Format::Csv => vec![
                    (target("fig2b"), output::sweep_csv(&fig.rows)?),
                    (target("fig2b_optima"), output::optima_csv(&fig.optima)?),
                ],
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("svdmimo").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn bounds_json_fields() {
        let (code, out, _) = run_capture(&["bounds", "--n", "1", "--m", "1", "--alpha", "4"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        for key in ["upper", "lower", "upper_err", "lower_err"] {
            assert!(v[key].is_f64(), "{key}");
        }
        assert!((v["upper"].as_f64().unwrap() - 2.469_337_682_379).abs() < 1e-8);
    }

    #[test]
    fn invalid_streams_exit_two() {
        let (code, _, err) = run_capture(&["bounds", "--n", "4", "--m", "8", "--alpha", "4"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("m <= N"), "{err}");
    }

    #[test]
    fn invalid_simulation_settings_exit_two() {
        for args in [
            ["simulate", "--n", "2", "--m", "2", "--alpha", "4", "--lambda", "-1"],
            ["simulate", "--n", "2", "--m", "2", "--alpha", "4", "--drops", "0"],
            ["simulate", "--n", "2", "--m", "2", "--alpha", "1.5", "--drops", "5"],
        ] {
            let (code, _, err) = run_capture(&args);
            assert_eq!(code, EXIT_USAGE, "{args:?}: {err}");
        }
        let (code, _, _) = run_capture(&["bounds", "--n", "2"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["bounds", "--n", "2", "--m", "1", "--alpha", "4", "--tol", "0"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn help_lists_defaults() {
        let (code, out, _) = run_capture(&["simulate", "--help"]);
        assert_eq!(code, 0);
        for needle in ["default: 10000", "default: 42", "default: 500", "default: 1", "direct-gamma"] {
            assert!(out.contains(needle), "missing {needle}");
        }
    }
}
