//! `drunk`: command-line front end for the drunk-games engine.
//!
//! Exit codes: 0 success, 1 usage error, 2 configuration error, 3 runtime
//! failure. Data goes to `--out` (or standard output when omitted);
//! diagnostics go to standard error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use drunk_games::abm::run_abm;
use drunk_games::basins::{linspace, sweep_battle_line, sweep_g2_grid, McParams};
use drunk_games::config::{load_game, AbmConfigFile};
use drunk_games::equilibria::equilibria;
use drunk_games::experiments::{reproduce, ExperimentSpec, Figure};
use drunk_games::game::classify_game;
use drunk_games::meanfield::{field_grid, integrate, write_field_csv, IntegrateOptions};
use drunk_games::par::with_jobs;
use drunk_games::preset::BATTLE_TRANSITION_T_SD;
use drunk_games::seed::DEFAULT_SEED;
use drunk_games::{Error, Execution, PayoffMatrix, State};

#[derive(Parser, Debug)]
#[command(
    name = "drunk",
    version,
    about = "Drunk games: mean-field dynamics, basins and agent-based runs"
)]
struct Cli {
    /// Worker threads for parallel sweeps (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the normalized game R=1, P=0 with the given T and S.
    Classify {
        #[arg(long = "T", allow_negative_numbers = true)]
        t: f64,
        #[arg(long = "S", allow_negative_numbers = true)]
        s: f64,
    },
    /// Sample the vector field on an n x n grid of the unit square.
    Field {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 21)]
        resolution: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Integrate one trajectory with RK4.
    Trajectory {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        x0: f64,
        #[arg(long)]
        alpha0: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        #[arg(long, default_value_t = 1e4)]
        t_max: f64,
        #[command(flatten)]
        out: Out,
    },
    /// Fixed points with their stability, as JSON.
    Equilibria {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Monte Carlo estimate of the attractiveness of full cooperation.
    Basin {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Attractiveness sweeps: `pub` over (S2, T2) with a prisoner's dilemma
    /// as G1, `battle` over S1.
    Sweep {
        kind: SweepKind,
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 1.0, 10.0])]
        kappas: Vec<f64>,
        /// Points per axis (default 41 for pub, 21 for battle).
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Snowdrift temptation of the battle sweep.
        #[arg(long, default_value_t = BATTLE_TRANSITION_T_SD)]
        t_sd: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Agent-based run; writes per-round statistics.
    Abm {
        #[arg(long)]
        abm_config: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Regenerate the data behind a figure.
    Reproduce {
        figure: String,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Override a figure parameter, e.g. `--set grid=21`.
        #[arg(long = "set", value_parser = parse_override)]
        overrides: Vec<(String, f64)>,
        /// Heatmap at N = 10^4 and 10^4 rounds instead of desk scale.
        #[arg(long)]
        full_scale: bool,
    },
}

#[derive(Args, Debug)]
struct Out {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SweepKind {
    Pub,
    Battle,
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected KEY=VALUE")?;
    let v: f64 = v.trim().parse().map_err(|e| format!("`{v}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

/// Failure with the exit code it maps to.
enum Failure {
    Config(Error),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::UnknownPreset(_) | Error::UnknownFigure(_) => {
                Failure::Config(e)
            }
            e => Failure::Runtime(e),
        }
    }
}

fn config_stage<T>(r: drunk_games::Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::Config)
}

fn emit(
    out: &Out,
    write: impl FnOnce(&mut Vec<u8>) -> drunk_games::Result<()>,
) -> Result<(), Failure> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    let res = match &out.out {
        Some(p) => std::fs::write(p, &buf).map_err(|e| io_error(p, e)),
        None => std::io::stdout()
            .lock()
            .write_all(&buf)
            .map_err(|e| io_error(Path::new("<stdout>"), e)),
    };
    res.map_err(Failure::Runtime)
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    let exec = Execution::Parallel;
    match cmd {
        Command::Classify { t, s } => {
            let g = config_stage(PayoffMatrix::normalized(s, t))?;
            println!("{}", classify_game(&g)?.abbrev());
        }
        Command::Field {
            config,
            resolution,
            out,
        } => {
            let dg = config_stage(load_game(&config))?;
            let grid = field_grid(&dg, resolution)?;
            emit(&out, |buf| write_field_csv(&grid, buf))?;
        }
        Command::Trajectory {
            config,
            x0,
            alpha0,
            dt,
            t_max,
            out,
        } => {
            let dg = config_stage(load_game(&config))?;
            let opts = IntegrateOptions {
                dt,
                t_max,
                ..Default::default()
            };
            let targets = equilibria(&dg).stable_states();
            let tr = integrate(&dg, State::new(x0, alpha0)?, &opts, &targets)?;
            eprintln!("termination: {:?}", tr.termination);
            emit(&out, |buf| tr.write_csv(buf))?;
        }
        Command::Equilibria { config, out } => {
            let dg = config_stage(load_game(&config))?;
            let report = equilibria(&dg);
            emit(&out, |buf| {
                report.write_json(&mut *buf)?;
                buf.push(b'\n');
                Ok(())
            })?;
        }
        Command::Basin {
            config,
            samples,
            seed,
            out,
        } => {
            let dg = config_stage(load_game(&config))?;
            let mc = McParams {
                seed,
                ..McParams::with_samples(samples)
            };
            let res = drunk_games::basins::estimate_attractiveness(&dg, &mc, exec)?;
            emit(&out, |buf| {
                serde_json::to_writer_pretty(&mut *buf, &res)?;
                buf.push(b'\n');
                Ok(())
            })?;
        }
        Command::Sweep {
            kind,
            kappas,
            grid,
            samples,
            t_sd,
            seed,
            out,
        } => {
            let mc = McParams {
                seed,
                ..McParams::with_samples(samples)
            };
            let data = match kind {
                SweepKind::Pub => {
                    let n = grid.unwrap_or(41);
                    let g1 = PayoffMatrix::normalized(-1.0, 2.0)?;
                    sweep_g2_grid(
                        &g1,
                        &linspace(-1.0, 1.0, n),
                        &linspace(0.0, 2.0, n),
                        &kappas,
                        &mc,
                        exec,
                    )?
                }
                SweepKind::Battle => sweep_battle_line(
                    &linspace(0.0, 1.0, grid.unwrap_or(21)),
                    t_sd,
                    &kappas,
                    &mc,
                    exec,
                )?,
            };
            emit(&out, |buf| data.write_csv(buf))?;
        }
        Command::Abm { abm_config, out } => {
            let (cfg, dg) =
                config_stage(AbmConfigFile::load(&abm_config).and_then(|f| f.resolve()))?;
            let run = run_abm(&cfg, &dg, exec)?;
            let last = run.last();
            eprintln!(
                "round {}: x = {}, alpha = {}, delta_alpha = {}",
                last.t, last.x_mean, last.alpha_mean, last.delta_alpha
            );
            emit(&out, |buf| run.write_csv(buf))?;
        }
        Command::Reproduce {
            figure,
            out_dir,
            seed,
            overrides,
            full_scale,
        } => {
            let figure: Figure = figure.parse()?;
            let spec = ExperimentSpec {
                overrides: overrides.into_iter().collect::<BTreeMap<_, _>>(),
                full_scale,
                exec,
                ..ExperimentSpec::new(figure, &out_dir, seed)
            };
            let manifest = reproduce(&spec)?;
            for f in &manifest.files {
                eprintln!(
                    "wrote {} ({} bytes)",
                    out_dir.join(&f.path).display(),
                    f.bytes
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match with_jobs(cli.jobs, || run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("drunk: config error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("drunk: {e}");
            ExitCode::from(3)
        }
    }
}
