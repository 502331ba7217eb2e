use clap::{Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use thermalink::parallel::Execution;
use thermalink_cli::config::{Config, Format, Route};
use thermalink_cli::figures::{compute_figure, write_figure, FIGURES};
use thermalink_cli::record::{write_records, Record};
use thermalink_cli::run::{
    initial_state, run_points, solve_evolve, solve_steady, solve_trajectory, sweep_points, RouteOptions,
};
use thermalink_cli::{resolve_workers, validate, with_workers, CliError, WORKERS_ENV};

/// Trajectories per stochastic point in figure bundles and validation unless configured.
const QUICK_TRAJECTORIES: usize = 1000;

#[derive(Parser, Debug)]
#[command(name = "thermalink", version, about = "Entanglement of two qubits driven by filtered thermal light")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Solver route, overriding the configuration.
    #[arg(long, global = true)]
    route: Option<Route>,
    /// Master seed for stochastic routes.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (also THERMALINK_WORKERS).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output file, or directory for `figure`. Standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Steady state at one parameter point.
    Steady,
    /// Steady states over the grid in the `sweep` section.
    Sweep,
    /// Time trace of the reduced state.
    Evolve,
    /// One sampled field path and its conditional state.
    Trajectory,
    /// Data bundle for a figure panel.
    Figure {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(FIGURES))]
        name: String,
    },
    /// Cross-route consistency checks.
    Validate,
}

struct Context {
    cfg: Config,
    configured: bool,
    format: Format,
    out: Option<PathBuf>,
    workers: Option<usize>,
    seed: u64,
}

impl Context {
    fn new(cli: &Cli) -> Result<Self, CliError> {
        let (mut cfg, configured) = match &cli.config {
            Some(path) => (Config::load(path)?, true),
            None => (Config::default(), false),
        };
        if let Some(r) = cli.route {
            cfg.route = Some(r);
        }
        let env = std::env::var(WORKERS_ENV).ok();
        let workers = resolve_workers(cli.workers, env.as_deref(), cfg.workers)?;
        Ok(Context {
            format: cli.format.or(cfg.format).unwrap_or_default(),
            out: cli.out.clone().or_else(|| cfg.output.clone()),
            seed: cli.seed.or(cfg.seed).unwrap_or(0),
            workers,
            configured,
            cfg,
        })
    }

    fn require_config(&self) -> Result<(), CliError> {
        if self.configured {
            Ok(())
        } else {
            Err(CliError::Config("this subcommand needs --config".into()))
        }
    }

    fn options(&self) -> RouteOptions {
        let mut o = RouteOptions::from_config(&self.cfg);
        o.execution = if self.workers == Some(1) { Execution::Sequential } else { Execution::Parallel };
        o
    }

    fn emit(&self, records: &[Record]) -> Result<(), CliError> {
        match &self.out {
            Some(path) => {
                let f = std::io::BufWriter::new(std::fs::File::create(path)?);
                write_records(records, self.format, f)
            }
            None => write_records(records, self.format, std::io::stdout().lock()),
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let ctx = Context::new(&cli)?;
    match &cli.command {
        Command::Steady => {
            ctx.require_config()?;
            let (route, p, o) = (ctx.cfg.route()?, ctx.cfg.params()?.clone(), ctx.options());
            let rec = with_workers(ctx.workers, || solve_steady(route, &p, ctx.seed, &o))??;
            ctx.emit(&[rec])
        }
        Command::Sweep => {
            ctx.require_config()?;
            let route = ctx.cfg.route()?;
            let points = sweep_points(&ctx.cfg)?;
            let o = ctx.options();
            let (records, failed) = with_workers(ctx.workers, || run_points(route, &points, ctx.seed, &o))?;
            ctx.emit(&records)?;
            if failed > 0 {
                return Err(CliError::PartialSweep { failed, total: records.len() });
            }
            Ok(())
        }
        Command::Evolve | Command::Trajectory => {
            ctx.require_config()?;
            let p = ctx.cfg.params()?.clone();
            let time = ctx.cfg.time.as_ref().ok_or_else(|| CliError::Config("missing `time` section".into()))?;
            let times = time.grid()?;
            let initial = initial_state(time.initial)?;
            let o = ctx.options();
            let recs = if matches!(cli.command, Command::Evolve) {
                let route = ctx.cfg.route()?;
                with_workers(ctx.workers, || solve_evolve(route, &p, &initial, &times, ctx.seed, &o))??
            } else {
                with_workers(ctx.workers, || solve_trajectory(&p, &initial, &times, ctx.seed, &o))??
            };
            ctx.emit(&recs)
        }
        Command::Figure { name } => {
            let mut o = ctx.options();
            if !ctx.configured {
                o.trajectories = QUICK_TRAJECTORIES;
            }
            let data = with_workers(ctx.workers, || compute_figure(name, ctx.seed, &o))??;
            let dir = ctx.out.clone().unwrap_or_else(|| PathBuf::from(name));
            for path in write_figure(&data, &dir, ctx.format)? {
                eprintln!("wrote {}", path.display());
            }
            if data.failed > 0 {
                let total = data.tables.iter().map(|(_, r)| r.len()).sum();
                return Err(CliError::PartialSweep { failed: data.failed, total });
            }
            Ok(())
        }
        Command::Validate => {
            let n = if ctx.configured { ctx.cfg.stochastic.trajectories } else { QUICK_TRAJECTORIES };
            let exec = ctx.options().execution;
            let checks = with_workers(ctx.workers, || validate::run_checks(ctx.seed, n, exec))?;
            let failed = validate::report(&checks, std::io::stdout().lock())?;
            std::io::stdout().flush()?;
            if failed > 0 {
                return Err(CliError::Validation(failed));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
