#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};

use toric_core::decoder::Sparsifier;
use toric_core::{Family, Sector};

use config::{default_p_grid, default_sizes, parse_grid, parse_lattice_list, ConfigFile, GridSpec, RateFlags, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] toric_core::Error),
    #[error("{}: {}", .0.display(), .1)]
    Io(PathBuf, std::io::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    /// 1 internal, 2 bad configuration, 3 no crossing.
    fn exit_code(&self) -> u8 {
        use toric_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(E::NoCrossing(_)) => 3,
            CliError::Core(
                E::InvalidSize { .. } | E::UnknownFamily(_) | E::OutOfRange(_) | E::TooLarge(_) | E::DegenerateFit(_),
            ) => 2,
            CliError::Core(_) | CliError::Io(..) | CliError::Internal(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "toric", version, about = "Toric-code memory experiments on periodic lattices")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// JSON file whose keys mirror the flags; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// complete, knn[:k] or delaunay.
    #[arg(long, global = true)]
    sparsifier: Option<Sparsifier>,
    /// Samples per grid point, or trajectories.
    #[arg(long, global = true)]
    runs: Option<usize>,
    /// Bath coupling; by default chosen so that γ(2J) = 1.
    #[arg(long, global = true)]
    kappa: Option<f64>,
    /// Use the bare Ohmic hopping rate instead of γ(0) = γ(2J).
    #[arg(long, global = true)]
    no_hop_override: bool,
}

#[derive(Args, Debug, Default)]
struct Target {
    #[arg(long)]
    family: Option<Family>,
    /// primal or dual.
    #[arg(long)]
    sector: Option<Sector>,
    /// Linear sizes, comma separated.
    #[arg(long, visible_alias = "L", value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Output file (default: a fixed name inside --out-dir).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Thermal {
    /// Temperatures T/J, comma separated.
    #[arg(long = "T", value_delimiter = ',')]
    temperatures: Option<Vec<f64>>,
    #[arg(long)]
    t_max: Option<f64>,
    /// Sample times per curve.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a lattice file.
    Lattice {
        #[arg(long)]
        family: Option<Family>,
        #[arg(long = "L")]
        linear_size: Option<usize>,
        /// Emit the dual lattice.
        #[arg(long)]
        dual: bool,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Threshold from i.i.d. noise success curves.
    Threshold {
        #[command(flatten)]
        target: Target,
        /// lo:hi:step or a comma list.
        #[arg(long)]
        p_grid: Option<String>,
        #[arg(long)]
        bootstrap: Option<usize>,
    },
    /// Thermal memory lifetimes.
    Lifetime {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        thermal: Thermal,
        /// Mean readout level defining the lifetime.
        #[arg(long)]
        criterion: Option<f64>,
        #[arg(long)]
        bootstrap: Option<usize>,
    },
    /// Decoded readout along thermal trajectories.
    Decay {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        thermal: Thermal,
    },
    /// Fit the degree law to (q, p_c) data, measuring it if no data is given.
    Fit {
        /// CSV with columns q, p_c and optionally p_c_err.
        #[arg(long)]
        data: Option<PathBuf>,
        /// family[:sector] list to measure, comma separated.
        #[arg(long, value_delimiter = ',')]
        lattices: Option<Vec<String>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Josephson-junction array coherence against lattice degree.
    Jj {
        #[arg(long)]
        x: Option<f64>,
        #[arg(long = "T", value_delimiter = ',')]
        temperatures: Option<Vec<f64>>,
        /// Comma list; fractions such as 10/3 are accepted.
        #[arg(long)]
        q_grid: Option<String>,
        /// Also simulate rows that have a matching lattice.
        #[arg(long)]
        simulate: bool,
        #[arg(long = "L")]
        linear_size: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Lattice { .. } => "lattice",
            Command::Threshold { .. } => "threshold",
            Command::Lifetime { .. } => "lifetime",
            Command::Decay { .. } => "decay",
            Command::Fit { .. } => "fit",
            Command::Jj { .. } => "jj",
        }
    }
}

fn missing(command: &str, flag: &str) -> ! {
    let mut cmd = Cli::command();
    cmd.build();
    let sub = cmd.find_subcommand_mut(command).expect("known subcommand");
    sub.error(
        ErrorKind::MissingRequiredArgument,
        format!("the following required arguments were not provided:\n  {flag}\n\n(or set it in --config)"),
    )
    .exit()
}

fn grid(flag: Option<String>, cfg: Option<GridSpec>) -> Result<Option<Vec<f64>>, CliError> {
    match (flag, cfg) {
        (Some(s), _) => parse_grid(&s).map(Some),
        (None, Some(g)) => g.values().map(Some),
        (None, None) => Ok(None),
    }
}

/// Merge flags over the config file over the defaults.
fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    let cfg = match &cli.global.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let g = cli.global;
    let name = cli.command.name();
    let mut run = RunConfig {
        command: name,
        family: None,
        sector: None,
        sizes: None,
        temperatures: None,
        p_grid: None,
        q_grid: None,
        x: None,
        n_runs: g.runs.or(cfg.runs).unwrap_or(1000),
        sparsifier: g.sparsifier.or(cfg.sparsifier).unwrap_or_default(),
        rates: RateFlags {
            kappa: g.kappa.or(cfg.kappa),
            hop_override: if g.no_hop_override { false } else { cfg.hop_override.unwrap_or(true) },
        },
        seed: g.seed.or(cfg.seed).unwrap_or(1),
        out_dir: g.out_dir.or(cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from(".")),
        t_max: None,
        samples: None,
        criterion: None,
        bootstrap: None,
        dual: None,
        simulate: None,
        data: None,
        lattices: None,
        workers: g.workers.or(cfg.workers),
        out: None,
    };
    let family = |flag: Option<Family>| flag.or(cfg.family).unwrap_or_else(|| missing(name, "--family <FAMILY>"));
    let sizes = |flag: Option<Vec<usize>>, family: Family, base: &[usize]| {
        flag.or(cfg.sizes.clone())
            .or(cfg.linear_size.map(|l| vec![l]))
            .unwrap_or_else(|| default_sizes(family, base))
    };
    let temperatures = |flag: Option<Vec<f64>>, default: f64| flag.or(cfg.temperatures.clone()).unwrap_or(vec![default]);

    match cli.command {
        Command::Lattice { family: f, linear_size, dual, out } => {
            let f = family(f);
            let l = linear_size.or(cfg.linear_size).unwrap_or_else(|| missing(name, "--L <L>"));
            run.family = Some(f);
            run.sizes = Some(vec![l]);
            run.dual = Some(dual || cfg.dual.unwrap_or(false));
            run.out = out;
        }
        Command::Threshold { target, p_grid, bootstrap } => {
            let f = family(target.family);
            run.family = Some(f);
            run.sector = Some(target.sector.or(cfg.sector).unwrap_or(Sector::Primal));
            run.sizes = Some(sizes(target.sizes, f, &[16, 32]));
            run.p_grid = Some(grid(p_grid, cfg.p_grid.clone())?.unwrap_or_else(|| default_p_grid(f)));
            run.bootstrap = Some(bootstrap.or(cfg.bootstrap).unwrap_or(400));
            run.out = target.out;
        }
        Command::Lifetime { target, thermal, criterion, bootstrap } => {
            let f = family(target.family);
            run.family = Some(f);
            run.sector = Some(target.sector.or(cfg.sector).unwrap_or(Sector::Primal));
            run.sizes = Some(sizes(target.sizes, f, &[16]));
            run.temperatures = Some(temperatures(thermal.temperatures, 0.3));
            run.t_max = Some(thermal.t_max.or(cfg.t_max).unwrap_or(12.0));
            run.samples = Some(thermal.samples.or(cfg.samples).unwrap_or(80));
            run.criterion = Some(criterion.or(cfg.criterion).unwrap_or(0.5));
            run.bootstrap = Some(bootstrap.or(cfg.bootstrap).unwrap_or(400));
            run.out = target.out;
        }
        Command::Decay { target, thermal } => {
            let f = family(target.family);
            run.family = Some(f);
            run.sector = Some(target.sector.or(cfg.sector).unwrap_or(Sector::Primal));
            run.sizes = Some(sizes(target.sizes, f, &[16, 32, 64]));
            run.temperatures = Some(temperatures(thermal.temperatures, 0.3));
            run.t_max = Some(thermal.t_max.or(cfg.t_max).unwrap_or(15.0));
            run.samples = Some(thermal.samples.or(cfg.samples).unwrap_or(61));
            run.out = target.out;
        }
        Command::Fit { data, lattices, out } => {
            run.data = data.or(cfg.data.clone());
            if run.data.is_none() {
                let list = lattices.or(cfg.lattices.clone());
                run.lattices = Some(match list {
                    Some(items) => parse_lattice_list(&items)?,
                    None => commands::FIT_LATTICES.to_vec(),
                });
            }
            run.out = out;
        }
        Command::Jj { x, temperatures: t, q_grid, simulate, linear_size, out } => {
            run.x = Some(x.or(cfg.x).unwrap_or(1.01));
            run.temperatures = Some(temperatures(t, 0.003));
            run.q_grid = Some(grid(q_grid, cfg.q_grid.clone())?.unwrap_or_else(|| vec![3.0, 10.0 / 3.0, 4.0, 5.0, 6.0]));
            let simulate = simulate || cfg.simulate.unwrap_or(false);
            run.simulate = Some(simulate);
            if simulate {
                run.sizes = Some(vec![linear_size.or(cfg.linear_size).unwrap_or(16)]);
                run.t_max = Some(cfg.t_max.unwrap_or(12.0));
            }
            run.out = out;
        }
    }
    run.validate()?;
    Ok(run)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = resolve(cli).and_then(|run| {
        if let Some(n) = run.workers {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Internal(e.to_string()))?;
        }
        commands::dispatch(&run)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
