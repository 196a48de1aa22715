use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fluctuforce::validation::{self, Options, Suite};
use rayon::prelude::*;

mod config;
mod evaluate;
mod output;

use config::{Config, Format, Units};
use evaluate::{EvalError, Row};

const EXIT_CONFIG: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_VALIDATION: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "fluctuforce", version, about = "Fluctuation forces from damped oscillators and RLC circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Unit system; overrides `units` in the config.
    #[arg(long, global = true, value_enum)]
    units: Option<Units>,

    /// Output file; overrides `output.path`. Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format; overrides `output.format`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads for sweeps. Output does not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the force at the parameters of a config file.
    Force {
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate the force over the sweep block of a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a validation battery and print a pass/fail report.
    Validate {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n_max: Option<u64>,
    },
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Precondition(String),
    Validation(String),
    Io(io::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Precondition(_) => EXIT_PRECONDITION,
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Io(_) => 1,
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Config(m) => Failure::Config(m),
            EvalError::Domain(e) => Failure::Precondition(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn load(path: &Path, cli: &Cli) -> Result<Config, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let mut config = Config::parse(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    if let Some(u) = cli.units {
        config.units = u;
    }
    Ok(config)
}

fn compute(config: &Config, threads: Option<usize>) -> Result<Vec<Row>, Failure> {
    let points = evaluate::points(config);
    let run = || -> Vec<Result<Row, EvalError>> {
        points.par_iter().map(|p| evaluate::evaluate(config, p)).collect()
    };
    let results = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Failure::Config(e.to_string()))?
            .install(run),
        None => run(),
    };
    // The first failing point by sweep index, whatever the thread count.
    results.into_iter().collect::<Result<_, _>>().map_err(Failure::from)
}

fn emit(rows: &[Row], config: &Config, cli: &Cli) -> Result<(), Failure> {
    let format = cli.format.or(config.output.format).unwrap_or_default();
    match cli.out.as_ref().or(config.output.path.as_ref()) {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            output::write(rows, format, &mut w)?;
            w.flush()?;
        }
        None => output::write(rows, format, io::stdout().lock())?,
    }
    Ok(())
}

fn validate(suite: &str, n_max: Option<u64>, cli: &Cli) -> Result<(), Failure> {
    let suite: Suite = suite.parse().map_err(Failure::Config)?;
    let mut options = Options::default();
    if let Some(n) = n_max {
        if n == 0 {
            return Err(Failure::Config("--n-max must be >= 1".into()));
        }
        options.n_max = n;
    }
    let report = validation::run(suite, &options).map_err(|e| Failure::Precondition(e.to_string()))?;
    match &cli.out {
        Some(path) => fs::write(path, report.to_string())?,
        None => println!("{report}"),
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("suite {} failed", suite.name())))
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Force { config } => {
            let mut config = load(config, cli)?;
            config.sweep = None;
            let rows = compute(&config, cli.threads)?;
            emit(&rows, &config, cli)
        }
        Command::Sweep { config } => {
            let config = load(config, cli)?;
            if config.sweep.is_none() {
                return Err(Failure::Config("config has no [sweep] block".into()));
            }
            let rows = compute(&config, cli.threads)?;
            emit(&rows, &config, cli)
        }
        Command::Validate { suite, n_max } => validate(suite, *n_max, cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(m) => eprintln!("config error: {m}"),
                Failure::Precondition(m) => eprintln!("precondition violated: {m}"),
                Failure::Validation(m) => eprintln!("validation failed: {m}"),
                Failure::Io(e) => eprintln!("i/o error: {e}"),
            }
            ExitCode::from(f.code())
        }
    }
}
