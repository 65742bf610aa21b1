use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use uplink_core::harness::{
    check_oracle_agreement, check_orderings, emit_csv, emit_gnuplot, parse_config, preset,
    run_sweep, write_csv, Figure, Processing, SweepResult, SweepSpec, SweptParameter,
};
use uplink_core::{ChannelProfile, Error, Scheme, SimConfig};

const EXIT_INVARIANT: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "uplink",
    version,
    about = "Per-cell uplink throughput with random user activity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one parameter point.
    Rate(RateArgs),
    /// Run a sweep described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rate vs total cell power.
    Fig3(FigureArgs),
    /// Per-active-user rate vs non-activity probability.
    Fig4(FigureArgs),
    /// Rate vs users per cell.
    Fig5(FigureArgs),
    /// Rate vs inter-cell interference factor.
    Fig6(FigureArgs),
    /// Run the invariant suite.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProcessingArg {
    Mcp,
    Scp,
    Both,
}

#[derive(Args)]
struct RateArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha0: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    alpha1: f64,
    /// Comma-separated real taps α_{-l1}..α_{l2}; overrides --alpha0/--alpha1.
    #[arg(long, allow_hyphen_values = true)]
    taps: Option<String>,
    /// Number of taps left of the local one (with --taps).
    #[arg(long, default_value_t = 0)]
    l1: usize,
    #[arg(long, default_value = "apc")]
    scheme: String,
    #[arg(long = "K", default_value_t = 5)]
    users: u32,
    #[arg(long, default_value_t = 0.3)]
    q: f64,
    #[arg(
        long = "power-db",
        default_value_t = 5.0,
        allow_negative_numbers = true
    )]
    power_db: f64,
    #[arg(long, value_enum, default_value = "both")]
    processing: ProcessingArg,
    /// Monte Carlo validation as M,trials,seed.
    #[arg(long)]
    validate: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write gnuplot-indexed data here.
    #[arg(long)]
    gnuplot: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// Monte Carlo validation as M,trials,seed.
    #[arg(long)]
    validate: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

enum Failure {
    Config(String),
    Numerical(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoBracket { .. }
            | Error::NoConvergence { .. }
            | Error::NumericalFailure { .. }
            | Error::DegenerateTaps
            | Error::SupportTooLarge { .. } => Failure::Numerical(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

fn parse_validate(v: &Option<String>) -> Result<Option<SimConfig>, Failure> {
    v.as_deref()
        .map(|s| uplink_core::harness::parse_config_validate(s).map_err(Failure::from))
        .transpose()
}

fn rate_spec(args: &RateArgs) -> Result<SweepSpec, Failure> {
    let mut spec = SweepSpec::new(SweptParameter::PowerDb, vec![args.power_db]);
    spec.profile = match &args.taps {
        Some(t) => {
            let taps = t
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Failure::Config(format!("cannot parse taps '{t}'")))?;
            if taps.len() <= args.l1 {
                return Err(Failure::Config(format!(
                    "--l1 {} leaves no local tap",
                    args.l1
                )));
            }
            ChannelProfile::from_real_taps(args.l1, taps.len() - 1 - args.l1, &taps)?
        }
        None => ChannelProfile::sho_real(args.alpha0, args.alpha1)?,
    };
    spec.users = args.users;
    spec.q = args.q;
    spec.power_db = args.power_db;
    spec.schemes = vec![args.scheme.parse::<Scheme>()?];
    spec.processing = match args.processing {
        ProcessingArg::Mcp => vec![Processing::Mcp],
        ProcessingArg::Scp => vec![Processing::Scp],
        ProcessingArg::Both => Processing::ALL.to_vec(),
    };
    spec.validate = parse_validate(&args.validate)?;
    Ok(spec)
}

fn execute(spec: &SweepSpec, output: Option<&OutputArgs>) -> Result<(), Failure> {
    let result = run_sweep(spec)?;
    write_outputs(&result, output)?;
    for row in result.failed() {
        eprintln!(
            "row {}={} {}-{} failed: {}",
            row.param,
            row.value,
            row.processing,
            row.scheme,
            row.error.as_deref().unwrap_or("")
        );
    }
    let mut violations = check_orderings(&result);
    violations.extend(check_oracle_agreement(&result));
    if !violations.is_empty() {
        let dump: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure::Invariant(dump.join("\n")));
    }
    if result.failed().next().is_some() {
        return Err(Failure::Numerical("one or more rows failed".into()));
    }
    Ok(())
}

fn write_outputs(result: &SweepResult, output: Option<&OutputArgs>) -> Result<(), Failure> {
    match output.and_then(|o| o.out.as_ref()) {
        Some(path) => write_csv(result, path)?,
        None => emit_csv(result, io::stdout().lock())?,
    }
    if let Some(path) = output.and_then(|o| o.gnuplot.as_ref()) {
        let file =
            File::create(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        let mut w = io::BufWriter::new(file);
        emit_gnuplot(result, &mut w)?;
        w.flush()
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn figure(fig: Figure, args: &FigureArgs) -> Result<(), Failure> {
    let mut spec = preset(fig);
    spec.validate = parse_validate(&args.validate)?;
    execute(&spec, Some(&args.output))
}

fn selftest() -> Result<(), Failure> {
    let outcomes = uplink_core::selftest::run_selftest()?;
    let mut failed = 0;
    for o in &outcomes {
        println!(
            "{} {}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
        failed += usize::from(!o.passed);
    }
    if failed > 0 {
        return Err(Failure::Invariant(format!(
            "{failed} selftest check(s) failed"
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Rate(args) => execute(&rate_spec(&args)?, None),
        Command::Sweep { config, output } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| Failure::Config(format!("{}: {e}", config.display())))?;
            execute(&parse_config(&text)?, Some(&output))
        }
        Command::Fig3(a) => figure(Figure::Fig3, &a),
        Command::Fig4(a) => figure(Figure::Fig4, &a),
        Command::Fig5(a) => figure(Figure::Fig5, &a),
        Command::Fig6(a) => figure(Figure::Fig6, &a),
        Command::Selftest => selftest(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("configuration error: {m}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::Invariant(m)) => {
            eprintln!("invariant violation:\n{m}");
            ExitCode::from(EXIT_INVARIANT)
        }
    }
}
