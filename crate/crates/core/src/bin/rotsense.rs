use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rotsense::experiments::{self, scaling_fit, ExperimentConfig, Scenario};
use rotsense::table::DatTable;

#[derive(Parser)]
#[command(
    name = "rotsense",
    version,
    about = "SU(2) interferometry for rotation sensing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// QFI against photon number 2j
    Fig2a(RunArgs),
    /// QFI against f at fixed j
    Fig2b(RunArgs),
    /// Dicke distributions, linear vs nonlinear
    Fig3(RunArgs),
    /// Husimi Q functions
    Fig4(RunArgs),
    /// Exact atom dynamics against the effective model
    Fig5(RunArgs),
    /// One-axis QFI sweep
    Sweep(RunArgs),
    /// Sagnac splitting table
    Sagnac(RunArgs),
    /// Power-law fit of two columns of a .dat file
    Fit(FitArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML file with scenario keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one key, e.g. --set j=30
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Print the resolved configuration and exit
    #[arg(long)]
    print_config: bool,
}

#[derive(Args)]
struct FitArgs {
    file: PathBuf,
    #[arg(long, default_value = "two_j")]
    x: String,
    #[arg(long, default_value = "qfi_linear")]
    y: String,
    #[arg(long, default_value_t = 0.0)]
    min: f64,
    #[arg(long, default_value_t = f64::INFINITY)]
    max: f64,
}

fn run(scenario: Scenario, args: RunArgs) -> Result<u8, rotsense::Error> {
    let mut cfg = ExperimentConfig::resolve(scenario, args.config.as_deref(), &args.set)?;
    if let Some(out) = args.out {
        cfg.output_dir = out;
    }
    if args.print_config {
        print!("{}", cfg.to_toml());
        return Ok(0);
    }
    let report = experiments::run(&cfg, args.jobs)?;
    for c in &report.checks {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    println!("wrote {}", report.output_dir.display());
    Ok(report.exit_code() as u8)
}

fn fit(args: FitArgs) -> Result<u8, rotsense::Error> {
    let text = std::fs::read_to_string(&args.file)?;
    let table = DatTable::parse(&text)?;
    let col = |name: &str| {
        table.get(name).ok_or_else(|| {
            rotsense::Error::Config(format!("no column {name:?} in {}", args.file.display()))
        })
    };
    let f = scaling_fit(col(&args.x)?, col(&args.y)?, (args.min, args.max))?;
    println!(
        "exponent {:.6}  prefactor {:.6e}  r^2 {:.8}  points {}",
        f.exponent,
        f.intercept.exp(),
        f.r_squared,
        f.points
    );
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fig2a(a) => run(Scenario::Fig2a, a),
        Command::Fig2b(a) => run(Scenario::Fig2b, a),
        Command::Fig3(a) => run(Scenario::Fig3, a),
        Command::Fig4(a) => run(Scenario::Fig4, a),
        Command::Fig5(a) => run(Scenario::Fig5, a),
        Command::Sweep(a) => run(Scenario::CustomSweep, a),
        Command::Sagnac(a) => run(Scenario::Sagnac, a),
        Command::Fit(a) => fit(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
