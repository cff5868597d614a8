//! Command-line front end for sweeps, thresholds, Husimi grids and phase scans.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use trimer::sweep::{emit, recipe, run, Command, ConfigError, Format, RunError, SweepConfig, Units};

#[derive(Parser, Debug)]
#[command(version, about = "Quantum resources of the mixed spin-(1/2,1,1/2) Heisenberg trimer")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate quantities on a (D, B, T) grid
    Sweep(Common),
    /// Threshold temperatures of a negativity on a (D, B) grid
    Threshold(Common),
    /// Husimi Q-function on a (theta, phi) grid for one thermal state
    Husimi(Common),
    /// Zero-temperature critical fields, analytic and numeric
    Phase(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// TOML run configuration
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Embedded recipe name (e.g. fig1b, fig6a, thr-cunicu)
    #[arg(long)]
    preset: Option<String>,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum)]
    units: Option<UnitsArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Gnuplot,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum UnitsArg {
    Reduced,
    Physical,
}

fn load(command: Command, args: &Common) -> Result<SweepConfig, RunError> {
    let mut cfg = match (&args.config, &args.preset) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::new(format!("cannot read {}: {e}", path.display())))?;
            SweepConfig::from_toml(&text)?
        }
        (None, Some(name)) => recipe(name)?,
        _ => return Err(ConfigError::new("pass exactly one of --config or --preset").into()),
    };
    if let Some(c) = cfg.command {
        if c != command {
            return Err(ConfigError::new(format!("config is for `{}`, not `{}`", c.name(), command.name())).into());
        }
    }
    cfg.command = Some(command);
    if let Some(u) = args.units {
        let u = match u {
            UnitsArg::Reduced => Units::Reduced,
            UnitsArg::Physical => Units::Physical,
        };
        if cfg.units.is_some_and(|c| c != u) {
            return Err(ConfigError::new(format!(
                "units are ambiguous: config says `{}`, --units says `{}`",
                cfg.units.unwrap().name(),
                u.name()
            ))
            .into());
        }
        cfg.units = Some(u);
    }
    if let Some(f) = args.format {
        cfg.output.format = Some(match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Gnuplot => Format::Gnuplot,
        });
    }
    if let Some(out) = &args.out {
        cfg.output.path = Some(out.clone());
    }
    if let Some(w) = args.workers {
        cfg.output.workers = Some(w);
    }
    Ok(cfg)
}

fn execute(command: Command, args: &Common) -> Result<(), RunError> {
    let cfg = load(command, args)?;
    let table = run(&cfg)?;
    emit(&table, cfg.format(), cfg.output.path.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Cmd::Sweep(a) => (Command::Sweep, a),
        Cmd::Threshold(a) => (Command::Threshold, a),
        Cmd::Husimi(a) => (Command::Husimi, a),
        Cmd::Phase(a) => (Command::Phase, a),
    };
    match execute(command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("trimer: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
