use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vislaw::commands::{self, GridSpec, Invariant, Output};
use vislaw_core::hierarchy::Family;

#[derive(Parser)]
#[command(name = "vislaw", version, about = "Viscous conservation laws: classification, hierarchies, simulation and audit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Burgers,
    Negative,
    #[value(name = "viscousCH")]
    ViscousCh,
}

#[derive(Clone, Copy, ValueEnum)]
enum InvariantArg {
    Constant,
    Linear,
}

#[derive(Subcommand)]
enum Command {
    /// Integrable currents up to the given order, with their constraints
    Classify {
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long)]
        json: bool,
    },
    /// Miura normal form of a serialized current
    NormalForm {
        input: PathBuf,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Bracket of two serialized currents
    Bracket {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// A member of one of the built-in hierarchies
    Hierarchy {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 1)]
        index: usize,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Quasi-Miura series for a central invariant
    Quasimiura {
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, value_enum, default_value_t = InvariantArg::Constant)]
        a: InvariantArg,
        #[arg(long)]
        json: bool,
    },
    /// Integrate the auxiliary-field system from a JSON config
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Fields CSV (t, x, v, P)
        #[arg(long)]
        out: PathBuf,
        /// Diagnostics CSV; defaults to `<out stem>.diagnostics.csv`
        #[arg(long)]
        diagnostics: Option<PathBuf>,
    },
    /// Tabulate the Pearcey profile and its residuals
    Pearcey {
        #[arg(long, value_name = "LO:HI:N", allow_hyphen_values = true)]
        grid: GridSpec,
        #[arg(long = "t-grid", value_name = "LO:HI:N", allow_hyphen_values = true)]
        t_grid: GridSpec,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-run every claim check and report
    Audit {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Output, vislaw::CliError> {
    match cli.command {
        Command::Classify { order, json } => commands::classify(order, json),
        Command::NormalForm { input, order, json } => commands::normal_form(&input, order, json),
        Command::Bracket { first, second, order, json } => commands::bracket(&first, &second, order, json),
        Command::Hierarchy { family, index, order, json } => {
            let family = match family {
                FamilyArg::Burgers => Family::Burgers,
                FamilyArg::Negative => Family::Negative,
                FamilyArg::ViscousCh => Family::ViscousCh,
            };
            commands::hierarchy(family, index, order, json)
        }
        Command::Quasimiura { order, a, json } => {
            let a = match a {
                InvariantArg::Constant => Invariant::Constant,
                InvariantArg::Linear => Invariant::Linear,
            };
            commands::quasimiura(order, a, json)
        }
        Command::Simulate { config, out, diagnostics } => commands::simulate(&config, &out, diagnostics.as_deref()),
        Command::Pearcey { grid, t_grid, out } => commands::pearcey(grid, t_grid, &out),
        Command::Audit { json, out_dir } => commands::audit(json, out_dir.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("vislaw: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
