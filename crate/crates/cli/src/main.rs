use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use adams_core::dsl::{parse_input, DslError, InputDocument};
use adams_core::enumerate::{Check, Family};
use adams_core::recipe::TowerChoice;
use adams_core::HalfInt;
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::{CliError, Output};

#[derive(Parser)]
#[command(name = "adams", version, about = "Theta lifts of Arthur parameters along the Adams conjecture")]
struct Cli {
    /// Emit JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArg {
    /// Input file; reads stdin when omitted or "-".
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TowerArg {
    Plus,
    Minus,
    Both,
}

impl TowerArg {
    fn towers(self) -> Vec<TowerChoice> {
        match self {
            TowerArg::Plus => vec![TowerChoice::Plus],
            TowerArg::Minus => vec![TowerChoice::Minus],
            TowerArg::Both => TowerChoice::BOTH.to_vec(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Descend both towers and report d, first occurrences and every level.
    Analyze {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum, default_value = "both")]
        tower: TowerArg,
        /// Also list members above the high lift, up to this level.
        #[arg(long)]
        max_alpha: Option<i64>,
    },
    /// The lift of the member at one level of one tower.
    Lift {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        alpha: i64,
        #[arg(long)]
        tower: TowerChoice,
    },
    /// Chains, l(π) and the going-up/going-down lifts of a standard module.
    Chains {
        #[command(flatten)]
        input: InputArg,
        /// Only this level.
        #[arg(long)]
        alpha: Option<i64>,
        /// Highest level listed; defaults to l(π) + 6.
        #[arg(long)]
        max_alpha: Option<i64>,
    },
    /// l(π) of a standard module.
    L {
        #[command(flatten)]
        input: InputArg,
    },
    /// Expansion of M*(ζ(a,b)).
    Mstar {
        #[arg(allow_hyphen_values = true)]
        a: HalfInt,
        #[arg(allow_hyphen_values = true)]
        b: HalfInt,
    },
    /// Whether Jac_{-z} of the Langlands quotient of a standard module is nonzero.
    Jac {
        z: HalfInt,
        #[command(flatten)]
        input: InputArg,
        /// Use the `std@ALPHA` clause instead of `std:`.
        #[arg(long)]
        alpha: Option<i64>,
    },
    /// Enumerate members and run invariant checks.
    Enumerate {
        #[arg(long, default_value = "all")]
        family: Family,
        #[arg(long, default_value_t = 12)]
        max_dim: u32,
        /// Comma-separated check names; all checks when omitted.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<Check>,
    },
    /// Parse and validate a member.
    Validate {
        #[command(flatten)]
        input: InputArg,
    },
}

fn read_document(input: &InputArg) -> Result<InputDocument, CliError> {
    let text = match input.file.as_deref() {
        Some(path) if path.as_os_str() != "-" => {
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
        }
        _ => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::Io(e.to_string()))?;
            text
        }
    };
    parse_input(&text).map_err(|e| match e {
        DslError::Syntax { .. } => CliError::Parse(e.to_string()),
        DslError::Semantic { .. } => CliError::Invalid(e.to_string()),
    })
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Analyze { input, tower, max_alpha } => {
            commands::analyze(&read_document(input)?, &tower.towers(), *max_alpha)
        }
        Command::Lift { input, alpha, tower } => commands::lift(&read_document(input)?, *alpha, *tower),
        Command::Chains { input, alpha, max_alpha } => commands::chains(&read_document(input)?, *alpha, *max_alpha),
        Command::L { input } => commands::l(&read_document(input)?),
        Command::Mstar { a, b } => commands::mstar(*a, *b),
        Command::Jac { z, input, alpha } => commands::jac(&read_document(input)?, *z, *alpha),
        Command::Enumerate { family, max_dim, checks } => {
            let checks = if checks.is_empty() { Check::ALL.to_vec() } else { checks.clone() };
            commands::enumerate(*family, *max_dim, &checks)
        }
        Command::Validate { input } => commands::validate(&read_document(input)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&output.json).expect("values serialize"));
            } else {
                print!("{}", output.text);
            }
            if let Some(why) = &output.warning {
                eprintln!("adams: {why}");
            }
            ExitCode::from(output.code)
        }
        Err(e) => {
            eprintln!("adams: {e}");
            ExitCode::from(e.code())
        }
    }
}
