use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use coprod::Caps;
use coprod_cli::commands::{self, load, CliError, DotKind, Input, OmegaArg, Output};

/// Coproducts, piggyback dualities and Priestley duals of finite
/// distributive-lattice-based algebras.
///
/// INPUT is a path to an `.alg` file or a catalog id such as `kleene3`,
/// `heyting_chain:4` or `mv_chain(6)`. In `.alg` tables, argument tuples are
/// listed in row-major lexicographic order, leftmost argument most significant.
///
/// Exit codes: 0 success, 1 unknown (a resource cap was hit), 2 input error.
#[derive(Parser, Debug)]
#[command(name = "coprod", version)]
struct Cli {
    /// Print the JSON report (schema 1) instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest direct product (number of elements) any analysis may build.
    #[arg(long, global = true, env = "COPROD_CAP", default_value_t = 1_000_000)]
    cap: u128,
    /// Carrier set Ω: `auto` for a minimal one, or `[SORT:]L,L;...` listing prime filters by element labels.
    #[arg(long, global = true, default_value = "auto")]
    omega: OmegaArg,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the E/S flowchart on the quasivariety generated by the inputs.
    Classify {
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Print the piggyback alter ego: sorts, carriers, relations and operations.
    Duality {
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Coproduct of the given algebras, with the injections.
    Coproduct {
        #[arg(required = true)]
        inputs: Vec<String>,
        /// Generators of the ambient quasivariety (default: the family itself).
        #[arg(long = "in", value_name = "INPUT")]
        variety: Vec<String>,
    },
    /// Free algebra on N generators in the quasivariety generated by the inputs.
    Free {
        n: usize,
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Rebuild the Priestley dual of each input from its natural dual and compare.
    RevengCheck {
        input: String,
        /// Generators of the ambient quasivariety (default: the input itself).
        #[arg(long = "in", value_name = "INPUT")]
        variety: Vec<String>,
    },
    /// Classify the catalog suite and compare each row with its expected verdict.
    Table1,
    /// DOT output for a poset attached to the input.
    ExportDot {
        input: String,
        #[arg(long, value_enum, default_value_t = DotKind::Priestley)]
        what: DotKind,
    },
}

fn load_all(args: &[String]) -> Result<Vec<Input>, CliError> {
    args.iter().map(|a| load(a)).collect()
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let caps = Caps::with_product_size(cli.cap);
    match &cli.command {
        Command::Classify { inputs } => commands::classify(&load_all(inputs)?, &cli.omega, &caps),
        Command::Duality { inputs } => commands::duality(&load_all(inputs)?, &cli.omega, &caps),
        Command::Coproduct { inputs, variety } => {
            commands::coproduct_cmd(&load_all(inputs)?, &load_all(variety)?, &caps)
        }
        Command::Free { n, inputs } => commands::free(*n, &load_all(inputs)?, &caps),
        Command::RevengCheck { input, variety } => {
            commands::reveng_check(&load(input)?, &load_all(variety)?, &cli.omega, &caps)
        }
        Command::Table1 => commands::table1(&caps),
        Command::ExportDot { input, what } => commands::export_dot(&load(input)?, *what, &caps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let mut body = if cli.json {
        serde_json::to_string_pretty(&out.json).expect("json value")
    } else {
        out.text
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    let written = match &cli.out {
        Some(path) => std::fs::write(path, body.as_bytes()),
        None => std::io::stdout().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
