//! Command-line frontend for the `coprod` library: the `.alg` file format and
//! the analyses behind each subcommand.

pub mod commands;
pub mod format;

pub use commands::{CliError, Input, Output};
pub use format::{AlgebraFile, CarrierDecl, ParseError};
