//! Batch front end for the stretch-line geometry library: reads ray and
//! cylinder descriptions, runs `t`-sweeps and two-ray comparisons, and
//! writes aligned tables, CSV, or SVG plots.

pub mod commands;
pub mod compare;
pub mod config;
pub mod error;
pub mod input;
pub mod output;
pub mod sweep;

pub use commands::{execute, Cli, Command};
pub use config::{Format, Quantity, SweepConfig};
pub use error::{CliError, Result};
pub use input::{parse_document, print_document, Document};
