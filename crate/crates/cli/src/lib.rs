//! Configuration, execution and output for the `dlambda` command.

// `!(a > b)` is used on purpose so that NaN takes the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod run;

pub use config::{emit_config, parse_config, parse_config_with, ConfigError, Mode, RunConfig};
pub use output::{render_csv, render_json, write_outputs};
pub use run::{run, Report};
