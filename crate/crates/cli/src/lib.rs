//! Command-line front end for `frame-rkhs`: JSON frame and model files in,
//! human reports and JSON result files out.

pub mod commands;
pub mod error;
pub mod files;
pub mod format;

pub use commands::{Options, Outcome};
pub use error::CliError;
