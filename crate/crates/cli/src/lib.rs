//! Command-line front end for `itm-core`: reduction traces, type detection,
//! seeded sampling campaigns and SVG diagrams.

pub mod args;
pub mod commands;
pub mod experiment;
pub mod render;

pub use commands::{run, CliError, Exit, Outcome};
