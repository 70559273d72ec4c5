//! File formats, SVG output and the `tdd` command line.

pub mod commands;
pub mod format;
pub mod svg;

pub use commands::{run, Cli};
