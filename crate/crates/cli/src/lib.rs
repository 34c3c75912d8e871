//! Library half of the `fairnet` command-line tool: file formats, result
//! serialization, and the run manifest. The binary in `main.rs` is a thin
//! argument-parsing layer over these modules and `fairnet-core`.

pub mod edgelist;
pub mod error;
pub mod manifest;
pub mod report;
pub mod svg;
pub mod sweepfile;

pub use error::CliError;
