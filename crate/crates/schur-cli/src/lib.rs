//! Command-line surface and persistence for the Schur number solvers:
//! coloring and block-family file formats, an append-only results database
//! with certificate re-verification, and the `schur` binary's subcommands.

pub mod cli;
pub mod db;
pub mod files;

pub use cli::run;
