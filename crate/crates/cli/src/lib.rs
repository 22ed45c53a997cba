//! Command-line front end for `fadel-core`: a parser for operator
//! expressions and the `fadel` command dispatcher.

pub mod app;
pub mod parse;

pub use app::{run, ExitCode, Output};
