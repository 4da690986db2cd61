//! Command-line front end: argument parsing, JSON and LaTeX emitters and
//! report assembly.

pub mod args;
pub mod json;
pub mod latex;
pub mod report;
pub mod run;
