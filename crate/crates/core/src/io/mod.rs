//! Problem files, command dispatch and run reports for the CLI.

pub mod commands;
pub mod problem;
pub mod report;

pub use commands::{run_command, Command};
pub use problem::{parse_problem, Overrides, Problem, ProblemFile};
pub use report::RunReport;
