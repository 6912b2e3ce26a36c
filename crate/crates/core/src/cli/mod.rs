//! Script language and command-line driver.

mod fuzz;
mod run;
mod script;
mod sweep;

#[cfg(test)]
mod tests;

pub use fuzz::{oracle_fuzz, FuzzSummary};
pub use run::{certify_script, exit_code, overall_exit, run, Engine, Report, RunOptions, Runner, Selection};
pub use script::{
    goal_words, parse_script, Base, CheckProp, ExprSpec, FactSpec, Kind, Script, SpectrumSpec, Stmt,
};
pub use sweep::{sweep_quadratic, to_csv, SweepRow, CSV_HEADER};
