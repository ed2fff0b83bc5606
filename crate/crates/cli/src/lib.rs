//! Scenario runner: structured files in, verdicts, tables, and certificates
//! out.  See the repository README for the schema; every fixture under
//! `fixtures/` doubles as a regression test.

mod demo;
mod render;
mod scenario;

pub use demo::{run_failure_demo, FailureDemoReport};
pub use render::render_text;
pub use scenario::{
    run_scenario, run_str, PlacesMode, Report, RunError, RunOptions, Scenario, ScenarioFile,
    SCHEMA_VERSION,
};
