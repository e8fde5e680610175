//! Config-driven batch front-end for HOM interference simulations.

pub mod error;
pub mod execute;
pub mod output;
pub mod scenario;
pub mod spec_file;

pub use error::{CliError, CliResult};
pub use execute::{build_kernel, execute, run_config, Provenance, RunReport};
pub use output::emit_curve;
pub use scenario::{load_scenario, parse_scenario, Scenario, TaskKind};
