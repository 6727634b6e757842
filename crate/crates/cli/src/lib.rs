//! Scenario runner: TOML configs in, assumption reports, trajectories,
//! comparison and bracket summaries out.

pub mod config;
pub mod scenario;

pub use config::{ConfigError, ScenarioConfig, PRESETS};
pub use scenario::{list_scenarios, run_scenario, Outcome, RunError};
