//! Sweep orchestration for the design-space-exploration toolkit: declarative
//! configs, the grid runner, deterministic CSV/JSON tables, and best/worst
//! combination summaries.

pub mod config;
pub mod output;
pub mod summarize;
pub mod sweep;

pub use config::{load_config, ConfigError, SweepConfig, ValidatedConfig};
pub use output::{csv_string, emit_csv, emit_json, json_string, parse_csv, read_csv, read_json};
pub use summarize::{summarize_best_worst, BestWorst};
pub use sweep::{run_sweep, ResultRecord};
