//! File formats and run orchestration for the street-corner VLC channel
//! simulator. The physics lives in `vvlc-core`; this crate reads configs,
//! drives snapshot, timeline and Monte Carlo runs, and writes results.

pub mod config;
pub mod output;
pub mod run;

pub use config::{apply_overrides, parse_config, ConfigError};
pub use run::{run, Mode, RunError, RunRequest};
