//! Std companion to `evpix-core`: config files, event-stream IO,
//! rendering and the parallel simulation driver.
//!
//! The core crate owns the pixel model and stays `no_std`; everything
//! that touches files, threads or the command line lives here.

pub mod config;
pub mod events_io;
pub mod parallel;
pub mod pgm;
pub mod render;
pub mod trace;

pub use config::{load_sim_config, load_stimulus, ConfigError, ResolvedSimConfig};
pub use events_io::{
    read_events_bin, read_events_csv, write_events_bin, write_events_csv, EventIoError,
};
pub use parallel::simulate_parallel;
pub use render::{render_accumulation, RenderOutcome};
