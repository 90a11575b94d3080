//! Sweeps, figure tables and verification runs for phase-covariant cloners.

pub mod commands;
pub mod config;
pub mod table;

pub use commands::{CommandOutput, Status};
pub use config::{Format, SweepConfig};
pub use table::Table;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const NON_CONVERGENCE: i32 = 2;
    pub const DISCREPANCY: i32 = 3;
}
