//! Configuration files, snapshots and report tables.

pub mod config;
pub mod report;
pub mod snapshot;

pub use config::RunConfig;
pub use report::{rates_json, sweep_detail_json, sweep_rates, sweep_table, RateSummary, Table, SWEEP_COLUMNS};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot};
