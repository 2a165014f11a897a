//! IO and orchestration around `quadfermat-core`: fixture/cache/network
//! ingestion of newform and curve data, the elimination runner, report
//! rendering, and the table-verification harness.

pub mod config;
pub mod report;
pub mod runner;
pub mod store;
pub mod verify;

pub use config::{DataMode, RunConfig};
pub use store::{Store, StoreError};
