//! Run configuration: data mode, directories, API endpoint.

use std::path::PathBuf;

pub const API_BASE_ENV: &str = "QUADFERMAT_API_BASE";
pub const OFFLINE_ENV: &str = "QUADFERMAT_OFFLINE";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataMode {
    /// Never open a network connection; fixtures and cache only.
    Offline,
    Online,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: DataMode,
    pub fixtures_dir: PathBuf,
    pub cache_dir: Option<PathBuf>,
    pub api_base: Option<String>,
    /// Minimum delay between requests, milliseconds.
    pub request_delay_ms: u64,
    /// Norm bound for the comparison prime set.
    pub t_norm_bound: u64,
}

impl RunConfig {
    pub fn offline(fixtures_dir: PathBuf) -> Self {
        RunConfig {
            mode: DataMode::Offline,
            fixtures_dir,
            cache_dir: None,
            api_base: None,
            request_delay_ms: 500,
            t_norm_bound: 50,
        }
    }

    /// Built-in fixture location (the bundled data set).
    pub fn bundled_fixtures() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
    }
}
