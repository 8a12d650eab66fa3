//! Batch verification and eigenfunction evaluation on top of `gztoda-core`.

pub mod config;
pub mod error;
pub mod eval;
pub mod report;
pub mod suites;

pub use config::{Config, Overrides};
pub use error::CliError;
pub use eval::{run_eval, Table};
pub use report::{run_verify, Report};

/// Sizes the global worker pool. A second call keeps the first pool.
pub fn init_pool(jobs: Option<usize>) {
    #[cfg(feature = "parallel")]
    if let Some(k) = jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
}
