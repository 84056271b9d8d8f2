//! File formats, overlays, reports and benchmarks around [`gmmsp_core`].

pub mod bench;
pub mod error;
pub mod io;
pub mod overlay;
pub mod pnm;
pub mod report;

pub use bench::{run_benchmark, run_single, BenchConfig, GridSpec, Outputs, RunConfig};
pub use error::{Error, Result};
pub use report::MetricsReport;
