//! Run configuration, the simulation driver, error norms, convergence
//! studies, conservation tracking and file output.

mod config;
mod driver;
mod norms;
mod output;

pub use config::{parse_config, RunConfig, CONFIG_KEYS};
pub use driver::{run_simulation, BlockStiff, RunOutput, RunSettings};
pub use norms::{convergence_orders, convergence_study, error_norms, ConvergenceRow};
pub use output::{write_convergence, write_field_text, write_field_vtk, OutputPaths};

use std::sync::OnceLock;

/// Build the global thread pool from the PCWENO_THREADS environment
/// variable (0 or unset: automatic). Safe to call repeatedly.
pub fn init_threads() {
    static DONE: OnceLock<()> = OnceLock::new();
    DONE.get_or_init(|| {
        if let Ok(v) = std::env::var("PCWENO_THREADS") {
            if let Ok(n) = v.trim().parse::<usize>() {
                if n > 0 {
                    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
                }
            }
        }
    });
}
