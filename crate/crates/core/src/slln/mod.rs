//! Monte Carlo strong-law runs for simple random sets.

mod config;
mod emit;
mod run;

pub use config::{default_checkpoints, ExperimentConfig, Mode};
pub use emit::{emit, emit_sweep, render_svg, CSV_HEADER};
pub use run::{
    run_convex_slln, run_experiment, run_general_slln, run_quantization_pipeline, sweep, GammaRow, InvariantCheck,
    RunReport, RunRow, RunVerdicts, SweepReport,
};
