//! Experiment orchestration: protocol sweeps through both engines, error
//! metrics and CSV output.

pub mod config;
pub mod experiment;
pub mod io;
pub mod metrics;

pub use config::{read_sigma_file, ParameterSet, Sweep};
pub use experiment::{
    run_experiment, EngineSelection, ExperimentConfig, ExperimentResult, ResultRow, Summary,
};
pub use io::{emit_csv, read_result_csv, result_csv};
pub use metrics::{nmse, relative_rms};
