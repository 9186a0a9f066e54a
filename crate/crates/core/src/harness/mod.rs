//! Experiment configs, the parallel runner, CSV output, scaling sweeps,
//! the passive baseline and the brute-force reference suite.

pub mod bruteforce;
pub mod config;
pub mod experiment;
pub mod passive;
pub mod sweep;

pub use bruteforce::{validate_against_bruteforce, validate_with_search, BruteforceReport, Mismatch, SearchFn};
pub use config::{Algorithm, BackendKind, ClassSpec, ExperimentConfig, FamilyKind};
pub use experiment::{read_results_csv, run_experiment, write_results_csv, ResultRow, CSV_VERSION_LINE};
pub use passive::{passive_sample_size, run_passive, PassiveRun};
pub use sweep::{check_grid, median, scaling_report, sweep_query_complexity, ScalingPoint, ScalingReport};
