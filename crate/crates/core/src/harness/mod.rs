//! Instance generators, the seeded experiment runner and statistical checks.

pub mod experiment;
pub mod gen;
pub mod stats;

pub use experiment::{
    run_benchmark, run_experiment, Aggregates, Algorithm, BenchConfig, BenchReport, BenchRow,
    ExperimentConfig, InstanceSource, Report, TrialRecord,
};
pub use gen::{gen_graph, gen_set_system, GeneratedSystem, GraphModel, SetModel};
pub use stats::{fit_power_law, lemma_5_1_test, median, percentile, LemmaReport, LemmaRow};
