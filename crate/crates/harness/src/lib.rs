//! Batch experiments, summary tables and the HTTP service built on the
//! `growcut` segmentation library.

pub mod experiment;
pub mod methods;
pub mod overlay;
pub mod report;
pub mod service;

pub use experiment::{run_experiment, ExperimentOutcome, ExperimentSpec, RunRecord};
pub use methods::{segment, Method, MethodConfig};
pub use report::{read_records, summarize, Summary};
