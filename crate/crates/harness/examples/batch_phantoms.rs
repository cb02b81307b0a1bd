//! Writes the phantom corpus, runs every method over it and summarizes.
//!
//! `cargo run --example batch_phantoms [-- <work_dir>]`

use std::path::PathBuf;

use growcut_harness::experiment::write_phantom_corpus;
use growcut_harness::report::{read_records, summarize};
use growcut_harness::{run_experiment, ExperimentSpec, Method, MethodConfig};

fn main() -> anyhow::Result<()> {
    let work = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("growcut-batch"));
    let corpus = work.join("corpus");
    write_phantom_corpus(&corpus)?;

    let mut rows = Vec::new();
    for method in Method::ALL {
        let spec = ExperimentSpec {
            corpus_dir: corpus.clone(),
            method,
            output_dir: work.join(method.name()),
            rng_seed: 11,
            config: MethodConfig::default(),
            workers: 0,
        };
        let outcome = run_experiment(&spec)?;
        for r in &outcome.records {
            println!(
                "{:<10} {:<8} DSC {:.4}  iterations {:>3}  SSP p {:.3}",
                method.name(),
                r.id,
                r.report.overlap.dsc,
                r.iterations_used,
                r.report.ssp_pvalue
            );
        }
        for f in &outcome.failures {
            println!("{:<10} {:<8} failed: {}", method.name(), f.id, f.error);
        }
        rows.extend(read_records(spec.output_dir.join("records.csv"))?);
    }

    let summary = summarize(&rows)?;
    summary.write(work.join("report"))?;
    println!("\n{}", summary.markdown());
    println!("outputs under {}", work.display());
    Ok(())
}
