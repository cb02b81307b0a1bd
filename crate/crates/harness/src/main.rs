use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use growcut::io::{load_gray_image, load_mask, load_seeds, save_mask};
use growcut::metrics::metrics_report;
use growcut_harness::report::{read_records, summarize};
use growcut_harness::{run_experiment, segment, ExperimentSpec, Method, MethodConfig};

#[derive(Parser)]
#[command(name = "growcut", version, about = "Seeded segmentation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment one image and write the mask as PNG.
    Segment {
        #[arg(long)]
        method: Method,
        #[arg(long)]
        image: PathBuf,
        /// JSON or CSV seed list (not needed for ssgc).
        #[arg(long)]
        seeds: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// JSON file of per-method parameter blocks.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Ground-truth mask; prints the metrics report when given.
        #[arg(long)]
        gt: Option<PathBuf>,
    },
    /// Run an experiment spec over a corpus. Exits with 2 if some images failed.
    Batch {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Summarize one or more records.csv files into a directory of tables.
    Report {
        #[arg(long, required = true, num_args = 1..)]
        records: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load_config(path: Option<&PathBuf>) -> anyhow::Result<MethodConfig> {
    Ok(match path {
        Some(p) => MethodConfig::load(p)?,
        None => MethodConfig::default(),
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Segment {
            method,
            image,
            seeds,
            out,
            config,
            gt,
        } => {
            let cfg = load_config(config.as_ref())?;
            let img = load_gray_image(&image)?;
            let seeds = seeds.map(load_seeds).transpose()?;
            let res = segment(method, &img, seeds.as_ref(), &cfg)?;
            save_mask(&res.mask, &out)?;
            println!("iterations: {} (converged: {})", res.iterations_used, res.converged);
            if let Some(gt) = gt {
                let report = metrics_report(&img, &res.mask, &load_mask(gt)?)?;
                println!("{}", serde_json::to_string_pretty(&report)?);
            }
        }
        Command::Batch { spec } => {
            let spec = ExperimentSpec::load(&spec)?;
            let outcome = run_experiment(&spec)?;
            println!(
                "{} records, {} failures -> {}",
                outcome.records.len(),
                outcome.failures.len(),
                spec.output_dir.display()
            );
            if !outcome.is_complete() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Report { records, out } => {
            let mut rows = Vec::new();
            for p in &records {
                rows.extend(read_records(p).with_context(|| format!("reading {}", p.display()))?);
            }
            let summary = summarize(&rows)?;
            summary.write(&out)?;
            print!("{}", summary.markdown());
        }
        Command::Serve { port, host, config } => {
            let cfg = load_config(config.as_ref())?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(growcut_harness::service::serve(SocketAddr::new(host, port), cfg))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
