//! Batch runs over an image corpus.
//!
//! A corpus is one directory holding `<id>.png`, its ground truth
//! `<id>.gt.png` and, optionally, seeds in `<id>.seeds.json`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use growcut::io::{load_gray_image, load_mask, load_seeds, save_mask, save_seeds};
use growcut::metrics::{metrics_report, MetricsReport, SHAPE_METRICS};
use growcut::phantom::{phantom, Shape};
use growcut::{Error, Result, SeedSet};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::methods::{segment, Method, MethodConfig};
use crate::overlay::draw_overlay;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub corpus_dir: PathBuf,
    pub method: Method,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub rng_seed: u64,
    #[serde(default)]
    pub config: MethodConfig,
    /// Worker threads; 0 picks one per core.
    #[serde(default)]
    pub workers: usize,
}

impl ExperimentSpec {
    /// Reads a JSON spec; relative paths are taken from the spec's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::UnreadableFile {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        let mut spec: ExperimentSpec =
            serde_json::from_str(&text).map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut spec.corpus_dir, &mut spec.output_dir] {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CorpusEntry {
    pub id: String,
    pub image: PathBuf,
    pub ground_truth: PathBuf,
    pub seeds: Option<PathBuf>,
}

/// Entries sorted by id. Files that are neither images nor known sidecars
/// are ignored.
pub fn discover(dir: impl AsRef<Path>) -> Result<Vec<CorpusEntry>> {
    let dir = dir.as_ref();
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir)? {
        let name = e?.file_name().to_string_lossy().into_owned();
        let Some(id) = name.strip_suffix(".png") else {
            continue;
        };
        if id.ends_with(".gt") || id.is_empty() {
            continue;
        }
        let seeds = dir.join(format!("{id}.seeds.json"));
        out.push(CorpusEntry {
            id: id.to_string(),
            image: dir.join(&name),
            ground_truth: dir.join(format!("{id}.gt.png")),
            seeds: seeds.exists().then_some(seeds),
        });
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub id: String,
    pub method: Method,
    pub report: MetricsReport,
    pub iterations_used: usize,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub id: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub records: Vec<RunRecord>,
    pub failures: Vec<Failure>,
}

impl ExperimentOutcome {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Column order of `records.csv`.
pub const CSV_COLUMNS: [&str; 29] = [
    "id",
    "method",
    "iterations",
    "dsc",
    "sensitivity",
    "specificity",
    "bac",
    "area",
    "perimeter",
    "form_factor",
    "solidity",
    "feret_x",
    "feret_y",
    "gt_area",
    "gt_perimeter",
    "gt_form_factor",
    "gt_solidity",
    "gt_feret_x",
    "gt_feret_y",
    "err_area",
    "err_perimeter",
    "err_form_factor",
    "err_solidity",
    "err_feret_x",
    "err_feret_y",
    "ssp_w",
    "ssp_n",
    "ssp_pvalue",
    "ssp_reject",
];

fn f6(v: f64) -> String {
    format!("{v:.6}")
}

impl RunRecord {
    pub fn csv_row(&self) -> Vec<String> {
        let r = &self.report;
        let mut row = vec![self.id.clone(), self.method.to_string(), self.iterations_used.to_string()];
        row.extend([r.overlap.dsc, r.overlap.sensitivity, r.overlap.specificity, r.overlap.bac].map(f6));
        for s in [&r.shape, &r.gt_shape] {
            row.push(s.area.to_string());
            row.push(f6(s.perimeter));
            row.push(f6(s.form_factor));
            row.push(f6(s.solidity));
            row.push(s.feret_x.to_string());
            row.push(s.feret_y.to_string());
        }
        row.extend(SHAPE_METRICS.iter().map(|m| f6(r.relative_errors[*m])));
        row.push(f6(r.ssp.w_plus));
        row.push(r.ssp.n.to_string());
        row.push(f6(r.ssp_pvalue));
        row.push(r.ssp.reject.to_string());
        row
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

pub fn records_csv(records: &[RunRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).map_err(csv_error)?;
    for r in records {
        w.write_record(r.csv_row()).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

/// Stable per-image offset for the random seed (FNV-1a of the id).
fn id_hash(id: &str) -> u64 {
    id.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

fn run_one(entry: &CorpusEntry, spec: &ExperimentSpec) -> Result<(RunRecord, growcut::BinaryMask)> {
    let img = load_gray_image(&entry.image)?;
    if !entry.ground_truth.exists() {
        return Err(Error::UnreadableFile {
            path: entry.ground_truth.clone(),
            reason: "missing ground truth".into(),
        });
    }
    let gt = load_mask(&entry.ground_truth)?;
    let mut seeds = entry.seeds.as_ref().map(load_seeds).transpose()?;
    if spec.method.needs_seeds() && seeds.is_none() {
        return Err(Error::SeedFormat(format!("{}: no seed file for {}", entry.id, spec.method)));
    }
    if spec.method == Method::FuzzyGrowCut {
        // one seed file serves every method; Fuzzy GrowCut reads its foreground half
        seeds = seeds.map(|s| SeedSet::new(s.foreground().copied())).transpose()?;
    }
    let mut cfg = spec.config;
    cfg.de.rng_seed = spec.rng_seed ^ id_hash(&entry.id);
    let t = Instant::now();
    let res = segment(spec.method, &img, seeds.as_ref(), &cfg)?;
    let wall_ms = t.elapsed().as_secs_f64() * 1e3;
    let report = metrics_report(&img, &res.mask, &gt)?;
    let out = &spec.output_dir;
    save_mask(&res.mask, out.join("masks").join(format!("{}.png", entry.id)))?;
    draw_overlay(&img, &res.mask, Some(&gt))
        .save(out.join("overlays").join(format!("{}.png", entry.id)))
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    Ok((
        RunRecord {
            id: entry.id.clone(),
            method: spec.method,
            report,
            iterations_used: res.iterations_used,
            wall_ms,
        },
        res.mask,
    ))
}

/// Segments every corpus image, scores it against its ground truth and
/// writes `records.csv`, `timings.csv`, `failures.csv`, plus `masks/` and
/// `overlays/`. A failing image is logged and skipped.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome> {
    spec.config.ssgc.diffusion.validate()?;
    let entries = discover(&spec.corpus_dir)?;
    for sub in ["masks", "overlays"] {
        std::fs::create_dir_all(spec.output_dir.join(sub))?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    let results: Vec<(String, Result<RunRecord>)> = pool.install(|| {
        entries
            .par_iter()
            .map(|e| (e.id.clone(), run_one(e, spec).map(|(r, _)| r)))
            .collect()
    });
    let mut outcome = ExperimentOutcome {
        records: Vec::new(),
        failures: Vec::new(),
    };
    for (id, r) in results {
        match r {
            Ok(rec) => outcome.records.push(rec),
            Err(e) => {
                log::warn!("{id}: {e}");
                outcome.failures.push(Failure { id, error: e.to_string() });
            }
        }
    }
    let out = &spec.output_dir;
    std::fs::write(out.join("records.csv"), records_csv(&outcome.records)?)?;
    let mut timings = String::from("id,method,wall_ms\n");
    for r in &outcome.records {
        let _ = writeln!(timings, "{},{},{:.3}", r.id, r.method, r.wall_ms);
    }
    std::fs::write(out.join("timings.csv"), timings)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["id", "error"]).map_err(csv_error)?;
    for f in &outcome.failures {
        w.write_record([&f.id, &f.error]).map_err(csv_error)?;
    }
    std::fs::write(
        out.join("failures.csv"),
        w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?,
    )?;
    Ok(outcome)
}

/// Writes the three default phantoms as a corpus. Each seed file holds the
/// outer foreground ring (usable by Fuzzy GrowCut too) and the GrowCut
/// background ring.
pub fn write_phantom_corpus(dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    for shape in Shape::ALL {
        let p = phantom(shape);
        growcut::io::save_gray_image(&p.image, dir.join(format!("{}.png", shape.name())))?;
        save_mask(&p.truth, dir.join(format!("{}.gt.png", shape.name())))?;
        let seeds = SeedSet::new(p.fuzzy_seeds().iter().chain(p.growcut_seeds().background()).copied())?;
        save_seeds(&seeds, dir.join(format!("{}.seeds.json", shape.name())))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discovery_pairs_sidecars() {
        let dir = tempfile::tempdir().unwrap();
        write_phantom_corpus(dir.path()).unwrap();
        std::fs::write(dir.path().join("notes.txt"), "x").unwrap();
        let e = discover(dir.path()).unwrap();
        let ids: Vec<&str> = e.iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["disc", "ellipse", "star"]);
        assert!(e.iter().all(|e| e.seeds.is_some()));
    }

    #[test]
    fn id_hash_is_stable() {
        assert_eq!(id_hash(""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(id_hash("a"), 0xaf63_dc4c_8601_ec8c);
    }

    #[test]
    fn spec_paths_resolve_against_spec_dir() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spec.json");
        std::fs::write(&path, r#"{"corpus_dir": "corpus", "method": "ssgc", "output_dir": "/abs/out"}"#).unwrap();
        let s = ExperimentSpec::load(&path).unwrap();
        assert_eq!(s.corpus_dir, dir.path().join("corpus"));
        assert_eq!(s.output_dir, PathBuf::from("/abs/out"));
        assert_eq!(s.rng_seed, 0);
        assert_eq!(s.config, MethodConfig::default());
    }
}
