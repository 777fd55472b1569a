//! Verification and timing over generated suites.
//!
//! Only `classify_all` is timed: generation and parsing happen before the clock starts. The
//! first classification of each size is a discarded warm-up.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::datagen::{
    canonical_specs, generate_dataset, generate_mixed, read_dataset, suite_vocabulary, DatagenError, ExpectedCounts,
    GeneratedDataset,
};
use crate::rdf::Iri;
use crate::reasoner::{classify_all, Classification};
use crate::risk::{Dimension, Level};
use crate::vocab::Vocabulary;

pub const DEFAULT_SEED: u64 = 2020;

/// Reference HermiT timings per suite size: (size, average, min, max, median) in seconds.
pub const HERMIT_BASELINE: [(usize, [f64; 4]); 3] = [
    (100, [2.95, 0.91, 9.76, 2.06]),
    (500, [76.82, 2.17, 399.63, 32.75]),
    (1000, [417.70, 5.33, 2110.31, 215.00]),
];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Datagen(#[from] DatagenError),
    #[error("verification failed for {dataset}: {} mismatches", verdict.mismatches.len())]
    Verification { dataset: String, verdict: Box<Verdict> },
    #[error("stress run of {size} events needs about {needed_mb} MB but only {available_mb} MB is available")]
    OutOfMemory { size: usize, needed_mb: u64, available_mb: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub event: Iri,
    pub dimension: Dimension,
    pub expected: Level,
    /// `None` when the event got no assignment at all.
    pub got: Option<Level>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub counts_match: bool,
    pub mismatches: Vec<Mismatch>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.counts_match && self.mismatches.is_empty()
    }
}

fn vocabulary_for(ds: &GeneratedDataset) -> Vocabulary {
    Vocabulary::standard().with_thresholds(ds.thresholds).expect("generated under valid thresholds")
}

/// Classifies `ds` under the thresholds it was generated with and compares every label.
pub fn verify(ds: &GeneratedDataset) -> Verdict {
    let vocab = vocabulary_for(ds);
    compare(ds, &classify_all(&ds.graph, &vocab))
}

/// Checks an existing classification of `ds` against its labels.
pub fn compare(ds: &GeneratedDataset, c: &Classification) -> Verdict {
    let mut mismatches = Vec::new();
    for (event, expected) in &ds.labels {
        let got = c.get(event);
        for dim in Dimension::ALL {
            let g = got.and_then(|a| a.level(dim));
            if g != Some(expected.get(dim)) {
                mismatches.push(Mismatch { event: event.clone(), dimension: dim, expected: expected.get(dim), got: g });
            }
        }
    }
    let counts = ExpectedCounts(
        Dimension::ALL.into_iter().map(|d| (d, full_counts(c.event_level_counts(d)))).collect(),
    );
    Verdict { counts_match: counts == ds.expected, mismatches }
}

fn full_counts(mut m: BTreeMap<Level, usize>) -> BTreeMap<Level, usize> {
    for l in Level::ALL {
        m.entry(l).or_insert(0);
    }
    m
}

/// Where benchmark datasets come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    /// Generate the canonical specs from this base seed, one dataset at a time.
    Generate { seed: u64 },
    /// A suite previously written by `write_dataset`.
    Dir(PathBuf),
}

impl Default for Source {
    fn default() -> Self {
        Source::Generate { seed: DEFAULT_SEED }
    }
}

impl Source {
    fn datasets(&self, size: usize) -> Result<Vec<DatasetRef>, BenchError> {
        match self {
            Source::Generate { seed } => Ok(canonical_specs(size, *seed).into_iter().map(DatasetRef::Spec).collect()),
            Source::Dir(root) => {
                let dir = root.join(size.to_string());
                let mut out = Vec::new();
                let entries = std::fs::read_dir(&dir).map_err(|e| DatagenError::Io {
                    path: dir.display().to_string(),
                    message: e.to_string(),
                })?;
                for e in entries.flatten() {
                    if e.path().join("manifest.json").is_file() {
                        out.push(DatasetRef::Path(e.path()));
                    }
                }
                out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
                Ok(out)
            }
        }
    }
}

enum DatasetRef {
    Spec(crate::datagen::DatasetSpec),
    Path(PathBuf),
}

impl DatasetRef {
    fn sort_key(&self) -> String {
        match self {
            DatasetRef::Spec(s) => s.name(),
            DatasetRef::Path(p) => p.display().to_string(),
        }
    }

    fn load(&self, vocab: &Vocabulary) -> Result<GeneratedDataset, DatagenError> {
        match self {
            DatasetRef::Spec(s) => generate_dataset(s, vocab),
            DatasetRef::Path(p) => read_dataset(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetTiming {
    pub name: String,
    pub size: usize,
    /// Mean over the repetitions.
    pub seconds: f64,
    pub verified: bool,
}

/// One Table-1 row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeStats {
    pub size: usize,
    pub datasets: usize,
    pub average: f64,
    pub min: f64,
    pub max: f64,
    pub median: f64,
}

impl SizeStats {
    /// `None` for an empty sample.
    pub fn from_samples(size: usize, samples: &[f64]) -> Option<SizeStats> {
        if samples.is_empty() {
            return None;
        }
        let mut s = samples.to_vec();
        s.sort_by(f64::total_cmp);
        let n = s.len();
        let median = if n % 2 == 1 { s[n / 2] } else { (s[n / 2 - 1] + s[n / 2]) / 2.0 };
        // Clamp guards against the mean drifting a ulp outside [min, max].
        let average = (s.iter().sum::<f64>() / n as f64).clamp(s[0], s[n - 1]);
        Some(SizeStats { size, datasets: n, average, min: s[0], max: s[n - 1], median })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<SizeStats>,
    pub datasets: Vec<DatasetTiming>,
}

impl BenchReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// One row per size with the baseline alongside.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["size", "datasets", "average", "min", "max", "median", "hermit_average", "hermit_median"])
            .expect("in-memory write");
        for r in &self.rows {
            let base = baseline(r.size);
            let fmt = |x: Option<f64>| x.map(|v| format!("{v:.2}")).unwrap_or_default();
            w.write_record([
                r.size.to_string(),
                r.datasets.to_string(),
                format!("{:.6}", r.average),
                format!("{:.6}", r.min),
                format!("{:.6}", r.max),
                format!("{:.6}", r.median),
                fmt(base.map(|b| b[0])),
                fmt(base.map(|b| b[3])),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Fixed-width table: this engine's seconds, then the HermiT reference for comparison.
    pub fn table(&self) -> String {
        let mut out = String::from("Number of data and inference time (in seconds)\n");
        out.push_str(&format!(
            "{:>6} {:>10} {:>10} {:>10} {:>10}   {:>8} {:>8} {:>8} {:>8}\n",
            "Size", "Average", "Min", "Max", "Median", "HermiT", "Min", "Max", "Median"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:>6} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
                r.size, r.average, r.min, r.max, r.median
            ));
            if let Some(b) = baseline(r.size) {
                out.push_str(&format!("   {:>8.2} {:>8.2} {:>8.2} {:>8.2}", b[0], b[1], b[2], b[3]));
            }
            out.push('\n');
        }
        out
    }
}

pub fn baseline(size: usize) -> Option<[f64; 4]> {
    HERMIT_BASELINE.iter().find(|(s, _)| *s == size).map(|(_, b)| *b)
}

/// Canonical suites for `sizes` generated from [`DEFAULT_SEED`].
pub fn run_benchmark(sizes: &[usize], repetitions: usize) -> Result<BenchReport, BenchError> {
    run_benchmark_from(&Source::default(), sizes, repetitions)
}

/// Times every dataset sequentially. Stops at the first dataset that fails verification.
pub fn run_benchmark_from(source: &Source, sizes: &[usize], repetitions: usize) -> Result<BenchReport, BenchError> {
    let mut report = BenchReport::default();
    if repetitions == 0 {
        return Ok(report);
    }
    let suite_vocab = suite_vocabulary();
    for &size in sizes {
        let mut samples = Vec::new();
        let mut warmed = false;
        for r in source.datasets(size)? {
            let ds = r.load(&suite_vocab)?;
            let vocab = vocabulary_for(&ds);
            if !warmed {
                std::hint::black_box(classify_all(&ds.graph, &vocab));
                warmed = true;
            }
            let mut total = 0.0;
            let mut last = None;
            for _ in 0..repetitions {
                let t = Instant::now();
                let c = classify_all(&ds.graph, &vocab);
                total += t.elapsed().as_secs_f64();
                last = Some(c);
            }
            let verdict = compare(&ds, &last.expect("repetitions > 0"));
            if !verdict.passed() {
                return Err(BenchError::Verification { dataset: ds.spec.name(), verdict: Box::new(verdict) });
            }
            let seconds = total / repetitions as f64;
            samples.push(seconds);
            report.datasets.push(DatasetTiming { name: ds.spec.name(), size, seconds, verified: true });
        }
        if let Some(row) = SizeStats::from_samples(size, &samples) {
            report.rows.push(row);
        }
    }
    Ok(report)
}

/// Verification only, datasets in parallel. Returns `(dataset name, verdict)` in suite order.
pub fn verify_suite(source: &Source, size: usize) -> Result<Vec<(String, Verdict)>, BenchError> {
    let vocab = suite_vocabulary();
    source
        .datasets(size)?
        .par_iter()
        .map(|r| {
            let ds = r.load(&vocab)?;
            Ok((ds.spec.name(), verify(&ds)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StressResult {
    pub size: usize,
    pub events: usize,
    pub triples: usize,
    pub seconds: f64,
    /// Resident-set high-water mark of the whole process, where the platform reports it.
    pub peak_memory_kb: Option<u64>,
    pub verified: bool,
}

/// Rough upper bound on memory per generated event (graph, indexes and classification).
const BYTES_PER_EVENT: u64 = 64 * 1024;

/// Stress timings are the best of this many classifications, which keeps scheduler noise out of
/// the scaling ratio.
const STRESS_RUNS: usize = 3;

/// Generates one mixed-level dataset of `size` events and times its classification.
pub fn stress(size: usize) -> Result<StressResult, BenchError> {
    if let Some(available) = available_memory_kb() {
        let needed = size as u64 * BYTES_PER_EVENT / 1024;
        if needed > available {
            return Err(BenchError::OutOfMemory { size, needed_mb: needed / 1024, available_mb: available / 1024 });
        }
    }
    let vocab = suite_vocabulary();
    let ds = generate_mixed(size, DEFAULT_SEED + size as u64, &vocab)?;
    let mut seconds = f64::INFINITY;
    let mut c = None;
    for _ in 0..STRESS_RUNS {
        let t = Instant::now();
        let run = classify_all(&ds.graph, &vocab);
        seconds = seconds.min(t.elapsed().as_secs_f64());
        c = Some(run);
    }
    let c = c.expect("at least one run");
    Ok(StressResult {
        size,
        events: ds.labels.len(),
        triples: ds.graph.len(),
        seconds,
        peak_memory_kb: proc_status_kb("VmHWM:"),
        verified: compare(&ds, &c).passed(),
    })
}

fn proc_status_kb(key: &str) -> Option<u64> {
    read_kb_field(Path::new("/proc/self/status"), key)
}

fn available_memory_kb() -> Option<u64> {
    read_kb_field(Path::new("/proc/meminfo"), "MemAvailable:")
}

fn read_kb_field(path: &Path, key: &str) -> Option<u64> {
    let text = std::fs::read_to_string(path).ok()?;
    let line = text.lines().find(|l| l.starts_with(key))?;
    line[key.len()..].split_whitespace().next()?.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats_of_known_sample() {
        let s = SizeStats::from_samples(10, &[3.0, 1.0, 2.0, 10.0]).unwrap();
        assert_eq!((s.min, s.max, s.median, s.average), (1.0, 10.0, 2.5, 4.0));
        assert!(SizeStats::from_samples(10, &[]).is_none());
    }

    #[test]
    fn zero_repetitions_is_empty() {
        assert_eq!(run_benchmark(&[100], 0).unwrap(), BenchReport::default());
    }

    #[test]
    fn stress_of_zero() {
        let r = stress(0).unwrap();
        assert_eq!(r.events, 0);
        assert!(r.seconds < 0.5);
        assert!(r.verified);
    }

    #[test]
    fn table_has_baseline_columns() {
        let report = BenchReport {
            rows: vec![SizeStats::from_samples(100, &[0.01, 0.02, 0.03]).unwrap()],
            datasets: vec![],
        };
        let t = report.table();
        assert!(t.contains("Average") && t.contains("Median") && t.contains("2.95"));
        let csv = report.to_csv();
        assert!(csv.starts_with("size,datasets,average,min,max,median"));
        assert!(csv.contains("100,3,0.020000,0.010000,0.030000,0.020000,2.95,2.06"));
    }
}
