//! On-disk layout: `<root>/<size>/<name>/data.ttl` next to `manifest.json`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{DatagenError, DatasetSpec, ExpectedCounts, GeneratedDataset};
use crate::rdf::{parse_turtle, serialize_turtle, Iri};
use crate::risk::Levels;
use crate::vocab::RiskAxiomConfig;

/// Ground truth stored beside each generated graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec: DatasetSpec,
    pub thresholds: RiskAxiomConfig,
    pub expected: ExpectedCounts,
    pub labels: BTreeMap<Iri, Levels>,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> DatagenError {
    DatagenError::Io { path: path.display().to_string(), message: e.to_string() }
}

pub fn dataset_dir(root: &Path, spec: &DatasetSpec) -> PathBuf {
    root.join(spec.size.to_string()).join(spec.name())
}

/// Writes one dataset and returns its directory.
pub fn write_dataset(root: &Path, ds: &GeneratedDataset) -> Result<PathBuf, DatagenError> {
    let dir = dataset_dir(root, &ds.spec);
    fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    let data = dir.join("data.ttl");
    fs::write(&data, serialize_turtle(&ds.graph)).map_err(|e| io_err(&data, e))?;
    let manifest = Manifest {
        spec: ds.spec.clone(),
        thresholds: ds.thresholds,
        expected: ds.expected.clone(),
        labels: ds.labels.clone(),
    };
    let path = dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| io_err(&path, e))?;
    fs::write(&path, json).map_err(|e| io_err(&path, e))?;
    Ok(dir)
}

pub fn read_dataset(dir: &Path) -> Result<GeneratedDataset, DatagenError> {
    let path = dir.join("manifest.json");
    let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| io_err(&path, e))?;
    let data = dir.join("data.ttl");
    let text = fs::read_to_string(&data).map_err(|e| io_err(&data, e))?;
    let graph = parse_turtle(&text).map_err(|e| io_err(&data, e))?;
    Ok(GeneratedDataset { graph, spec: m.spec, thresholds: m.thresholds, expected: m.expected, labels: m.labels })
}

/// Every dataset under `root`, ordered by size and then name.
pub fn read_suite(root: &Path) -> Result<Vec<GeneratedDataset>, DatagenError> {
    let mut dirs = Vec::new();
    for size in fs::read_dir(root).map_err(|e| io_err(root, e))? {
        let size = size.map_err(|e| io_err(root, e))?.path();
        if !size.is_dir() {
            continue;
        }
        for ds in fs::read_dir(&size).map_err(|e| io_err(&size, e))? {
            let ds = ds.map_err(|e| io_err(&size, e))?.path();
            if ds.join("manifest.json").is_file() {
                dirs.push(ds);
            }
        }
    }
    let mut out = dirs.iter().map(|d| read_dataset(d)).collect::<Result<Vec<_>, _>>()?;
    out.sort_by(|a, b| (a.spec.size, a.spec.name()).cmp(&(b.spec.size, b.spec.name())));
    Ok(out)
}
