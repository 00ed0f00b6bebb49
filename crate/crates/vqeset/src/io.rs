//! Analysis artefacts: `distances.csv`, `clustering.json`, `embedding.json`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use vqeset_core::analysis::{ClusteringResult, DistanceMatrix, Embedding};

use crate::dataset::write_atomic;
use crate::error::io_err;
use crate::{Error, Result};

pub const DISTANCES_FILE: &str = "distances.csv";
pub const CLUSTERING_FILE: &str = "clustering.json";
pub const EMBEDDING_FILE: &str = "embedding.json";

/// Header row of record ids, then one row of `M` values per record.
pub fn write_distances(path: &Path, d: &DistanceMatrix) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Format { path: path.to_path_buf(), reason: e.to_string() };
    w.write_record(d.ids()).map_err(fail)?;
    for i in 0..d.len() {
        w.write_record(d.row(i).iter().map(|v| v.to_string())).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format { path: path.to_path_buf(), reason: e.to_string() })?;
    write_atomic(path, &bytes)
}

pub fn read_distances(path: &Path) -> Result<DistanceMatrix> {
    let format = |reason: String| Error::Format { path: path.to_path_buf(), reason };
    let text = fs::read(path).map_err(io_err(path))?;
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_slice());
    let ids: Vec<String> = r.headers().map_err(|e| format(e.to_string()))?.iter().map(String::from).collect();
    let mut data = Vec::with_capacity(ids.len() * ids.len());
    for (row, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| format(e.to_string()))?;
        for (col, field) in rec.iter().enumerate() {
            data.push(field.parse::<f64>().map_err(|e| format(format!("row {}, column {}: {e}", row + 1, col + 1)))?);
        }
    }
    DistanceMatrix::new(ids, data).map_err(|e| format(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialDoc {
    pub seed: u64,
    pub objective: f64,
    pub sweeps: usize,
    pub ari: Option<f64>,
    pub assignment: Vec<usize>,
    pub medoids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringDoc {
    pub k: usize,
    pub seed: u64,
    /// `"exact"` or the shot count used for the distances.
    pub distances: String,
    pub ids: Vec<String>,
    pub labels: Vec<usize>,
    pub best_trial: usize,
    pub assignment: Vec<usize>,
    pub medoids: Vec<String>,
    pub mean_ari: Option<f64>,
    pub std_ari: Option<f64>,
    pub best_ari: Option<f64>,
    pub trials: Vec<TrialDoc>,
}

impl ClusteringDoc {
    pub fn new(
        result: &ClusteringResult,
        d: &DistanceMatrix,
        labels: &[usize],
        seed: u64,
        distances: String,
    ) -> Self {
        let ids = d.ids();
        let medoid_ids = |m: &[usize]| m.iter().map(|&i| ids[i].clone()).collect::<Vec<_>>();
        let trials = result
            .trials
            .iter()
            .enumerate()
            .map(|(i, t)| TrialDoc {
                seed: t.seed,
                objective: t.objective,
                sweeps: t.sweeps,
                ari: result.trial_aris.get(i).copied(),
                assignment: t.assignment.clone(),
                medoids: medoid_ids(&t.medoids),
            })
            .collect();
        Self {
            k: result.k,
            seed,
            distances,
            ids: ids.to_vec(),
            labels: labels.to_vec(),
            best_trial: result.best_trial,
            assignment: result.assignment().to_vec(),
            medoids: medoid_ids(result.medoids()),
            mean_ari: result.mean_ari(),
            std_ari: std_dev(&result.trial_aris),
            best_ari: result.best_ari(),
            trials,
        }
    }
}

/// Population standard deviation; `None` for an empty slice.
pub fn std_dev(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    Some((xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingDoc {
    pub ids: Vec<String>,
    pub labels: Vec<usize>,
    pub families: Vec<String>,
    pub coords: Vec<[f64; 2]>,
    pub eigenvalues: [f64; 2],
    pub stress: f64,
}

impl EmbeddingDoc {
    pub fn new(e: &Embedding, d: &DistanceMatrix, labels: &[usize], families: &[String]) -> Self {
        Self {
            ids: d.ids().to_vec(),
            labels: labels.to_vec(),
            families: families.to_vec(),
            coords: e.coords.clone(),
            eigenvalues: e.eigenvalues,
            stress: e.stress,
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(|source| Error::Json { path: path.to_path_buf(), source })?;
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| Error::Json { path: PathBuf::from(path), source })
}
