//! Distance matrix, clustering and embedding over a generated dataset.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use vqeset_core::analysis::{
    kmedoids, mds_embed, shot_fidelity, ClusteringResult, DistanceMatrix, Embedding,
};
use vqeset_core::record::CircuitRecord;
use vqeset_core::seed::derive;

use crate::dataset::Manifest;
use crate::io::{self, ClusteringDoc, EmbeddingDoc};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    /// Shot count for the compute-uncompute estimate; `None` for exact overlaps.
    pub shots: Option<u64>,
    pub seed: u64,
    /// Cluster count; defaults to the number of distinct labels.
    pub k: Option<usize>,
    pub trials: usize,
    pub workers: usize,
    /// Keep only these families, when given.
    pub families: Option<Vec<String>>,
    /// Where to write the artefacts; defaults to the dataset directory.
    pub out: Option<PathBuf>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self { shots: None, seed: 0, k: None, trials: 10, workers: 1, families: None, out: None }
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub ids: Vec<String>,
    pub labels: Vec<usize>,
    pub families: Vec<String>,
    pub distances: DistanceMatrix,
    pub clustering: ClusteringResult,
    pub embedding: Embedding,
}

impl Analysis {
    pub fn summary(&self) -> String {
        let aris = &self.clustering.trial_aris;
        format!(
            "{} circuits, k = {}, {} trials: ARI {:.4} +/- {:.4} (best-objective trial {:.4}), MDS stress {:.4}",
            self.ids.len(),
            self.clustering.k,
            aris.len(),
            self.clustering.mean_ari().unwrap_or(f64::NAN),
            io::std_dev(aris).unwrap_or(f64::NAN),
            self.clustering.best_ari().unwrap_or(f64::NAN),
            self.embedding.stress,
        )
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

/// Upper-triangle pairs in row-major order.
fn pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect()
}

fn fill(ids: Vec<String>, values: &[((usize, usize), f64)]) -> Result<DistanceMatrix> {
    let m = ids.len();
    let mut data = vec![0.0; m * m];
    for &((i, j), v) in values {
        let v = v.clamp(0.0, 1.0);
        data[i * m + j] = v;
        data[j * m + i] = v;
    }
    Ok(DistanceMatrix::new(ids, data)?)
}

/// Exact fidelity distances, computed on `workers` threads. Matches
/// `distance_matrix_exact` bit for bit.
pub fn exact_distances(ids: Vec<String>, records: &[CircuitRecord], workers: usize) -> Result<DistanceMatrix> {
    check_widths(records)?;
    pool(workers)?.install(|| {
        let states = records.par_iter().map(CircuitRecord::state).collect::<Result<Vec<_>, _>>()?;
        let values = pairs(records.len())
            .into_par_iter()
            .map(|(i, j)| Ok(((i, j), 1.0 - states[i].fidelity(&states[j])?)))
            .collect::<Result<Vec<_>, vqeset_core::Error>>()?;
        fill(ids, &values)
    })
}

/// Shot-estimated distances; pair `(i, j)` uses seed `derive(seed, [i, j])`,
/// so the result does not depend on the worker count and matches
/// `distance_matrix_shots`.
pub fn shot_distances(
    ids: Vec<String>,
    records: &[CircuitRecord],
    shots: u64,
    seed: u64,
    workers: usize,
) -> Result<DistanceMatrix> {
    check_widths(records)?;
    if shots == 0 {
        return Err(Error::Config("shot count must be positive".into()));
    }
    pool(workers)?.install(|| {
        let circuits = records.par_iter().map(CircuitRecord::bound_circuit).collect::<Result<Vec<_>, _>>()?;
        let values = pairs(records.len())
            .into_par_iter()
            .map(|(i, j)| {
                let f = shot_fidelity(&circuits[i], &circuits[j], shots, derive(seed, &[i as u64, j as u64]))?;
                Ok(((i, j), 1.0 - f))
            })
            .collect::<Result<Vec<_>, vqeset_core::Error>>()?;
        fill(ids, &values)
    })
}

fn check_widths(records: &[CircuitRecord]) -> Result<()> {
    if let Some(first) = records.first() {
        if let Some(r) = records.iter().find(|r| r.n_qubits != first.n_qubits) {
            return Err(vqeset_core::Error::DimensionMismatch { expected: first.n_qubits, found: r.n_qubits }.into());
        }
    }
    Ok(())
}

/// Clusters and embeds a precomputed distance matrix.
pub fn cluster(
    distances: DistanceMatrix,
    labels: Vec<usize>,
    families: Vec<String>,
    k: Option<usize>,
    trials: usize,
    seed: u64,
) -> Result<Analysis> {
    let k = k.unwrap_or_else(|| {
        let mut l = labels.clone();
        l.sort_unstable();
        l.dedup();
        l.len()
    });
    let mut clustering = kmedoids(&distances, k, trials, seed)?;
    clustering.score(&labels)?;
    let embedding = mds_embed(&distances)?;
    Ok(Analysis { ids: distances.ids().to_vec(), labels, families, distances, clustering, embedding })
}

/// Loads `dir`, computes distances, clusters, embeds and writes
/// `distances.csv`, `clustering.json` and `embedding.json`.
pub fn analyze(dir: &Path, opts: &AnalyzeOptions) -> Result<Analysis> {
    let manifest = Manifest::load(dir)?;
    let stale = manifest.verify(dir);
    if !stale.is_empty() {
        log::warn!("{} QASM files differ from their manifest hash (first: {})", stale.len(), stale[0]);
    }
    let selected: Vec<_> = manifest
        .records
        .iter()
        .filter(|r| opts.families.as_ref().is_none_or(|f| f.contains(&r.family)))
        .collect();
    if selected.is_empty() {
        return Err(Error::Config("no records selected for analysis".into()));
    }
    let ids: Vec<String> = selected.iter().map(|r| r.id.clone()).collect();
    let labels: Vec<usize> = selected.iter().map(|r| r.label as usize).collect();
    let families: Vec<String> = selected.iter().map(|r| r.family.clone()).collect();
    let records = selected.iter().map(|r| r.to_record()).collect::<Result<Vec<_>>>()?;

    let distances = match opts.shots {
        None => exact_distances(ids, &records, opts.workers)?,
        Some(s) => shot_distances(ids, &records, s, opts.seed, opts.workers)?,
    };
    let analysis = cluster(distances, labels, families, opts.k, opts.trials, opts.seed)?;

    let out = opts.out.clone().unwrap_or_else(|| dir.to_path_buf());
    std::fs::create_dir_all(&out).map_err(crate::error::io_err(&out))?;
    io::write_distances(&out.join(io::DISTANCES_FILE), &analysis.distances)?;
    let mode = opts.shots.map_or_else(|| "exact".to_string(), |s| format!("{s} shots"));
    io::write_json(
        &out.join(io::CLUSTERING_FILE),
        &ClusteringDoc::new(&analysis.clustering, &analysis.distances, &analysis.labels, opts.seed, mode),
    )?;
    io::write_json(
        &out.join(io::EMBEDDING_FILE),
        &EmbeddingDoc::new(&analysis.embedding, &analysis.distances, &analysis.labels, &analysis.families),
    )?;
    Ok(analysis)
}
