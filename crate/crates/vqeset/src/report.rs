//! Plain-text summary of a dataset: energy gaps, ground-state fidelities and,
//! when present, the clustering outcome.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use rayon::prelude::*;
use vqeset_core::analysis::ground_state_fidelity;
use vqeset_core::hamiltonian::{build_hamiltonian, label_name};
use vqeset_core::spectrum::{ground_space, GroundSpace, DEFAULT_DEGENERACY_TOL, DENSE_MAX_QUBITS};

use crate::dataset::Manifest;
use crate::io::{self, ClusteringDoc};
use crate::Result;

/// Per-record quality figures.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordQuality {
    pub id: String,
    pub label: u8,
    pub family: String,
    pub depth: usize,
    pub energy: f64,
    pub gap: Option<f64>,
    /// Weight of the output state in the ground eigenspace.
    pub ground_fidelity: Option<f64>,
}

/// Ground spaces per label, for widths where the dense solver applies.
pub fn ground_spaces(manifest: &Manifest) -> Result<BTreeMap<u8, GroundSpace>> {
    let n = manifest.config.n_qubits;
    if n > DENSE_MAX_QUBITS {
        return Ok(BTreeMap::new());
    }
    manifest
        .config
        .labels
        .par_iter()
        .map(|&l| Ok((l, ground_space(&build_hamiltonian(l, n)?, DEFAULT_DEGENERACY_TOL)?)))
        .collect()
}

pub fn record_quality(manifest: &Manifest, workers: usize) -> Result<Vec<RecordQuality>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| crate::Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| {
        let spaces = ground_spaces(manifest)?;
        manifest
            .records
            .par_iter()
            .map(|r| {
                let ground_fidelity = match spaces.get(&r.label) {
                    Some(g) => Some(ground_state_fidelity(&r.to_record()?.state()?, g)?),
                    None => None,
                };
                Ok(RecordQuality {
                    id: r.id.clone(),
                    label: r.label,
                    family: r.family.clone(),
                    depth: r.depth,
                    energy: r.energy,
                    gap: r.ground_energy.map(|g| r.energy - g),
                    ground_fidelity,
                })
            })
            .collect()
    })
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| s / n as f64)
}

fn fmt_opt(v: Option<f64>, prec: usize) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.prec$}"))
}

pub fn report(dir: &Path, workers: usize) -> Result<String> {
    let manifest = Manifest::load(dir)?;
    let quality = record_quality(&manifest, workers)?;
    let cfg = &manifest.config;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "dataset {}: N = {}, {} records, {} failures, depths {}-{}, {} restarts",
        dir.display(),
        cfg.n_qubits,
        manifest.records.len(),
        manifest.failures.len(),
        cfg.depth_min,
        cfg.depth_max,
        cfg.restarts
    );
    let stale = manifest.verify(dir);
    if !stale.is_empty() {
        let _ = writeln!(s, "warning: {} QASM files do not match their recorded hash", stale.len());
    }

    let _ = writeln!(s, "\n{:<6} {:<34} {:>14} {:>14} {:>11} {:>9}", "label", "model", "E0", "best E", "best gap", "mean F");
    for &l in &cfg.labels {
        let rows: Vec<&RecordQuality> = quality.iter().filter(|q| q.label == l).collect();
        let best = rows.iter().map(|q| q.energy).fold(f64::INFINITY, f64::min);
        let e0 = manifest.ground_energies.get(&l).copied();
        let _ = writeln!(
            s,
            "{:<6} {:<34} {:>14} {:>14.8} {:>11} {:>9}",
            l,
            label_name(l),
            fmt_opt(e0, 8),
            best,
            e0.map_or_else(|| "-".to_string(), |e| format!("{:.3e}", best - e)),
            fmt_opt(mean(rows.iter().filter_map(|q| q.ground_fidelity)), 4),
        );
    }

    let _ = writeln!(s, "\n{:<16} {:>12} {:>9} {:>12}", "family", "mean gap", "mean F", "F >= 0.99");
    for fam in &cfg.families {
        let rows: Vec<&RecordQuality> = quality.iter().filter(|q| &q.family == fam).collect();
        let fids: Vec<f64> = rows.iter().filter_map(|q| q.ground_fidelity).collect();
        let hits = fids.iter().filter(|&&f| f >= 0.99).count();
        let _ = writeln!(
            s,
            "{:<16} {:>12} {:>9} {:>12}",
            fam,
            mean(rows.iter().filter_map(|q| q.gap)).map_or_else(|| "-".to_string(), |g| format!("{g:.3e}")),
            fmt_opt(mean(fids.iter().copied()), 4),
            if fids.is_empty() { "-".to_string() } else { format!("{hits}/{}", fids.len()) },
        );
    }

    let path = dir.join(io::CLUSTERING_FILE);
    if path.exists() {
        let doc: ClusteringDoc = io::read_json(&path)?;
        let _ = writeln!(
            s,
            "\nclustering ({} distances, k = {}, {} trials): ARI {} +/- {}, best-objective trial {}",
            doc.distances,
            doc.k,
            doc.trials.len(),
            fmt_opt(doc.mean_ari, 4),
            fmt_opt(doc.std_ari, 4),
            fmt_opt(doc.best_ari, 4)
        );
    }
    Ok(s)
}
