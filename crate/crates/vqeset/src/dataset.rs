//! Dataset generation over the label x family x depth grid, with a JSON
//! manifest and one QASM file per cell.
//!
//! Layout: `<out>/manifest.json` and `<out>/qasm/<label>_<family>_<D>.qasm`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use vqeset_core::ansatz::{build_ansatz, AnsatzSpec, Family, MAX_DEPTH, MIN_DEPTH};
use vqeset_core::hamiltonian::{build_hamiltonian, labels_for, validate};
use vqeset_core::optimize::BfgsConfig;
use vqeset_core::record::CircuitRecord;
use vqeset_core::seed::cell_seed;
use vqeset_core::spectrum::{ground_energy, DENSE_MAX_QUBITS};
use vqeset_core::vqe::{vqe_optimize, VqeConfig};

use crate::error::io_err;
use crate::{qasm, Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const QASM_DIR: &str = "qasm";

fn default_gradient_tol() -> f64 {
    BfgsConfig::default().gradient_tol
}

fn default_max_iterations() -> usize {
    BfgsConfig::default().max_iterations
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub n_qubits: usize,
    pub labels: Vec<u8>,
    /// Family identifiers such as `"HE"` or `"1D-BB"`.
    pub families: Vec<String>,
    pub depth_min: usize,
    pub depth_max: usize,
    pub restarts: usize,
    pub seed: u64,
    #[serde(default = "default_gradient_tol")]
    pub gradient_tol: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    /// Compute ground energies above the dense limit with Lanczos.
    #[serde(default)]
    pub lanczos: bool,
}

impl DatasetConfig {
    /// Full-grid defaults: every label valid at `n_qubits`, all ten families,
    /// depths 3 to 32, ten restarts.
    pub fn full_grid(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            labels: labels_for(n_qubits),
            families: Family::ALL.iter().map(|f| f.name().to_string()).collect(),
            depth_min: 3,
            depth_max: 32,
            restarts: 10,
            seed: 0,
            gradient_tol: default_gradient_tol(),
            max_iterations: default_max_iterations(),
            lanczos: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.labels.is_empty() {
            return bad("no labels selected".into());
        }
        for &l in &self.labels {
            if let Err(e) = validate(l, self.n_qubits) {
                return bad(format!("label {l} at N={}: {e}", self.n_qubits));
            }
        }
        if self.families.is_empty() {
            return bad("no families selected".into());
        }
        self.parsed_families()?;
        if self.depth_min < MIN_DEPTH || self.depth_max > MAX_DEPTH || self.depth_min > self.depth_max {
            return bad(format!(
                "depth range {}:{} must lie within {MIN_DEPTH}:{MAX_DEPTH}",
                self.depth_min, self.depth_max
            ));
        }
        if self.restarts == 0 {
            return bad("restarts must be at least 1".into());
        }
        if self.gradient_tol.is_nan() || self.gradient_tol <= 0.0 || self.max_iterations == 0 {
            return bad("gradient tolerance and iteration limit must be positive".into());
        }
        let mut seen = self.labels.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.labels.len() {
            return bad("duplicate labels".into());
        }
        Ok(())
    }

    pub fn parsed_families(&self) -> Result<Vec<Family>> {
        let mut out: Vec<Family> = Vec::new();
        for name in &self.families {
            let f: Family = name.parse().map_err(|_| {
                Error::Config(format!("unknown family `{name}` (expected one of {})", vqeset_core::ansatz::family_names()))
            })?;
            if out.contains(&f) {
                return Err(Error::Config(format!("duplicate family `{name}`")));
            }
            out.push(f);
        }
        Ok(out)
    }

    /// Grid cells in manifest order: label, then family, then depth.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        let families = self.parsed_families()?;
        let mut out = Vec::new();
        for &label in &self.labels {
            for &family in &families {
                for depth in self.depth_min..=self.depth_max {
                    out.push(Cell { label, family, depth });
                }
            }
        }
        Ok(out)
    }

    fn vqe_config(&self) -> VqeConfig {
        VqeConfig {
            bfgs: BfgsConfig { gradient_tol: self.gradient_tol, max_iterations: self.max_iterations, ..BfgsConfig::default() },
            restarts: self.restarts,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub label: u8,
    pub family: Family,
    pub depth: usize,
}

impl Cell {
    pub fn id(&self) -> String {
        record_id(self.label, self.family.name(), self.depth)
    }
}

pub fn record_id(label: u8, family: &str, depth: usize) -> String {
    format!("{label}_{family}_{depth}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub id: String,
    pub label: u8,
    pub family: String,
    pub n_qubits: usize,
    pub depth: usize,
    pub params: Vec<f64>,
    pub energy: f64,
    pub ground_energy: Option<f64>,
    /// Path relative to the dataset directory.
    pub qasm: String,
    pub sha256: String,
    pub seed: u64,
    pub best_restart: usize,
    pub iterations: usize,
    pub termination: String,
    pub generated_unix: u64,
}

impl ManifestRecord {
    pub fn to_record(&self) -> Result<CircuitRecord> {
        Ok(CircuitRecord {
            label: self.label,
            family: self.family.parse()?,
            n_qubits: self.n_qubits,
            depth: self.depth,
            params: self.params.clone(),
            energy: self.energy,
            ground_energy: self.ground_energy,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub id: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub code_version: String,
    pub config: DatasetConfig,
    pub created_unix: u64,
    /// Exact ground energy per label, where computed.
    pub ground_energies: BTreeMap<u8, f64>,
    pub records: Vec<ManifestRecord>,
    pub failures: Vec<CellFailure>,
}

impl Manifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        serde_json::from_str(&text).map_err(|source| Error::Json { path, source })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serialises");
        s.push('\n');
        s
    }

    pub fn circuit_records(&self) -> Result<Vec<CircuitRecord>> {
        self.records.iter().map(ManifestRecord::to_record).collect()
    }

    pub fn ids(&self) -> Vec<String> {
        self.records.iter().map(|r| r.id.clone()).collect()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.label as usize).collect()
    }

    /// Files whose current contents do not match the stored hash.
    pub fn verify(&self, dir: &Path) -> Vec<String> {
        self.records
            .iter()
            .filter(|r| fs::read(dir.join(&r.qasm)).map(|b| sha256_hex(&b) != r.sha256).unwrap_or(true))
            .map(|r| r.qasm.clone())
            .collect()
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Writes via a sibling temporary file and a rename. Leaves the file alone
/// when it already holds exactly `bytes`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if fs::read(path).is_ok_and(|old| old == bytes) {
        return Ok(());
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

#[derive(Debug, Clone)]
pub struct GenerateSummary {
    pub manifest: Manifest,
    pub computed: usize,
    pub reused: usize,
}

impl GenerateSummary {
    pub fn failed(&self) -> usize {
        self.manifest.failures.len()
    }
}

/// Runs (or resumes) generation into `out`. Cells already present with a
/// matching QASM hash are kept as they are; the rest are optimised on a pool
/// of `workers` threads. Cell failures are recorded, not fatal.
pub fn generate(config: &DatasetConfig, out: &Path, workers: usize) -> Result<GenerateSummary> {
    config.validate()?;
    let qasm_dir = out.join(QASM_DIR);
    fs::create_dir_all(&qasm_dir).map_err(io_err(&qasm_dir))?;

    let previous = if out.join(MANIFEST_FILE).exists() { Some(Manifest::load(out)?) } else { None };
    if let Some(prev) = &previous {
        if prev.config != *config {
            return Err(Error::Config(format!(
                "{} holds a dataset generated with a different configuration",
                out.display()
            )));
        }
    }
    let mut manifest = Manifest {
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        created_unix: previous.as_ref().map_or_else(now_unix, |p| p.created_unix),
        ground_energies: previous.as_ref().map(|p| p.ground_energies.clone()).unwrap_or_default(),
        records: Vec::new(),
        failures: Vec::new(),
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;

    let hamiltonians: BTreeMap<u8, _> = config
        .labels
        .iter()
        .map(|&l| Ok((l, build_hamiltonian(l, config.n_qubits)?)))
        .collect::<Result<_>>()?;
    if config.n_qubits <= DENSE_MAX_QUBITS || config.lanczos {
        let missing: Vec<u8> = config.labels.iter().copied().filter(|l| !manifest.ground_energies.contains_key(l)).collect();
        let energies: Vec<(u8, f64)> = pool.install(|| {
            missing.par_iter().map(|&l| Ok((l, ground_energy(&hamiltonians[&l])?))).collect::<Result<_>>()
        })?;
        manifest.ground_energies.extend(energies);
    }

    let cells = config.cells()?;
    let mut done: BTreeMap<String, ManifestRecord> = BTreeMap::new();
    if let Some(prev) = previous {
        for r in prev.records {
            if fs::read(out.join(&r.qasm)).is_ok_and(|b| sha256_hex(&b) == r.sha256) {
                done.insert(r.id.clone(), r);
            }
        }
    }
    let reused = cells.iter().filter(|c| done.contains_key(&c.id())).count();
    let todo: Vec<Cell> = cells.iter().copied().filter(|c| !done.contains_key(&c.id())).collect();
    log::info!("{} cells: {reused} present, {} to compute", cells.len(), todo.len());

    let vqe = config.vqe_config();
    let mut failures: BTreeMap<String, String> = BTreeMap::new();
    let batch = (workers.max(1) * 4).max(8);
    for chunk in todo.chunks(batch) {
        let results: Vec<(Cell, Result<(ManifestRecord, String)>)> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&cell| (cell, run_cell(config, cell, &hamiltonians[&cell.label], &vqe, &manifest.ground_energies)))
                .collect()
        });
        for (cell, res) in results {
            match res {
                Ok((rec, text)) => {
                    write_atomic(&out.join(&rec.qasm), text.as_bytes())?;
                    log::info!("{}: energy {:.10} ({} iterations)", rec.id, rec.energy, rec.iterations);
                    done.insert(rec.id.clone(), rec);
                }
                Err(e) => {
                    log::warn!("{}: {e}", cell.id());
                    failures.insert(cell.id(), e.to_string());
                }
            }
        }
        assemble(&mut manifest, &cells, &done, &failures);
        write_atomic(&out.join(MANIFEST_FILE), manifest.to_json().as_bytes())?;
    }
    assemble(&mut manifest, &cells, &done, &failures);
    write_atomic(&out.join(MANIFEST_FILE), manifest.to_json().as_bytes())?;
    Ok(GenerateSummary { manifest, computed: todo.len() - failures.len(), reused })
}

fn assemble(
    manifest: &mut Manifest,
    cells: &[Cell],
    done: &BTreeMap<String, ManifestRecord>,
    failures: &BTreeMap<String, String>,
) {
    manifest.records = cells.iter().filter_map(|c| done.get(&c.id()).cloned()).collect();
    manifest.failures = cells
        .iter()
        .filter_map(|c| failures.get(&c.id()).map(|e| CellFailure { id: c.id(), error: e.clone() }))
        .collect();
}

fn run_cell(
    config: &DatasetConfig,
    cell: Cell,
    h: &vqeset_core::pauli::PauliSum,
    vqe: &VqeConfig,
    ground: &BTreeMap<u8, f64>,
) -> Result<(ManifestRecord, String)> {
    let name = cell.family.name();
    let mut spec = AnsatzSpec::new(cell.family, config.n_qubits, cell.depth);
    if cell.family == Family::Hamiltonian {
        spec = spec.with_hamiltonian(h.clone());
    }
    let seed = cell_seed(config.seed, cell.label, name, cell.depth);
    let outcome = vqe_optimize(cell.label, h, &spec, vqe, seed)?;
    let text = qasm::export(&build_ansatz(&spec)?, &outcome.record.params)?;
    let best = &outcome.traces[outcome.best_restart];
    let id = cell.id();
    let rec = ManifestRecord {
        qasm: format!("{QASM_DIR}/{id}.qasm"),
        sha256: sha256_hex(text.as_bytes()),
        id,
        label: cell.label,
        family: name.to_string(),
        n_qubits: config.n_qubits,
        depth: cell.depth,
        params: outcome.record.params,
        energy: outcome.record.energy,
        ground_energy: ground.get(&cell.label).copied(),
        seed,
        best_restart: outcome.best_restart,
        iterations: best.iterations,
        termination: best.termination.as_str().to_string(),
        generated_unix: now_unix(),
    };
    Ok((rec, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        assert_eq!(DatasetConfig::full_grid(8).cells().unwrap().len(), 1800);
        assert_eq!(DatasetConfig::full_grid(4).cells().unwrap().len(), 1500);
        let desk = DatasetConfig { depth_max: 12, restarts: 3, ..DatasetConfig::full_grid(4) };
        assert_eq!(desk.cells().unwrap().len(), 500);
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let base = DatasetConfig::full_grid(4);
        assert!(base.validate().is_ok());
        assert!(DatasetConfig { labels: vec![0, 5], ..base.clone() }.validate().is_err());
        assert!(DatasetConfig { families: vec!["QAOA".into()], ..base.clone() }.validate().is_err());
        assert!(DatasetConfig { depth_min: 0, ..base.clone() }.validate().is_err());
        assert!(DatasetConfig { depth_min: 9, depth_max: 8, ..base.clone() }.validate().is_err());
        assert!(DatasetConfig { restarts: 0, ..base.clone() }.validate().is_err());
        assert!(DatasetConfig { labels: vec![1, 1], ..base }.validate().is_err());
    }

    #[test]
    fn config_json_defaults() {
        let c: DatasetConfig = serde_json::from_str(
            r#"{"n_qubits":4,"labels":[0],"families":["HE"],"depth_min":3,"depth_max":3,"restarts":1,"seed":0}"#,
        )
        .unwrap();
        assert_eq!(c.gradient_tol, 1e-5);
        assert_eq!(c.max_iterations, 1000);
        assert!(!c.lanczos);
    }
}
