//! `vqeset` command line. Settings come from flags, then an optional JSON
//! config file, then built-in defaults.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::analyze::{analyze, AnalyzeOptions};
use crate::dataset::{generate, write_atomic, DatasetConfig, Manifest};
use crate::error::io_err;
use crate::{qasm, report, Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;

pub const DEFAULT_SHOTS: u64 = 20_000;
pub const DEFAULT_TRIALS: usize = 10;
pub const DEFAULT_OUT: &str = "dataset";

#[derive(Debug, Parser)]
#[command(name = "vqeset", version, about = "Generate and analyse datasets of VQE-optimised circuits")]
pub struct Cli {
    /// Worker threads for all parallel stages [default: available cores]
    #[arg(long, short = 'j', global = true)]
    pub workers: Option<usize>,
    /// Only log warnings and errors
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimise every (label, family, depth) cell and write QASM plus a manifest
    Generate(GenerateArgs),
    /// Distance matrix, k-medoids clustering and MDS embedding of a dataset
    Analyze(AnalyzeArgs),
    /// Parse every QASM file under a directory and summarise its gates
    Validate(ValidateArgs),
    /// Re-export QASM for records of a dataset from their stored angles
    ExportQasm(ExportArgs),
    /// Energy gaps, ground-state fidelities and clustering summary
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// JSON file with any DatasetConfig fields (plus `output_dir`)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Qubit count
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated labels [default: every label valid at N]
    #[arg(long, value_delimiter = ',')]
    pub labels: Option<Vec<u8>>,
    /// Comma-separated family names [default: all ten]
    #[arg(long, value_delimiter = ',')]
    pub families: Option<Vec<String>>,
    /// Depth range MIN:MAX, inclusive [default: 3:32]
    #[arg(long, value_parser = parse_depths)]
    pub depths: Option<(usize, usize)>,
    /// Random restarts per cell [default: 10]
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Master seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// BFGS gradient-norm tolerance [default: 1e-5]
    #[arg(long)]
    pub gradient_tol: Option<f64>,
    /// BFGS iteration limit [default: 1000]
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Compute ground energies above 12 qubits with Lanczos
    #[arg(long)]
    pub lanczos: bool,
    /// Output directory [default: dataset]
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Dataset directory holding manifest.json [default: dataset]
    #[arg(long, short)]
    pub dir: Option<PathBuf>,
    /// JSON file; reads `output_dir`, `shots`, `k`, `trials`, `seed`
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Estimate overlaps from S shots per pair instead of exactly [S default: 20000]
    #[arg(long, num_args = 0..=1, default_missing_value = "20000")]
    pub shots: Option<u64>,
    /// Seed for shot sampling and medoid initialisation [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of clusters [default: distinct labels in the dataset]
    #[arg(long)]
    pub k: Option<usize>,
    /// Clustering trials [default: 10]
    #[arg(long)]
    pub trials: Option<usize>,
    /// Restrict to these comma-separated families
    #[arg(long, value_delimiter = ',')]
    pub families: Option<Vec<String>>,
    /// Write artefacts here instead of the dataset directory
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Directory searched recursively for *.qasm files
    pub dir: PathBuf,
    /// Also simulate each circuit and check the output norm
    #[arg(long)]
    pub simulate: bool,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Dataset directory holding manifest.json
    #[arg(long, short)]
    pub dir: PathBuf,
    /// Record ids to export [default: all]
    #[arg(long, value_delimiter = ',')]
    pub id: Option<Vec<String>>,
    /// Output directory; with a single id and no --out the text goes to stdout
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Dataset directory holding manifest.json [default: dataset]
    #[arg(long, short)]
    pub dir: Option<PathBuf>,
}

fn parse_depths(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').unwrap_or((s, s));
    let p = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("bad depth `{v}`: {e}"));
    Ok((p(a)?, p(b)?))
}

/// Every field optional; anything absent falls through to the defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n_qubits: Option<usize>,
    pub labels: Option<Vec<u8>>,
    pub families: Option<Vec<String>>,
    pub depth_min: Option<usize>,
    pub depth_max: Option<usize>,
    pub restarts: Option<usize>,
    pub seed: Option<u64>,
    pub gradient_tol: Option<f64>,
    pub max_iterations: Option<usize>,
    pub lanczos: Option<bool>,
    pub output_dir: Option<PathBuf>,
    pub shots: Option<u64>,
    pub k: Option<usize>,
    pub trials: Option<usize>,
    pub workers: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        serde_json::from_str(&text).map_err(|source| Error::Json { path: path.to_path_buf(), source })
    }

    fn load_opt(path: Option<&Path>) -> Result<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }
}

/// Merges flags over the file over the defaults.
pub fn resolve_dataset(args: &GenerateArgs, file: &FileConfig) -> Result<(DatasetConfig, PathBuf)> {
    let n = args
        .n
        .or(file.n_qubits)
        .ok_or_else(|| Error::Config("qubit count missing: pass --n or set n_qubits".into()))?;
    let defaults = DatasetConfig::full_grid(n);
    let (depth_min, depth_max) = args.depths.unwrap_or((
        file.depth_min.unwrap_or(defaults.depth_min),
        file.depth_max.unwrap_or(defaults.depth_max),
    ));
    let config = DatasetConfig {
        n_qubits: n,
        labels: args.labels.clone().or_else(|| file.labels.clone()).unwrap_or(defaults.labels),
        families: args.families.clone().or_else(|| file.families.clone()).unwrap_or(defaults.families),
        depth_min,
        depth_max,
        restarts: args.restarts.or(file.restarts).unwrap_or(defaults.restarts),
        seed: args.seed.or(file.seed).unwrap_or(defaults.seed),
        gradient_tol: args.gradient_tol.or(file.gradient_tol).unwrap_or(defaults.gradient_tol),
        max_iterations: args.max_iterations.or(file.max_iterations).unwrap_or(defaults.max_iterations),
        lanczos: args.lanczos || file.lanczos.unwrap_or(false),
    };
    config.validate()?;
    let out = args.out.clone().or_else(|| file.output_dir.clone()).unwrap_or_else(|| DEFAULT_OUT.into());
    Ok((config, out))
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let level = if cli.quiet { "warn" } else { "info" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn workers(cli: &Cli, file: &FileConfig) -> usize {
    cli.workers
        .or(file.workers)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1)
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(cli, a),
        Command::Analyze(a) => cmd_analyze(cli, a),
        Command::Validate(a) => cmd_validate(a),
        Command::ExportQasm(a) => cmd_export(a),
        Command::Report(a) => {
            let dir = a.dir.clone().unwrap_or_else(|| DEFAULT_OUT.into());
            print!("{}", report::report(&dir, workers(cli, &FileConfig::default()))?);
            Ok(EXIT_OK)
        }
    }
}

fn cmd_generate(cli: &Cli, a: &GenerateArgs) -> Result<i32> {
    let file = FileConfig::load_opt(a.config.as_deref())?;
    let (config, out) = resolve_dataset(a, &file)?;
    let summary = generate(&config, &out, workers(cli, &file))?;
    println!(
        "{}: {} records ({} computed, {} reused), {} failures",
        out.display(),
        summary.manifest.records.len(),
        summary.computed,
        summary.reused,
        summary.failed()
    );
    for f in &summary.manifest.failures {
        eprintln!("failed {}: {}", f.id, f.error);
    }
    Ok(if summary.failed() > 0 { EXIT_PARTIAL } else { EXIT_OK })
}

fn cmd_analyze(cli: &Cli, a: &AnalyzeArgs) -> Result<i32> {
    let file = FileConfig::load_opt(a.config.as_deref())?;
    let dir = a.dir.clone().or_else(|| file.output_dir.clone()).unwrap_or_else(|| DEFAULT_OUT.into());
    if !dir.join(crate::dataset::MANIFEST_FILE).exists() {
        return Err(Error::Config(format!("no manifest in {}", dir.display())));
    }
    let opts = AnalyzeOptions {
        shots: a.shots.or(file.shots),
        seed: a.seed.or(file.seed).unwrap_or(0),
        k: a.k.or(file.k),
        trials: a.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS),
        workers: workers(cli, &file),
        families: a.families.clone(),
        out: a.out.clone(),
    };
    if opts.trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let analysis = analyze(&dir, &opts)?;
    println!("{}", analysis.summary());
    Ok(EXIT_OK)
}

fn qasm_files(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        if path.is_dir() {
            qasm_files(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "qasm") {
            out.push(path);
        }
    }
    Ok(())
}

fn cmd_validate(a: &ValidateArgs) -> Result<i32> {
    let mut files = Vec::new();
    qasm_files(&a.dir, &mut files)?;
    files.sort();
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    let mut widths: BTreeMap<usize, usize> = BTreeMap::new();
    let mut failures = 0;
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    for path in &files {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                failures += 1;
                let _ = writeln!(w, "FAIL {}: unreadable: {e}", path.display());
                continue;
            }
        };
        let parsed = match qasm::parse(&text) {
            Ok(p) => p,
            Err(e) => {
                failures += 1;
                let _ = writeln!(w, "FAIL {}: {e}", path.display());
                continue;
            }
        };
        for warning in &parsed.warnings {
            log::warn!("{}: {warning}", path.display());
        }
        let c = &parsed.circuit;
        if a.simulate {
            match c.run(&[]) {
                Ok(s) if (s.norm_sqr() - 1.0).abs() <= 1e-10 => {}
                Ok(s) => {
                    failures += 1;
                    let _ = writeln!(w, "FAIL {}: output norm^2 {}", path.display(), s.norm_sqr());
                    continue;
                }
                Err(e) => {
                    failures += 1;
                    let _ = writeln!(w, "FAIL {}: {e}", path.display());
                    continue;
                }
            }
        }
        *widths.entry(c.n_qubits()).or_default() += 1;
        for (g, n) in qasm::gate_histogram(c) {
            *histogram.entry(g.to_string()).or_default() += n;
        }
    }
    let _ = writeln!(w, "{} files, {} parsed, {} failed", files.len(), files.len() - failures, failures);
    for (n, count) in &widths {
        let _ = writeln!(w, "  {count} files with {n} qubits");
    }
    for (g, n) in &histogram {
        let _ = writeln!(w, "  {g:<10} {n}");
    }
    Ok(if failures > 0 { EXIT_PARTIAL } else { EXIT_OK })
}

fn cmd_export(a: &ExportArgs) -> Result<i32> {
    let manifest = Manifest::load(&a.dir)?;
    let selected: Vec<_> = match &a.id {
        None => manifest.records.iter().collect(),
        Some(ids) => ids
            .iter()
            .map(|id| {
                manifest.records.iter().find(|r| &r.id == id).ok_or_else(|| Error::Config(format!("no record `{id}`")))
            })
            .collect::<Result<_>>()?,
    };
    if a.out.is_none() && selected.len() == 1 {
        let r = selected[0];
        print!("{}", qasm::export(&r.to_record()?.circuit()?, &r.params)?);
        return Ok(EXIT_OK);
    }
    let out = a.out.clone().ok_or_else(|| Error::Config("--out is required when exporting several records".into()))?;
    fs::create_dir_all(&out).map_err(io_err(&out))?;
    for r in &selected {
        let text = qasm::export(&r.to_record()?.circuit()?, &r.params)?;
        write_atomic(&out.join(format!("{}.qasm", r.id)), text.as_bytes())?;
    }
    println!("wrote {} files to {}", selected.len(), out.display());
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen_args(argv: &[&str]) -> GenerateArgs {
        let mut full = vec!["vqeset", "generate"];
        full.extend_from_slice(argv);
        match Cli::try_parse_from(full).unwrap().command {
            Command::Generate(a) => a,
            _ => unreachable!(),
        }
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let file = FileConfig { n_qubits: Some(4), restarts: Some(5), seed: Some(9), ..FileConfig::default() };
        let (c, out) = resolve_dataset(&gen_args(&["--restarts", "3", "--depths", "3:12"]), &file).unwrap();
        assert_eq!((c.restarts, c.seed, c.depth_min, c.depth_max), (3, 9, 3, 12));
        assert_eq!(c.labels, vec![0, 1, 2, 3, 4]);
        assert_eq!(c.families.len(), 10);
        assert_eq!(out, PathBuf::from(DEFAULT_OUT));
        assert_eq!(c.cells().unwrap().len(), 500);
    }

    #[test]
    fn invalid_label_rejected_before_work() {
        let e = resolve_dataset(&gen_args(&["--n", "4", "--labels", "0,5"]), &FileConfig::default()).unwrap_err();
        assert!(e.to_string().contains("label 5"), "{e}");
    }

    #[test]
    fn depth_syntax() {
        assert_eq!(parse_depths("3:12"), Ok((3, 12)));
        assert_eq!(parse_depths("7"), Ok((7, 7)));
        assert!(parse_depths("a:3").is_err());
    }

    #[test]
    fn unknown_config_keys_rejected() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"n_qubit": 4}"#).is_err());
        assert!(serde_json::from_str::<FileConfig>(r#"{"n_qubits": 4, "shots": 100}"#).is_ok());
    }
}
