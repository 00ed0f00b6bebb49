//! Acceptance suite. Prints one PASS/FAIL line per criterion and a summary.
//! Exits 0 unless `VQESET_ACCEPTANCE_STRICT=1` is set and something failed.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vqeset::analyze::{cluster, exact_distances, shot_distances};
use vqeset::dataset::{generate, DatasetConfig, Manifest};
use vqeset::qasm::{decompose, export, parse};
use vqeset_core::analysis::{adjusted_rand_index, ground_state_fidelity, kmedoids, DistanceMatrix};
use vqeset_core::ansatz::{build_ansatz, Family};
use vqeset_core::fermion::{jordan_wigner, FermionProduct, Ladder};
use vqeset_core::hamiltonian::{build_hamiltonian, labels_for};
use vqeset_core::record::CircuitRecord;
use vqeset_core::spectrum::{ground_space, GroundSpace, DEFAULT_DEGENERACY_TOL};
use vqeset_core::statevector::{energy, energy_gradient};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn desk_config(n: usize) -> DatasetConfig {
    DatasetConfig { depth_min: 3, depth_max: 12, restarts: 3, seed: 0, ..DatasetConfig::full_grid(n) }
}

fn n8_config() -> DatasetConfig {
    DatasetConfig {
        labels: (0..=5).collect(),
        families: vec!["HE".into(), "1D-BB".into(), "Hamiltonian".into()],
        ..desk_config(8)
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    (m, (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt())
}

struct Dataset {
    manifest: Manifest,
    distances: DistanceMatrix,
}

fn build(config: &DatasetConfig, dir: &std::path::Path) -> Dataset {
    let summary = generate(config, dir, workers()).expect("generation");
    assert_eq!(summary.failed(), 0, "cell failures: {:?}", summary.manifest.failures);
    let manifest = summary.manifest;
    let records = manifest.circuit_records().unwrap();
    let distances = exact_distances(manifest.ids(), &records, workers()).unwrap();
    Dataset { manifest, distances }
}

fn clustering(ds: &Dataset, k: usize) -> Outcome {
    let m = &ds.manifest;
    let families = m.records.iter().map(|r| r.family.clone()).collect();
    let a = cluster(ds.distances.clone(), m.labels(), families, Some(k), 10, 0).unwrap();
    let (mean, std) = mean_std(&a.clustering.trial_aris);
    let best = a.clustering.best_ari().unwrap();
    outcome(mean >= if k == 5 { 0.90 } else { 0.80 }, format!("{} circuits, mean ARI {mean:.4} +/- {std:.4}, best-trial ARI {best:.4}", m.records.len()))
}

fn shot_subset(ds: &Dataset) -> Outcome {
    let m = &ds.manifest;
    let keep: Vec<usize> = (0..m.records.len()).filter(|&i| ["HE", "1D-BB"].contains(&m.records[i].family.as_str())).collect();
    let records: Vec<CircuitRecord> = keep.iter().map(|&i| m.records[i].to_record().unwrap()).collect();
    let ids = keep.iter().map(|&i| m.records[i].id.clone()).collect();
    let labels = keep.iter().map(|&i| m.records[i].label as usize).collect();
    let families = keep.iter().map(|&i| m.records[i].family.clone()).collect();
    let d = shot_distances(ids, &records, 20_000, 0, workers()).unwrap();
    let a = cluster(d, labels, families, Some(5), 10, 0).unwrap();
    let (mean, _) = mean_std(&a.clustering.trial_aris);
    let best = a.clustering.best_ari().unwrap();
    outcome(best == 1.0 && mean >= 0.95, format!("{} circuits, 20000 shots, best-trial ARI {best:.4}, mean ARI {mean:.4}", keep.len()))
}

fn jacobi_ground(label: u8, n: usize) -> f64 {
    let h = build_hamiltonian(label, n).unwrap();
    let m = from_flat(&h.to_matrix(), 1 << n);
    let d = m.len();
    // Real embedding [[A, -B], [B, A]] doubles each eigenvalue's multiplicity only.
    let mut big = vec![vec![0.0; 2 * d]; 2 * d];
    for i in 0..d {
        for j in 0..d {
            big[i][j] = m[i][j].re;
            big[i + d][j + d] = m[i][j].re;
            big[i][j + d] = -m[i][j].im;
            big[i + d][j] = m[i][j].im;
        }
    }
    jacobi_eigenvalues(big)[0]
}

fn variational(ds: &Dataset) -> Outcome {
    let mut best: BTreeMap<u8, f64> = BTreeMap::new();
    for r in &ds.manifest.records {
        let e = best.entry(r.label).or_insert(f64::INFINITY);
        *e = e.min(r.energy);
    }
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (&label, &e) in &best {
        let gap = e - jacobi_ground(label, 4);
        worst = worst.max(gap.abs());
        parts.push(format!("{label}: {gap:.1e}"));
    }
    outcome(best.len() == 5 && worst <= 1e-3, format!("best E - E0 per label [{}]", parts.join(", ")))
}

fn separation(ds: &Dataset, n: usize) -> (bool, String) {
    let m = &ds.manifest;
    let labels: Vec<u8> = m.records.iter().map(|r| r.label).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let spaces: BTreeMap<u8, GroundSpace> =
        labels.iter().map(|&l| (l, ground_space(&build_hamiltonian(l, n).unwrap(), DEFAULT_DEGENERACY_TOL).unwrap())).collect();
    let orthogonal = |a: u8, b: u8| {
        let (ga, gb) = (&spaces[&a], &spaces[&b]);
        ga.degeneracy() == 1 && gb.degeneracy() == 1 && gb.projection_weight(&ga.basis[0]) <= 1e-10
    };
    let fid: Vec<f64> = m
        .records
        .iter()
        .map(|r| ground_state_fidelity(&r.to_record().unwrap().state().unwrap(), &spaces[&r.label]).unwrap())
        .collect();
    let premise: Vec<usize> = (0..fid.len()).filter(|&i| fid[i] >= 0.75).collect();
    let (mut same, mut cross, mut same_bad, mut cross_bad) = (0, 0, 0, 0);
    for (a, &i) in premise.iter().enumerate() {
        for &j in &premise[a + 1..] {
            let f = 1.0 - ds.distances.get(i, j);
            let (li, lj) = (m.records[i].label, m.records[j].label);
            if li == lj {
                same += 1;
                same_bad += usize::from(f < 0.25);
            } else if orthogonal(li, lj) {
                cross += 1;
                cross_bad += usize::from(f > 1.0 / 16.0);
            }
        }
    }
    (
        same_bad == 0 && cross_bad == 0,
        format!(
            "N={n}: {}/{} records meet F >= 3/4; same-label {}/{same} ok, cross-label {}/{cross} ok",
            premise.len(),
            fid.len(),
            same - same_bad,
            cross - cross_bad
        ),
    )
}

fn gradients() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let step = 1e-5;
    let mut worst = 0.0f64;
    let mut bad = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let circuit = random_circuit(n, rng.gen_range(5..40), &mut rng);
        let h = random_hamiltonian(n, &mut rng);
        let x = random_params(circuit.n_params(), &mut rng);
        let (_, grad) = energy_gradient(&circuit, &x, &h).unwrap();
        for k in 0..x.len() {
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[k] += step;
            xm[k] -= step;
            let fd = (energy(&circuit, &xp, &h).unwrap() - energy(&circuit, &xm, &h).unwrap()) / (2.0 * step);
            let scale = fd.abs().max(grad[k].abs());
            let err = (grad[k] - fd).abs();
            if err > 1e-6 * scale + 1e-8 {
                bad += 1;
            }
            if scale > 1e-2 {
                worst = worst.max(err / scale);
            }
        }
    }
    outcome(bad == 0, format!("100 cases, {bad} slot mismatches, worst relative error {worst:.1e}"))
}

fn anticommutation() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=6 {
        let dim = 1 << n;
        let ladder = |op| from_flat(&jordan_wigner(&FermionProduct::new(n, c(1.0, 0.0), &[op]).unwrap(), n).unwrap().to_matrix(), dim);
        let a: Vec<Mat> = (1..=n).map(|i| ladder(Ladder::annihilate(i))).collect();
        let ad: Vec<Mat> = (1..=n).map(|i| ladder(Ladder::create(i))).collect();
        for i in 0..n {
            for j in 0..n {
                let delta = if i == j { identity(dim) } else { zeros(dim) };
                worst = worst.max(max_diff(&add(&matmul(&a[i], &ad[j]), &matmul(&ad[j], &a[i])), &delta));
                worst = worst.max(max_diff(&add(&matmul(&a[i], &a[j]), &matmul(&a[j], &a[i])), &zeros(dim)));
                worst = worst.max(max_diff(&add(&matmul(&ad[i], &ad[j]), &matmul(&ad[j], &ad[i])), &zeros(dim)));
            }
        }
    }
    outcome(worst <= 1e-12, format!("all mode pairs for 1..=6 modes, max deviation {worst:.1e}"))
}

fn qasm_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 1.0f64;
    let mut mismatched = 0;
    for _ in 0..200 {
        let n = [4, 6, 8][rng.gen_range(0..3)];
        let labels = labels_for(n);
        let family = Family::ALL[rng.gen_range(0..Family::ALL.len())];
        let label = labels[rng.gen_range(0..labels.len())];
        let depth = rng.gen_range(1..=6);
        let mut r = CircuitRecord { label, family, n_qubits: n, depth, params: Vec::new(), energy: 0.0, ground_energy: None };
        let count = r.spec().unwrap().parameter_count().unwrap();
        r.params = random_params(count, &mut rng);
        let circuit = r.circuit().unwrap();
        let parsed = parse(&export(&circuit, &r.params).unwrap()).unwrap();
        mismatched += usize::from(parsed.circuit != decompose(&circuit, &r.params).unwrap());
        worst = worst.min(parsed.circuit.run(&[]).unwrap().fidelity(&r.state().unwrap()).unwrap());
    }
    let cases: &[(&str, usize, usize)] = &[
        ("OPENQASM 2.0;\nqreg q[2];\nu3(0.1,0.2,0.3) q[0];\n", 3, 1),
        ("OPENQASM 2.0;\nqreg q[2];\nry 0.5 q[0];\n", 3, 4),
        ("OPENQASM 2.0;\nqreg q[2];\nry(0.5) q[2];\n", 3, 11),
        ("OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[0];\n", 3, 4),
        ("OPENQASM 2.0;\nqreg q[2];\nry(0.5 +) q[0];\n", 3, 9),
        ("OPENQASM 2.0;\nqreg q[2];\nh p[0];\n", 3, 3),
        ("OPENQASM 2.0;\nqreg q[2];\nry(0.5) q[0]\n", 3, 13),
    ];
    let positioned = cases.iter().filter(|(t, l, col)| parse(t).err().is_some_and(|e| (e.line, e.column) == (*l, *col))).count();
    outcome(
        worst >= 1.0 - 1e-10 && mismatched == 0 && positioned == cases.len(),
        format!("200 records, min fidelity 1 - {:.1e}, {positioned}/{} malformed inputs positioned", 1.0 - worst, cases.len()),
    )
}

fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0]];
    for _ in 1..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                let max = *p.iter().max().unwrap();
                (0..=max + 1).map(move |l| {
                    let mut q = p.clone();
                    q.push(l);
                    q
                })
            })
            .collect();
    }
    out
}

fn pair_count_ari(a: &[usize], b: &[usize]) -> f64 {
    let (mut n11, mut n10, mut n01, mut n00) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => n11 += 1.0,
                (true, false) => n10 += 1.0,
                (false, true) => n01 += 1.0,
                (false, false) => n00 += 1.0,
            }
        }
    }
    let den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
    if den == 0.0 {
        1.0
    } else {
        2.0 * (n00 * n11 - n01 * n10) / den
    }
}

fn ari_and_planted() -> Outcome {
    let parts = partitions(6);
    let mut worst = 0.0f64;
    for a in &parts {
        for b in &parts {
            worst = worst.max((adjusted_rand_index(a, b).unwrap() - pair_count_ari(a, b)).abs());
        }
    }
    let truth: Vec<usize> = (0..30).map(|i| i / 10).collect();
    let ids = (0..30).map(|i| format!("p{i}")).collect();
    let d = DistanceMatrix::from_fn(ids, |i, j| Ok(if truth[i] == truth[j] { 0.05 } else { 0.95 })).unwrap();
    let mut trials = 0;
    let mut perfect = 0;
    for seed in 0..10 {
        let mut r = kmedoids(&d, 3, 10, seed).unwrap();
        r.score(&truth).unwrap();
        trials += r.trial_aris.len();
        perfect += r.trial_aris.iter().filter(|&&a| a == 1.0).count();
    }
    outcome(
        parts.len() == 203 && worst <= 1e-12 && perfect == trials,
        format!("{} partition pairs, max deviation {worst:.1e}; planted benchmark {perfect}/{trials} trials at ARI 1", parts.len() * parts.len()),
    )
}

fn full_scale_structure() -> Outcome {
    let mut circuits = 0;
    for n in [16, 20] {
        for label in labels_for(n) {
            build_hamiltonian(label, n).unwrap();
            for family in Family::ALL {
                let r = CircuitRecord { label, family, n_qubits: n, depth: 3, params: Vec::new(), energy: 0.0, ground_energy: None };
                let spec = r.spec().unwrap();
                circuits += usize::from(build_ansatz(&spec).unwrap().n_params() == spec.parameter_count().unwrap());
            }
        }
    }
    let expected = (labels_for(16).len() + labels_for(20).len()) * Family::ALL.len();
    outcome(circuits == expected, format!("out of scope; {circuits}/{expected} label/family ansatze build at N=16 and N=20"))
}

fn main() {
    let strict = std::env::var("VQESET_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut results: Vec<(usize, Outcome)> = Vec::new();
    let mut report = |id: usize, name: &str, start: Instant, o: Outcome| {
        println!("{} criterion {id} ({name}): {} [{:.1}s]", if o.pass { "PASS" } else { "FAIL" }, o.detail, start.elapsed().as_secs_f64());
        results.push((id, o));
    };

    let t = Instant::now();
    report(6, "adjoint gradient", t, gradients());
    let t = Instant::now();
    report(7, "Jordan-Wigner anticommutation", t, anticommutation());
    let t = Instant::now();
    report(8, "QASM round trip", t, qasm_round_trip());
    let t = Instant::now();
    report(9, "ARI and planted k-medoids", t, ari_and_planted());
    let t = Instant::now();
    report(10, "full scale", t, full_scale_structure());

    let tmp = tempfile::tempdir().unwrap();
    let t = Instant::now();
    let n4 = build(&desk_config(4), &tmp.path().join("n4"));
    report(1, "N=4 exact clustering, ARI >= 0.90", t, clustering(&n4, 5));
    let t = Instant::now();
    report(3, "N=4 HE+1D-BB shot clustering", t, shot_subset(&n4));
    let t = Instant::now();
    report(4, "N=4 variational correctness", t, variational(&n4));

    let t = Instant::now();
    let n8 = build(&n8_config(), &tmp.path().join("n8"));
    report(2, "N=8 exact clustering, ARI >= 0.80", t, clustering(&n8, 6));
    let t = Instant::now();
    let (p4, d4) = separation(&n4, 4);
    let (p8, d8) = separation(&n8, 8);
    report(5, "separation bounds", t, outcome(p4 && p8, format!("{d4}; {d8}")));

    results.sort_by_key(|(id, _)| *id);
    let failed: Vec<String> = results.iter().filter(|(_, o)| !o.pass).map(|(id, _)| id.to_string()).collect();
    println!(
        "acceptance: {} passed, {} failed{}",
        results.len() - failed.len(),
        failed.len(),
        if failed.is_empty() { String::new() } else { format!(" (criteria {})", failed.join(", ")) }
    );
    if strict && !failed.is_empty() {
        std::process::exit(1);
    }
}
