use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vqeset::qasm::{decompose, export, parse};
use vqeset_core::ansatz::Family;
use vqeset_core::hamiltonian::labels_for;
use vqeset_core::record::CircuitRecord;
use vqeset_core::statevector::{Gate, Param};

fn random_record(rng: &mut ChaCha8Rng) -> CircuitRecord {
    let n = [4, 6, 8][rng.gen_range(0..3)];
    let labels = labels_for(n);
    let family = Family::ALL[rng.gen_range(0..Family::ALL.len())];
    let label = labels[rng.gen_range(0..labels.len())];
    let depth = rng.gen_range(1..=5);
    let mut r = CircuitRecord { label, family, n_qubits: n, depth, params: Vec::new(), energy: 0.0, ground_energy: None };
    let count = r.spec().unwrap().parameter_count().unwrap();
    r.params = (0..count).map(|_| rng.gen_range(-2.0 * PI..2.0 * PI)).collect();
    r
}

#[test]
fn round_trip_on_random_records() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let r = random_record(&mut rng);
        let circuit = r.circuit().unwrap();
        let text = export(&circuit, &r.params).unwrap();
        let parsed = parse(&text).unwrap();
        assert!(parsed.warnings.is_empty());
        assert_eq!(parsed.circuit, decompose(&circuit, &r.params).unwrap(), "{:?} N={} D={}", r.family, r.n_qubits, r.depth);
        let f = parsed.circuit.run(&[]).unwrap().fidelity(&r.state().unwrap()).unwrap();
        assert!(f >= 1.0 - 1e-10, "{:?} N={} D={}: fidelity {f}", r.family, r.n_qubits, r.depth);
    }
}

#[test]
fn header_and_gate_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let r = random_record(&mut rng);
        let text = export(&r.circuit().unwrap(), &r.params).unwrap();
        assert!(text.starts_with("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n"));
        assert_eq!(text.matches("qreg").count(), 1);
        for line in text.lines().skip(3) {
            let name = line.split(['(', ' ']).next().unwrap();
            assert!(["rx", "ry", "rz", "cx", "cz", "h"].contains(&name), "{line}");
        }
    }
}

#[test]
fn half_pi_ry_parses_to_one_gate() {
    let p = parse("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\nry(pi/2) q[0];\n").unwrap();
    assert_eq!(p.circuit.gates(), &[Gate::Ry(1, Param::Fixed(PI / 2.0))]);
}

#[test]
fn cx_operands_map_to_one_based_qubits() {
    let p = parse("OPENQASM 2.0;\nqreg q[2];\ncx q[1],q[0];\n").unwrap();
    assert_eq!(p.circuit.gates(), &[Gate::Cnot { control: 2, target: 1 }]);
}

#[test]
fn angle_expressions() {
    let p = parse("OPENQASM 2.0;\nqreg q[1];\nrz(-(pi - 1.5e-1) * 2 / 4) q[0];\nrx(+3) q[0];\n").unwrap();
    assert_eq!(p.circuit.gates()[0], Gate::Rz(1, Param::Fixed(-(PI - 0.15) * 2.0 / 4.0)));
    assert_eq!(p.circuit.gates()[1], Gate::Rx(1, Param::Fixed(3.0)));
}

#[test]
fn malformed_inputs_are_positioned() {
    let cases: &[(&str, usize, usize, &str)] = &[
        ("OPENQASM 2.0;\nqreg q[2];\nu3(0.1,0.2,0.3) q[0];\n", 3, 1, "`u3`"),
        ("OPENQASM 2.0;\nqreg q[2];\nry 0.5 q[0];\n", 3, 4, "expected `(`"),
        ("OPENQASM 2.0;\nqreg q[2];\nry(0.5) q[2];\n", 3, 11, "out of range"),
        ("OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[0];\n", 3, 4, "distinct"),
        ("OPENQASM 2.0;\nqreg q[2];\nry(0.5 +) q[0];\n", 3, 9, "expected"),
        ("OPENQASM 2.0;\nqreg q[2];\nqreg q[3];\n", 3, 6, "declared twice"),
        ("OPENQASM 2.0;\nqreg q[2];\nh p[0];\n", 3, 3, "unknown quantum register"),
        ("OPENQASM 2.0;\nqreg q[2];\nry(0.5) q[0]\n", 3, 13, "end of input"),
    ];
    for &(text, line, column, needle) in cases {
        let e = parse(text).unwrap_err();
        assert_eq!((e.line, e.column), (line, column), "{text:?}: {e}");
        assert!(e.message.contains(needle), "{text:?}: {e}");
    }
}

#[test]
fn ignored_statements_warn() {
    let p = parse("OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\nh q[0];\nbarrier q[0];\nmeasure q[0] -> c[0];\n").unwrap();
    assert_eq!(p.circuit.gates().len(), 1);
    assert_eq!(p.warnings.len(), 1);
}

proptest! {
    #[test]
    fn angles_survive_text(a in -1e3f64..1e3, q in 0usize..4) {
        let text = format!("OPENQASM 2.0;\nqreg q[4];\nrx({a}) q[{q}];\n");
        let p = parse(&text).unwrap();
        prop_assert_eq!(&p.circuit.gates()[0], &Gate::Rx(q + 1, Param::Fixed(a)));
    }
}
