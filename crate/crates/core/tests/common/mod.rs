//! Dense linear algebra used as an independent reference in tests.
#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64 as C;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use vqeset_core::pauli::{PauliString, PauliSum};
use vqeset_core::statevector::{Circuit, Gate, Param};

pub type Mat = Vec<Vec<C>>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn identity(d: usize) -> Mat {
    (0..d).map(|i| (0..d).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect()).collect()
}

pub fn zeros(d: usize) -> Mat {
    vec![vec![c(0.0, 0.0); d]; d]
}

pub fn pauli(ch: char) -> Mat {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match ch {
        'I' => vec![vec![l, o], vec![o, l]],
        'X' => vec![vec![o, l], vec![l, o]],
        'Y' => vec![vec![o, -i], vec![i, o]],
        'Z' => vec![vec![l, o], vec![o, -l]],
        _ => panic!("bad pauli"),
    }
}

/// `a (x) b` with `a` acting on the more significant index bits.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (da, db) = (a.len(), b.len());
    let mut out = zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    out[i * db + k][j * db + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Full matrix of a Pauli word given as one character per qubit, qubit 1 first.
/// Qubit 1 is the least significant bit, so it is the rightmost Kronecker factor.
pub fn word(chars: &str) -> Mat {
    let mut m = identity(1);
    for ch in chars.chars() {
        m = kron(&pauli(ch), &m);
    }
    m
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let d = a.len();
    let mut out = zeros(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

pub fn scale(a: &Mat, s: C) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn dagger(a: &Mat) -> Mat {
    let d = a.len();
    (0..d).map(|i| (0..d).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn matvec(a: &Mat, v: &[C]) -> Vec<C> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn max_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter().zip(b).flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).norm())).fold(0.0, f64::max)
}

/// Reshapes a row-major flat matrix.
pub fn from_flat(flat: &[C], d: usize) -> Mat {
    flat.chunks(d).map(|r| r.to_vec()).collect()
}

/// `exp(-i theta M / 2)` for `M` with `M^2 = I`.
pub fn pauli_exp(m: &Mat, theta: f64) -> Mat {
    let d = m.len();
    add(&scale(&identity(d), c((theta / 2.0).cos(), 0.0)), &scale(m, c(0.0, -(theta / 2.0).sin())))
}

/// Cyclic Jacobi eigenvalues of a real symmetric matrix.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    let mut v: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn random_pauli(n: usize, rng: &mut ChaCha8Rng) -> PauliString {
    loop {
        let p = PauliString::from_masks(n, rng.gen_range(0..1u64 << n), rng.gen_range(0..1u64 << n)).unwrap();
        if !p.is_identity() {
            return p;
        }
    }
}

/// Random circuit mixing slotted rotations with fixed gates. Every slot is
/// used at least once; some are shared between gates, possibly negated.
pub fn random_circuit(n: usize, gates: usize, rng: &mut ChaCha8Rng) -> Circuit {
    let mut out = Vec::with_capacity(gates);
    let mut n_params = 0;
    let two = |rng: &mut ChaCha8Rng| {
        let a = rng.gen_range(1..=n);
        let mut b = rng.gen_range(1..=n);
        while b == a {
            b = rng.gen_range(1..=n);
        }
        (a, b)
    };
    for _ in 0..gates {
        let kind = rng.gen_range(0..if n > 1 { 9 } else { 6 });
        let q = rng.gen_range(1..=n);
        let g = match kind {
            0 => Gate::Rx(q, next_param(&mut n_params, rng)),
            1 => Gate::Ry(q, next_param(&mut n_params, rng)),
            2 => Gate::Rz(q, next_param(&mut n_params, rng)),
            3 => {
                let p = random_pauli(n, rng);
                Gate::PauliRotation(p, next_param(&mut n_params, rng))
            }
            4 => Gate::H(q),
            5 => Gate::Rz(q, Param::Fixed(rng.gen_range(-PI..PI))),
            6 => {
                let (a, b) = two(rng);
                Gate::Cz(a, b)
            }
            7 => {
                let (control, target) = two(rng);
                Gate::Cnot { control, target }
            }
            _ => Gate::X(q),
        };
        out.push(g);
    }
    Circuit::new(n, out, n_params).unwrap()
}

pub fn next_param(n_params: &mut usize, rng: &mut ChaCha8Rng) -> Param {
    if *n_params > 0 && rng.gen_bool(0.2) {
        Param::Slot { index: rng.gen_range(0..*n_params), negated: rng.gen_bool(0.5) }
    } else {
        *n_params += 1;
        Param::slot(*n_params - 1)
    }
}

pub fn random_params(p: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..p).map(|_| rng.gen_range(-2.0 * PI..2.0 * PI)).collect()
}

pub fn random_hamiltonian(n: usize, rng: &mut ChaCha8Rng) -> PauliSum {
    let mut h = PauliSum::new(n).unwrap();
    for _ in 0..rng.gen_range(1..8) {
        h.add_real(rng.gen_range(-2.0..2.0), random_pauli(n, rng)).unwrap();
    }
    h
}
