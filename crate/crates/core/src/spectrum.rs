//! Ground energies and ground eigenspaces of Pauli-sum Hamiltonians.
//!
//! Small registers (up to [`DENSE_MAX_QUBITS`]) are diagonalised densely.
//! Larger ones use a matrix-free Lanczos iteration with full
//! reorthogonalisation, restarted from the current Ritz vector, and repeated
//! with deflation until the next eigenvalue leaves the degeneracy window.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{symmetric_eigen, tridiagonal_eigen};
use crate::pauli::PauliSum;
use crate::{Error, Result, C64};

pub const DENSE_MAX_QUBITS: usize = 12;
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;
/// Residual `||H v - E v||` required from a Lanczos Ritz pair.
pub const LANCZOS_RESIDUAL_TOL: f64 = 1e-8;

const KRYLOV_DIM: usize = 60;
const MAX_RESTARTS: usize = 200;

#[derive(Debug, Clone)]
pub struct GroundSpace {
    pub n_qubits: usize,
    pub energy: f64,
    /// Orthonormal basis of the ground eigenspace.
    pub basis: Vec<Vec<C64>>,
    pub degeneracy_tol: f64,
}

impl GroundSpace {
    pub fn degeneracy(&self) -> usize {
        self.basis.len()
    }

    /// `||P_g psi||^2`.
    pub fn projection_weight(&self, amplitudes: &[C64]) -> f64 {
        self.basis.iter().map(|g| inner(g, amplitudes).norm_sqr()).sum()
    }
}

/// Dense path up to [`DENSE_MAX_QUBITS`], Lanczos above.
pub fn ground_space(h: &PauliSum, degeneracy_tol: f64) -> Result<GroundSpace> {
    if h.n_qubits() <= DENSE_MAX_QUBITS {
        ground_space_dense(h, degeneracy_tol)
    } else {
        ground_space_lanczos(h, degeneracy_tol)
    }
}

/// Lowest eigenvalue only, via the same paths as [`ground_space`].
pub fn ground_energy(h: &PauliSum) -> Result<f64> {
    Ok(ground_space(h, DEFAULT_DEGENERACY_TOL)?.energy)
}

pub fn ground_space_dense(h: &PauliSum, degeneracy_tol: f64) -> Result<GroundSpace> {
    let n = h.n_qubits();
    if n > 14 {
        return Err(Error::InvalidQubitCount(n));
    }
    let dim = 1usize << n;
    let m = h.to_matrix();
    let basis;
    let energy;
    if m.iter().all(|c| c.im == 0.0) {
        let real: Vec<f64> = m.iter().map(|c| c.re).collect();
        drop(m);
        let eig = symmetric_eigen(&real, dim)?;
        energy = eig.values[0];
        basis = eig
            .values
            .iter()
            .zip(eig.vectors)
            .take_while(|(v, _)| **v <= energy + degeneracy_tol)
            .map(|(_, vec)| vec.into_iter().map(|x| C64::new(x, 0.0)).collect())
            .collect();
    } else {
        // H = A + iB is Hermitian iff [[A, -B], [B, A]] is symmetric; every
        // eigenvalue appears twice and (x, y) maps back to x + iy.
        let n2 = 2 * dim;
        let mut real = vec![0.0; n2 * n2];
        for r in 0..dim {
            for c in 0..dim {
                let z = m[r * dim + c];
                real[r * n2 + c] = z.re;
                real[(r + dim) * n2 + c + dim] = z.re;
                real[r * n2 + c + dim] = -z.im;
                real[(r + dim) * n2 + c] = z.im;
            }
        }
        drop(m);
        let eig = symmetric_eigen(&real, n2)?;
        energy = eig.values[0];
        let candidates: Vec<Vec<C64>> = eig
            .values
            .iter()
            .zip(eig.vectors)
            .take_while(|(v, _)| **v <= energy + degeneracy_tol)
            .map(|(_, vec)| (0..dim).map(|i| C64::new(vec[i], vec[i + dim])).collect())
            .collect();
        basis = gram_schmidt(candidates, 1e-6);
    }
    Ok(GroundSpace { n_qubits: n, energy, basis, degeneracy_tol })
}

pub fn ground_space_lanczos(h: &PauliSum, degeneracy_tol: f64) -> Result<GroundSpace> {
    let dim = 1usize << h.n_qubits();
    let mut found: Vec<(f64, Vec<C64>)> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6c61_6e63_7a6f_7321);
    while found.len() < dim {
        let deflate: Vec<Vec<C64>> = found.iter().map(|f| f.1.clone()).collect();
        let (e, v) = lowest_eigenpair(h, &deflate, &mut rng)?;
        let lowest = found.iter().map(|f| f.0).fold(e, f64::min);
        if !found.is_empty() && e > lowest + degeneracy_tol {
            break;
        }
        found.push((e, v));
    }
    let energy = found.iter().map(|f| f.0).fold(f64::INFINITY, f64::min);
    let basis = gram_schmidt(
        found.into_iter().filter(|f| f.0 <= energy + degeneracy_tol).map(|f| f.1).collect(),
        1e-6,
    );
    Ok(GroundSpace { n_qubits: h.n_qubits(), energy, basis, degeneracy_tol })
}

/// Lowest eigenpair of `H` restricted to the complement of `deflate`.
fn lowest_eigenpair(
    h: &PauliSum,
    deflate: &[Vec<C64>],
    rng: &mut ChaCha8Rng,
) -> Result<(f64, Vec<C64>)> {
    let dim = 1usize << h.n_qubits();
    let mut start: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let mut residual = f64::INFINITY;
    let mut scratch = vec![C64::new(0.0, 0.0); dim];
    for restart in 0..MAX_RESTARTS {
        project_out(&mut start, deflate);
        if normalize(&mut start) == 0.0 {
            return Err(Error::NoConvergence { iterations: restart, residual });
        }
        let max_k = KRYLOV_DIM.min(dim - deflate.len());
        let mut basis: Vec<Vec<C64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        loop {
            let j = basis.len() - 1;
            h.apply(&basis[j], &mut scratch);
            project_out(&mut scratch, deflate);
            let a = inner(&basis[j], &scratch).re;
            alpha.push(a);
            // Full reorthogonalisation, applied twice.
            for _ in 0..2 {
                for b in &basis {
                    let c = inner(b, &scratch);
                    for (s, bv) in scratch.iter_mut().zip(b) {
                        *s -= c * bv;
                    }
                }
            }
            let b = norm(&scratch);
            if basis.len() >= max_k || b < 1e-12 {
                let eig = tridiagonal_eigen(&alpha, &beta)?;
                let s = &eig.vectors[0];
                let ritz: Vec<C64> = {
                    let mut out = vec![C64::new(0.0, 0.0); dim];
                    for (coef, vk) in s.iter().zip(&basis) {
                        for (o, x) in out.iter_mut().zip(vk) {
                            *o += x * *coef;
                        }
                    }
                    out
                };
                let theta = eig.values[0];
                residual = ritz_residual(h, &ritz, theta, deflate, &mut scratch);
                if residual <= LANCZOS_RESIDUAL_TOL {
                    let mut ritz = ritz;
                    normalize(&mut ritz);
                    return Ok((theta, ritz));
                }
                start = ritz;
                break;
            }
            beta.push(b);
            let next: Vec<C64> = scratch.iter().map(|x| x / b).collect();
            basis.push(next);
        }
    }
    Err(Error::NoConvergence { iterations: MAX_RESTARTS, residual })
}

fn ritz_residual(
    h: &PauliSum,
    v: &[C64],
    theta: f64,
    deflate: &[Vec<C64>],
    scratch: &mut [C64],
) -> f64 {
    h.apply(v, scratch);
    project_out(scratch, deflate);
    let mut acc = 0.0;
    for (hv, x) in scratch.iter().zip(v) {
        acc += (hv - x * theta).norm_sqr();
    }
    crate::math::sqrt(acc) / norm(v)
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    crate::math::sqrt(a.iter().map(|x| x.norm_sqr()).sum())
}

fn normalize(a: &mut [C64]) -> f64 {
    let n = norm(a);
    if n > 0.0 {
        for x in a.iter_mut() {
            *x /= n;
        }
    }
    n
}

fn project_out(v: &mut [C64], basis: &[Vec<C64>]) {
    for b in basis {
        let c = inner(b, v);
        for (x, bv) in v.iter_mut().zip(b) {
            *x -= c * bv;
        }
    }
}

fn gram_schmidt(candidates: Vec<Vec<C64>>, drop_below: f64) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    for mut v in candidates {
        for _ in 0..2 {
            project_out(&mut v, &out);
        }
        if normalize(&mut v) > drop_below {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build_hamiltonian;
    use crate::pauli::{Pauli, PauliString};

    fn z_sum(n: usize, terms: &[&[usize]]) -> PauliSum {
        let mut h = PauliSum::new(n).unwrap();
        for t in terms {
            let f: Vec<_> = t.iter().map(|&q| (q, Pauli::Z)).collect();
            h.add_real(1.0, PauliString::from_factors(n, &f).unwrap()).unwrap();
        }
        h
    }

    #[test]
    fn single_z() {
        let g = ground_space(&z_sum(1, &[&[1]]), 1e-8).unwrap();
        assert!((g.energy + 1.0).abs() < 1e-14);
        assert_eq!(g.degeneracy(), 1);
        assert!((g.basis[0][1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zz_is_doubly_degenerate() {
        let g = ground_space(&z_sum(2, &[&[1, 2]]), 1e-8).unwrap();
        assert!((g.energy + 1.0).abs() < 1e-14);
        assert_eq!(g.degeneracy(), 2);
        // Spanned by |01> and |10> (indices 1 and 2).
        for v in &g.basis {
            assert!(v[0].norm() < 1e-12 && v[3].norm() < 1e-12);
        }
    }

    #[test]
    fn complex_hamiltonian_uses_embedding() {
        // H = Y1 has ground state (|0> - i|1>)/sqrt(2).
        let mut h = PauliSum::new(1).unwrap();
        h.add_real(1.0, PauliString::single(1, 1, Pauli::Y).unwrap()).unwrap();
        // Make one matrix entry complex by adding a Y coefficient phase.
        let g = ground_space_dense(&h, 1e-8).unwrap();
        assert!((g.energy + 1.0).abs() < 1e-12);
        assert_eq!(g.degeneracy(), 1);
        let v = &g.basis[0];
        let mut hv = vec![C64::new(0.0, 0.0); 2];
        h.apply(v, &mut hv);
        for (a, b) in hv.iter().zip(v) {
            assert!((a + b).norm() < 1e-10);
        }
    }

    #[test]
    fn lanczos_matches_dense_on_small_models() {
        for label in 0..5u8 {
            let h = build_hamiltonian(label, 6).unwrap();
            let dense = ground_space_dense(&h, 1e-8).unwrap();
            let lanczos = ground_space_lanczos(&h, 1e-8).unwrap();
            assert!((dense.energy - lanczos.energy).abs() < 1e-9, "label {label}");
            assert_eq!(dense.degeneracy(), lanczos.degeneracy(), "label {label}");
            // Same subspace: each Lanczos vector lies inside the dense space.
            for v in &lanczos.basis {
                assert!((dense.projection_weight(v) - 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn basis_is_orthonormal_eigenbasis() {
        for label in 0..5u8 {
            let h = build_hamiltonian(label, 4).unwrap();
            let g = ground_space(&h, DEFAULT_DEGENERACY_TOL).unwrap();
            let mut hv = vec![C64::new(0.0, 0.0); 16];
            for (i, v) in g.basis.iter().enumerate() {
                h.apply(v, &mut hv);
                let r: f64 = hv.iter().zip(v).map(|(a, b)| (a - b * g.energy).norm_sqr()).sum();
                assert!(r.sqrt() <= 1e-8);
                for (j, w) in g.basis.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((inner(v, w) - C64::new(want, 0.0)).norm() < 1e-10);
                }
            }
        }
    }
}
