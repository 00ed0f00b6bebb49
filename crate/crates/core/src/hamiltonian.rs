//! The six labelled model Hamiltonians.
//!
//! | label | model                                   |
//! |-------|-----------------------------------------|
//! | 0     | 1D transverse-field Ising               |
//! | 1     | 1D Heisenberg with longitudinal field   |
//! | 2     | Su-Schrieffer-Heeger (dimerised XXX)    |
//! | 3     | J1-J2 Heisenberg chain                  |
//! | 4     | 1D Hubbard (Jordan-Wigner mapped)       |
//! | 5     | 2D Hubbard on an (N/4) x 2 grid         |
//!
//! Spin models keep their construction order (bond terms by ascending site,
//! then field terms). Hubbard models are canonicalised after the mapping.
//! Spin-orbital `2j - 1` is site `j` spin up and `2j` is site `j` spin down.

use alloc::vec::Vec;

use crate::fermion::{jordan_wigner_sum, FermionProduct};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::{Error, Result};

pub const NUM_LABELS: u8 = 6;

pub fn label_name(label: u8) -> &'static str {
    match label {
        0 => "1D transverse-field Ising",
        1 => "1D Heisenberg",
        2 => "Su-Schrieffer-Heeger",
        3 => "J1-J2",
        4 => "1D Hubbard",
        5 => "2D Hubbard",
        _ => "unknown",
    }
}

/// Labels available at `n_qubits`. At four qubits the 2D Hubbard model on a
/// 1 x 2 grid is term-for-term the 1D model, so label 5 is omitted; it also
/// needs a whole number of grid columns.
pub fn labels_for(n_qubits: usize) -> Vec<u8> {
    (0..NUM_LABELS).filter(|&l| validate(l, n_qubits).is_ok()).collect()
}

/// Checks that `label` can be built on `n_qubits` qubits.
pub fn validate(label: u8, n_qubits: usize) -> Result<()> {
    if n_qubits < 4 || !n_qubits.is_multiple_of(2) || n_qubits > crate::pauli::MAX_QUBITS {
        return Err(Error::InvalidQubitCount(n_qubits));
    }
    let ok = match label {
        0..=4 => true,
        5 => n_qubits >= 8 && n_qubits.is_multiple_of(4),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidLabel { label, n_qubits })
    }
}

pub fn build_hamiltonian(label: u8, n_qubits: usize) -> Result<PauliSum> {
    validate(label, n_qubits)?;
    match label {
        0 => ising(n_qubits),
        1 => heisenberg(n_qubits),
        2 => ssh(n_qubits),
        3 => j1_j2(n_qubits),
        4 => hubbard_1d(n_qubits),
        5 => hubbard_2d(n_qubits),
        _ => unreachable!(),
    }
}

fn two_site(n: usize, p: Pauli, a: usize, b: usize) -> Result<PauliString> {
    PauliString::from_factors(n, &[(a, p), (b, p)])
}

fn add_xxx(h: &mut PauliSum, coeff: f64, a: usize, b: usize) -> Result<()> {
    let n = h.n_qubits();
    for p in [Pauli::X, Pauli::Y, Pauli::Z] {
        h.add_real(coeff, two_site(n, p, a, b)?)?;
    }
    Ok(())
}

fn add_field(h: &mut PauliSum, coeff: f64, p: Pauli) -> Result<()> {
    let n = h.n_qubits();
    for q in 1..=n {
        h.add_real(coeff, PauliString::single(n, q, p)?)?;
    }
    Ok(())
}

fn ising(n: usize) -> Result<PauliSum> {
    let mut h = PauliSum::new(n)?;
    for q in 1..n {
        h.add_real(1.0, two_site(n, Pauli::Z, q, q + 1)?)?;
    }
    add_field(&mut h, 2.0, Pauli::X)?;
    Ok(h)
}

fn heisenberg(n: usize) -> Result<PauliSum> {
    let mut h = PauliSum::new(n)?;
    for q in 1..n {
        add_xxx(&mut h, 1.0, q, q + 1)?;
    }
    add_field(&mut h, 2.0, Pauli::Z)?;
    Ok(h)
}

fn ssh(n: usize) -> Result<PauliSum> {
    let mut h = PauliSum::new(n)?;
    for q in 1..n {
        let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
        add_xxx(&mut h, 1.0 + 1.5 * sign, q, q + 1)?;
    }
    Ok(h)
}

fn j1_j2(n: usize) -> Result<PauliSum> {
    let mut h = PauliSum::new(n)?;
    for q in 1..n {
        add_xxx(&mut h, 1.0, q, q + 1)?;
        // Next-nearest bonds that would leave the open chain are dropped.
        if q + 2 <= n {
            add_xxx(&mut h, 3.0, q, q + 2)?;
        }
    }
    Ok(h)
}

/// Spin-orbital index of site `j` (1-based) with spin up (`false`) or down.
fn mode(site: usize, down: bool) -> usize {
    2 * site - 1 + usize::from(down)
}

fn hubbard(n: usize, bonds: &[(usize, usize)]) -> Result<PauliSum> {
    let sites = n / 2;
    let mut ops = Vec::new();
    for &(i, j) in bonds {
        for down in [false, true] {
            let (p, q) = (mode(i, down), mode(j, down));
            ops.push(FermionProduct::hopping(n, -1.0, p, q)?);
            ops.push(FermionProduct::hopping(n, -1.0, q, p)?);
        }
    }
    // (n_up - 1/2)(n_down - 1/2) expanded.
    for s in 1..=sites {
        let (up, dn) = (mode(s, false), mode(s, true));
        ops.push(FermionProduct::new(
            n,
            crate::C64::new(1.0, 0.0),
            &[
                crate::fermion::Ladder::create(up),
                crate::fermion::Ladder::annihilate(up),
                crate::fermion::Ladder::create(dn),
                crate::fermion::Ladder::annihilate(dn),
            ],
        )?);
        ops.push(FermionProduct::number(n, -0.5, up)?);
        ops.push(FermionProduct::number(n, -0.5, dn)?);
        ops.push(FermionProduct::scalar(n, 0.25)?);
    }
    jordan_wigner_sum(&ops, n)
}

fn hubbard_1d(n: usize) -> Result<PauliSum> {
    let bonds: Vec<_> = (1..n / 2).map(|j| (j, j + 1)).collect();
    hubbard(n, &bonds)
}

/// Site index of grid point `(jx, jy)`, `jy` in `{1, 2}`.
fn grid_site(jx: usize, jy: usize) -> usize {
    2 * (jx - 1) + jy
}

/// Nearest-neighbour bonds of the `(n/4) x 2` grid: rows first, then rungs.
pub fn grid_bonds(n: usize) -> Vec<(usize, usize)> {
    let lx = n / 4;
    let mut bonds = Vec::new();
    for jx in 1..lx {
        for jy in 1..=2 {
            bonds.push((grid_site(jx, jy), grid_site(jx + 1, jy)));
        }
    }
    for jx in 1..=lx {
        bonds.push((grid_site(jx, 1), grid_site(jx, 2)));
    }
    bonds
}

fn hubbard_2d(n: usize) -> Result<PauliSum> {
    hubbard(n, &grid_bonds(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::string::String;

    fn render(h: &PauliSum) -> Vec<String> {
        h.terms().iter().map(|(c, p)| format!("{} {}", c.re, p)).collect()
    }

    #[test]
    fn ising_four_sites() {
        let h = build_hamiltonian(0, 4).unwrap();
        assert_eq!(
            render(&h),
            ["1 Z1 Z2", "1 Z2 Z3", "1 Z3 Z4", "2 X1", "2 X2", "2 X3", "2 X4"]
        );
    }

    #[test]
    fn ssh_bond_pattern() {
        let h = build_hamiltonian(2, 4).unwrap();
        let coeffs: Vec<f64> = h.terms().iter().map(|t| t.0.re).collect();
        assert_eq!(coeffs, [-0.5, -0.5, -0.5, 2.5, 2.5, 2.5, -0.5, -0.5, -0.5]);
        assert_eq!(h.terms()[3].1, two_site(4, Pauli::X, 2, 3).unwrap());
    }

    #[test]
    fn j1_j2_drops_bonds_past_the_edge() {
        let h = build_hamiltonian(3, 4).unwrap();
        // 3 nearest bonds and 2 next-nearest bonds, three Pauli terms each.
        assert_eq!(h.len(), 15);
        assert!(h.terms().iter().all(|(_, p)| p.factors().all(|(q, _)| q <= 4)));
        let nn: Vec<_> = h.terms().iter().filter(|t| t.0.re == 3.0).collect();
        assert_eq!(nn.len(), 6);
    }

    #[test]
    fn heisenberg_has_z_field() {
        let h = build_hamiltonian(1, 4).unwrap();
        assert_eq!(h.len(), 9 + 4);
        assert_eq!(render(&h)[9..], ["2 Z1", "2 Z2", "2 Z3", "2 Z4"]);
    }

    #[test]
    fn label_validation() {
        assert!(matches!(build_hamiltonian(5, 4), Err(Error::InvalidLabel { label: 5, .. })));
        assert!(matches!(build_hamiltonian(6, 8), Err(Error::InvalidLabel { .. })));
        assert!(matches!(build_hamiltonian(0, 5), Err(Error::InvalidQubitCount(5))));
        assert!(matches!(build_hamiltonian(0, 2), Err(Error::InvalidQubitCount(2))));
        assert_eq!(labels_for(4), [0, 1, 2, 3, 4]);
        assert_eq!(labels_for(8), [0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn grid_bonds_two_by_two() {
        assert_eq!(grid_bonds(8), [(1, 3), (2, 4), (1, 2), (3, 4)]);
        assert_eq!(grid_bonds(4), [(1, 2)]);
    }

    #[test]
    fn two_d_hubbard_on_one_by_two_grid_is_the_chain() {
        assert_eq!(hubbard_2d(4).unwrap(), hubbard_1d(4).unwrap());
    }

    #[test]
    fn hubbard_terms_are_real() {
        for label in [4, 5] {
            let h = build_hamiltonian(label, 8).unwrap();
            assert!(h.is_real(1e-15));
            assert!(h.terms().iter().all(|(c, _)| c.norm() > 1e-14));
        }
        let h = build_hamiltonian(4, 4).unwrap();
        assert!(h.terms().iter().all(|(c, p)| !p.is_identity() || c.norm() < 1e-14));
    }
}
