use alloc::vec;
use alloc::vec::Vec;

use super::DistanceMatrix;
use crate::linalg::symmetric_eigen;
use crate::math::{abs, sqrt};
use crate::{Error, Result};

/// Classical MDS coordinates in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub coords: Vec<[f64; 2]>,
    /// The two leading eigenvalues of the centred Gram matrix, after clamping.
    pub eigenvalues: [f64; 2],
    /// Kruskal stress-1 of the planar distances against the input.
    pub stress: f64,
}

/// Torgerson MDS: eigen-decompose `B = -1/2 J D^2 J` and scale the top two
/// eigenvectors by the square roots of their (non-negative) eigenvalues.
///
/// Each eigenvector is signed so its first component above `1e-12` in
/// magnitude is positive.
pub fn mds_embed(d: &DistanceMatrix) -> Result<Embedding> {
    let m = d.len();
    if m < 3 {
        return Err(Error::TooFewPoints { needed: 3, found: m });
    }
    let mut b = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            let v = d.get(i, j);
            b[i * m + j] = v * v;
        }
    }
    let row_means: Vec<f64> = (0..m).map(|i| b[i * m..(i + 1) * m].iter().sum::<f64>() / m as f64).collect();
    let grand = row_means.iter().sum::<f64>() / m as f64;
    for i in 0..m {
        for j in 0..m {
            // D^2 is symmetric, so column means equal row means.
            b[i * m + j] = -0.5 * (b[i * m + j] - row_means[i] - row_means[j] + grand);
        }
    }
    let eig = symmetric_eigen(&b, m)?;
    let mut coords = vec![[0.0; 2]; m];
    let mut eigenvalues = [0.0; 2];
    for c in 0..2 {
        let k = m - 1 - c;
        let lambda = eig.values[k].max(0.0);
        eigenvalues[c] = lambda;
        let v = &eig.vectors[k];
        let sign = match v.iter().find(|x| abs(**x) > 1e-12) {
            Some(x) if *x < 0.0 => -1.0,
            _ => 1.0,
        };
        let scale = sign * sqrt(lambda);
        for i in 0..m {
            coords[i][c] = v[i] * scale;
        }
    }
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..m {
        for j in i + 1..m {
            let dx = coords[i][0] - coords[j][0];
            let dy = coords[i][1] - coords[j][1];
            let r = d.get(i, j) - sqrt(dx * dx + dy * dy);
            num += r * r;
            den += d.get(i, j) * d.get(i, j);
        }
    }
    let stress = if den > 0.0 { sqrt(num / den) } else { 0.0 };
    Ok(Embedding { coords, eigenvalues, stress })
}
