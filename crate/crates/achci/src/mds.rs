//! Classical multidimensional scaling: squared-cost Gram matrix with node 1
//! as the origin, symmetric eigendecomposition, and the rank-2 projection
//! that seeds the convex hull subtour.

use thiserror::Error;

use crate::eigen::{eigen_symmetric, EigenError};
use crate::geometry::Point;
use crate::shortest_paths::CostMatrix;

#[derive(Debug, Error)]
pub enum MdsError {
    #[error("MDS needs n >= 3, got {0}")]
    TooSmall(usize),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// Inner products of the relative position vectors of nodes 2..n with
/// respect to node 1, derived from squared costs. `(n - 1) x (n - 1)`,
/// symmetric by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// M[i][j] = (C²(i+1, 0) + C²(0, j+1) − C²(i+1, j+1)) / 2 with node 0
/// (TSPLIB node 1) as the origin. The upper triangle is mirrored so the
/// result is exactly symmetric.
pub fn gram_from_costs(c: &CostMatrix) -> Result<GramMatrix, MdsError> {
    let n = c.n();
    if n < 3 {
        return Err(MdsError::TooSmall(n));
    }
    let dim = n - 1;
    let mut data = vec![0.0; dim * dim];
    for i in 0..dim {
        let ci = c.at(i + 1, 0);
        for j in i..dim {
            let cj = c.at(0, j + 1);
            let cij = c.at(i + 1, j + 1);
            let m = (ci * ci + cj * cj - cij * cij) / 2.0;
            data[i * dim + j] = m;
            data[j * dim + i] = m;
        }
    }
    Ok(GramMatrix { dim, data })
}

/// How much of the spectrum had to be clamped away: non-Euclidean cost
/// matrices make the Gram matrix indefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSummary {
    pub clamped: usize,
    pub negative_mass: f64,
}

/// Planar MDS coordinates. `coords[0]` is the origin node; the two retained
/// eigenvalues satisfy `eigenvalues.0 >= eigenvalues.1 >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding2D {
    pub coords: Vec<Point>,
    pub eigenvalues: (f64, f64),
    pub spectrum: SpectrumSummary,
}

impl Embedding2D {
    pub fn n(&self) -> usize {
        self.coords.len()
    }
}

/// Project to 2D: keep the two largest eigenvalues of the clamped spectrum
/// and scale their eigenvectors by the square roots. Each retained
/// eigenvector's sign is fixed so its first component above 1e-12 is
/// positive, making the embedding reproducible.
pub fn embed_2d(m: &GramMatrix) -> Result<Embedding2D, MdsError> {
    let dim = m.dim();
    let eig = eigen_symmetric(dim, m.as_slice())?;

    // Ascending from the solver; walk from the top.
    let clamped = eig.values.iter().filter(|&&l| l < 0.0).count();
    let negative_mass: f64 = eig.values.iter().filter(|&&l| l < 0.0).map(|l| -l).sum();

    let top = |rank: usize| -> (f64, Vec<f64>) {
        if rank >= dim {
            return (0.0, vec![0.0; dim]);
        }
        let idx = dim - 1 - rank;
        let lambda = eig.values[idx].max(0.0);
        let mut q = eig.vector(idx).to_vec();
        if let Some(&lead) = q.iter().find(|v| v.abs() > 1e-12) {
            if lead < 0.0 {
                for v in &mut q {
                    *v = -*v;
                }
            }
        }
        (lambda, q)
    };
    let (l1, q1) = top(0);
    let (l2, q2) = top(1);
    let (s1, s2) = (l1.sqrt(), l2.sqrt());

    let mut coords = Vec::with_capacity(dim + 1);
    coords.push(Point::new(0.0, 0.0));
    for i in 0..dim {
        coords.push(Point::new(s1 * q1[i], s2 * q2[i]));
    }
    Ok(Embedding2D {
        coords,
        eigenvalues: (l1, l2),
        spectrum: SpectrumSummary { clamped, negative_mass },
    })
}

/// Normalized residual between embedded distances and target costs:
/// sqrt(Σ_{i<j} (‖e_i − e_j‖ − C_ij)² / Σ_{i<j} C_ij²).
pub fn embedding_stress(c: &CostMatrix, e: &Embedding2D) -> f64 {
    let n = c.n();
    assert_eq!(n, e.n(), "embedding and cost matrix size mismatch");
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = e.coords[i].dist(e.coords[j]);
            let cij = c.at(i, j);
            num += (d - cij) * (d - cij);
            den += cij * cij;
        }
    }
    if den == 0.0 {
        0.0
    } else {
        (num / den).sqrt()
    }
}
