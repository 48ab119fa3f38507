//! Visibility graph over instance points and separator endpoints, all-pairs
//! true-path costs via per-source Dijkstra, and the deviation factor.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{blocked_between, on_open_segment, Point, SeparatorSet};
use crate::tsplib::Instance;

#[derive(Debug, Error)]
pub enum PathError {
    #[error("instance point {index} at ({x}, {y}) lies inside a separator; its path cost is undefined")]
    PointOnSeparator { index: usize, x: f64, y: f64 },
    #[error("instance points {from} and {to} are mutually unreachable (separators disconnect the scene)")]
    Disconnected { from: usize, to: usize },
    #[error("duplicate points {i} and {j}: Euclidean distance is zero")]
    DuplicatePoints { i: usize, j: usize },
    #[error("cost matrix invariant violated: {0}")]
    InvalidMatrix(String),
    #[error("cost matrix file {path}: {msg}")]
    BadMatrixFile { path: String, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Symmetric nonnegative arc costs, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n: usize,
    data: Vec<f64>,
}

const SYMMETRY_TOL: f64 = 1e-9;
const MATRIX_MAGIC: &[u8; 8] = b"ACHCIcm1";

impl CostMatrix {
    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self, PathError> {
        if data.len() != n * n {
            return Err(PathError::InvalidMatrix(format!(
                "{} entries for n = {n}",
                data.len()
            )));
        }
        let m = CostMatrix { n, data };
        m.validate()?;
        Ok(m)
    }

    /// Euclidean distance matrix of an instance (the k = 0 cost model).
    pub fn euclidean(inst: &Instance) -> Self {
        let n = inst.n();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = inst.coords[i].dist(inst.coords[j]);
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        CostMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, &v| m.max(v))
    }

    fn validate(&self) -> Result<(), PathError> {
        let n = self.n;
        for i in 0..n {
            let d = self.at(i, i);
            if d != 0.0 {
                return Err(PathError::InvalidMatrix(format!("C[{i}][{i}] = {d}, not 0")));
            }
            for j in (i + 1)..n {
                let a = self.at(i, j);
                let b = self.at(j, i);
                if !a.is_finite() || a < 0.0 {
                    return Err(PathError::InvalidMatrix(format!("C[{i}][{j}] = {a}")));
                }
                if (a - b).abs() > SYMMETRY_TOL * a.abs().max(b.abs()).max(1.0) {
                    return Err(PathError::InvalidMatrix(format!(
                        "asymmetry at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Dense little-endian binary cache format: magic, n, then n² doubles.
    pub fn save(&self, path: &Path) -> Result<(), PathError> {
        let mut bytes = Vec::with_capacity(16 + 8 * self.data.len());
        bytes.extend_from_slice(MATRIX_MAGIC);
        bytes.extend_from_slice(&(self.n as u64).to_le_bytes());
        for v in &self.data {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        fs::write(path, bytes)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, PathError> {
        let bytes = fs::read(path)?;
        let bad = |msg: &str| PathError::BadMatrixFile {
            path: path.display().to_string(),
            msg: msg.to_string(),
        };
        if bytes.len() < 16 || &bytes[0..8] != MATRIX_MAGIC {
            return Err(bad("missing header"));
        }
        let n = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
        if bytes.len() != 16 + 8 * n * n {
            return Err(bad("truncated payload"));
        }
        let data: Vec<f64> = bytes[16..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        CostMatrix::from_rows(n, data)
    }
}

/// Geometric graph over the instance points (first `n_instance` vertices)
/// followed by separator endpoints. An edge exists iff the straight segment
/// between its vertices is unblocked; weights are Euclidean lengths.
#[derive(Debug, Clone)]
pub struct VisibilityGraph {
    pub points: Vec<Point>,
    pub n_instance: usize,
    pub adj: Vec<Vec<(u32, f64)>>,
}

pub fn build_visibility_graph(
    inst: &Instance,
    seps: &SeparatorSet,
) -> Result<VisibilityGraph, PathError> {
    for (i, p) in inst.coords.iter().enumerate() {
        for s in &seps.segments {
            if on_open_segment(*p, s) {
                return Err(PathError::PointOnSeparator { index: i + 1, x: p.x, y: p.y });
            }
        }
    }
    let mut points = inst.coords.clone();
    for s in &seps.segments {
        points.push(s.a);
        points.push(s.b);
    }
    let v = points.len();
    let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); v];
    for i in 0..v {
        for j in (i + 1)..v {
            if !blocked_between(points[i], points[j], seps) {
                let w = points[i].dist(points[j]);
                adj[i].push((j as u32, w));
                adj[j].push((i as u32, w));
            }
        }
    }
    Ok(VisibilityGraph { points, n_instance: inst.n(), adj })
}

struct HeapEntry {
    dist: f64,
    node: u32,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    // Reversed for a min-heap; ties broken by node id for determinism.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

fn dijkstra(g: &VisibilityGraph, source: usize) -> Vec<f64> {
    let v = g.points.len();
    let mut dist = vec![f64::INFINITY; v];
    let mut done = vec![false; v];
    let mut heap = BinaryHeap::with_capacity(v);
    dist[source] = 0.0;
    heap.push(HeapEntry { dist: 0.0, node: source as u32 });
    while let Some(HeapEntry { dist: d, node }) = heap.pop() {
        let u = node as usize;
        if done[u] {
            continue;
        }
        done[u] = true;
        for &(nbr, w) in &g.adj[u] {
            let nbr = nbr as usize;
            let nd = d + w;
            if nd < dist[nbr] {
                dist[nbr] = nd;
                heap.push(HeapEntry { dist: nd, node: nbr as u32 });
            }
        }
    }
    dist
}

/// Shortest true-path costs between all instance point pairs, one Dijkstra
/// run per source vertex. Runs are independent and execute in parallel;
/// rows are assembled in source order.
pub fn all_pairs_costs(g: &VisibilityGraph) -> Result<CostMatrix, PathError> {
    let n = g.n_instance;
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| dijkstra(g, s))
        .collect();
    let mut data = vec![0.0; n * n];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            if !row[j].is_finite() {
                return Err(PathError::Disconnected { from: i + 1, to: j + 1 });
            }
            data[i * n + j] = row[j];
        }
    }
    // The two opposing Dijkstra runs can disagree by rounding noise;
    // symmetrize so downstream code may use either triangle.
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (data[i * n + j] + data[j * n + i]);
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    CostMatrix::from_rows(n, data)
}

/// Mean ratio of true path length to straight-line distance over all
/// unordered point pairs.
pub fn deviation_factor(c: &CostMatrix, inst: &Instance) -> Result<f64, PathError> {
    let n = inst.n();
    assert_eq!(n, c.n(), "cost matrix and instance size mismatch");
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            let delta = inst.coords[i].dist(inst.coords[j]);
            if delta == 0.0 {
                return Err(PathError::DuplicatePoints { i: i + 1, j: j + 1 });
            }
            sum += c.at(i, j) / delta;
            pairs += 1;
        }
    }
    Ok(sum / pairs as f64)
}
