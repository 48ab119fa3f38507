//! Tour construction over the true cost matrix: convex-hull cheapest
//! insertion seeded by the MDS embedding, the nearest-neighbor baseline,
//! and a small-n exact oracle.

use thiserror::Error;

use crate::geometry::convex_hull;
use crate::mds::Embedding2D;
use crate::shortest_paths::CostMatrix;

#[derive(Debug, Error)]
pub enum HeuristicError {
    #[error("order is not a permutation of 0..{n}")]
    NotAPermutation { n: usize },
    #[error("tour construction needs n >= 3, got {0}")]
    TooSmall(usize),
    #[error("embedding has {embedding} points but the cost matrix has {matrix}")]
    SizeMismatch { embedding: usize, matrix: usize },
    #[error("exact enumeration is capped at n = 12, got {0}")]
    TooLargeForBruteForce(usize),
}

/// A closed tour: `order` is a permutation of node indices (0-based), the
/// last node implicitly returns to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    pub order: Vec<usize>,
    pub cost: f64,
}

/// Sum of arc costs around the closed tour.
pub fn tour_cost(c: &CostMatrix, order: &[usize]) -> Result<f64, HeuristicError> {
    let n = c.n();
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(HeuristicError::NotAPermutation { n });
    }
    for &v in order {
        if v >= n || seen[v] {
            return Err(HeuristicError::NotAPermutation { n });
        }
        seen[v] = true;
    }
    let mut cost = 0.0;
    for r in 0..n {
        cost += c.at(order[r], order[(r + 1) % n]);
    }
    Ok(cost)
}

/// Fraction of the largest entry below which a subtour arc counts as
/// zero-cost and the insertion criterion falls back from the ratio to the
/// additive cost.
const ZERO_ARC_FRACTION: f64 = 1e-12;

/// Adapted convex hull cheapest insertion. The subtour starts as the convex
/// hull of the embedding (counterclockwise); the embedding is then discarded
/// and every insertion uses true costs, minimizing (C_ik + C_kj) / C_ij.
/// Ties resolve to the smallest outside node, then the earliest subtour
/// position.
pub fn achci(c: &CostMatrix, e: &Embedding2D) -> Result<Tour, HeuristicError> {
    let n = c.n();
    if e.n() != n {
        return Err(HeuristicError::SizeMismatch { embedding: e.n(), matrix: n });
    }
    if n < 3 {
        return Err(HeuristicError::TooSmall(n));
    }

    let mut subtour = convex_hull(&e.coords);
    let mut in_tour = vec![false; n];
    for &v in &subtour {
        in_tour[v] = true;
    }
    let zero_thresh = ZERO_ARC_FRACTION * c.max_entry();

    while subtour.len() < n {
        let len = subtour.len();
        let mut best: Option<(f64, usize, usize)> = None; // (score, k, position)
        for r in 0..len {
            let i = subtour[r];
            let j = subtour[(r + 1) % len];
            let denom = c.at(i, j);
            for k in 0..n {
                if in_tour[k] {
                    continue;
                }
                // c.at(j, k) == c.at(k, j); reading row j instead of column
                // j keeps the scan on sequential memory for large n.
                let added = c.at(i, k) + c.at(j, k);
                let score = if denom <= zero_thresh {
                    added - denom
                } else {
                    added / denom
                };
                let better = match best {
                    None => true,
                    Some((bs, bk, br)) => {
                        score < bs || (score == bs && (k < bk || (k == bk && r < br)))
                    }
                };
                if better {
                    best = Some((score, k, r));
                }
            }
        }
        let (_, k, r) = best.expect("outside nodes remain");
        subtour.insert(r + 1, k);
        in_tour[k] = true;
    }

    let cost = tour_cost(c, &subtour)?;
    Ok(Tour { order: subtour, cost })
}

/// Greedy chain from `start` (0-based): repeatedly move to the cheapest
/// unvisited node, then close the cycle. Ties resolve to the smallest index.
pub fn nearest_neighbor(c: &CostMatrix, start: usize) -> Tour {
    let n = c.n();
    assert!(start < n, "start node out of range");
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    order.push(start);
    visited[start] = true;
    let mut current = start;
    for _ in 1..n {
        let mut next = usize::MAX;
        let mut best = f64::INFINITY;
        for k in 0..n {
            if !visited[k] && c.at(current, k) < best {
                best = c.at(current, k);
                next = k;
            }
        }
        order.push(next);
        visited[next] = true;
        current = next;
    }
    let cost = tour_cost(c, &order).expect("greedy chain is a permutation");
    Tour { order, cost }
}

/// Run nearest neighbor from every start and keep the cheapest tour; ties
/// resolve to the lowest start index. Returns the winning start as well.
pub fn nearest_neighbor_best(c: &CostMatrix) -> (Tour, usize) {
    let mut best: Option<(Tour, usize)> = None;
    for start in 0..c.n() {
        let t = nearest_neighbor(c, start);
        let replace = match &best {
            None => true,
            Some((bt, _)) => t.cost < bt.cost,
        };
        if replace {
            best = Some((t, start));
        }
    }
    best.expect("n >= 1")
}

/// Exact minimum-cost Hamiltonian cycle by enumeration with node 0 fixed
/// first and the tour direction canonicalized (symmetric costs make the two
/// directions equivalent). Capped at n = 12.
pub fn brute_force_optimal(c: &CostMatrix) -> Result<Tour, HeuristicError> {
    let n = c.n();
    if n < 3 {
        return Err(HeuristicError::TooSmall(n));
    }
    if n > 12 {
        return Err(HeuristicError::TooLargeForBruteForce(n));
    }

    let mut order = vec![0usize];
    let mut used = vec![false; n];
    used[0] = true;
    let mut best_cost = f64::INFINITY;
    let mut best_order: Vec<usize> = Vec::new();

    fn recurse(
        c: &CostMatrix,
        order: &mut Vec<usize>,
        used: &mut [bool],
        acc: f64,
        best_cost: &mut f64,
        best_order: &mut Vec<usize>,
    ) {
        let n = c.n();
        if acc >= *best_cost {
            return; // costs are nonnegative
        }
        if order.len() == n {
            // Canonical direction: second node smaller than last.
            if order[1] > order[n - 1] {
                return;
            }
            let total = acc + c.at(order[n - 1], order[0]);
            if total < *best_cost {
                *best_cost = total;
                best_order.clone_from(order);
            }
            return;
        }
        let last = *order.last().unwrap();
        for k in 1..n {
            if !used[k] {
                used[k] = true;
                order.push(k);
                recurse(c, order, used, acc + c.at(last, k), best_cost, best_order);
                order.pop();
                used[k] = false;
            }
        }
    }
    recurse(c, &mut order, &mut used, 0.0, &mut best_cost, &mut best_order);
    Ok(Tour { order: best_order, cost: best_cost })
}
