//! Seeded instance generators, including adversarial constructions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::InstanceFile;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("{0}")]
    Invalid(String),
    #[error("specified distances do not survive metric completion")]
    Inconsistent,
}

/// `n` points uniform in the unit cube of dimension `dim`.
pub fn gen_random_euclidean(n: usize, dim: usize, seed: u64) -> Result<InstanceFile, GenerateError> {
    if n == 0 || dim == 0 {
        return Err(GenerateError::Invalid("n and dim must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect();
    Ok(InstanceFile { points: Some(points), ..Default::default() })
}

/// A Grid Tiling instance: `sets[i][j]` lists the allowed (row, column)
/// values of cell (i, j), 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridTilingSpec {
    pub k: usize,
    pub n: usize,
    pub sets: Vec<Vec<Vec<(usize, usize)>>>,
    pub eps: f64,
}

pub const GRID_MAX_K: usize = 3;
pub const GRID_MAX_N: usize = 3;

impl GridTilingSpec {
    /// Spec with a spacing small enough that every line of points is shorter
    /// than the smallest gadget distance.
    pub fn new(k: usize, n: usize, sets: Vec<Vec<Vec<(usize, usize)>>>) -> Self {
        let bound = k * k + k * n * n + k * k.saturating_sub(1) / 2 * n.pow(4);
        // A power of two keeps the line positions exact.
        let eps = 2f64.powi(-((4 * bound) as f64).log2().ceil() as i32);
        GridTilingSpec { k, n, sets, eps }
    }

    /// Random spec where each value pair enters each cell with probability
    /// `density`; cells are never left empty.
    pub fn random(k: usize, n: usize, density: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sets = vec![vec![Vec::new(); k]; k];
        for row in sets.iter_mut() {
            for cell in row.iter_mut() {
                for a in 1..=n {
                    for b in 1..=n {
                        if rng.gen::<f64>() < density {
                            cell.push((a, b));
                        }
                    }
                }
                if cell.is_empty() {
                    cell.push((rng.gen_range(1..=n), rng.gen_range(1..=n)));
                }
            }
        }
        Self::new(k, n, sets)
    }

    fn validate(&self) -> Result<(), GenerateError> {
        if self.k == 0 || self.k > GRID_MAX_K || self.n == 0 || self.n > GRID_MAX_N {
            return Err(GenerateError::Invalid(format!(
                "grid tiling needs 1 ≤ k ≤ {GRID_MAX_K} and 1 ≤ n ≤ {GRID_MAX_N}"
            )));
        }
        if !(self.eps > 0.0 && self.eps < 0.25) {
            return Err(GenerateError::Invalid("eps must lie in (0, 1/4)".into()));
        }
        if self.sets.len() != self.k || self.sets.iter().any(|r| r.len() != self.k) {
            return Err(GenerateError::Invalid("sets must form a k × k grid".into()));
        }
        for cell in self.sets.iter().flatten() {
            if cell.is_empty() {
                return Err(GenerateError::Invalid("every cell needs at least one pair".into()));
            }
            if cell.iter().any(|&(a, b)| a == 0 || b == 0 || a > self.n || b > self.n) {
                return Err(GenerateError::Invalid("pair outside [n] × [n]".into()));
            }
        }
        Ok(())
    }

    /// Whether diagonal choices (a, b) in cell i and (a', b') in cell j can
    /// coexist: the tiling then forces (a', b) into cell (i, j) and (a, b')
    /// into cell (j, i).
    pub fn compatible(&self, i: usize, s: (usize, usize), j: usize, t: (usize, usize)) -> bool {
        self.sets[i][j].contains(&(t.0, s.1)) && self.sets[j][i].contains(&(s.0, t.1))
    }

    /// Exhaustive search for a tiling: rows share the second value, columns
    /// the first.
    pub fn feasible(&self) -> bool {
        let k = self.k;
        let mut grid = vec![(0usize, 0usize); k * k];
        fn go(spec: &GridTilingSpec, cell: usize, grid: &mut Vec<(usize, usize)>) -> bool {
            let k = spec.k;
            if cell == k * k {
                return true;
            }
            let (i, j) = (cell / k, cell % k);
            for &v in &spec.sets[i][j] {
                if i > 0 && grid[(i - 1) * k + j].0 != v.0 {
                    continue;
                }
                if j > 0 && grid[i * k + j - 1].1 != v.1 {
                    continue;
                }
                grid[cell] = v;
                if go(spec, cell + 1, grid) {
                    return true;
                }
            }
            false
        }
        go(self, 0, &mut grid)
    }
}

/// Metric from a Grid Tiling instance whose optimal k-ball min-sum-radii cost
/// is 2^k − 1 exactly when the tiling is solvable. Gadget i uses distance
/// 2^(i−1) and k anchors at that distance from every tile of the gadget, so
/// that zero-radius balls cannot absorb a gadget's anchors; every unspecified
/// distance is the shortest-path completion.
pub fn gen_grid_tiling(spec: &GridTilingSpec) -> Result<(InstanceFile, bool), GenerateError> {
    spec.validate()?;
    let matrix = grid_tiling_matrix(spec, spec.k)?;
    let feasible = spec.feasible();
    Ok((InstanceFile { matrix: Some(matrix), tiling_feasible: Some(feasible), ..Default::default() }, feasible))
}

fn grid_tiling_matrix(spec: &GridTilingSpec, anchors: usize) -> Result<Vec<Vec<f64>>, GenerateError> {
    let k = spec.k;
    let eps = spec.eps;
    let scale = |i: usize| 2f64.powi(i as i32);
    let mut next = 0usize;
    let mut fresh = || {
        next += 1;
        next - 1
    };

    // Point layout: the anchors of every gadget, then each T_i, then T.
    let anchor: Vec<Vec<usize>> = (0..k).map(|_| (0..anchors).map(|_| fresh()).collect()).collect();
    let tiles: Vec<Vec<usize>> = (0..k).map(|i| spec.sets[i][i].iter().map(|_| fresh()).collect()).collect();
    // (i, j, index into T_i, index into T_j, point)
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            for a in 0..tiles[i].len() {
                for b in 0..tiles[j].len() {
                    pairs.push((i, j, a, b, fresh()));
                }
            }
        }
    }
    let n = next;
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (x, row) in d.iter_mut().enumerate() {
        row[x] = 0.0;
    }
    let mut fixed = Vec::new();
    let mut set = |d: &mut Vec<Vec<f64>>, x: usize, y: usize, v: f64| {
        d[x][y] = v;
        d[y][x] = v;
        fixed.push((x, y, v));
    };
    for i in 0..k {
        for (a, &p) in tiles[i].iter().enumerate() {
            for &q in &anchor[i] {
                set(&mut d, q, p, scale(i));
            }
            for (b, &q) in tiles[i].iter().enumerate().skip(a + 1) {
                set(&mut d, p, q, 2.0 * eps * (b - a) as f64);
            }
        }
    }
    for (x, &(_, _, _, _, p)) in pairs.iter().enumerate() {
        for (y, &(_, _, _, _, q)) in pairs.iter().enumerate().skip(x + 1) {
            set(&mut d, p, q, 2.0 * eps * (y - x) as f64);
        }
    }
    for &(i, j, a, b, p) in &pairs {
        let ok = spec.compatible(i, spec.sets[i][i][a], j, spec.sets[j][j][b]);
        let bump = if ok { 0.0 } else { eps };
        set(&mut d, tiles[i][a], p, scale(i) + bump);
        set(&mut d, tiles[j][b], p, scale(j) + bump);
        for (a2, &t) in tiles[i].iter().enumerate() {
            if a2 != a {
                set(&mut d, t, p, scale(i));
            }
        }
        for (b2, &t) in tiles[j].iter().enumerate() {
            if b2 != b {
                set(&mut d, t, p, scale(j));
            }
        }
    }
    for m in 0..n {
        for x in 0..n {
            for y in 0..n {
                let via = d[x][m] + d[m][y];
                if via < d[x][y] {
                    d[x][y] = via;
                }
            }
        }
    }
    if fixed.iter().any(|&(x, y, v)| d[x][y] < v * (1.0 - 1e-12)) || d.iter().flatten().any(|v| !v.is_finite()) {
        return Err(GenerateError::Inconsistent);
    }
    Ok(d)
}

/// Vertices at distance 1, or 2 across an edge, plus `k − 3` extra points at
/// distance 2 from everything. With squared diameters the optimal k-cluster
/// cost is at most 3 exactly when the graph is 3-colorable.
pub fn gen_three_coloring_msd(edges: &[(usize, usize)], vertices: usize, k: usize) -> Result<InstanceFile, GenerateError> {
    if k < 3 {
        return Err(GenerateError::Invalid("k must be at least 3".into()));
    }
    if vertices == 0 {
        return Err(GenerateError::Invalid("the graph needs a vertex".into()));
    }
    for &(u, v) in edges {
        if u == v || u >= vertices || v >= vertices {
            return Err(GenerateError::Invalid(format!("bad edge ({u}, {v})")));
        }
    }
    let n = vertices + k - 3;
    let mut d = vec![vec![2.0; n]; n];
    for u in 0..vertices {
        for v in 0..vertices {
            d[u][v] = 1.0;
        }
    }
    for &(u, v) in edges {
        d[u][v] = 2.0;
        d[v][u] = 2.0;
    }
    for (x, row) in d.iter_mut().enumerate() {
        row[x] = 0.0;
    }
    Ok(InstanceFile { matrix: Some(d), ..Default::default() })
}

/// Erdős–Rényi graph on `vertices` vertices.
pub fn random_graph(vertices: usize, p: f64, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..vertices {
        for v in u + 1..vertices {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Small graphs by name, as (vertex count, edges).
pub fn named_graph(name: &str) -> Option<(usize, Vec<(usize, usize)>)> {
    let cycle = |n: usize| (0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>();
    let complete = |n: usize| (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect::<Vec<_>>();
    let wheel = |rim: usize| {
        let mut e: Vec<_> = (0..rim).map(|i| (i, (i + 1) % rim)).collect();
        e.extend((0..rim).map(|i| (i, rim)));
        e
    };
    Some(match name {
        "k3" => (3, complete(3)),
        "k4" => (4, complete(4)),
        "c4" => (4, cycle(4)),
        "c5" => (5, cycle(5)),
        "w4" => (5, wheel(4)),
        "w5" => (6, wheel(5)),
        "k33" => (6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect()),
        "prism" => (6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]),
        "moser" => (
            7,
            vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (0, 4), (0, 5), (4, 5), (4, 6), (5, 6), (3, 6)],
        ),
        "petersen" => {
            let mut e: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
            e.extend((0..5).map(|i| (i, i + 5)));
            e.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
            (10, e)
        }
        _ => return None,
    })
}

pub const GRAPH_NAMES: [&str; 10] = ["k3", "k4", "c4", "c5", "w4", "w5", "k33", "prism", "moser", "petersen"];

/// Whether the graph admits a proper 3-coloring, by backtracking.
pub fn three_colorable(edges: &[(usize, usize)], vertices: usize) -> bool {
    let mut adj = vec![Vec::new(); vertices];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    fn go(v: usize, adj: &[Vec<usize>], color: &mut Vec<usize>) -> bool {
        if v == adj.len() {
            return true;
        }
        for c in 0..3 {
            if adj[v].iter().all(|&u| u >= v || color[u] != c) {
                color[v] = c;
                if go(v + 1, adj, color) {
                    return true;
                }
            }
        }
        false
    }
    go(0, &adj, &mut vec![0; vertices])
}
