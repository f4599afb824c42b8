//! Simple undirected connected graphs, Laplacian spectra, continuous-time
//! walk propagators, and the classical random-walk hitting-time oracle.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::eig::{sym_eig, SymEig};
use crate::fmath;
use crate::linalg::{expi, solve_real, CMat, RMat};
use crate::qpd::DenseUnitary;
use crate::rng::SplitMix64;
use crate::{Error, Result};

use core::f64::consts::PI;

/// Simple undirected connected graph on vertices `0..n`.
///
/// Construction validates simplicity (no loops, no duplicate edges, indices
/// in range) and connectivity, so downstream spectral code can rely on the
/// zero Laplacian eigenvalue being simple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGraph(format!(
                "need at least 2 vertices, got {n}"
            )));
        }
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    key.0, key.1
                )));
            }
            normalized.push(key);
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &normalized {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in adjacency.iter_mut() {
            nbrs.sort_unstable();
        }
        let g = Self {
            n,
            edges: normalized,
            adjacency,
        };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    fn is_connected(&self) -> bool {
        let mut visited = vec![false; self.n];
        let mut stack = vec![0usize];
        visited[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                if !visited[w] {
                    visited[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Laplacian `L = D - A`.
    pub fn laplacian(&self) -> RMat {
        let mut l = RMat::zeros(self.n, self.n);
        for v in 0..self.n {
            l[(v, v)] = self.degree(v) as f64;
        }
        for &(u, v) in &self.edges {
            l[(u, v)] = -1.0;
            l[(v, u)] = -1.0;
        }
        l
    }

    /// Row-stochastic walk matrix `P = D^{-1} A`.
    pub fn transition_matrix(&self) -> RMat {
        let mut p = RMat::zeros(self.n, self.n);
        for v in 0..self.n {
            let d = self.degree(v) as f64;
            for &w in &self.adjacency[v] {
                p[(v, w)] = 1.0 / d;
            }
        }
        p
    }
}

/// The n-cycle.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs n >= 3");
    let edges = (0..n).map(|v| (v, (v + 1) % n)).collect();
    Graph::new(n, edges).expect("cycle is simple and connected")
}

/// The complete graph K_n.
pub fn complete(n: usize) -> Graph {
    assert!(n >= 2, "complete graph needs n >= 2");
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::new(n, edges).expect("complete graph is simple and connected")
}

/// The path graph P_n.
pub fn path(n: usize) -> Graph {
    assert!(n >= 2, "path needs n >= 2");
    let edges = (0..n - 1).map(|v| (v, v + 1)).collect();
    Graph::new(n, edges).expect("path is simple and connected")
}

/// One Erdos-Renyi G(n, p) draw; may be disconnected.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.next_f64() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// G(n, p) resampled with bumped seeds until connected.
pub fn gnp_connected(n: usize, p: f64, seed: u64, max_tries: u32) -> Result<Graph> {
    for k in 0..max_tries {
        match gnp(n, p, seed.wrapping_add(k as u64)) {
            Ok(g) => return Ok(g),
            Err(Error::Disconnected) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Disconnected)
}

/// Full orthonormal eigendecomposition of a graph Laplacian.
#[derive(Debug, Clone)]
pub struct GraphSpectrum {
    laplacian: RMat,
    eigenvalues: Vec<f64>,
    eigenvectors: RMat,
}

impl GraphSpectrum {
    pub fn n(&self) -> usize {
        self.laplacian.rows()
    }

    pub fn laplacian(&self) -> &RMat {
        &self.laplacian
    }

    /// Ascending eigenvalues `lambda_1 <= ... <= lambda_N`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvector columns matching [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &RMat {
        &self.eigenvectors
    }

    /// Spectral gap `lambda_2`.
    pub fn gap(&self) -> f64 {
        self.eigenvalues[1]
    }

    /// Top eigenvalue `lambda_N`.
    pub fn top(&self) -> f64 {
        self.eigenvalues[self.n() - 1]
    }

    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        self.eigenvectors.col(j)
    }
}

/// Eigendecompose the Laplacian of `g`.
///
/// Disconnected graphs cannot reach here: [`Graph::new`] rejects them, which
/// keeps the zero eigenvalue simple and its eigenvector uniform.
pub fn spectrum(g: &Graph) -> GraphSpectrum {
    let laplacian = g.laplacian();
    let SymEig { values, vectors } = sym_eig(&laplacian);
    GraphSpectrum {
        laplacian,
        eigenvalues: values,
        eigenvectors: vectors,
    }
}

/// Continuous-time walk propagator `e^{i L t} = sum_j e^{i lambda_j t} v_j v_j^T`.
///
/// Intended for `t >= 0`; the spectral formula is total, and negative `t`
/// yields the inverse walk (used when running circuits backwards).
pub fn ctqw(spec: &GraphSpectrum, t: f64) -> DenseUnitary {
    let n = spec.n();
    let mut m = CMat::zeros(n, n);
    for j in 0..n {
        let phase = expi(spec.eigenvalues[j] * t);
        let v = spec.eigenvector(j);
        for a in 0..n {
            let va = v[a];
            if va == 0.0 {
                continue;
            }
            let coeff = phase * va;
            for b in 0..n {
                m[(a, b)] += coeff * v[b];
            }
        }
    }
    DenseUnitary::new_unchecked(m)
}

fn validate_marked(n: usize, marked: &[usize]) -> Result<Vec<bool>> {
    if marked.is_empty() {
        return Err(Error::InvalidGraph("marked set is empty".into()));
    }
    let mut mask = vec![false; n];
    for &v in marked {
        if v >= n {
            return Err(Error::InvalidGraph(format!(
                "marked vertex {v} out of range for n = {n}"
            )));
        }
        if mask[v] {
            return Err(Error::InvalidGraph(format!("marked vertex {v} repeated")));
        }
        mask[v] = true;
    }
    if marked.len() == n {
        return Err(Error::InvalidGraph(
            "marked set must be a proper subset".into(),
        ));
    }
    Ok(mask)
}

/// Classical hitting time from stationarity,
/// `HT = <pi_M| (I - P_M)^{-1} |1>`, computed by a dense linear solve on the
/// walk matrix with marked rows and columns deleted.
pub fn hitting_time(g: &Graph, marked: &[usize]) -> Result<f64> {
    let n = g.n();
    let mask = validate_marked(n, marked)?;
    let unmarked: Vec<usize> = (0..n).filter(|&v| !mask[v]).collect();
    let m = unmarked.len();
    let p = g.transition_matrix();
    let mut system = RMat::zeros(m, m);
    for (i, &u) in unmarked.iter().enumerate() {
        for (j, &v) in unmarked.iter().enumerate() {
            let delta = if i == j { 1.0 } else { 0.0 };
            system[(i, j)] = delta - p[(u, v)];
        }
    }
    // (I - P_M) y = 1; y_v is the expected number of steps from v.
    let y = solve_real(system, vec![1.0; m])?;
    let total_degree = 2.0 * g.edges().len() as f64;
    let mut ht = 0.0;
    for (i, &u) in unmarked.iter().enumerate() {
        let pi_u = g.degree(u) as f64 / total_degree;
        ht += pi_u * y[i];
    }
    Ok(ht)
}

/// Closed-form hitting time of the n-cycle with one marked vertex,
/// `(n^2 - 1) / 6`.
///
/// Carrying the deleted-matrix route through in closed form: the inverse of
/// the deleted walk matrix has entries `2 min(i,j)(n - max(i,j)) / n`, so
/// `HT = (1/n) sum_i i (n - i) = (n^2 - 1) / 6`. Still `Theta(n^2)`.
pub fn cycle_hitting_time_closed_form(n: usize) -> f64 {
    let nf = n as f64;
    (nf * nf - 1.0) / 6.0
}

/// Spectral gap of the n-cycle walk matrix `P = A/2`:
/// `1 - cos(2 pi / n) = 2 sin^2(pi / n)`.
pub fn cycle_gap(n: usize) -> f64 {
    assert!(n >= 3);
    let s = fmath::sin(PI / n as f64);
    2.0 * s * s
}

/// Monte-Carlo estimate of the hitting time: mean and standard error over
/// `walks` random walks started from the stationary distribution.
pub fn monte_carlo_hitting_time(
    g: &Graph,
    marked: &[usize],
    walks: u64,
    rng: &mut SplitMix64,
) -> Result<(f64, f64)> {
    let n = g.n();
    let mask = validate_marked(n, marked)?;
    let m = g.edges().len();
    let mut sum = 0.0f64;
    let mut sumsq = 0.0f64;
    for _ in 0..walks {
        // Degree-weighted start: a uniform edge endpoint.
        let pick = rng.next_below(2 * m);
        let mut v = if pick < m {
            g.edges()[pick].0
        } else {
            g.edges()[pick - m].1
        };
        let mut steps = 0.0f64;
        while !mask[v] {
            let nbrs = g.neighbors(v);
            v = nbrs[rng.next_below(nbrs.len())];
            steps += 1.0;
        }
        sum += steps;
        sumsq += steps * steps;
    }
    let mean = sum / walks as f64;
    let var = (sumsq / walks as f64 - mean * mean).max(0.0);
    let stderr = fmath::sqrt(var / walks as f64);
    Ok((mean, stderr))
}
