//! Undirected (multi)graphs and the matrices derived from them.

mod edgelist;
mod matrix;

use std::collections::VecDeque;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use matrix::SymmetricMatrix;

use crate::error::{Error, Result};

/// Undirected graph on vertices `0..n_vertices`.
///
/// Loops are dropped at insertion; they never appear in the edge list, the
/// adjacency matrix or the Laplacian. When `allows_multi` is false a repeated
/// pair is an error, otherwise every copy is kept and the adjacency entry
/// counts the multiplicity.
///
/// Edges are stored with `u < v`, sorted, which makes the edge list (and the
/// serialized form) canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
    allows_multi: bool,
    neighbors: Vec<Vec<usize>>,
}

/// `(min, max, average, regular)` degree summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub min_degree: usize,
    pub max_degree: usize,
    pub average_degree: f64,
    pub is_regular: bool,
}

impl DegreeProfile {
    pub fn from_degrees(degrees: &[usize]) -> Self {
        let min_degree = degrees.iter().copied().min().unwrap_or(0);
        let max_degree = degrees.iter().copied().max().unwrap_or(0);
        let total: usize = degrees.iter().sum();
        Self {
            min_degree,
            max_degree,
            average_degree: total as f64 / degrees.len().max(1) as f64,
            is_regular: min_degree == max_degree,
        }
    }
}

impl Graph {
    pub fn from_edges<I>(n_vertices: usize, edges: I, allows_multi: bool) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n_vertices == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut stored = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n_vertices {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        n_vertices,
                    });
                }
            }
            if u == v {
                continue;
            }
            stored.push((u.min(v), u.max(v)));
        }
        stored.sort_unstable();
        if !allows_multi {
            if let Some(w) = stored.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut neighbors = vec![Vec::new(); n_vertices];
        for &(u, v) in &stored {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Graph {
            n_vertices,
            edges: stored,
            allows_multi,
            neighbors,
        })
    }

    /// Simple graph; duplicate pairs are rejected.
    pub fn simple<I>(n_vertices: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges(n_vertices, edges, false)
    }

    /// Multigraph; duplicate pairs are kept as parallel edges.
    pub fn multi<I>(n_vertices: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges(n_vertices, edges, true)
    }

    pub fn complete(n: usize) -> Result<Graph> {
        Self::simple(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::invalid(format!("cycle needs at least 3 vertices, got {n}")));
        }
        Self::simple(n, (0..n).map(|u| (u, (u + 1) % n)))
    }

    pub fn path(n: usize) -> Result<Graph> {
        Self::simple(n, (1..n).map(|u| (u - 1, u)))
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn allows_multi(&self) -> bool {
        self.allows_multi
    }

    /// Neighbours of `v` in ascending order, repeated once per parallel edge.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&v).is_ok()
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        DegreeProfile::from_degrees(&self.degrees())
    }

    /// Common degree of a regular graph, `None` otherwise.
    pub fn regular_degree(&self) -> Option<usize> {
        let p = self.degree_profile();
        p.is_regular.then_some(p.min_degree)
    }

    pub fn adjacency_matrix(&self) -> SymmetricMatrix {
        let n = self.n_vertices;
        let mut a = DMatrix::zeros(n, n);
        for &(u, v) in &self.edges {
            a[(u, v)] += 1.0;
            a[(v, u)] += 1.0;
        }
        SymmetricMatrix::from_dmatrix_unchecked(a)
    }

    /// `L = D - A`.
    pub fn laplacian(&self) -> SymmetricMatrix {
        let n = self.n_vertices;
        let mut l = DMatrix::zeros(n, n);
        for &(u, v) in &self.edges {
            l[(u, v)] -= 1.0;
            l[(v, u)] -= 1.0;
            l[(u, u)] += 1.0;
            l[(v, v)] += 1.0;
        }
        SymmetricMatrix::from_dmatrix_unchecked(l)
    }

    /// `y = L x` without forming `L`.
    pub fn laplacian_apply(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n_vertices);
        debug_assert_eq!(y.len(), self.n_vertices);
        for (v, out) in y.iter_mut().enumerate() {
            let nb = &self.neighbors[v];
            let s: f64 = nb.iter().map(|&w| x[w]).sum();
            *out = nb.len() as f64 * x[v] - s;
        }
    }

    /// Component label per vertex, labels assigned in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        const UNSEEN: usize = usize::MAX;
        let mut label = vec![UNSEEN; self.n_vertices];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.n_vertices {
            if label[start] != UNSEEN {
                continue;
            }
            label[start] = next;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &w in &self.neighbors[u] {
                    if label[w] == UNSEEN {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Two-colouring by breadth-first search.
    pub fn is_bipartite(&self) -> bool {
        let mut color: Vec<Option<bool>> = vec![None; self.n_vertices];
        let mut queue = VecDeque::new();
        for start in 0..self.n_vertices {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &w in &self.neighbors[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// Disjoint union, `other`'s vertices shifted past `self`'s.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n_vertices;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Graph::from_edges(
            self.n_vertices + other.n_vertices,
            edges,
            self.allows_multi || other.allows_multi,
        )
        .expect("union of valid graphs is valid")
    }
}
