use std::collections::HashSet;

use rand::Rng;

use super::{ConstructionInfo, Family, Topology};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::rng_from_seed;

pub(super) fn check_lattice(n: usize, k: usize) -> Result<()> {
    if k < 2 || k % 2 != 0 || k >= n {
        return Err(Error::invalid(format!(
            "ring lattice needs an even degree 2 <= k < n, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

pub(super) fn check_probability(pw: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&pw) {
        return Err(Error::invalid(format!("rewiring probability {pw} outside [0, 1]")));
    }
    Ok(())
}

/// Lattice edges ring by ring: all `(i, i+1)`, then all `(i, i+2)`, …
fn lattice_edges(n: usize, k: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=k / 2).flat_map(move |j| (0..n).map(move |i| (i, (i + j) % n)))
}

/// Regular ring lattice: vertex `i` is joined to `i ± 1, …, i ± k/2 (mod n)`.
pub fn gen_rrl(n: usize, k: usize) -> Result<Graph> {
    check_lattice(n, k)?;
    Graph::simple(n, lattice_edges(n, k))
}

/// Watts–Strogatz graph with the near end of every edge kept.
///
/// Starting from the ring lattice, the forward edges `(i, i + j)` are visited
/// ring by ring (`j = 1..=k/2`, each in vertex order) and each is rewired with
/// probability `pw`: its far end moves to a vertex drawn uniformly from
/// `0..n`, redrawn while it would make a loop or a parallel edge. An edge
/// whose near end is already adjacent to every other vertex stays put.
pub fn gen_ws1(n: usize, k: usize, pw: f64, seed: u64) -> Result<Graph> {
    Ok(ws1_with_info(n, k, pw, seed)?.graph)
}

pub(super) fn ws1_with_info(n: usize, k: usize, pw: f64, seed: u64) -> Result<Topology> {
    check_lattice(n, k)?;
    check_probability(pw)?;
    let mut rng = rng_from_seed(seed);
    let key = |u: usize, v: usize| (u.min(v), u.max(v));

    let mut edges: Vec<(usize, usize)> = lattice_edges(n, k).collect();
    let mut present: HashSet<(usize, usize)> = edges.iter().map(|&(u, v)| key(u, v)).collect();
    let mut degree = vec![k; n];
    let mut rewired = 0;

    for e in edges.iter_mut() {
        if rng.random::<f64>() >= pw {
            continue;
        }
        let (i, old) = *e;
        if degree[i] >= n - 1 {
            continue;
        }
        let target = loop {
            let t = rng.random_range(0..n);
            if t != i && !present.contains(&key(i, t)) {
                break t;
            }
        };
        present.remove(&key(i, old));
        present.insert(key(i, target));
        degree[old] -= 1;
        degree[target] += 1;
        *e = (i, target);
        rewired += 1;
    }

    let graph = Graph::simple(n, edges)?;
    let mut info = ConstructionInfo::plain(Family::Ws1, k, &graph);
    info.rewired = rewired;
    Ok(Topology { graph, info })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lattices() {
        let g = gen_rrl(6, 2).unwrap();
        assert_eq!(g, Graph::cycle(6).unwrap());
        let g = gen_rrl(10, 4).unwrap();
        for i in 0..10 {
            let mut want: Vec<usize> = [1, 2, 8, 9].iter().map(|d| (i + d) % 10).collect();
            want.sort();
            assert_eq!(g.neighbors(i), want.as_slice());
        }
        assert_eq!(gen_rrl(42, 6).unwrap().n_edges(), 126);
    }

    #[test]
    fn lattice_preconditions() {
        assert!(gen_rrl(6, 3).is_err());
        assert!(gen_rrl(6, 6).is_err());
        assert!(gen_rrl(6, 0).is_err());
        assert!(gen_ws1(10, 4, 1.5, 0).is_err());
    }

    #[test]
    fn ws1_without_rewiring_is_the_lattice() {
        assert_eq!(gen_ws1(30, 6, 0.0, 17).unwrap(), gen_rrl(30, 6).unwrap());
    }

    #[test]
    fn ws1_keeps_edge_count() {
        for (pw, seed) in [(0.3, 1), (0.8, 2), (1.0, 3)] {
            let t = ws1_with_info(50, 6, pw, seed).unwrap();
            assert_eq!(t.graph.n_edges(), 150);
            assert!(!t.graph.allows_multi());
            if pw == 1.0 {
                assert_eq!(t.info.rewired, 150);
            }
        }
    }

    #[test]
    fn ws1_is_seed_deterministic() {
        let a = gen_ws1(60, 4, 0.5, 99).unwrap();
        let b = gen_ws1(60, 4, 0.5, 99).unwrap();
        let c = gen_ws1(60, 4, 0.5, 100).unwrap();
        assert_eq!(a.to_edge_list(), b.to_edge_list());
        assert_ne!(a, c);
    }

    #[test]
    fn ws1_dense_graph_terminates() {
        // k = n - 2: some near ends saturate and must be skipped
        let t = ws1_with_info(8, 6, 1.0, 5).unwrap();
        assert_eq!(t.graph.n_edges(), 24);
    }
}
