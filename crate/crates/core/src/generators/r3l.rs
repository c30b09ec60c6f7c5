//! Random regular graphs by degree-preserving double edge swaps.

use rand::Rng;

use super::lattice::check_lattice;
use super::{gen_rrl, ConstructionInfo, Family, Topology};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{rng_from_seed, TopoRng};

/// Extra swap batches tried when the swapped graph is disconnected.
const CONNECTIVITY_RETRIES: usize = 10;

/// Consecutive rejected proposals after which a swap is deemed impossible.
const MAX_CONSECUTIVE_REJECTIONS: usize = 100_000;

/// `10 · nk/2`: ten passes over the edge set.
pub fn default_swap_count(n: usize, k: usize) -> usize {
    10 * n * k / 2
}

/// Adjacency lists kept sorted for binary-search membership.
struct SwapState {
    adj: Vec<Vec<usize>>,
    k: usize,
}

impl SwapState {
    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    fn remove(&mut self, u: usize, v: usize) {
        for (a, b) in [(u, v), (v, u)] {
            let pos = self.adj[a].binary_search(&b).expect("edge present");
            self.adj[a].remove(pos);
        }
    }

    fn insert(&mut self, u: usize, v: usize) {
        for (a, b) in [(u, v), (v, u)] {
            let pos = self.adj[a].binary_search(&b).expect_err("edge absent");
            self.adj[a].insert(pos, b);
        }
    }

    /// One proposal; `Ok(true)` if the swap was applied.
    fn try_swap(&mut self, rng: &mut TopoRng) -> Result<bool> {
        let n = self.adj.len();
        let v1 = rng.random_range(0..n);
        if self.adj[v1].len() + 1 >= n {
            return Err(Error::invalid(format!(
                "no double edge swap possible: vertex {v1} is adjacent to every other vertex"
            )));
        }
        let v2 = self.adj[v1][rng.random_range(0..self.adj[v1].len())];
        // uniform over vertices not adjacent to v1 (and not v1) by rejection
        let v3 = loop {
            let v = rng.random_range(0..n);
            if v != v1 && !self.adjacent(v1, v) {
                break v;
            }
        };
        let v4 = self.adj[v3][rng.random_range(0..self.adj[v3].len())];
        // v1-v3 is a non-edge by construction; v2-v4 must not be a loop or a
        // parallel edge
        if v4 == v2 || self.adjacent(v2, v4) {
            return Ok(false);
        }
        self.remove(v1, v2);
        self.remove(v3, v4);
        self.insert(v1, v3);
        self.insert(v2, v4);
        debug_assert!([v1, v2, v3, v4].iter().all(|&v| self.adj[v].len() == self.k));
        Ok(true)
    }

    fn run(&mut self, swaps: usize, rng: &mut TopoRng) -> Result<usize> {
        let mut rejected = 0;
        let mut streak = 0;
        let mut done = 0;
        while done < swaps {
            if self.try_swap(rng)? {
                done += 1;
                streak = 0;
            } else {
                rejected += 1;
                streak += 1;
                if streak >= MAX_CONSECUTIVE_REJECTIONS {
                    return Err(Error::invalid(format!(
                        "{streak} consecutive swap proposals rejected; graph too small to randomize"
                    )));
                }
            }
        }
        Ok(rejected)
    }

    fn to_graph(&self) -> Result<Graph> {
        let edges = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)));
        Graph::simple(self.adj.len(), edges)
    }
}

/// R3L graph: the `k`-regular ring lattice randomized by `swaps` successful
/// double edge swaps.
///
/// Each proposal draws `v1` uniformly, a neighbour `v2` of `v1`, a vertex
/// `v3` not adjacent to `v1`, and a neighbour `v4` of `v3`; it then replaces
/// `v1–v2`, `v3–v4` with `v1–v3`, `v2–v4`. Proposals that would create a loop
/// or a parallel edge are redrawn and do not count. If the result is
/// disconnected, up to ten further batches of `swaps` are applied.
pub fn gen_r3l(n: usize, k: usize, swaps: usize, seed: u64) -> Result<Graph> {
    Ok(r3l_with_info(n, k, swaps, seed)?.graph)
}

/// [`gen_r3l`] with [`default_swap_count`] swaps.
pub fn gen_r3l_default(n: usize, k: usize, seed: u64) -> Result<Graph> {
    gen_r3l(n, k, default_swap_count(n, k), seed)
}

pub(super) fn r3l_with_info(n: usize, k: usize, swaps: usize, seed: u64) -> Result<Topology> {
    check_lattice(n, k)?;
    let seed_graph = gen_rrl(n, k)?;
    let mut state = SwapState {
        adj: (0..n).map(|v| seed_graph.neighbors(v).to_vec()).collect(),
        k,
    };
    let mut rng = rng_from_seed(seed);
    let mut rejected = state.run(swaps, &mut rng)?;
    let mut performed = swaps;
    let mut graph = state.to_graph()?;
    let mut retries = 0;
    while !graph.is_connected() {
        if retries == CONNECTIVITY_RETRIES {
            return Err(Error::invalid(format!(
                "R3L graph still disconnected after {CONNECTIVITY_RETRIES} extra swap batches"
            )));
        }
        let batch = swaps.max(1);
        rejected += state.run(batch, &mut rng)?;
        performed += batch;
        graph = state.to_graph()?;
        retries += 1;
    }
    let mut info = ConstructionInfo::plain(Family::R3l, k, &graph);
    info.swaps_performed = performed;
    info.swaps_rejected = rejected;
    Ok(Topology { graph, info })
}
