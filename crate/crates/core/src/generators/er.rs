use rand::seq::index;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::rng_from_seed;

/// Number of edges `nk/2`, checked against the `n(n-1)/2` available pairs.
pub(super) fn check_budget(n: usize, k: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::invalid(format!("Erdős–Rényi graph needs n >= 2, got {n}")));
    }
    if (n * k) % 2 != 0 {
        return Err(Error::invalid(format!("n k = {} must be even", n * k)));
    }
    let m = n * k / 2;
    let total = n * (n - 1) / 2;
    if m > total {
        return Err(Error::invalid(format!(
            "{m} edges requested but only {total} vertex pairs exist"
        )));
    }
    Ok(m)
}

/// `nk/2` distinct edges drawn uniformly without replacement from all vertex
/// pairs. The result may be disconnected.
pub fn gen_er(n: usize, k: usize, seed: u64) -> Result<Graph> {
    let m = check_budget(n, k)?;
    let total = n * (n - 1) / 2;
    let mut rng = rng_from_seed(seed);
    let mut picks = index::sample(&mut rng, total, m).into_vec();
    picks.sort_unstable();

    // pair index enumerates (0,1), (0,2), …, (0,n-1), (1,2), …
    let mut edges = Vec::with_capacity(m);
    let mut row = 0;
    let mut row_start = 0;
    for idx in picks {
        while idx >= row_start + (n - 1 - row) {
            row_start += n - 1 - row;
            row += 1;
        }
        edges.push((row, row + 1 + (idx - row_start)));
    }
    Graph::simple(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_budget_gives_complete_graph() {
        assert_eq!(gen_er(4, 3, 11).unwrap(), Graph::complete(4).unwrap());
    }

    #[test]
    fn average_degree_is_exact() {
        for seed in 0..10 {
            let g = gen_er(40, 6, seed).unwrap();
            assert_eq!(g.n_edges(), 120);
            assert_eq!(g.degree_profile().average_degree, 6.0);
        }
    }

    #[test]
    fn budget_errors() {
        assert!(gen_er(4, 4, 0).is_err());
        assert!(gen_er(5, 3, 0).is_err());
    }
}
