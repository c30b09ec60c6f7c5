use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

use ramanujan_topo::consensus::weight_matrix;
use ramanujan_topo::generators::{gen_er, gen_r3l, gen_rrl, gen_ws1};
use ramanujan_topo::graph::Graph;
use ramanujan_topo::spectral::{
    extreme_laplacian_eigenvalues_with, graph_laplacian_extremes, EigenStrategy,
};

fn random_graph() -> impl Strategy<Value = Graph> {
    (2usize..25)
        .prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..60)))
        .prop_map(|(n, pairs)| {
            let mut edges: Vec<(usize, usize)> = pairs
                .into_iter()
                .filter(|(u, v)| u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            edges.sort_unstable();
            edges.dedup();
            Graph::simple(n, edges).unwrap()
        })
}

fn sorted_eigs(m: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Signless Laplacian `D + A`; each bipartite component contributes one zero.
fn signless_laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.n_vertices();
    let mut m = g.adjacency_matrix().into_dmatrix();
    for v in 0..n {
        m[(v, v)] += g.degree(v) as f64;
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zero_multiplicity_counts_components(g in random_graph()) {
        let eigs = g.laplacian().eigenvalues();
        let zeros = eigs.iter().filter(|&&x| x.abs() < 1e-8).count();
        prop_assert_eq!(zeros, g.component_count());
    }

    #[test]
    fn bipartite_test_matches_signless_spectrum(g in random_graph()) {
        let eigs = sorted_eigs(signless_laplacian(&g));
        let zeros = eigs.iter().filter(|&&x| x.abs() < 1e-8).count();
        let labels = g.components();
        let mut bipartite_components = 0;
        for c in 0..g.component_count() {
            let verts: Vec<usize> = (0..g.n_vertices()).filter(|&v| labels[v] == c).collect();
            let index = |v: usize| verts.iter().position(|&w| w == v).unwrap();
            let sub = Graph::simple(
                verts.len(),
                g.edges().iter().filter(|(u, _)| labels[*u] == c).map(|&(u, v)| (index(u), index(v))),
            ).unwrap();
            if sub.is_bipartite() {
                bipartite_components += 1;
            }
        }
        prop_assert_eq!(zeros, bipartite_components);
        prop_assert_eq!(g.is_bipartite(), zeros == g.component_count());
    }

    #[test]
    fn regular_laplacian_is_shifted_adjacency(n in 5usize..40, half_k in 1usize..3, seed in any::<u64>()) {
        let k = 2 * half_k;
        prop_assume!(k + 1 < n);
        let g = gen_r3l(n, k, 50, seed).unwrap();
        let lap = g.laplacian().eigenvalues();
        let mut shifted: Vec<f64> = g.adjacency_matrix().eigenvalues().iter().map(|a| k as f64 - a).collect();
        shifted.sort_by(f64::total_cmp);
        for (x, y) in lap.iter().zip(&shifted) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn weight_matrix_spectrum_maps(g in random_graph(), alpha in 0.01f64..0.5) {
        let w = weight_matrix(&g, alpha).eigenvalues();
        let mut mapped: Vec<f64> = g.laplacian().eigenvalues().iter().map(|l| 1.0 - alpha * l).collect();
        mapped.sort_by(f64::total_cmp);
        for (x, y) in w.iter().zip(&mapped) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn dense_and_iterative_agree(n in 20usize..200, seed in any::<u64>(), family in 0u8..3) {
        let g = match family {
            0 => gen_er(n, 6, seed).unwrap(),
            1 => gen_ws1(n, 4, 0.3, seed).unwrap(),
            _ => gen_r3l(n, 4, 200, seed).unwrap(),
        };
        prop_assume!(g.is_connected());
        let l = g.laplacian();
        let (d2, dn) = extreme_laplacian_eigenvalues_with(&l, EigenStrategy::Dense).unwrap();
        let (i2, i_n) = extreme_laplacian_eigenvalues_with(&l, EigenStrategy::Iterative).unwrap();
        prop_assert!((d2 - i2).abs() < 1e-8, "λ₂ {} vs {}", d2, i2);
        prop_assert!((dn - i_n).abs() < 1e-8, "λ_N {} vs {}", dn, i_n);
        let (s2, sn) = graph_laplacian_extremes(&g, EigenStrategy::Iterative).unwrap();
        prop_assert!((d2 - s2).abs() < 1e-8 && (dn - sn).abs() < 1e-8);
    }
}

#[test]
fn ring_lattice_spectrum_is_closed_form() {
    // λ_j = k - 2 Σ_{m=1}^{k/2} cos(2πjm/N)
    let (n, k) = (30, 6);
    let g = gen_rrl(n, k).unwrap();
    let mut want: Vec<f64> = (0..n)
        .map(|j| {
            let s: f64 = (1..=k / 2)
                .map(|m| (2.0 * std::f64::consts::PI * (j * m) as f64 / n as f64).cos())
                .sum();
            k as f64 - 2.0 * s
        })
        .collect();
    want.sort_by(f64::total_cmp);
    for (x, y) in g.laplacian().eigenvalues().iter().zip(&want) {
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn iterative_handles_highly_degenerate_spectra() {
    // few distinct eigenvalues make the Krylov space collapse almost at once
    let lps = ramanujan_topo::generators::gen_lps1(17, 13).unwrap();
    for g in [Graph::complete(60).unwrap(), lps] {
        let (d2, dn) = graph_laplacian_extremes(&g, EigenStrategy::Dense).unwrap();
        let (i2, i_n) = graph_laplacian_extremes(&g, EigenStrategy::Iterative).unwrap();
        assert!((d2 - i2).abs() < 1e-8, "{d2} vs {i2}");
        assert!((dn - i_n).abs() < 1e-8, "{dn} vs {i_n}");
    }
}
