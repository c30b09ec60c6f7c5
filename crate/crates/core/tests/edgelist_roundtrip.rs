use proptest::prelude::*;

use ramanujan_topo::generators::{generate, GeneratorParams};
use ramanujan_topo::graph::Graph;

proptest! {
    #[test]
    fn text_round_trip(n in 3usize..40, seed in any::<u64>()) {
        let g = generate(&GeneratorParams::ws1(n.max(5), 4, 0.4, seed)).unwrap().graph;
        let text = g.to_edge_list();
        prop_assert_eq!(Graph::parse_edge_list(&text).unwrap(), g);
    }
}

#[test]
fn lps_round_trip_through_a_file() {
    let g = generate(&GeneratorParams::lps2(5, 41)).unwrap().graph;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lps.txt");
    g.write_edge_list(&path).unwrap();
    let back = Graph::read_edge_list(&path).unwrap();
    assert_eq!(back, g);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("42 120\n"));
    assert!(!text.contains('\r'));
}

#[test]
fn parallel_edges_survive_the_text_format() {
    let g = generate(&GeneratorParams::lps2(17, 13)).unwrap().graph;
    assert!(g.allows_multi());
    let back = Graph::parse_edge_list(&g.to_edge_list()).unwrap();
    assert_eq!(back, g);
}
