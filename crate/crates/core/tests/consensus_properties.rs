use proptest::prelude::*;

use ramanujan_topo::consensus::{run_consensus, ConsensusConfig};
use ramanujan_topo::generators::{gen_er, gen_r3l, gen_ws1};
use ramanujan_topo::graph::Graph;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn noiseless_consensus_conserves_mass(
        n in 8usize..60,
        seed in any::<u64>(),
        alpha_scale in 0.1f64..1.0,
        x0 in prop::collection::vec(-10.0f64..10.0, 60),
    ) {
        let g = gen_ws1(n, 4, 0.2, seed).unwrap();
        prop_assume!(g.is_connected());
        let cfg = ConsensusConfig::new(&g, 30).unwrap();
        let alpha = cfg.alpha * alpha_scale;
        let cfg = cfg.with_alpha(alpha);
        let run = run_consensus(&cfg, &x0[..n]).unwrap();
        let total: f64 = x0[..n].iter().sum();
        for x in &run.states {
            prop_assert!((x.iter().sum::<f64>() - total).abs() < 1e-9 * (1.0 + total.abs()));
        }
    }

    #[test]
    fn deviation_stays_under_geometric_bound(
        n in 10usize..80,
        seed in any::<u64>(),
        x0 in prop::collection::vec(-1.0f64..1.0, 80),
    ) {
        let g = gen_r3l(n, 4, 100, seed).unwrap();
        let run = run_consensus(&ConsensusConfig::new(&g, 150).unwrap(), &x0[..n]).unwrap();
        for (d, b) in run.deviation_norms.iter().zip(&run.bound_values) {
            prop_assert!(*d <= b + 1e-9);
        }
    }
}

#[test]
fn noisy_runs_are_reproducible() {
    let g = gen_er(40, 6, 2).unwrap();
    let g = if g.is_connected() { g } else { Graph::complete(40).unwrap() };
    let cfg = ConsensusConfig::new(&g, 25).unwrap().with_noise(vec![0.1; 40], 99);
    let x0: Vec<f64> = (0..40).map(|i| i as f64).collect();
    let a = run_consensus(&cfg, &x0).unwrap();
    let b = run_consensus(&cfg, &x0).unwrap();
    assert_eq!(a, b);
    let other = cfg.clone().with_noise(vec![0.1; 40], 100);
    assert_ne!(run_consensus(&other, &x0).unwrap().states, a.states);
}
