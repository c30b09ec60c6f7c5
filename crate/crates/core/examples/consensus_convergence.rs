//! Average consensus on LPS-II(5,41) and on the ring lattice with the same
//! N and k, noiseless and with link noise.

use rand::Rng;
use ramanujan_topo::consensus::{convergence_time, run_consensus, ConsensusConfig};
use ramanujan_topo::generators::{gen_lps2, gen_rrl};
use ramanujan_topo::rng::rng_from_seed;

fn main() -> ramanujan_topo::Result<()> {
    let mut rng = rng_from_seed(1);
    let x0: Vec<f64> = (0..42).map(|_| rng.random_range(0.0..10.0)).collect();
    for (name, g) in [("LPS-II(5,41)", gen_lps2(5, 41)?), ("RRL(42,6)", gen_rrl(42, 6)?)] {
        let cfg = ConsensusConfig::new(&g, 300)?;
        let run = run_consensus(&cfg, &x0)?;
        println!(
            "{name}: alpha* = {:.5}, gamma2 = {:.5}, 1e-6 reached at i = {:?}",
            cfg.alpha,
            run.contraction_factor,
            convergence_time(&run, 1e-6)
        );
        for i in [0, 5, 10, 20, 50] {
            println!("  i = {i:>3}: |x - mean| = {:.3e} (bound {:.3e})", run.deviation_norms[i], run.bound_values[i]);
        }
        let noisy = cfg.clone().with_noise(vec![0.01; 42], 7);
        let run = run_consensus(&noisy, &x0)?;
        let last = run.states.last().unwrap();
        let avg = last.iter().sum::<f64>() / 42.0;
        println!("  with link noise 0.01: mean drifted from {:.4} to {avg:.4}", run.target_mean);
    }
    Ok(())
}
