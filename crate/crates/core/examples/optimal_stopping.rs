//! When to stop iterating over noisy links: the variance bound f(z), its
//! minimizer and the resulting variance reduction.

use ramanujan_topo::detection::{optimal_stopping, StoppingProblem};

fn main() -> ramanujan_topo::Result<()> {
    for phi in [0.0, 0.1, 0.3162, 1.0, 2.0] {
        let problem = StoppingProblem::new(1000, 1.0, 0.7, phi)?;
        let a = optimal_stopping(&problem, 500)?;
        println!(
            "phi_max = {phi:<6} {:?}: z* = {}, i* = {}, f(i*) = {:.5}, reduction {:.2} ({:.2} dB), worthwhile {}",
            a.outcome,
            a.z_star.map_or("-".to_string(), |z| format!("{z:.3}")),
            a.i_star,
            a.f_floor,
            a.reduction_factor,
            a.reduction_db(),
            a.worthwhile
        );
    }

    println!("\n# z f(z) for phi_max = 0.1");
    let p = StoppingProblem::new(1000, 1.0, 0.7, 0.1)?;
    for i in 0..=40 {
        let z = i as f64;
        println!("{z} {:.6e}", p.objective(z));
    }
    Ok(())
}
