//! Error probability of consensus detection per iteration, exact against
//! Monte Carlo, and the noiseless convergence time on two topologies.

use ramanujan_topo::detection::{
    detection_convergence_time, empirical_pe_curve, parallel_fusion_pe, DetectionModel,
};
use ramanujan_topo::generators::{gen_lps2, gen_rrl};

fn main() -> ramanujan_topo::Result<()> {
    let g = gen_lps2(5, 41)?;
    let model = DetectionModel::uniform_noise(0.5, 1.0, 42, 0.05)?;
    let curve = empirical_pe_curve(&g, &model, 15, 20_000, 3)?;
    println!("LPS-II(5,41), mu = 0.5, sigma2 = 1, phi = 0.05; fusion P_e = {:.4e}", parallel_fusion_pe(&model));
    println!("{:>3} {:>12} {:>12} {:>10}", "i", "exact", "monte carlo", "std err");
    let (a, e, s) = (curve.mean_analytic(), curve.mean_empirical(), curve.mean_std_error());
    for i in 0..=15 {
        println!("{i:>3} {:>12.4e} {:>12.4e} {:>10.2e}", a[i], e[i], s[i]);
    }

    let noiseless = DetectionModel::noiseless(0.5, 1.0, 42)?;
    for (name, g) in [("LPS-II(5,41)", gen_lps2(5, 41)?), ("RRL(42,6)", gen_rrl(42, 6)?)] {
        let tc = detection_convergence_time(&g, &noiseless, 10_000)?;
        println!("{name}: T_c = {tc:?}");
    }
    Ok(())
}
