//! How many random swaps a ring lattice needs before its eigenratio
//! approaches the LPS-II graph of the same size and degree.

use ramanujan_topo::generators::{gen_lps2, gen_r3l};
use ramanujan_topo::spectral::spectral_summary;

fn main() -> ramanujan_topo::Result<()> {
    let lps = spectral_summary(&gen_lps2(5, 41)?)?.gamma;
    println!("LPS-II(5,41): gamma = {lps:.5}");
    println!("{:>8} {:>10} {:>10} {:>10}", "swaps", "mean", "min", "max");
    for swaps in [0, 10, 30, 100, 300, 1260, 10_000] {
        let gammas: Vec<f64> = (0..50)
            .map(|seed| spectral_summary(&gen_r3l(42, 6, swaps, seed)?).map(|s| s.gamma))
            .collect::<ramanujan_topo::Result<_>>()?;
        let mean = gammas.iter().sum::<f64>() / gammas.len() as f64;
        let min = gammas.iter().copied().fold(f64::INFINITY, f64::min);
        let max = gammas.iter().copied().fold(0.0, f64::max);
        println!("{swaps:>8} {mean:>10.5} {min:>10.5} {max:>10.5}");
    }
    Ok(())
}
