//! Eigenratio and second adjacency eigenvalue as functions of N for LPS-II
//! and the comparison families, as whitespace-separated columns.
//!
//! ```text
//! cargo run --example spectral_figures > gamma.dat
//! ```

use ramanujan_topo::generators::{generate, GeneratorParams};
use ramanujan_topo::numtheory::is_prime;
use ramanujan_topo::spectral::{ramanujan_gamma_lower_bound, spectral_summary};

fn mean_gamma(make: impl Fn(u64) -> GeneratorParams, seeds: u64) -> ramanujan_topo::Result<f64> {
    let mut total = 0.0;
    let mut used = 0;
    for seed in 0..seeds {
        let g = generate(&make(seed))?.graph;
        if g.is_connected() {
            total += spectral_summary(&g)?.gamma;
            used += 1;
        }
    }
    Ok(total / used as f64)
}

fn main() -> ramanujan_topo::Result<()> {
    let p = 5;
    let k = (p + 1) as usize;
    println!("# k = {k}, Ramanujan lower bound on gamma = {:.6}", ramanujan_gamma_lower_bound(k)?);
    println!("# N gamma_lps2 gamma_rrl gamma_er_mean gamma_r3l_mean");
    let qs = (13..400u64).filter(|&q| {
        is_prime(q) && q % 4 == 1 && ramanujan_topo::generators::validate_lps_params(p, q).is_ok()
    });
    for q in qs {
        let n = (q + 1) as usize;
        let lps = spectral_summary(&generate(&GeneratorParams::lps2(p, q))?.graph)?;
        let rrl = spectral_summary(&generate(&GeneratorParams::rrl(n, k))?.graph)?;
        let er = mean_gamma(|s| GeneratorParams::er(n, k, s), 20)?;
        let r3l = mean_gamma(|s| GeneratorParams::r3l(n, k, None, s), 20)?;
        println!("{n} {:.6} {:.6} {er:.6} {r3l:.6}", lps.gamma, rrl.gamma);
    }
    Ok(())
}
