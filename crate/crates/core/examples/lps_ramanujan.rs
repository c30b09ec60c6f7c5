//! Build LPS graphs of both kinds and certify them as Ramanujan.
//!
//! ```text
//! cargo run --example lps_ramanujan
//! ```

use ramanujan_topo::generators::{generate, GeneratorParams};
use ramanujan_topo::spectral::{ramanujan_certificate_for_degree, spectral_summary};

fn main() -> ramanujan_topo::Result<()> {
    let cases = [
        GeneratorParams::lps2(5, 41),
        GeneratorParams::lps2(5, 101),
        GeneratorParams::lps2(17, 53),
        GeneratorParams::lps1(17, 13),
    ];
    println!("{:<14} {:>6} {:>4} {:>6} {:>10} {:>10} {:>9}", "graph", "N", "k", "loops", "lambda_G", "2sqrt(k-1)", "gamma");
    for params in cases {
        let t = generate(&params)?;
        let k = t.info.nominal_degree;
        let cert = ramanujan_certificate_for_degree(&t.graph, k)?;
        let s = spectral_summary(&t.graph)?;
        println!(
            "{:<14} {:>6} {:>4} {:>6} {:>10.6} {:>10.6} {:>9.6}{}",
            format!("{}({},{})", params.family, params.p.unwrap(), params.q.unwrap()),
            t.graph.n_vertices(),
            k,
            t.info.loops_removed,
            cert.lambda_g,
            cert.bound,
            s.gamma,
            if cert.holds { "" } else { "  NOT Ramanujan" }
        );
    }
    Ok(())
}
