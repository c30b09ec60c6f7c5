//! Run the bundled desk-scale comparison (or a spec given on the command
//! line) and write result.json, CSVs and plot data.
//!
//! ```text
//! cargo run --release --example topology_comparison -- [spec.toml] [out-dir]
//! ```

use std::path::PathBuf;

use ramanujan_topo::experiments::{run_experiment, ExperimentSpec, Metric};

fn main() -> ramanujan_topo::Result<()> {
    let mut args = std::env::args().skip(1);
    let spec = match args.next() {
        Some(path) => ExperimentSpec::read(path.as_ref())?,
        None => ExperimentSpec::from_toml(include_str!("../configs/desk.toml"))?,
    };
    let out = PathBuf::from(args.next().unwrap_or_else(|| "comparison-out".into()));
    let result = run_experiment(&spec)?;
    for point in &result.points {
        println!("N = {}", point.baseline.n_vertices);
        let base = point.baseline.gamma.map_or(f64::NAN, |e| e.mean);
        println!("  baseline gamma {base:.5}");
        for c in &point.competitors {
            let nu = c.ratios.as_ref().and_then(|r| r.nu).and_then(|r| r.mean);
            let psi = c.ratios.as_ref().and_then(|r| r.psi).and_then(|r| r.mean);
            println!(
                "  {:<5} gamma mean {:.5}  nu {}  psi {}",
                c.label,
                c.envelope(Metric::Gamma).map_or(f64::NAN, |e| e.mean),
                nu.map_or("-".into(), |v| format!("{v:.2}")),
                psi.map_or("-".into(), |v| format!("{v:.2}")),
            );
        }
    }
    result.write(&out)?;
    println!("wrote {}", out.display());
    Ok(())
}
