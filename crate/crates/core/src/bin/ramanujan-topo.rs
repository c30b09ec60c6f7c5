use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::Rng;

use ramanujan_topo::consensus::{optimal_alpha, run_consensus, ConsensusConfig};
use ramanujan_topo::detection::{
    empirical_pe_curve, optimal_stopping, DetectionModel, StoppingOutcome, StoppingProblem,
};
use ramanujan_topo::experiments::{run_experiment, ExperimentSpec};
use ramanujan_topo::generators::{generate, Family, GeneratorParams};
use ramanujan_topo::rng::stream_rng;
use ramanujan_topo::{Error, Graph, Result};

const DESK_PROFILE: &str = include_str!("../../configs/desk.toml");
const LARGE_PROFILE: &str = include_str!("../../configs/large.toml");

#[derive(Parser)]
#[command(name = "ramanujan-topo", version, about = "Sensor-network topologies, consensus and distributed detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph and write it as an edge list.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        pw: Option<f64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        swaps: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run average consensus and write per-iteration deviations.
    Consensus {
        #[arg(long)]
        graph: PathBuf,
        /// `auto` for the optimal weight, or a number.
        #[arg(long, default_value = "auto")]
        alpha: String,
        #[arg(long, default_value_t = 100)]
        iters: usize,
        /// `none`, one standard deviation for every link, or a file with one
        /// per node.
        #[arg(long, default_value = "none")]
        noise: String,
        /// Initial states, one per node; uniform on [0, 1) from the seed
        /// when absent.
        #[arg(long)]
        x0: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact and Monte Carlo error probabilities of consensus detection.
    Detect {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma2: f64,
        /// Channel noise: one value for every link, or a file with one per node.
        #[arg(long, default_value = "0")]
        phi: String,
        #[arg(long, default_value_t = 50)]
        max_iters: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Optimal number of iterations over noisy links.
    Stopping {
        #[arg(long)]
        n: usize,
        /// μ²/σ²
        #[arg(long)]
        snr: f64,
        #[arg(long)]
        gamma2: f64,
        #[arg(long)]
        phimax: f64,
        /// Iteration cap, also the answer for noiseless links.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Run a topology comparison and write result.json, CSVs and plot data.
    Experiment {
        /// TOML experiment spec; the bundled desk profile when absent.
        #[arg(long, conflicts_with = "large")]
        spec: Option<PathBuf>,
        /// Use the bundled N = 6038, k = 18 profile.
        #[arg(long)]
        large: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Gen { family, n, k, pw, p, q, swaps, seed, out } => {
            let params = GeneratorParams { family, n, k, pw, p, q, swaps, seed };
            let topo = generate(&params)?;
            topo.graph.write_edge_list(&out)?;
            eprintln!(
                "{family}: {} vertices, {} edges -> {}",
                topo.graph.n_vertices(),
                topo.graph.n_edges(),
                out.display()
            );
            Ok(())
        }
        Command::Consensus { graph, alpha, iters, noise, x0, seed, out } => {
            let g = Graph::read_edge_list(&graph)?;
            let n = g.n_vertices();
            let alpha = if alpha == "auto" { optimal_alpha(&g)? } else { parse_f64(&alpha, "alpha")? };
            let mut cfg = ConsensusConfig::new(&g, iters)?.with_alpha(alpha);
            cfg.seed = seed;
            if noise != "none" {
                cfg.noise_stddevs = Some(per_node(&noise, n, "noise")?);
            }
            let x0 = match x0 {
                Some(path) => read_numbers(&path, n)?,
                None => {
                    let mut rng = stream_rng(seed, 1);
                    (0..n).map(|_| rng.random::<f64>()).collect()
                }
            };
            let run = run_consensus(&cfg, &x0)?;
            let mut csv = String::from("iteration,deviation_norm,bound_value\n");
            for (i, (d, b)) in run.deviation_norms.iter().zip(&run.bound_values).enumerate() {
                let _ = writeln!(csv, "{i},{d:e},{b:e}");
            }
            write(&out, &csv)
        }
        Command::Detect { graph, mu, sigma2, phi, max_iters, trials, seed, out } => {
            let g = Graph::read_edge_list(&graph)?;
            let model = DetectionModel::new(mu, sigma2, per_node(&phi, g.n_vertices(), "phi")?)?;
            let curve = empirical_pe_curve(&g, &model, max_iters, trials, seed)?;
            let analytic = curve.mean_analytic();
            let empirical = curve.mean_empirical();
            let mut csv = String::from(
                "iteration,mean_pe_analytic,mean_pe_empirical,var_bound,var_max_actual\n",
            );
            for i in 0..=max_iters {
                let _ = writeln!(
                    csv,
                    "{i},{:e},{:e},{:e},{:e}",
                    analytic[i], empirical[i], curve.variance_bound[i], curve.max_variance[i]
                );
            }
            write(&out, &csv)
        }
        Command::Stopping { n, snr, gamma2, phimax, budget } => {
            let a = optimal_stopping(&StoppingProblem::new(n, snr, gamma2, phimax)?, budget)?;
            let outcome = match a.outcome {
                StoppingOutcome::Minimizer => "minimizer",
                StoppingOutcome::Noiseless => "noiseless",
                StoppingOutcome::AssumptionViolated => "assumption_violated",
            };
            println!("outcome: {outcome}");
            match a.z_star {
                Some(z) => println!("z_star: {z:.6}"),
                None => println!("z_star: none"),
            }
            println!("i_star: {}", a.i_star);
            println!("f_floor: {:.7}", a.f_floor);
            println!("f_ceil: {:.7}", a.f_ceil);
            println!("reduction_factor: {:.4} ({:.2} dB)", a.reduction_factor, a.reduction_db());
            println!("worthwhile: {}", a.worthwhile);
            Ok(())
        }
        Command::Experiment { spec, large, out } => {
            let spec = match (spec, large) {
                (Some(path), _) => ExperimentSpec::read(&path)?,
                (None, true) => ExperimentSpec::from_toml(LARGE_PROFILE)?,
                (None, false) => ExperimentSpec::from_toml(DESK_PROFILE)?,
            };
            let result = run_experiment(&spec)?;
            result.write(&out)?;
            eprintln!("wrote {}", out.join("result.json").display());
            Ok(())
        }
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("{what}: cannot parse `{s}` as a number")))
}

/// A single number for every node, or a file holding one per node.
fn per_node(arg: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    match arg.trim().parse::<f64>() {
        Ok(v) => Ok(vec![v; n]),
        Err(_) => read_numbers(Path::new(arg), n)
            .map_err(|e| Error::InvalidParameter(format!("{what}: {e}"))),
    }
}

fn read_numbers(path: &Path, n: usize) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let values = text
        .split_whitespace()
        .map(|t| parse_f64(t, &path.display().to_string()))
        .collect::<Result<Vec<_>>>()?;
    if values.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: values.len() });
    }
    Ok(values)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}
