//! Sensor-network topologies with fast average consensus.
//!
//! The crate builds Ramanujan graphs from the Lubotzky–Phillips–Sarnak
//! construction (the Cayley graph on `PSL(2,q)` and its action on the
//! projective line), together with the usual comparison families: regular
//! ring lattices, Watts–Strogatz rewirings, Erdős–Rényi graphs with a fixed
//! edge count, and degree-preserving random rewirings of a lattice.
//!
//! On top of that it computes Laplacian spectra and the eigenratio
//! `γ = λ₂/λ_N`, runs equal-weight consensus `x ← (I - αL)x` with optional
//! link noise, and analyzes distributed Gaussian detection over consensus,
//! including the optimal stopping time for noisy links.
//!
//! ```
//! use ramanujan_topo::generators::gen_lps2;
//! use ramanujan_topo::spectral::{ramanujan_certificate_for_degree, spectral_summary};
//!
//! let g = gen_lps2(5, 41).unwrap();
//! assert_eq!(g.n_vertices(), 42);
//! let cert = ramanujan_certificate_for_degree(&g, 6).unwrap();
//! assert!(cert.holds);
//! let s = spectral_summary(&g).unwrap();
//! assert!(s.gamma > 0.2);
//! ```
//!
//! The `examples/` directory has one runnable program per capability; the
//! `ramanujan-topo` binary exposes generation, consensus, detection, stopping
//! and experiment runs from the command line.

pub mod consensus;
pub mod detection;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod numtheory;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::Graph;
