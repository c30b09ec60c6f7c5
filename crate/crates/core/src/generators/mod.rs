//! Topology constructions.
//!
//! | family | vertices | degree |
//! |--------|----------|--------|
//! | `rrl`  | `n`      | `k` (ring lattice) |
//! | `ws1`  | `n`      | average `k` (Watts–Strogatz, rewired far ends) |
//! | `er`   | `n`      | average `k` (`nk/2` uniform edges) |
//! | `lps1` | `q(q²-1)/2` | `p+1` (Cayley graph on PSL(2, q)) |
//! | `lps2` | `q+1`    | `p+1` before loop removal (action on `P¹(F_q)`) |
//! | `r3l`  | `n`      | `k` (double-edge-swap randomized lattice) |
//!
//! Random families are deterministic functions of their seed; see [`crate::rng`].

mod er;
mod lattice;
mod lps;
mod r3l;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DegreeProfile, Graph};

pub use er::gen_er;
pub use lattice::{gen_rrl, gen_ws1};
pub use lps::{gen_lps1, gen_lps2, lps_generators, validate_lps_params, LPS1_MAX_VERTICES};
pub use r3l::{gen_r3l, gen_r3l_default, default_swap_count};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Rrl,
    Ws1,
    Er,
    Lps1,
    Lps2,
    R3l,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Rrl,
        Family::Ws1,
        Family::Er,
        Family::Lps1,
        Family::Lps2,
        Family::R3l,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Rrl => "rrl",
            Family::Ws1 => "ws1",
            Family::Er => "er",
            Family::Lps1 => "lps1",
            Family::Lps2 => "lps2",
            Family::R3l => "r3l",
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, Family::Ws1 | Family::Er | Family::R3l)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown family {s:?}")))
    }
}

/// Parameters of one graph build.
///
/// `n`/`k` are used by the ring-based and random families, `p`/`q` by the LPS
/// ones; `pw` only by WS-I and `swaps` only by R3L (default
/// `10 * nk/2`). Unused fields are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swaps: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorParams {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            n: None,
            k: None,
            pw: None,
            p: None,
            q: None,
            swaps: None,
            seed: 0,
        }
    }

    pub fn rrl(n: usize, k: usize) -> Self {
        Self { n: Some(n), k: Some(k), ..Self::new(Family::Rrl) }
    }

    pub fn ws1(n: usize, k: usize, pw: f64, seed: u64) -> Self {
        Self { n: Some(n), k: Some(k), pw: Some(pw), seed, ..Self::new(Family::Ws1) }
    }

    pub fn er(n: usize, k: usize, seed: u64) -> Self {
        Self { n: Some(n), k: Some(k), seed, ..Self::new(Family::Er) }
    }

    pub fn lps1(p: u64, q: u64) -> Self {
        Self { p: Some(p), q: Some(q), ..Self::new(Family::Lps1) }
    }

    pub fn lps2(p: u64, q: u64) -> Self {
        Self { p: Some(p), q: Some(q), ..Self::new(Family::Lps2) }
    }

    pub fn r3l(n: usize, k: usize, swaps: Option<usize>, seed: u64) -> Self {
        Self { n: Some(n), k: Some(k), swaps, seed, ..Self::new(Family::R3l) }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn need<T: Copy>(&self, v: Option<T>, name: &str) -> Result<T> {
        v.ok_or_else(|| Error::invalid(format!("{} requires parameter `{name}`", self.family)))
    }

    /// `(N, k)` of the graph these parameters describe, checked for
    /// admissibility without building anything.
    pub fn vertex_count_and_degree(&self) -> Result<(usize, usize)> {
        match self.family {
            Family::Lps1 | Family::Lps2 => {
                let p = self.need(self.p, "p")?;
                let q = self.need(self.q, "q")?;
                validate_lps_params(p, q)?;
                let n = if self.family == Family::Lps1 {
                    q * (q * q - 1) / 2
                } else {
                    q + 1
                };
                Ok((n as usize, p as usize + 1))
            }
            _ => {
                let n = self.need(self.n, "n")?;
                let k = self.need(self.k, "k")?;
                Ok((n, k))
            }
        }
    }

    /// Checks every precondition of the family.
    pub fn validate(&self) -> Result<()> {
        let (n, k) = self.vertex_count_and_degree()?;
        match self.family {
            Family::Rrl | Family::R3l => lattice::check_lattice(n, k),
            Family::Ws1 => {
                lattice::check_lattice(n, k)?;
                let pw = self.need(self.pw, "pw")?;
                lattice::check_probability(pw)
            }
            Family::Er => er::check_budget(n, k).map(|_| ()),
            Family::Lps1 if n > LPS1_MAX_VERTICES => Err(Error::invalid(format!(
                "LPS-I on {n} vertices exceeds the build budget of {LPS1_MAX_VERTICES}"
            ))),
            Family::Lps1 | Family::Lps2 => Ok(()),
        }
    }
}

/// Bookkeeping returned alongside a generated graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionInfo {
    pub family: Family,
    /// Degree the construction aims for (`k` or `p + 1`).
    pub nominal_degree: usize,
    /// Degree profile counting dropped loops (each loop adds 2).
    pub pre_removal_profile: DegreeProfile,
    pub loops_removed: usize,
    /// WS-I: number of rewired edges.
    pub rewired: usize,
    /// R3L: successful swaps, including any connectivity batches.
    pub swaps_performed: usize,
    /// R3L: proposals rejected for creating a loop or a parallel edge.
    pub swaps_rejected: usize,
}

impl ConstructionInfo {
    pub(crate) fn plain(family: Family, nominal_degree: usize, graph: &Graph) -> Self {
        Self {
            family,
            nominal_degree,
            pre_removal_profile: graph.degree_profile(),
            loops_removed: 0,
            rewired: 0,
            swaps_performed: 0,
            swaps_rejected: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub graph: Graph,
    pub info: ConstructionInfo,
}

/// Builds the graph described by `params`.
pub fn generate(params: &GeneratorParams) -> Result<Topology> {
    params.validate()?;
    let (n, k) = params.vertex_count_and_degree()?;
    match params.family {
        Family::Rrl => {
            let graph = gen_rrl(n, k)?;
            let info = ConstructionInfo::plain(Family::Rrl, k, &graph);
            Ok(Topology { graph, info })
        }
        Family::Ws1 => lattice::ws1_with_info(n, k, params.pw.unwrap_or(0.0), params.seed),
        Family::Er => {
            let graph = gen_er(n, k, params.seed)?;
            let info = ConstructionInfo::plain(Family::Er, k, &graph);
            Ok(Topology { graph, info })
        }
        Family::Lps1 => lps::lps1_with_info(params.p.unwrap(), params.q.unwrap()),
        Family::Lps2 => lps::lps2_with_info(params.p.unwrap(), params.q.unwrap()),
        Family::R3l => {
            let swaps = params.swaps.unwrap_or_else(|| default_swap_count(n, k));
            r3l::r3l_with_info(n, k, swaps, params.seed)
        }
    }
}
