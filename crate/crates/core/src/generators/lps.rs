//! Lubotzky–Phillips–Sarnak Ramanujan graphs.
//!
//! For distinct primes `p, q ≡ 1 (mod 4)` with `(p/q) = 1`, each of the
//! `p + 1` four-square solutions of `p` yields a generator matrix
//! `[[a0 + i a1, a2 + i a3], [-a2 + i a3, a0 - i a1]]` (mod `q`, `i² ≡ -1`)
//! of determinant `p`. The set is closed under inversion: the conjugate
//! solution gives the adjugate, which is the inverse up to the scalar `p`.
//!
//! LPS-I joins `u` to `s·u` for every group element `u` of PSL(2, q) and
//! generator `s`. LPS-II lets the same generators act on the projective line
//! by linear fractional maps; fixed points give loops, which are dropped.

use std::collections::HashMap;

use super::{ConstructionInfo, Family, Topology};
use crate::error::{Error, Result};
use crate::graph::{DegreeProfile, Graph};
use crate::numtheory::{
    is_prime, jacobi_solutions, legendre_symbol, lft_apply, psl_canonicalize, psl_group_elements,
    sqrt_minus_one, Mat2, ProjectivePoint,
};

/// Largest LPS-I vertex count accepted.
pub const LPS1_MAX_VERTICES: usize = 200_000;

pub fn validate_lps_params(p: u64, q: u64) -> Result<()> {
    let fail = |why: String| Err(Error::invalid(format!("LPS(p = {p}, q = {q}): {why}")));
    if p == q {
        return fail("p and q must be distinct".into());
    }
    for (name, v) in [("p", p), ("q", q)] {
        if !is_prime(v) {
            return fail(format!("{name} = {v} is not prime"));
        }
        if v % 4 != 1 {
            return fail(format!("{name} = {v} is not congruent to 1 mod 4"));
        }
    }
    let symbol = legendre_symbol(p as i64, q)?;
    if symbol != 1 {
        return fail(format!("Legendre symbol (p/q) = {symbol}, must be 1"));
    }
    Ok(())
}

/// The `p + 1` generator matrices mod `q`, in the order of
/// [`jacobi_solutions`].
pub fn lps_generators(p: u64, q: u64) -> Result<Vec<Mat2>> {
    validate_lps_params(p, q)?;
    let i = sqrt_minus_one(q)?;
    Ok(jacobi_solutions(p)?
        .iter()
        .map(|s| Mat2::from_quaternion(s, i, q))
        .collect())
}

/// Turns per-vertex arc targets into an undirected graph, flagged as a
/// multigraph only when some edge repeats.
///
/// With a symmetric generator set the arc counts are symmetric, so keeping
/// arcs with `u < v` yields every edge exactly once with its multiplicity.
fn graph_from_arcs(
    family: Family,
    degree: usize,
    n: usize,
    arcs: impl Fn(usize) -> Vec<usize>,
) -> Result<Topology> {
    let mut edges = Vec::with_capacity(n * degree / 2);
    let mut loop_arcs = vec![0usize; n];
    let mut arc_count: HashMap<(usize, usize), i64> = HashMap::new();
    for u in 0..n {
        for v in arcs(u) {
            match u.cmp(&v) {
                std::cmp::Ordering::Less => {
                    edges.push((u, v));
                    *arc_count.entry((u, v)).or_default() += 1;
                }
                std::cmp::Ordering::Greater => {
                    *arc_count.entry((v, u)).or_default() -= 1;
                }
                std::cmp::Ordering::Equal => loop_arcs[u] += 1,
            }
        }
    }
    if arc_count.values().any(|&c| c != 0) {
        return Err(Error::invalid(
            "generator set is not closed under inversion (asymmetric arcs)",
        ));
    }
    edges.sort_unstable();
    let parallel = edges.windows(2).any(|w| w[0] == w[1]);
    let graph = Graph::from_edges(n, edges, parallel)?;
    // loop arcs come in s / s⁻¹ pairs; each undirected loop adds 2 to the degree
    let pre_degrees: Vec<usize> = (0..n).map(|v| graph.degree(v) + loop_arcs[v]).collect();
    let loops_removed = loop_arcs.iter().sum::<usize>() / 2;
    let mut info = ConstructionInfo::plain(family, degree, &graph);
    info.pre_removal_profile = DegreeProfile::from_degrees(&pre_degrees);
    info.loops_removed = loops_removed;
    Ok(Topology { graph, info })
}

/// LPS-I: Cayley graph of PSL(2, q) with the `p + 1` LPS generators.
/// `q(q² - 1)/2` vertices, `(p + 1)`-regular.
pub fn gen_lps1(p: u64, q: u64) -> Result<Graph> {
    Ok(lps1_with_info(p, q)?.graph)
}

pub(super) fn lps1_with_info(p: u64, q: u64) -> Result<Topology> {
    validate_lps_params(p, q)?;
    let n = (q * (q * q - 1) / 2) as usize;
    if n > LPS1_MAX_VERTICES {
        return Err(Error::invalid(format!(
            "LPS-I on {n} vertices exceeds the build budget of {LPS1_MAX_VERTICES}"
        )));
    }
    let elements = psl_group_elements(q)?;
    debug_assert_eq!(elements.len(), n);
    let index: HashMap<_, _> = elements.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let gens = lps_generators(p, q)?
        .into_iter()
        .map(|m| psl_canonicalize(m, q))
        .collect::<Result<Vec<_>>>()?;
    let arcs = |u: usize| {
        gens.iter()
            .map(|s| {
                let v = s.mul(&elements[u], q).expect("product of nonsingular classes");
                index[&v]
            })
            .collect()
    };
    graph_from_arcs(Family::Lps1, p as usize + 1, n, arcs)
}

/// LPS-II: the LPS generators acting on `P¹(F_q)` (vertex `q` is `∞`).
/// `q + 1` vertices; `(p + 1)`-regular before loops are dropped.
pub fn gen_lps2(p: u64, q: u64) -> Result<Graph> {
    Ok(lps2_with_info(p, q)?.graph)
}

pub(super) fn lps2_with_info(p: u64, q: u64) -> Result<Topology> {
    let gens = lps_generators(p, q)?;
    let n = q as usize + 1;
    let arcs = |u: usize| {
        let x = ProjectivePoint::from_index(u, q);
        gens.iter().map(|m| lft_apply(m, x, q).index(q)).collect()
    };
    graph_from_arcs(Family::Lps2, p as usize + 1, n, arcs)
}
