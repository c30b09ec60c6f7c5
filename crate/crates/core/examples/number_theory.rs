//! The arithmetic behind the LPS construction: Legendre symbols, the p + 1
//! quaternion solutions, their matrices modulo q and the PSL(2, q) group.

use ramanujan_topo::generators::{lps_generators, validate_lps_params};
use ramanujan_topo::numtheory::{
    jacobi_solutions, legendre_symbol, lft_apply, psl_canonicalize, psl_group_elements,
    sqrt_minus_one, ProjectivePoint,
};

fn main() -> ramanujan_topo::Result<()> {
    let (p, q) = (5, 13);
    println!("({p}/{q}) = {}", legendre_symbol(p as i64, q)?);
    if let Err(e) = validate_lps_params(p, q) {
        println!("LPS({p},{q}) rejected: {e}");
    }

    let (p, q) = (5, 29);
    validate_lps_params(p, q)?;
    let i = sqrt_minus_one(q)?;
    println!("\np = {p}, q = {q}, i = {i} (i^2 = {} mod {q})", i * i % q);
    for (s, m) in jacobi_solutions(p)?.iter().zip(lps_generators(p, q)?) {
        let class = psl_canonicalize(m, q)?;
        println!(
            "  ({:>2},{:>2},{:>2},{:>2}) -> {class}  sends infinity to {:?}",
            s.a0,
            s.a1,
            s.a2,
            s.a3,
            lft_apply(&m, ProjectivePoint::Infinity, q)
        );
    }

    for q in [5, 7, 13] {
        println!("|PSL(2,{q})| = {}", psl_group_elements(q)?.len());
    }
    Ok(())
}
