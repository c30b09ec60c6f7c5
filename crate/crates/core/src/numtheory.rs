//! Exact modular arithmetic for the LPS constructions.
//!
//! Everything here works on `u64`/`i64` residues with explicit reduction.
//! Enumerations return sorted output so graph builds are reproducible.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces any signed integer into `0..m`.
pub fn reduce(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo prime `q`, `None` for `a ≡ 0`.
pub fn inv_mod(a: u64, q: u64) -> Option<u64> {
    let a = a % q;
    (a != 0).then(|| pow_mod(a, q - 2, q))
}

/// Deterministic Miller–Rabin, exact for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre_symbol(a: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not an odd prime")));
    }
    let r = reduce(a, p);
    if r == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(r, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

/// Smaller square root of `-1` modulo a prime `q ≡ 1 (mod 4)`.
///
/// Exhaustive search; fine for every `q` below ~10^6. Tonelli–Shanks would be
/// the drop-in replacement beyond that.
pub fn sqrt_minus_one(q: u64) -> Result<u64> {
    if !is_prime(q) || q % 4 != 1 {
        return Err(Error::invalid(format!(
            "-1 has no square root modulo {q} (need a prime q ≡ 1 mod 4)"
        )));
    }
    (1..q)
        .find(|&i| mul_mod(i, i, q) == q - 1)
        .ok_or_else(|| Error::invalid(format!("no square root of -1 modulo {q}")))
}

/// Integer solution of `a0² + a1² + a2² + a3² = p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuaternionSolution {
    pub a0: i64,
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
}

impl QuaternionSolution {
    pub fn norm(&self) -> i64 {
        self.a0 * self.a0 + self.a1 * self.a1 + self.a2 * self.a2 + self.a3 * self.a3
    }

    /// The conjugate `(a0, -a1, -a2, -a3)`; its matrix is the inverse class.
    pub fn conjugate(&self) -> Self {
        Self {
            a0: self.a0,
            a1: -self.a1,
            a2: -self.a2,
            a3: -self.a3,
        }
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// The `p + 1` four-square representations of `p` with `a0` odd and positive
/// and `a1, a2, a3` even, sorted lexicographically.
pub fn jacobi_solutions(p: u64) -> Result<Vec<QuaternionSolution>> {
    if !is_prime(p) || p % 4 != 1 {
        return Err(Error::invalid(format!("{p} is not a prime ≡ 1 mod 4")));
    }
    let r = isqrt(p) as i64;
    let p = p as i64;
    let mut out = Vec::new();
    for a0 in (1..=r).step_by(2) {
        for a1 in (-r..=r).filter(|x| x % 2 == 0) {
            for a2 in (-r..=r).filter(|x| x % 2 == 0) {
                let rest = p - a0 * a0 - a1 * a1 - a2 * a2;
                if rest < 0 {
                    continue;
                }
                let a3 = isqrt(rest as u64) as i64;
                if a3 * a3 != rest || a3 % 2 != 0 {
                    continue;
                }
                out.push(QuaternionSolution { a0, a1, a2, a3 });
                if a3 != 0 {
                    out.push(QuaternionSolution { a0, a1, a2, a3: -a3 });
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// 2×2 matrix of residues modulo some prime `q` (kept by the caller).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl Mat2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64, q: u64) -> Self {
        Self {
            a: reduce(a, q),
            b: reduce(b, q),
            c: reduce(c, q),
            d: reduce(d, q),
        }
    }

    pub fn identity() -> Self {
        Self { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn det(&self, q: u64) -> u64 {
        (mul_mod(self.a, self.d, q) + q - mul_mod(self.b, self.c, q)) % q
    }

    pub fn mul(&self, rhs: &Mat2, q: u64) -> Mat2 {
        let m = |x, y| mul_mod(x, y, q);
        Mat2 {
            a: (m(self.a, rhs.a) + m(self.b, rhs.c)) % q,
            b: (m(self.a, rhs.b) + m(self.b, rhs.d)) % q,
            c: (m(self.c, rhs.a) + m(self.d, rhs.c)) % q,
            d: (m(self.c, rhs.b) + m(self.d, rhs.d)) % q,
        }
    }

    pub fn scale(&self, s: u64, q: u64) -> Mat2 {
        Mat2 {
            a: mul_mod(self.a, s, q),
            b: mul_mod(self.b, s, q),
            c: mul_mod(self.c, s, q),
            d: mul_mod(self.d, s, q),
        }
    }

    /// The LPS generator matrix of a four-square solution:
    /// `[[a0 + i a1, a2 + i a3], [-a2 + i a3, a0 - i a1]]` with `i² ≡ -1`.
    pub fn from_quaternion(s: &QuaternionSolution, i: u64, q: u64) -> Mat2 {
        let i = i as i128;
        let r = |x: i128| (x.rem_euclid(q as i128)) as u64;
        let (a0, a1, a2, a3) = (s.a0 as i128, s.a1 as i128, s.a2 as i128, s.a3 as i128);
        Mat2 {
            a: r(a0 + i * a1),
            b: r(a2 + i * a3),
            c: r(-a2 + i * a3),
            d: r(a0 - i * a1),
        }
    }
}

/// Canonical representative of a projective class of nonsingular matrices:
/// the second row is either `(0, 1)` or `(1, x)`.
///
/// Elements of the group used for the Cayley construction additionally have a
/// determinant that is a nonzero quadratic residue; see [`psl_group_elements`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PslElement(Mat2);

impl PslElement {
    pub fn matrix(&self) -> Mat2 {
        self.0
    }

    pub fn mul(&self, rhs: &PslElement, q: u64) -> Result<PslElement> {
        psl_canonicalize(self.0.mul(&rhs.0, q), q)
    }
}

impl fmt::Display for PslElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m.a, m.b, m.c, m.d)
    }
}

pub fn psl_canonicalize(m: Mat2, q: u64) -> Result<PslElement> {
    if m.det(q) == 0 {
        return Err(Error::SingularMatrix { q });
    }
    let scale = if m.c != 0 { m.c } else { m.d };
    let inv = inv_mod(scale, q).expect("nonzero residue modulo a prime is invertible");
    Ok(PslElement(m.scale(inv, q)))
}

/// All classes with quadratic-residue determinant, `q(q² - 1)/2` of them,
/// sorted lexicographically by `(a, b, c, d)`.
pub fn psl_group_elements(q: u64) -> Result<Vec<PslElement>> {
    if q == 2 || !is_prime(q) {
        return Err(Error::invalid(format!("{q} is not an odd prime")));
    }
    let is_qr: Vec<bool> = {
        let mut t = vec![false; q as usize];
        for x in 1..q {
            t[mul_mod(x, x, q) as usize] = true;
        }
        t
    };
    let mut out = Vec::with_capacity((q * (q * q - 1) / 2) as usize);
    for a in 0..q {
        for b in 0..q {
            // second row (0, 1): det = a
            // second row (1, x): det = a x - b
            let rows = std::iter::once((0, 1)).chain((0..q).map(|x| (1, x)));
            for (c, d) in rows {
                let m = Mat2 { a, b, c, d };
                if is_qr[m.det(q) as usize] {
                    out.push(PslElement(m));
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Point of the projective line `P¹(F_q) = {0, …, q-1, ∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ProjectivePoint {
    Finite(u64),
    Infinity,
}

impl ProjectivePoint {
    /// Vertex index with `∞ ↦ q`.
    pub fn index(&self, q: u64) -> usize {
        match *self {
            ProjectivePoint::Finite(x) => x as usize,
            ProjectivePoint::Infinity => q as usize,
        }
    }

    pub fn from_index(i: usize, q: u64) -> Self {
        if i as u64 == q {
            ProjectivePoint::Infinity
        } else {
            ProjectivePoint::Finite(i as u64)
        }
    }
}

/// `x ↦ (a x + b) / (c x + d)` on `P¹(F_q)`, with `z/0 = ∞` and `∞ ↦ a/c`.
pub fn lft_apply(m: &Mat2, x: ProjectivePoint, q: u64) -> ProjectivePoint {
    let (num, den) = match x {
        ProjectivePoint::Finite(x) => (
            (mul_mod(m.a, x, q) + m.b) % q,
            (mul_mod(m.c, x, q) + m.d) % q,
        ),
        ProjectivePoint::Infinity => (m.a % q, m.c % q),
    };
    match inv_mod(den, q) {
        Some(inv) => ProjectivePoint::Finite(mul_mod(num, inv, q)),
        None => ProjectivePoint::Infinity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(41));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(is_prime(6037));
        assert!(!is_prime(6039));
        assert!(is_prime(18446744073709551557)); // largest prime below 2^64
        assert!(!is_prime(3215031751)); // strong pseudoprime to 2, 3, 5, 7
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..5000u64 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "{n}");
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(17, 13).unwrap(), 1);
        assert_eq!(legendre_symbol(5, 41).unwrap(), 1);
        assert_eq!(legendre_symbol(13, 13).unwrap(), 0);
        assert_eq!(legendre_symbol(5, 13).unwrap(), -1);
        assert_eq!(legendre_symbol(-1, 13).unwrap(), 1);
        assert!(legendre_symbol(3, 2).is_err());
        assert!(legendre_symbol(3, 15).is_err());
    }

    #[test]
    fn square_roots_of_minus_one() {
        assert_eq!(sqrt_minus_one(13).unwrap(), 5);
        assert_eq!(sqrt_minus_one(41).unwrap(), 9);
        assert_eq!(sqrt_minus_one(5).unwrap(), 2);
        assert!(sqrt_minus_one(7).is_err());
        assert!(sqrt_minus_one(21).is_err());
    }

    #[test]
    fn jacobi_p5() {
        let sols = jacobi_solutions(5).unwrap();
        let want: Vec<_> = [
            (1, -2, 0, 0),
            (1, 0, -2, 0),
            (1, 0, 0, -2),
            (1, 0, 0, 2),
            (1, 0, 2, 0),
            (1, 2, 0, 0),
        ]
        .into_iter()
        .map(|(a0, a1, a2, a3)| QuaternionSolution { a0, a1, a2, a3 })
        .collect();
        assert_eq!(sols, want);
        assert!(jacobi_solutions(7).is_err());
        assert!(jacobi_solutions(9).is_err());
    }

    #[test]
    fn jacobi_counts() {
        let s13 = jacobi_solutions(13).unwrap();
        assert_eq!(s13.len(), 14);
        assert!(s13.iter().all(|s| s.a0 == 1 || s.a0 == 3));
        let s17 = jacobi_solutions(17).unwrap();
        assert_eq!(s17.len(), 18);
        for s in s17 {
            assert_eq!(s.norm(), 17);
            assert!(s.a0 > 0 && s.a0 % 2 == 1);
            assert!(s.a1 % 2 == 0 && s.a2 % 2 == 0 && s.a3 % 2 == 0);
        }
    }

    #[test]
    fn canonical_forms() {
        let q = 13;
        let id = psl_canonicalize(Mat2::identity(), q).unwrap();
        assert_eq!(id.matrix(), Mat2::identity());
        let two = psl_canonicalize(Mat2::new(2, 0, 0, 2, q), q).unwrap();
        assert_eq!(two, id);
        let m = psl_canonicalize(Mat2::new(1, 2, 3, 4, q), q).unwrap();
        assert_eq!(m.matrix(), Mat2 { a: 9, b: 5, c: 1, d: 10 });
        assert!(matches!(
            psl_canonicalize(Mat2::new(1, 2, 2, 4, q), q),
            Err(Error::SingularMatrix { q: 13 })
        ));
    }

    #[test]
    fn group_sizes() {
        assert_eq!(psl_group_elements(5).unwrap().len(), 60);
        assert_eq!(psl_group_elements(13).unwrap().len(), 1092);
        assert_eq!(psl_group_elements(41).unwrap().len(), 34440);
    }

    #[test]
    fn lft_examples() {
        let q = 5;
        let swap = Mat2::new(0, 1, 1, 0, q);
        assert_eq!(
            lft_apply(&swap, ProjectivePoint::Finite(0), q),
            ProjectivePoint::Infinity
        );
        let shift = Mat2::new(1, 1, 0, 1, q);
        assert_eq!(
            lft_apply(&shift, ProjectivePoint::Finite(4), q),
            ProjectivePoint::Finite(0)
        );
        assert_eq!(
            lft_apply(&shift, ProjectivePoint::Infinity, q),
            ProjectivePoint::Infinity
        );
        for i in 0..=q as usize {
            let x = ProjectivePoint::from_index(i, q);
            assert_eq!(lft_apply(&Mat2::identity(), x, q), x);
        }
    }
}
