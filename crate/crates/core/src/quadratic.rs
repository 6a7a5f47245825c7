//! The quadratic-field fast path: Legendre/Jacobi symbols, the quadratic
//! character of `Q(sqrt(m))` and its conductor, the reciprocity-based
//! witness classes, and the conductor-divisibility oracle used to
//! cross-validate the certifier.
//!
//! The character is evaluated through the Kronecker symbol of the field
//! discriminant (kept internal); its defining property — value 1 at an odd
//! prime `p` not dividing the conductor exactly when `m` is a quadratic
//! residue mod `p` — and its periodicity are pinned by tests rather than
//! assumed.

use crate::arith::{self, crt_combine, ResidueClass};
use crate::error::{Error, Result};

/// A real or imaginary quadratic field `Q(sqrt(m))`, `m` squarefree and
/// not 0 or 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadFieldSpec {
    m: i64,
}

impl QuadFieldSpec {
    pub fn new(m: i64) -> Result<Self> {
        if m == 0 || m == 1 {
            return Err(Error::contract("quadratic field requires m not in {0, 1}"));
        }
        let squarefree = arith::factorize_u64(m.unsigned_abs())
            .iter()
            .all(|(_, e)| *e == 1);
        if !squarefree {
            return Err(Error::contract(format!("{m} is not squarefree")));
        }
        Ok(QuadFieldSpec { m })
    }

    pub fn m(&self) -> i64 {
        self.m
    }
}

/// The quadratic Dirichlet character attached to `Q(sqrt(m))`, with its
/// conductor `d = |m|` for `m ≡ 1 (mod 4)` and `d = 4|m|` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadCharacter {
    m: i64,
    conductor: u64,
}

impl QuadCharacter {
    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    // Field discriminant; |discriminant| = conductor.
    fn discriminant(&self) -> i64 {
        if self.m.rem_euclid(4) == 1 {
            self.m
        } else {
            4 * self.m
        }
    }
}

/// Builds the character descriptor for a quadratic field.
pub fn quad_character(spec: &QuadFieldSpec) -> QuadCharacter {
    let m = spec.m;
    let conductor = if m.rem_euclid(4) == 1 {
        m.unsigned_abs()
    } else {
        4 * m.unsigned_abs()
    };
    QuadCharacter { m, conductor }
}

// Binary Jacobi algorithm on an odd positive modulus.
fn jacobi_u64(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut t = 1i8;
    a %= n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Jacobi symbol `(a | n)` for odd `n >= 1`, by binary reciprocity without
/// factorization.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::contract(format!(
            "jacobi symbol requires an odd positive modulus, got {n}"
        )));
    }
    let a = a.rem_euclid(n as i64) as u64;
    Ok(jacobi_u64(a, n))
}

/// Legendre symbol `(a | p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    if p == 2 || !arith::is_prime_u64(p) {
        return Err(Error::contract(format!(
            "legendre symbol requires an odd prime, got {p}"
        )));
    }
    jacobi(a, p)
}

// Kronecker symbol (d | n) for n >= 0; internal carrier for chi_value.
fn kronecker(d: i64, n: u64) -> i8 {
    if n == 0 {
        return if d.unsigned_abs() == 1 { 1 } else { 0 };
    }
    let mut acc = 1i8;
    let e = n.trailing_zeros();
    let odd = n >> e;
    if e > 0 {
        if d % 2 == 0 {
            return 0;
        }
        let d8 = d.rem_euclid(8);
        let at_two = if d8 == 1 || d8 == 7 { 1 } else { -1 };
        if e % 2 == 1 {
            acc *= at_two;
        }
    }
    if odd == 1 {
        return acc;
    }
    let a = d.rem_euclid(odd as i64) as u64;
    acc * jacobi_u64(a, odd)
}

/// Character value at `a`: 0 when `gcd(a, d) > 1`, otherwise ±1 depending
/// only on `a mod d`; at an odd prime `p` not dividing `d` it is 1 exactly
/// when `m` is a quadratic residue mod `p`.
pub fn chi_value(chr: &QuadCharacter, a: i64) -> i8 {
    let d = chr.conductor;
    let a = a.rem_euclid(d as i64) as u64;
    if arith::gcd_u64(a, d) != 1 {
        return 0;
    }
    kronecker(chr.discriminant(), a)
}

/// Whether `p` is semi-split in `Q(sqrt(m))`: ramified (`p | d`) or split
/// (`chi(p) = 1`; for `p = 2` with odd conductor, split iff
/// `m ≡ 1 (mod 8)`).
pub fn quad_semi_split(spec: &QuadFieldSpec, p: u64) -> Result<bool> {
    if !arith::is_prime_u64(p) {
        return Err(Error::contract(format!("{p} is not prime")));
    }
    let chr = quad_character(spec);
    let d = chr.conductor;
    if p == 2 {
        return Ok(d % 2 == 0 || spec.m.rem_euclid(8) == 1);
    }
    if d % p == 0 {
        return Ok(true);
    }
    Ok(chi_value(&chr, p as i64) == 1)
}

/// Verdict of the conductor oracle for `Phi_n` over `Q(sqrt(m))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Irreducible,
    Reducible,
}

impl std::fmt::Display for OracleVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OracleVerdict::Irreducible => write!(f, "irreducible"),
            OracleVerdict::Reducible => write!(f, "reducible"),
        }
    }
}

/// Ground truth for `Phi_n` over `Q(sqrt(m))`: irreducible iff the
/// conductor does not divide `n`, i.e. iff `Q(sqrt(m))` is not contained
/// in `Q(zeta_n)`.
pub fn conductor_oracle(spec: &QuadFieldSpec, n: u64) -> Result<OracleVerdict> {
    if n == 0 {
        return Err(Error::contract("conductor_oracle requires n >= 1"));
    }
    let d = quad_character(spec).conductor;
    Ok(if n % d == 0 {
        OracleVerdict::Reducible
    } else {
        OracleVerdict::Irreducible
    })
}

/// One target class `a (mod p)` together with the combined class mod `4p`
/// in which every prime is a reciprocity witness for it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReciprocityClass {
    pub target: ResidueClass,
    pub search: ResidueClass,
}

/// The quadratic field the reciprocity construction certifies for the
/// p-th cyclotomic polynomial: `Q(sqrt(p))` when `p ≡ 3 (mod 4)`,
/// `Q(sqrt(-p))` when `p ≡ 1 (mod 4)`.
pub fn reciprocity_field(p: u64) -> Result<QuadFieldSpec> {
    if p == 2 || !arith::is_prime_u64(p) {
        return Err(Error::contract(format!("{p} is not an odd prime")));
    }
    let m = if p % 4 == 3 { p as i64 } else { -(p as i64) };
    QuadFieldSpec::new(m)
}

/// For each invertible `a (mod p)`, the CRT class mod `4p` whose primes
/// `q` have `(±p | q) = 1`: `q ≡ 1 (mod 4)` when `a` is a quadratic
/// residue mod `p`, `q ≡ 3 (mod 4)` otherwise.
pub fn reciprocity_search_classes(p: u64) -> Result<Vec<ReciprocityClass>> {
    if p == 2 || !arith::is_prime_u64(p) {
        return Err(Error::contract(format!(
            "reciprocity_search_classes requires an odd prime, got {p}"
        )));
    }
    let mut out = Vec::with_capacity((p - 1) as usize);
    for a in 1..p {
        let four_residue = if legendre(a as i64, p)? == 1 { 1 } else { 3 };
        let target = ResidueClass::new(a, p)?;
        let search = crt_combine(&[target, ResidueClass::new(four_residue, 4)?])?;
        out.push(ReciprocityClass { target, search });
    }
    Ok(out)
}
