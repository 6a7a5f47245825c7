//! Exact construction of the n-th cyclotomic polynomial.
//!
//! Built entirely in `Z[X]` by Moebius inversion over the divisors of the
//! radical of `n`: one product of `(X^d - 1)` factors, then exact divisions
//! — no floating point and no root enumeration.  `Phi_n(X) =
//! Phi_rad(n)(X^(n/rad(n)))` keeps the intermediate degrees proportional to
//! the radical.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith::factorize_u64;
use crate::error::{Error, Result};
use crate::poly::{divide_exact, IntPoly};

/// Default ceiling on `n`; guards the `phi(n)`-sized coefficient storage.
pub const DEFAULT_CEILING: u64 = 100_000;

// Results for n up to here are memoized; acceptance-style sweeps re-request
// small n heavily, while caching everything up to the ceiling would hold
// tens of millions of coefficients.
const MEMO_MAX: u64 = 1024;

fn memo() -> &'static Mutex<HashMap<u64, Arc<IntPoly>>> {
    static MEMO: OnceLock<Mutex<HashMap<u64, Arc<IntPoly>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The monic degree-`phi(n)` polynomial whose roots are exactly the
/// primitive n-th roots of unity.
pub fn cyclotomic_poly(n: u64) -> Result<IntPoly> {
    cyclotomic_poly_with_ceiling(n, DEFAULT_CEILING)
}

/// Same as [`cyclotomic_poly`] with a caller-chosen ceiling.
pub fn cyclotomic_poly_with_ceiling(n: u64, ceiling: u64) -> Result<IntPoly> {
    if n == 0 {
        return Err(Error::contract("cyclotomic_poly requires n >= 1"));
    }
    if n > ceiling {
        return Err(Error::range(format!(
            "cyclotomic index {n} exceeds the ceiling {ceiling}"
        )));
    }
    Ok(get_or_build(n).as_ref().clone())
}

fn get_or_build(n: u64) -> Arc<IntPoly> {
    if n <= MEMO_MAX {
        if let Some(hit) = memo().lock().unwrap().get(&n) {
            return Arc::clone(hit);
        }
    }
    let built = Arc::new(build(n));
    if n <= MEMO_MAX {
        // A concurrent duplicate computation may race us here; both arrive
        // at the same value, so first-in wins.
        memo()
            .lock()
            .unwrap()
            .entry(n)
            .or_insert_with(|| Arc::clone(&built));
    }
    built
}

fn build(n: u64) -> IntPoly {
    if n == 1 {
        return IntPoly::from_i64_coeffs(&[-1, 1]);
    }
    let factors = factorize_u64(n);
    let radical: u64 = factors.iter().map(|(p, _)| p).product();
    if radical != n {
        return get_or_build(radical).inflate((n / radical) as usize);
    }
    // n squarefree: prod_{d | n} (X^d - 1)^(mu(n/d))
    let primes: Vec<u64> = factors.iter().map(|(p, _)| *p).collect();
    let omega = primes.len();
    let mut plus: Vec<u64> = Vec::new();
    let mut minus: Vec<u64> = Vec::new();
    for mask in 0u32..(1 << omega) {
        let mut d = 1u64;
        for (i, p) in primes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                d *= p;
            }
        }
        // mu(n/d) = (-1)^(number of primes missing from d)
        if (omega - mask.count_ones() as usize) % 2 == 0 {
            plus.push(d);
        } else {
            minus.push(d);
        }
    }
    plus.sort_unstable();
    minus.sort_unstable_by(|a, b| b.cmp(a));
    let mut acc = IntPoly::one();
    for d in plus {
        acc = &acc * &IntPoly::xn_minus_one(d as usize);
    }
    for d in minus {
        acc = divide_exact(&acc, &IntPoly::xn_minus_one(d as usize))
            .expect("the cyclotomic divisor product divides exactly");
    }
    acc
}
