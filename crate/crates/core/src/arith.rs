//! Exact integer number theory: primality, factorization, Euler phi,
//! Moebius, CRT, generators of `(Z/nZ)*`, and streams of primes in
//! arithmetic progressions.
//!
//! Scalar predicates (`is_prime`, `factorize`, `euler_phi`, `moebius`)
//! accept arbitrary-precision integers.  Primality is deterministic below
//! 2^64 (fixed Miller-Rabin witness set); above that a 64-round test with
//! fixed prime bases is used and the answer is flagged as
//! [`Primality::ProbablePrime`].  Moduli, residue classes and prime streams
//! use `u64` — certificates at desk scale never leave that range, and
//! overflow is reported as an explicit range error rather than wrapped.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A residue class `a (mod n)`, with `0 <= a < n`.
///
/// Whether the class is invertible (`gcd(a, n) = 1`) is computed at
/// construction and carried with the value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueClass {
    a: u64,
    n: u64,
    invertible: bool,
}

impl ResidueClass {
    /// Builds the class `a (mod n)`, reducing `a` into `[0, n)`.
    pub fn new(a: u64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::contract("residue class modulus must be positive"));
        }
        let a = a % n;
        Ok(ResidueClass {
            a,
            n,
            invertible: gcd_u64(a, n) == 1,
        })
    }

    pub fn residue(&self) -> u64 {
        self.a
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    /// True if `x ≡ a (mod n)`.
    pub fn contains(&self, x: u64) -> bool {
        x % self.n == self.a
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.a, self.n)
    }
}

/// Outcome of a primality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Primality {
    Composite,
    /// Proven prime (deterministic witness set, input below 2^64).
    Prime,
    /// Passed 64 Miller-Rabin rounds with fixed prime bases; not proven.
    ProbablePrime,
}

/// A positive integer together with its complete prime factorization,
/// factors in strictly increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInteger {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl FactoredInteger {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

// Deterministic for every n < 2^64 (Sinclair's 7-base set).
const MR_BASES_U64: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality for `u64` inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES_U64 {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Three-valued primality test for arbitrary-precision input.
///
/// Below 2^64 the answer is exact; above, a failed round returns
/// `Composite` (exact) and survival of all 64 rounds returns
/// `ProbablePrime`.
pub fn primality(n: &BigUint) -> Primality {
    if let Some(x) = n.to_u64() {
        return if is_prime_u64(x) {
            Primality::Prime
        } else {
            Primality::Composite
        };
    }
    // n > 2^64, necessarily odd or divisible by 2.
    if n.is_even() {
        return Primality::Composite;
    }
    
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut base = BigUint::from(2u32);
    for _ in 0..64 {
        let x = base.modpow(&d, n);
        let mut passed = x.is_one() || x == n_minus_1;
        if !passed {
            let mut x = x;
            for _ in 1..s {
                x = x.modpow(&BigUint::from(2u32), n);
                if x == n_minus_1 {
                    passed = true;
                    break;
                }
            }
        }
        if !passed {
            return Primality::Composite;
        }
        base = next_prime_base(&base);
    }
    Primality::ProbablePrime
}

fn next_prime_base(b: &BigUint) -> BigUint {
    let mut c = b.to_u64().expect("MR bases stay tiny") + 1;
    while !is_prime_u64(c) {
        c += 1;
    }
    BigUint::from(c)
}

/// True iff `n` is prime (or, above 2^64, a 64-round probable prime; use
/// [`primality`] to distinguish).
pub fn is_prime(n: &BigUint) -> bool {
    primality(n) != Primality::Composite
}

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

pub(crate) fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n < 2 {
        return out;
    }
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    // 2,3,5-wheel trial division.
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d = 7u64;
    let mut w = 0usize;
    while d <= TRIAL_DIVISION_LIMIT && d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += WHEEL[w];
        w = (w + 1) % WHEEL.len();
    }
    if n > 1 {
        if d * d > n || is_prime_u64(n) {
            out.push((n, 1));
        } else {
            let mut stack = vec![n];
            let mut found: Vec<u64> = Vec::new();
            while let Some(m) = stack.pop() {
                if is_prime_u64(m) {
                    found.push(m);
                    continue;
                }
                let f = brent_rho_u64(m);
                stack.push(f);
                stack.push(m / f);
            }
            found.sort_unstable();
            let mut i = 0;
            while i < found.len() {
                let p = found[i];
                let mut e = 0;
                while i < found.len() && found[i] == p {
                    e += 1;
                    i += 1;
                }
                out.push((p, e));
            }
        }
    }
    out.sort_unstable();
    out
}

// Pollard rho with Brent cycle detection on odd composite n with no factor
// below the trial-division limit.  The parameter schedule (x0 = 2,
// c = 1, 2, 3, ...) is fixed so runs are reproducible.
fn brent_rho_u64(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime_u64(n));
    if n % 2 == 0 {
        return 2;
    }
    for c in 1..64u64 {
        let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod_u64(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += BATCH;
            }
            r <<= 1;
        }
        if g == n {
            // backtrack the last batch one step at a time
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("rho retry schedule exhausted for {n}")
}

fn rho_big(n: &BigUint) -> BigUint {
    
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    for c in 1u64..64 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    q = q * abs_diff(&x, &y) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r <<= 1;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = abs_diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
    unreachable!("rho retry schedule exhausted")
}

/// Complete prime factorization, factors sorted ascending.
pub fn factorize(n: &BigUint) -> Result<FactoredInteger> {
    if n.is_zero() {
        return Err(Error::contract("factorize requires n >= 1"));
    }
    if let Some(x) = n.to_u64() {
        let factors = factorize_u64(x)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
        return Ok(FactoredInteger {
            value: n.clone(),
            factors,
        });
    }
    let mut rest = n.clone();
    let mut small: Vec<(BigUint, u32)> = Vec::new();
    // Peel off factors below the trial-division limit first.
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_LIMIT {
        let db = BigUint::from(d);
        if (&rest % &db).is_zero() {
            let mut e = 0;
            while (&rest % &db).is_zero() {
                rest /= &db;
                e += 1;
            }
            small.push((db, e));
        }
        if rest.is_one() || rest.to_u64().is_some() {
            break;
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    let mut large: Vec<BigUint> = Vec::new();
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(x) = m.to_u64() {
            for (p, e) in factorize_u64(x) {
                for _ in 0..e {
                    large.push(BigUint::from(p));
                }
            }
            continue;
        }
        if is_prime(&m) {
            large.push(m);
            continue;
        }
        let f = rho_big(&m);
        stack.push(&m / &f);
        stack.push(f);
    }
    large.sort();
    let mut factors = small;
    let mut i = 0;
    while i < large.len() {
        let p = large[i].clone();
        let mut e = 0;
        while i < large.len() && large[i] == p {
            e += 1;
            i += 1;
        }
        factors.push((p, e));
    }
    factors.sort();
    Ok(FactoredInteger {
        value: n.clone(),
        factors,
    })
}

/// Euler's totient: the order of `(Z/nZ)*`.
pub fn euler_phi(n: &BigUint) -> Result<BigUint> {
    if n.is_zero() {
        return Err(Error::contract("euler_phi requires n >= 1"));
    }
    let mut phi = BigUint::one();
    for (p, e) in factorize(n)?.factors {
        phi *= p.pow(e - 1) * (&p - 1u32);
    }
    Ok(phi)
}

pub(crate) fn euler_phi_u64(n: u64) -> u64 {
    let mut phi = 1u64;
    for (p, e) in factorize_u64(n) {
        phi *= p.pow(e - 1) * (p - 1);
    }
    phi
}

/// Moebius function: 0 on squarefull n, else `(-1)^(number of primes)`.
pub fn moebius(n: &BigUint) -> Result<i8> {
    if n.is_zero() {
        return Err(Error::contract("moebius requires n >= 1"));
    }
    let f = factorize(n)?;
    if f.factors.iter().any(|(_, e)| *e > 1) {
        return Ok(0);
    }
    Ok(if f.factors.len() % 2 == 0 { 1 } else { -1 })
}

pub(crate) fn moebius_u64(n: u64) -> i8 {
    let f = factorize_u64(n);
    if f.iter().any(|(_, e)| *e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

fn ext_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd_i128(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Combines residue classes with pairwise coprime moduli into the unique
/// class modulo the product.
pub fn crt_combine(classes: &[ResidueClass]) -> Result<ResidueClass> {
    let mut acc = ResidueClass::new(0, 1)?;
    for c in classes {
        let (a1, n1) = (acc.a, acc.n);
        let (a2, n2) = (c.a, c.n);
        if gcd_u64(n1, n2) != 1 {
            return Err(Error::contract(format!(
                "crt_combine requires pairwise coprime moduli, got {n1} and {n2}"
            )));
        }
        let n = n1
            .checked_mul(n2)
            .ok_or_else(|| Error::range("crt_combine modulus product exceeds u64"))?;
        // x = a1 + n1 * t with t ≡ (a2 - a1) / n1 (mod n2)
        let (_, inv, _) = ext_gcd_i128(n1 as i128, n2 as i128);
        let inv = inv.rem_euclid(n2 as i128);
        let diff = (a2 as i128 - a1 as i128).rem_euclid(n2 as i128);
        let t = (diff * inv).rem_euclid(n2 as i128) as u64;
        let x = (a1 as u128 + n1 as u128 * t as u128) % n as u128;
        acc = ResidueClass::new(x as u64, n)?;
    }
    Ok(acc)
}

fn smallest_primitive_root(p: u64, k: u32) -> u64 {
    let pk = p.pow(k);
    let phi = p.pow(k - 1) * (p - 1);
    let exponents: Vec<u64> = factorize_u64(phi)
        .iter()
        .map(|(q, _)| phi / q)
        .collect();
    let mut g = 2u64;
    loop {
        if g % p != 0 && exponents.iter().all(|&e| pow_mod_u64(g, e, pk) != 1) {
            return g;
        }
        g += 1;
    }
}

/// Canonical generating set for `(Z/nZ)*`: the smallest primitive root of
/// each odd prime-power factor and `{3, 5}` for the 2-power part (just `3`
/// for modulus 4), lifted to classes mod `n` by CRT and sorted by residue.
/// Empty for `n <= 2` (trivial group).
pub fn unit_group_generators(n: u64) -> Result<Vec<ResidueClass>> {
    if n == 0 {
        return Err(Error::contract("unit_group_generators requires n >= 1"));
    }
    if n <= 2 {
        return Ok(Vec::new());
    }
    let mut gens: Vec<ResidueClass> = Vec::new();
    for (p, k) in factorize_u64(n) {
        let pk = p.pow(k);
        let rest = n / pk;
        let locals: Vec<u64> = if p == 2 {
            match k {
                1 => vec![],
                2 => vec![3],
                // 3 = -5^t mod 2^k for every k >= 3, so {3, 5} generates
                // <-1> x <5> = (Z/2^k)*.
                _ => vec![3, 5],
            }
        } else {
            vec![smallest_primitive_root(p, k)]
        };
        for g in locals {
            let lifted = if rest == 1 {
                ResidueClass::new(g, pk)?
            } else {
                crt_combine(&[ResidueClass::new(g, pk)?, ResidueClass::new(1, rest)?])?
            };
            gens.push(lifted);
        }
    }
    gens.sort();
    Ok(gens)
}

/// Segment length for the prime sieve.
pub const SIEVE_SEGMENT: usize = 1 << 16;

/// Lazily sieved ascending stream of the primes `<= bound`.
pub struct PrimeStream {
    bound: u64,
    base: Vec<u64>,
    next_lo: u64,
    buf: Vec<u64>,
    idx: usize,
}

fn isqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |sq| sq <= n) {
        r += 1;
    }
    r
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// All primes up to `bound`, ascending, via a segmented sieve.
pub fn primes(bound: u64) -> PrimeStream {
    let base = simple_sieve(isqrt_u64(bound.max(1)));
    PrimeStream {
        bound,
        base,
        next_lo: 2,
        buf: Vec::new(),
        idx: 0,
    }
}

impl PrimeStream {
    fn fill(&mut self) -> bool {
        if self.next_lo > self.bound {
            return false;
        }
        let lo = self.next_lo;
        let hi = (lo + SIEVE_SEGMENT as u64 - 1).min(self.bound);
        let len = (hi - lo + 1) as usize;
        let mut composite = vec![false; len];
        for &p in &self.base {
            if p * p > hi {
                break;
            }
            let mut j = p.max(lo.div_ceil(p)) * p;
            while j <= hi {
                composite[(j - lo) as usize] = true;
                j += p;
            }
        }
        self.buf.clear();
        self.idx = 0;
        for (off, &c) in composite.iter().enumerate() {
            if !c {
                let v = lo + off as u64;
                if v >= 2 {
                    self.buf.push(v);
                }
            }
        }
        self.next_lo = hi + 1;
        true
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.idx < self.buf.len() {
                let p = self.buf[self.idx];
                self.idx += 1;
                return Some(p);
            }
            if !self.fill() {
                return None;
            }
        }
    }
}

/// The primes `p <= bound` with `p ≡ a (mod n)`, ascending.
pub struct ClassPrimes {
    inner: PrimeStream,
    class: ResidueClass,
}

impl Iterator for ClassPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        self.inner.by_ref().find(|&p| self.class.contains(p))
    }
}

/// Streams the primes in an invertible residue class up to `bound`.
pub fn primes_in_class(class: &ResidueClass, bound: u64) -> Result<ClassPrimes> {
    if !class.is_invertible() {
        return Err(Error::contract(format!(
            "primes_in_class requires an invertible class, got {class}"
        )));
    }
    Ok(ClassPrimes {
        inner: primes(bound),
        class: *class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2u64;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime_u64(2));
        assert!(!is_prime_u64(1));
        // strong-pseudoprime stressor, composite by trial division
        assert!(!trial_division_is_prime(3_215_031_751));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn primality_matches_trial_division_below_10000() {
        for n in 0..10_000u64 {
            assert_eq!(is_prime_u64(n), trial_division_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn primality_flags_probable_above_u64() {
        // 2^89 - 1 is a Mersenne prime; above 2^64 the answer is flagged.
        let m89 = (BigUint::one() << 89u32) - 1u32;
        assert_eq!(primality(&m89), Primality::ProbablePrime);
        // 2^64 + 1 = 274177 * 67280421310721
        let f = (BigUint::one() << 64u32) + 1u32;
        assert_eq!(primality(&f), Primality::Composite);
        assert_eq!(primality(&BigUint::from(97u32)), Primality::Prime);
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(&BigUint::from(1u32)).unwrap().factors().is_empty());
        assert_eq!(
            factorize_u64(12),
            vec![(2, 2), (3, 1)],
            "12 by trial division"
        );
        assert_eq!(factorize_u64(9991), vec![(97, 1), (103, 1)]);
        assert!(factorize(&BigUint::zero()).is_err());
    }

    #[test]
    fn factorize_matches_trial_division() {
        for n in 1..2_000u64 {
            let fs = factorize_u64(n);
            let mut rebuilt = 1u64;
            for &(p, e) in &fs {
                assert!(trial_division_is_prime(p));
                rebuilt *= p.pow(e);
            }
            assert_eq!(rebuilt, n);
            assert!(fs.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn factorize_above_u64() {
        let f = (BigUint::one() << 64u32) + 1u32;
        let fac = factorize(&f).unwrap();
        let rebuilt: BigUint = fac
            .factors()
            .iter()
            .map(|(p, e)| p.pow(*e))
            .product();
        assert_eq!(&rebuilt, fac.value());
        assert_eq!(fac.factors()[0].0, BigUint::from(274_177u64));
    }

    #[test]
    fn euler_phi_examples() {
        assert_eq!(euler_phi(&BigUint::from(1u32)).unwrap(), BigUint::one());
        // brute-force gcd count oracle
        let brute = |n: u64| (1..=n).filter(|&k| gcd_u64(k, n) == 1).count() as u64;
        assert_eq!(brute(12), 4);
        assert_eq!(euler_phi_u64(12), 4);
        assert_eq!(brute(8), 4);
        assert_eq!(euler_phi_u64(8), 4);
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius(&BigUint::from(1u32)).unwrap(), 1);
        assert_eq!(moebius_u64(12), 0); // 4 | 12
        assert_eq!(moebius_u64(30), -1); // three distinct primes
    }

    #[test]
    fn crt_examples_against_exhaustive_search() {
        let exhaustive = |classes: &[(u64, u64)]| -> u64 {
            let n: u64 = classes.iter().map(|&(_, m)| m).product();
            (0..n)
                .find(|&x| classes.iter().all(|&(a, m)| x % m == a))
                .unwrap()
        };
        let combine = |classes: &[(u64, u64)]| {
            let cs: Vec<ResidueClass> = classes
                .iter()
                .map(|&(a, n)| ResidueClass::new(a, n).unwrap())
                .collect();
            crt_combine(&cs).unwrap()
        };
        assert_eq!(exhaustive(&[(2, 3), (1, 4)]), 5);
        let c = combine(&[(2, 3), (1, 4)]);
        assert_eq!((c.residue(), c.modulus()), (5, 12));

        let c = combine(&[(0, 1), (3, 7)]);
        assert_eq!((c.residue(), c.modulus()), (3, 7));

        assert_eq!(exhaustive(&[(1, 4), (2, 5)]), 17);
        let c = combine(&[(1, 4), (2, 5)]);
        assert_eq!((c.residue(), c.modulus()), (17, 20));
    }

    #[test]
    fn crt_rejects_non_coprime_moduli() {
        let a = ResidueClass::new(1, 4).unwrap();
        let b = ResidueClass::new(3, 6).unwrap();
        assert!(matches!(crt_combine(&[a, b]), Err(Error::Contract(_))));
    }

    fn closure_mod_n(gens: &[u64], n: u64) -> Vec<u64> {
        let mut seen = vec![false; n as usize];
        let mut frontier = vec![1 % n];
        seen[(1 % n) as usize] = true;
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = mul_mod_u64(x, g, n);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    frontier.push(y);
                }
            }
        }
        (0..n).filter(|&x| seen[x as usize]).collect()
    }

    #[test]
    fn unit_group_generator_examples() {
        let gens = |n: u64| -> Vec<(u64, u64)> {
            unit_group_generators(n)
                .unwrap()
                .iter()
                .map(|c| (c.residue(), c.modulus()))
                .collect()
        };
        assert_eq!(gens(3), vec![(2, 3)]);
        // closure of {3, 5} mod 8 is {1, 3, 5, 7}
        assert_eq!(closure_mod_n(&[3, 5], 8), vec![1, 3, 5, 7]);
        assert_eq!(gens(8), vec![(3, 8), (5, 8)]);
        assert_eq!(gens(1), vec![]);
        assert_eq!(gens(2), vec![]);
        assert_eq!(gens(4), vec![(3, 4)]);
    }

    #[test]
    fn unit_group_generators_generate_small_moduli() {
        for n in 1..200u64 {
            let gens: Vec<u64> = unit_group_generators(n)
                .unwrap()
                .iter()
                .map(|c| c.residue())
                .collect();
            let closure = closure_mod_n(&gens, n.max(1));
            let units: Vec<u64> = (0..n.max(1)).filter(|&x| gcd_u64(x, n) == 1).collect();
            assert_eq!(closure, units, "n = {n}");
        }
    }

    fn sieve_filter_oracle(a: u64, n: u64, bound: u64) -> Vec<u64> {
        (2..=bound)
            .filter(|&p| trial_division_is_prime(p) && p % n == a % n)
            .collect()
    }

    #[test]
    fn primes_in_class_examples() {
        let run = |a: u64, n: u64, bound: u64| -> Vec<u64> {
            primes_in_class(&ResidueClass::new(a, n).unwrap(), bound)
                .unwrap()
                .collect()
        };
        assert_eq!(sieve_filter_oracle(2, 3, 20), vec![2, 5, 11, 17]);
        assert_eq!(run(2, 3, 20), vec![2, 5, 11, 17]);
        assert_eq!(sieve_filter_oracle(1, 4, 30), vec![5, 13, 17, 29]);
        assert_eq!(run(1, 4, 30), vec![5, 13, 17, 29]);
        assert_eq!(run(1, 1, 10), vec![2, 3, 5, 7]);
    }

    #[test]
    fn primes_in_class_rejects_non_invertible() {
        let c = ResidueClass::new(2, 4).unwrap();
        assert!(matches!(
            primes_in_class(&c, 100),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn prime_stream_crosses_segments() {
        // spans several 2^16 segments; pi(200000) = 17984
        let count = primes(200_000).count();
        assert_eq!(count, 17_984);
        let tail: Vec<u64> = primes(100).collect();
        assert_eq!(tail.first(), Some(&2));
        assert_eq!(tail.last(), Some(&97));
        assert_eq!(primes(1).count(), 0);
    }

    #[test]
    fn residue_class_normalizes() {
        let c = ResidueClass::new(14, 12).unwrap();
        assert_eq!((c.residue(), c.modulus()), (2, 12));
        assert!(!c.is_invertible());
        assert!(ResidueClass::new(0, 0).is_err());
        assert_eq!(ResidueClass::new(1, 1).unwrap().residue(), 0);
    }
}
