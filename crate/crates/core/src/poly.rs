//! Exact polynomial arithmetic over `Z` and over prime fields `F_p`.
//!
//! [`IntPoly`] stores arbitrary-precision coefficients in ascending degree
//! order with no trailing zeros; the zero polynomial is the empty list and
//! has no degree (`degree()` is `None`, never `-1`).  [`FpPoly`] is the
//! reduction of such a polynomial modulo a prime.  The operations here are
//! exactly what root detection needs: exact division, gcd over `F_p`,
//! `X^p mod f` by repeated squaring, root counting via
//! `gcd(X^p - X, f)`, and the squarefreeness test `gcd(f, f') = 1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// Largest exponent the text parser accepts.
const MAX_PARSE_EXPONENT: usize = 1_000_000;

/// A polynomial with arbitrary-precision integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    fn trimmed(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn x() -> Self {
        IntPoly {
            coeffs: vec![BigInt::zero(), BigInt::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        Self::trimmed(coeffs)
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::trimmed(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `X^n - 1`.
    pub fn xn_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = -BigInt::one();
        coeffs[n] = BigInt::one();
        IntPoly { coeffs }
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `X^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().map_or(false, One::is_one)
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect();
        Self::trimmed(coeffs)
    }

    /// Horner evaluation at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation of `f(x) mod p` in word arithmetic.
    pub fn eval_mod_u64(&self, x: u64, p: u64) -> u64 {
        let pb = BigInt::from(p);
        let mut acc = 0u64;
        for c in self.coeffs.iter().rev() {
            let cm = c.mod_floor(&pb).to_u64().expect("reduced below p");
            acc = (arith::mul_mod_u64(acc, x % p, p) + cm) % p;
        }
        acc
    }

    /// Substitutes `X -> X^k`.
    pub(crate) fn inflate(&self, k: usize) -> IntPoly {
        assert!(k >= 1);
        if self.is_zero() || k == 1 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        IntPoly { coeffs }
    }

    /// True iff `gcd(f, f')` over `Q` is constant, i.e. `f` has no repeated
    /// factor.  Constants count as squarefree; the zero polynomial does not.
    pub fn is_squarefree_over_z(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.degree() == Some(0) {
            return true;
        }
        rational_gcd_degree(self, &self.derivative()) == Some(0)
    }
}

fn content(coeffs: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in coeffs {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(p: &IntPoly) -> IntPoly {
    if p.is_zero() {
        return IntPoly::zero();
    }
    let c = content(&p.coeffs);
    IntPoly::trimmed(p.coeffs.iter().map(|x| x / &c).collect())
}

// lc(b)^k * a reduced mod b by integer long division; degree strictly drops
// below deg b.
fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = b.degree().expect("pseudo_rem divisor nonzero");
    let lb = b.leading_coeff().unwrap().clone();
    let mut r = a.coeffs.clone();
    loop {
        let dr = match r.len().checked_sub(1) {
            Some(d) if d >= db && !r[d].is_zero() => d,
            _ => {
                while r.last().map_or(false, Zero::is_zero) {
                    r.pop();
                }
                if r.len() <= db {
                    break;
                }
                continue;
            }
        };
        let c = r[dr].clone();
        for coeff in r.iter_mut() {
            *coeff *= &lb;
        }
        let shift = dr - db;
        for (j, bj) in b.coeffs.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
    }
    IntPoly::trimmed(r)
}

// Degree of gcd(a, b) over Q, via a primitive pseudo-remainder sequence.
fn rational_gcd_degree(a: &IntPoly, b: &IntPoly) -> Option<usize> {
    let mut a = primitive_part(a);
    let mut b = primitive_part(b);
    if a.is_zero() {
        return b.degree();
    }
    if b.is_zero() {
        return a.degree();
    }
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = primitive_part(&pseudo_rem(&a, &b));
        if r.is_zero() {
            return b.degree();
        }
        a = b;
        b = r;
    }
}

impl std::ops::Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl std::ops::Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = rhs.coeffs.get(i);
            out.push(match b {
                Some(b) => a + b,
                None => a,
            });
        }
        IntPoly::trimmed(out)
    }
}

impl std::ops::Sub for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = rhs.coeffs.get(i);
            out.push(match b {
                Some(b) => a - b,
                None => a,
            });
        }
        IntPoly::trimmed(out)
    }
}

impl std::ops::Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        // iterate nonzero terms of the sparser side
        let (small, big) = {
            let nz = |p: &IntPoly| p.coeffs.iter().filter(|c| !c.is_zero()).count();
            if nz(self) <= nz(rhs) {
                (self, rhs)
            } else {
                (rhs, self)
            }
        };
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in small.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in big.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] += a * b;
            }
        }
        IntPoly::trimmed(out)
    }
}

/// Exact division in `Z[X]` by a monic divisor.  Fails with the nonzero
/// remainder reported if the division does not come out even.
pub fn divide_exact(num: &IntPoly, den: &IntPoly) -> Result<IntPoly> {
    if den.is_zero() || !den.is_monic() {
        return Err(Error::contract("divide_exact requires a monic divisor"));
    }
    if num.is_zero() {
        return Ok(IntPoly::zero());
    }
    let dd = den.degree().unwrap();
    let dn = num.degree().unwrap();
    if dn < dd {
        return Err(Error::contract(format!(
            "divide_exact: inexact division, remainder {num}"
        )));
    }
    let mut rem = num.coeffs.clone();
    // nonzero divisor terms below the (unit) leading coefficient
    let den_terms: Vec<(usize, &BigInt)> = den
        .coeffs
        .iter()
        .enumerate()
        .take(dd)
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        let qi = std::mem::take(&mut rem[i + dd]);
        if !qi.is_zero() {
            for &(j, c) in &den_terms {
                rem[i + j] -= &qi * c;
            }
        }
        quot[i] = qi;
    }
    let remainder = IntPoly::trimmed(rem);
    if !remainder.is_zero() {
        return Err(Error::contract(format!(
            "divide_exact: inexact division, remainder {remainder}"
        )));
    }
    Ok(IntPoly::trimmed(quot))
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if k == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{k}")?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Var,
    Int(BigUint),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '+' => {
                chars.next();
                toks.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                toks.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                toks.push(Tok::Star);
            }
            '^' => {
                chars.next();
                toks.push(Tok::Caret);
            }
            'x' | 'X' => {
                chars.next();
                toks.push(Tok::Var);
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let v = BigUint::from_str(&digits)
                    .map_err(|_| Error::parse(format!("bad integer literal '{digits}'")))?;
                toks.push(Tok::Int(v));
            }
            other => {
                return Err(Error::parse(format!(
                    "unexpected character '{other}' in polynomial"
                )))
            }
        }
    }
    Ok(toks)
}

impl FromStr for IntPoly {
    type Err = Error;

    /// Parses a sum of `c*x^k` terms; the `*` is optional, whitespace is
    /// free, and terms may come in any order (repeats are summed).
    fn from_str(s: &str) -> Result<Self> {
        let toks = lex(s)?;
        if toks.is_empty() {
            return Err(Error::parse("empty polynomial"));
        }
        let mut terms: std::collections::BTreeMap<usize, BigInt> = Default::default();
        let mut i = 0;
        let mut first = true;
        while i < toks.len() {
            let mut negative = false;
            let mut saw_sign = false;
            while let Some(Tok::Plus | Tok::Minus) = toks.get(i) {
                if toks[i] == Tok::Minus {
                    negative = !negative;
                }
                saw_sign = true;
                i += 1;
            }
            if !first && !saw_sign {
                return Err(Error::parse("expected '+' or '-' between terms"));
            }
            let mut coeff: Option<BigInt> = None;
            let mut exp = 0usize;
            match toks.get(i) {
                Some(Tok::Int(v)) => {
                    coeff = Some(BigInt::from(v.clone()));
                    i += 1;
                    let starred = matches!(toks.get(i), Some(Tok::Star));
                    if starred {
                        i += 1;
                    }
                    if matches!(toks.get(i), Some(Tok::Var)) {
                        i += 1;
                        exp = parse_exponent(&toks, &mut i)?;
                    } else if starred {
                        return Err(Error::parse("expected x after '*'"));
                    }
                }
                Some(Tok::Var) => {
                    i += 1;
                    exp = parse_exponent(&toks, &mut i)?;
                }
                _ => return Err(Error::parse("expected a coefficient or x")),
            }
            let mut c = coeff.unwrap_or_else(BigInt::one);
            if negative {
                c = -c;
            }
            *terms.entry(exp).or_insert_with(BigInt::zero) += c;
            first = false;
        }
        let deg = terms.keys().next_back().copied().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for (k, c) in terms {
            coeffs[k] = c;
        }
        Ok(IntPoly::trimmed(coeffs))
    }
}

fn parse_exponent(toks: &[Tok], i: &mut usize) -> Result<usize> {
    if !matches!(toks.get(*i), Some(Tok::Caret)) {
        return Ok(1);
    }
    *i += 1;
    match toks.get(*i) {
        Some(Tok::Int(v)) => {
            *i += 1;
            let e = v
                .to_usize()
                .filter(|&e| e <= MAX_PARSE_EXPONENT)
                .ok_or_else(|| Error::parse(format!("exponent {v} too large")))?;
            Ok(e)
        }
        _ => Err(Error::parse("expected an integer exponent after '^'")),
    }
}

/// A polynomial over the prime field `F_p`, coefficients reduced into
/// `[0, p)`, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: BigUint,
    coeffs: Vec<BigUint>,
}

fn inv_mod(a: &BigUint, p: &BigUint) -> BigUint {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(p.clone());
    let e = a.extended_gcd(&m);
    debug_assert!(e.gcd.is_one(), "inverse of a unit mod a prime");
    e.x.mod_floor(&m).to_biguint().unwrap()
}

impl FpPoly {
    fn from_reduced(p: BigUint, mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    /// Builds a polynomial over `F_p`, reducing each coefficient.  The
    /// modulus must be prime.
    pub fn new(p: BigUint, coeffs: Vec<BigUint>) -> Result<Self> {
        if !arith::is_prime(&p) {
            return Err(Error::contract(format!("modulus {p} is not prime")));
        }
        let coeffs = coeffs.into_iter().map(|c| c % &p).collect();
        Ok(Self::from_reduced(p, coeffs))
    }

    pub fn modulus(&self) -> &BigUint {
        &self.p
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, One::is_one)
    }

    fn constant(p: BigUint, c: u64) -> Self {
        let c = BigUint::from(c) % &p;
        Self::from_reduced(p, vec![c])
    }

    fn check_same_modulus(&self, other: &FpPoly) -> Result<()> {
        if self.p != other.p {
            return Err(Error::contract(format!(
                "modulus mismatch: {} vs {}",
                self.p, other.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &FpPoly) -> Result<FpPoly> {
        self.check_same_modulus(rhs)?;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        let zero = BigUint::zero();
        for i in 0..n {
            let a = self.coeffs.get(i).unwrap_or(&zero);
            let b = rhs.coeffs.get(i).unwrap_or(&zero);
            out.push((a + b) % &self.p);
        }
        Ok(FpPoly::from_reduced(self.p.clone(), out))
    }

    pub fn sub(&self, rhs: &FpPoly) -> Result<FpPoly> {
        self.check_same_modulus(rhs)?;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        let zero = BigUint::zero();
        for i in 0..n {
            let a = self.coeffs.get(i).unwrap_or(&zero);
            let b = rhs.coeffs.get(i).unwrap_or(&zero);
            out.push((a + &self.p - b) % &self.p);
        }
        Ok(FpPoly::from_reduced(self.p.clone(), out))
    }

    pub fn mul(&self, rhs: &FpPoly) -> Result<FpPoly> {
        self.check_same_modulus(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(FpPoly::from_reduced(self.p.clone(), Vec::new()));
        }
        let mut out = vec![BigUint::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = (&out[i + j] + a * b) % &self.p;
            }
        }
        Ok(FpPoly::from_reduced(self.p.clone(), out))
    }

    /// Multiplies every coefficient by the inverse of the leading one.
    pub fn monic(&self) -> FpPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) if lead.is_one() => self.clone(),
            Some(lead) => {
                let inv = inv_mod(lead, &self.p);
                let coeffs = self.coeffs.iter().map(|c| c * &inv % &self.p).collect();
                FpPoly::from_reduced(self.p.clone(), coeffs)
            }
        }
    }

    fn divrem(&self, den: &FpPoly) -> Result<(FpPoly, FpPoly)> {
        self.check_same_modulus(den)?;
        let dd = den
            .degree()
            .ok_or_else(|| Error::contract("polynomial division by zero"))?;
        if self.degree().map_or(true, |ds| ds < dd) {
            return Ok((
                FpPoly::from_reduced(self.p.clone(), Vec::new()),
                self.clone(),
            ));
        }
        let ds = self.degree().unwrap();
        let lead_inv = inv_mod(den.coeffs.last().unwrap(), &self.p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigUint::zero(); ds - dd + 1];
        for i in (0..=ds - dd).rev() {
            let c = &rem[i + dd] * &lead_inv % &self.p;
            if !c.is_zero() {
                for (j, mj) in den.coeffs.iter().enumerate() {
                    if mj.is_zero() {
                        continue;
                    }
                    let sub = &c * mj % &self.p;
                    rem[i + j] = (&rem[i + j] + &self.p - sub) % &self.p;
                }
            }
            quot[i] = c;
        }
        Ok((
            FpPoly::from_reduced(self.p.clone(), quot),
            FpPoly::from_reduced(self.p.clone(), rem),
        ))
    }

    /// Remainder of division by `den`.
    pub fn rem(&self, den: &FpPoly) -> Result<FpPoly> {
        Ok(self.divrem(den)?.1)
    }

    pub fn derivative(&self) -> FpPoly {
        if self.coeffs.len() <= 1 {
            return FpPoly::from_reduced(self.p.clone(), Vec::new());
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigUint::from(k) % &self.p)
            .collect();
        FpPoly::from_reduced(self.p.clone(), coeffs)
    }

    pub fn eval(&self, x: &BigUint) -> BigUint {
        let x = x % &self.p;
        let mut acc = BigUint::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc * &x + c) % &self.p;
        }
        acc
    }
}

/// Coefficientwise reduction of `f` modulo a prime `p`; the degree drops
/// when `p` divides the leading coefficient.
pub fn reduce_mod_p(f: &IntPoly, p: &BigUint) -> Result<FpPoly> {
    if !arith::is_prime(p) {
        return Err(Error::contract(format!("modulus {p} is not prime")));
    }
    let pb = BigInt::from(p.clone());
    let coeffs = f
        .coeffs
        .iter()
        .map(|c| c.mod_floor(&pb).to_biguint().unwrap())
        .collect();
    Ok(FpPoly::from_reduced(p.clone(), coeffs))
}

/// Monic gcd in `F_p[X]` by classical Euclid with monic normalization at
/// each step.  The inputs must share a modulus and not both be zero.
pub fn fp_gcd(g: &FpPoly, h: &FpPoly) -> Result<FpPoly> {
    g.check_same_modulus(h)?;
    if g.is_zero() && h.is_zero() {
        return Err(Error::contract("fp_gcd requires inputs not both zero"));
    }
    let mut a = g.monic();
    let mut b = h.monic();
    while !b.is_zero() {
        let r = a.rem(&b)?.monic();
        a = b;
        b = r;
    }
    Ok(a)
}

fn fp_pow_mod(base: &FpPoly, exp: &BigUint, modpoly: &FpPoly) -> Result<FpPoly> {
    debug_assert!(modpoly.degree().map_or(false, |d| d >= 1));
    let mut result = FpPoly::constant(base.p.clone(), 1);
    let mut sq = base.rem(modpoly)?;
    for i in 0..exp.bits() {
        if exp.bit(i) {
            result = result.mul(&sq)?.rem(modpoly)?;
        }
        if i + 1 < exp.bits() {
            sq = sq.mul(&sq)?.rem(modpoly)?;
        }
    }
    Ok(result)
}

/// `X^p mod f`, computed by repeated-squaring modular exponentiation.
/// Requires `f` monic of degree at least one.
pub fn frobenius_x_pow(f: &FpPoly) -> Result<FpPoly> {
    if !f.is_monic() || f.degree().map_or(true, |d| d < 1) {
        return Err(Error::contract(
            "frobenius_x_pow requires a monic polynomial of degree >= 1",
        ));
    }
    let x = FpPoly::from_reduced(f.p.clone(), vec![BigUint::zero(), BigUint::one()]);
    let p = f.p.clone();
    fp_pow_mod(&x, &p, f)
}

/// Number of distinct roots of `f mod p` in `F_p`, as
/// `deg gcd(X^p - X, f mod p)`.
pub fn count_roots_mod_p(f: &IntPoly, p: &BigUint) -> Result<usize> {
    let fbar = reduce_mod_p(f, p)?;
    if fbar.is_zero() {
        return Err(Error::contract("count_roots_mod_p: f vanishes mod p"));
    }
    if fbar.degree() == Some(0) {
        return Ok(0);
    }
    let fmonic = fbar.monic();
    let xp = frobenius_x_pow(&fmonic)?;
    let x = FpPoly::from_reduced(fmonic.p.clone(), vec![BigUint::zero(), BigUint::one()])
        .rem(&fmonic)?;
    let t = xp.sub(&x)?;
    let g = fp_gcd(&t, &fmonic)?;
    Ok(g.degree().unwrap_or(0))
}

/// True iff `gcd(f mod p, f' mod p) = 1`.  Errors if the degree drops mod
/// `p` (the caller must treat such a prime as unusable).
pub fn is_squarefree_mod_p(f: &IntPoly, p: &BigUint) -> Result<bool> {
    let fbar = reduce_mod_p(f, p)?;
    if f.degree() != fbar.degree() || f.is_zero() {
        return Err(Error::contract(format!(
            "is_squarefree_mod_p: degree of f drops mod {p}"
        )));
    }
    if fbar.degree() == Some(0) {
        return Ok(true);
    }
    let g = fp_gcd(&fbar, &fbar.derivative())?;
    Ok(g.degree() == Some(0))
}

/// Irreducibility over `F_p`: `X^(p^d) ≡ X mod f` and
/// `gcd(X^(p^(d/q)) - X, f) = 1` for every prime `q | d`.
pub fn fp_is_irreducible(f: &FpPoly) -> Result<bool> {
    let d = match f.degree() {
        None | Some(0) => {
            return Err(Error::contract(
                "fp_is_irreducible requires degree >= 1",
            ))
        }
        Some(d) => d,
    };
    if d == 1 {
        return Ok(true);
    }
    let f = f.monic();
    let x = FpPoly::from_reduced(f.p.clone(), vec![BigUint::zero(), BigUint::one()]).rem(&f)?;
    let critical: Vec<usize> = arith::factorize_u64(d as u64)
        .iter()
        .map(|(q, _)| d / *q as usize)
        .collect();
    let p = f.p.clone();
    let mut t = frobenius_x_pow(&f)?; // X^(p^1)
    for e in 1..=d {
        if e > 1 {
            t = fp_pow_mod(&t, &p, &f)?;
        }
        if critical.contains(&e) {
            let diff = t.sub(&x)?;
            if diff.is_zero() || fp_gcd(&diff, &f)?.degree() != Some(0) {
                return Ok(false);
            }
        }
        if e == d {
            return Ok(t == x);
        }
    }
    unreachable!()
}

// Splits a monic product of distinct linear factors into its roots, by
// gcd with (X + c)^((p-1)/2) - 1 over a fixed schedule c = 0, 1, 2, ...
fn split_linear_product(g: &FpPoly) -> Result<Vec<BigUint>> {
    match g.degree() {
        None | Some(0) => return Ok(Vec::new()),
        Some(1) => {
            // root of X + c0 is -c0
            let c0 = &g.coeffs[0];
            let root = if c0.is_zero() {
                BigUint::zero()
            } else {
                &g.p - c0
            };
            return Ok(vec![root]);
        }
        _ => {}
    }
    // peel off a root at zero so every remaining root r has X + c nonzero
    if g.coeffs[0].is_zero() {
        let x = FpPoly::from_reduced(g.p.clone(), vec![BigUint::zero(), BigUint::one()]);
        let (q, r) = g.divrem(&x)?;
        debug_assert!(r.is_zero());
        let mut roots = split_linear_product(&q)?;
        roots.push(BigUint::zero());
        return Ok(roots);
    }
    let half = (&g.p - 1u32) >> 1;
    for c in 0u64..10_000 {
        let shifted = FpPoly::from_reduced(
            g.p.clone(),
            vec![BigUint::from(c) % &g.p, BigUint::one()],
        );
        let pw = fp_pow_mod(&shifted, &half, g)?;
        let h = pw.sub(&FpPoly::constant(g.p.clone(), 1))?;
        let d = fp_gcd(&h, g)?;
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && dd < g.degree().unwrap() {
            let (q, r) = g.divrem(&d)?;
            debug_assert!(r.is_zero());
            let mut roots = split_linear_product(&d)?;
            roots.extend(split_linear_product(&q)?);
            return Ok(roots);
        }
    }
    unreachable!("splitting schedule exhausted")
}

/// Distinct roots of `fbar` in `F_p`, ascending.
pub(crate) fn fp_distinct_roots(fbar: &FpPoly) -> Result<Vec<BigUint>> {
    if fbar.is_zero() {
        return Err(Error::contract("root extraction of the zero polynomial"));
    }
    if fbar.degree() == Some(0) {
        return Ok(Vec::new());
    }
    // small fields: exhaustive evaluation
    if let Some(p) = fbar.p.to_u64().filter(|&p| p < 512) {
        let mut roots = Vec::new();
        for x in 0..p {
            if fbar.eval(&BigUint::from(x)).is_zero() {
                roots.push(BigUint::from(x));
            }
        }
        return Ok(roots);
    }
    let fmonic = fbar.monic();
    let xp = frobenius_x_pow(&fmonic)?;
    let x = FpPoly::from_reduced(fmonic.p.clone(), vec![BigUint::zero(), BigUint::one()])
        .rem(&fmonic)?;
    let linear_part = fp_gcd(&xp.sub(&x)?, &fmonic)?;
    let mut roots = split_linear_product(&linear_part)?;
    roots.sort();
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    fn fp(p: u64, coeffs: &[u64]) -> FpPoly {
        FpPoly::new(
            BigUint::from(p),
            coeffs.iter().map(|&c| BigUint::from(c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["x^2 - 5", "x^4 + 1", "x - 1", "2*x^3 - x + 5", "-x - 1", "0", "7"] {
            let p = ip(s);
            assert_eq!(p.to_string(), s);
            assert_eq!(ip(&p.to_string()), p);
        }
    }

    #[test]
    fn parse_accepts_loose_input() {
        assert_eq!(ip("x^2-5"), ip("x^2 - 5"));
        assert_eq!(ip("-5 + x^2"), ip("x^2 - 5"));
        assert_eq!(ip("1*x^2 + -5"), ip("x^2 - 5"));
        assert_eq!(ip("X^2 - 5"), ip("x^2 - 5"));
        assert_eq!(ip("x + x"), ip("2*x"));
        assert_eq!(ip(" 3 * x ^ 2 "), ip("3*x^2"));
    }

    #[test]
    fn parse_rejects_junk() {
        for s in ["", "x^", "x + y", "2 3", "x^-1", "*x", "x^99999999"] {
            assert!(s.parse::<IntPoly>().is_err(), "should reject {s:?}");
        }
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(IntPoly::zero().degree(), None);
        assert_eq!(ip("7").degree(), Some(0));
        assert_eq!(ip("x").degree(), Some(1));
    }

    #[test]
    fn reduce_mod_p_examples() {
        let f = reduce_mod_p(&ip("x^2 - 5"), &BigUint::from(3u32)).unwrap();
        assert_eq!(f, fp(3, &[1, 0, 1])); // -5 ≡ 1 mod 3
        let f = reduce_mod_p(&ip("x - 1"), &BigUint::from(2u32)).unwrap();
        assert_eq!(f, fp(2, &[1, 1]));
        let f = reduce_mod_p(&ip("3*x^2 + x"), &BigUint::from(3u32)).unwrap();
        assert_eq!(f, fp(3, &[0, 1])); // degree drops
        assert!(reduce_mod_p(&ip("x"), &BigUint::from(4u32)).is_err());
    }

    #[test]
    fn divide_exact_examples() {
        assert_eq!(
            divide_exact(&ip("x^2 - 1"), &ip("x - 1")).unwrap(),
            ip("x + 1")
        );
        let q = divide_exact(&ip("x^6 - 1"), &ip("x^2 - 1")).unwrap();
        assert_eq!(q, ip("x^4 + x^2 + 1"));
        assert_eq!(&q * &ip("x^2 - 1"), ip("x^6 - 1"));
        let q = divide_exact(&ip("x^3 - 1"), &ip("x^2 + x + 1")).unwrap();
        assert_eq!(q, ip("x - 1"));
        assert_eq!(&q * &ip("x^2 + x + 1"), ip("x^3 - 1"));
    }

    #[test]
    fn divide_exact_reports_remainder() {
        let err = divide_exact(&ip("x^2 + 1"), &ip("x - 1")).unwrap_err();
        assert!(err.to_string().contains("remainder 2"), "{err}");
        assert!(divide_exact(&ip("x"), &ip("2*x")).is_err(), "non-monic divisor");
    }

    #[test]
    fn fp_gcd_examples() {
        // common root 1 over F_5
        let g = fp_gcd(&fp(5, &[4, 0, 1]), &fp(5, &[4, 1])).unwrap();
        assert_eq!(g, fp(5, &[4, 1])); // x + 4 = x - 1
        // gcd with zero is the monic scaling
        let g = fp_gcd(&fp(5, &[1, 2]), &FpPoly::new(BigUint::from(5u32), vec![]).unwrap())
            .unwrap();
        assert_eq!(g, fp(5, &[3, 1])); // (2x + 1)/2 with 1/2 = 3 mod 5
        assert!(fp_gcd(
            &FpPoly::new(BigUint::from(5u32), vec![]).unwrap(),
            &FpPoly::new(BigUint::from(5u32), vec![]).unwrap()
        )
        .is_err());
        // modulus mismatch
        assert!(fp_gcd(&fp(5, &[1, 1]), &fp(7, &[1, 1])).is_err());
    }

    // Exhaustive divisor search over F_2: the true gcd of x^2+1 and
    // x^2+x+1, settling the disputed example.
    #[test]
    fn fp_gcd_f2_example_settled_by_brute_force() {
        let a = fp(2, &[1, 0, 1]); // x^2 + 1 = (x+1)^2
        let b = fp(2, &[1, 1, 1]); // irreducible: no root in F_2
        let mut best_deg = 0usize;
        for coeffs in [[1u64, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]]
        {
            let d = fp(2, &coeffs);
            if d.is_zero() {
                continue;
            }
            if a.rem(&d).unwrap().is_zero() && b.rem(&d).unwrap().is_zero() {
                best_deg = best_deg.max(d.degree().unwrap());
            }
        }
        assert_eq!(best_deg, 0, "only constants divide both");
        assert_eq!(fp_gcd(&a, &b).unwrap(), fp(2, &[1]));
    }

    #[test]
    fn frobenius_examples() {
        // X^3 mod (X^2 + 1) over F_3 is -X = 2X
        let f = fp(3, &[1, 0, 1]);
        assert_eq!(frobenius_x_pow(&f).unwrap(), fp(3, &[0, 2]));
        // X^p mod X = 0
        let f = fp(5, &[0, 1]);
        assert!(frobenius_x_pow(&f).unwrap().is_zero());
        // X^7 mod (X^2 - 2) over F_7, against naive repeated multiplication
        let f = fp(7, &[5, 0, 1]);
        let fast = frobenius_x_pow(&f).unwrap();
        let x = fp(7, &[0, 1]);
        let mut naive = x.clone();
        for _ in 1..7 {
            naive = naive.mul(&x).unwrap().rem(&f).unwrap();
        }
        assert_eq!(fast, naive);
        // contract: non-monic and constant inputs refused
        assert!(frobenius_x_pow(&fp(5, &[1, 2])).is_err());
        assert!(frobenius_x_pow(&fp(5, &[3])).is_err());
    }

    #[test]
    fn frobenius_matches_naive_powering_small_primes() {
        for p in [3u64, 5, 7, 11, 101] {
            let f = fp(p, &[2, 1, 0, 1]); // x^3 + x + 2, monic
            let fast = frobenius_x_pow(&f).unwrap();
            let x = fp(p, &[0, 1]);
            let mut naive = x.clone();
            for _ in 1..p {
                naive = naive.mul(&x).unwrap().rem(&f).unwrap();
            }
            assert_eq!(fast, naive, "p = {p}");
        }
    }

    fn count_roots_by_evaluation(f: &IntPoly, p: u64) -> usize {
        (0..p).filter(|&x| f.eval_mod_u64(x, p) == 0).count()
    }

    #[test]
    fn count_roots_examples() {
        let f = ip("x^2 - 5");
        assert_eq!(count_roots_by_evaluation(&f, 11), 2); // 4^2 = 7^2 = 5 mod 11
        assert_eq!(count_roots_mod_p(&f, &BigUint::from(11u32)).unwrap(), 2);
        assert_eq!(count_roots_by_evaluation(&f, 3), 0);
        assert_eq!(count_roots_mod_p(&f, &BigUint::from(3u32)).unwrap(), 0);
        assert_eq!(
            count_roots_mod_p(&ip("x - 1"), &BigUint::from(7u32)).unwrap(),
            1
        );
        // f ≡ 0 mod p is a contract violation
        assert!(count_roots_mod_p(&ip("7"), &BigUint::from(7u32)).is_err());
    }

    #[test]
    fn squarefree_examples() {
        let f = ip("x^2 - 5");
        assert!(is_squarefree_mod_p(&f, &BigUint::from(11u32)).unwrap());
        assert!(!is_squarefree_mod_p(&f, &BigUint::from(5u32)).unwrap()); // x^2
        assert!(!is_squarefree_mod_p(&f, &BigUint::from(2u32)).unwrap()); // (x+1)^2
        // degree drop is refused
        assert!(is_squarefree_mod_p(&ip("3*x^2 + x"), &BigUint::from(3u32)).is_err());
    }

    #[test]
    fn squarefree_over_z() {
        assert!(ip("x^2 - 5").is_squarefree_over_z());
        assert!(!ip("x^2 - 2*x + 1").is_squarefree_over_z()); // (x-1)^2
        assert!(ip("x^2 - 3*x + 2").is_squarefree_over_z()); // (x-1)(x-2)
        assert!(ip("5").is_squarefree_over_z());
        assert!(!IntPoly::zero().is_squarefree_over_z());
        // content does not fool the primitive PRS
        assert!(!ip("4*x^2 - 8*x + 4").is_squarefree_over_z());
    }

    #[test]
    fn irreducibility_over_fp() {
        assert!(fp_is_irreducible(&fp(3, &[1, 0, 1])).unwrap()); // x^2+1, no root mod 3
        assert!(!fp_is_irreducible(&fp(5, &[1, 0, 1])).unwrap()); // (x-2)(x-3) mod 5
        assert!(fp_is_irreducible(&fp(7, &[4, 1])).unwrap()); // linear
        assert!(!fp_is_irreducible(&fp(2, &[1, 0, 1])).unwrap()); // (x+1)^2
        assert!(fp_is_irreducible(&fp(2, &[1, 1, 1])).unwrap());
    }

    #[test]
    fn root_extraction_matches_evaluation() {
        // small-field brute force path
        let f = reduce_mod_p(&ip("x^2 - 5"), &BigUint::from(11u32)).unwrap();
        let roots: Vec<u64> = fp_distinct_roots(&f)
            .unwrap()
            .iter()
            .map(|r| r.to_u64().unwrap())
            .collect();
        assert_eq!(roots, vec![4, 7]);
        // large-field splitting path
        let p = BigUint::from(1_000_003u64);
        let f = reduce_mod_p(&ip("x^2 - 5"), &p).unwrap();
        let roots = fp_distinct_roots(&f).unwrap();
        for r in &roots {
            assert!(f.eval(r).is_zero());
        }
        assert_eq!(roots.len(), count_roots_mod_p(&ip("x^2 - 5"), &p).unwrap());
        assert!(roots.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn root_extraction_large_field_many_roots() {
        // (x-1)(x-2)(x-3)(x-4) mod a large prime exercises the splitter
        let f = ip("x^4 - 10*x^3 + 35*x^2 - 50*x + 24");
        let p = BigUint::from(999_983u64);
        let fbar = reduce_mod_p(&f, &p).unwrap();
        let roots: Vec<u64> = fp_distinct_roots(&fbar)
            .unwrap()
            .iter()
            .map(|r| r.to_u64().unwrap())
            .collect();
        assert_eq!(roots, vec![1, 2, 3, 4]);
    }

    #[test]
    fn eval_and_derivative() {
        let f = ip("x^3 - 2*x + 1");
        assert_eq!(f.eval(&BigInt::from(3)), BigInt::from(22));
        assert_eq!(f.derivative(), ip("3*x^2 - 2"));
        assert_eq!(f.eval_mod_u64(3, 5), 2);
        assert_eq!(IntPoly::zero().derivative(), IntPoly::zero());
    }

    #[test]
    fn inflate_substitutes_power() {
        assert_eq!(ip("x^2 + x + 1").inflate(3), ip("x^6 + x^3 + 1"));
        assert_eq!(ip("x - 1").inflate(1), ip("x - 1"));
    }
}
