//! Witness search, certificate assembly, and independent verification.
//!
//! A prime `p` is accepted as a semi-split witness for the field defined
//! by a monic squarefree `f` exactly when `f mod p` is squarefree and has
//! a root in `F_p`.  Squarefreeness forces `p` away from the discriminant,
//! so every accepted witness is unconditionally sound; ramified primes
//! that happen to be semi-split are conservatively rejected.  A
//! certificate for `(f, n)` holds one witness per canonical generator of
//! `(Z/nZ)*`; verification recomputes every check from scratch and never
//! reuses the search path.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{self, primes_in_class, unit_group_generators, ResidueClass};
use crate::error::{Error, Result};
use crate::exec;
use crate::poly::{self, IntPoly};

/// Default ceiling for witness searches, overridable per call.
pub const DEFAULT_SEARCH_BOUND: u64 = 1_000_000;

/// Warning recorded when no witness prime happened to prove the field
/// polynomial irreducible over `Q`.  The recorded arithmetic facts still
/// hold; a reducible polynomial only weakens the reading of `K` to the
/// field of one of its irreducible factors.
pub const WARN_FIELD_POLY_UNCONFIRMED: &str =
    "field polynomial not confirmed irreducible over Q by any witness prime";

// Largest modulus for which generator closure is enumerated and failure
// censuses are bucketed.
const MAX_CERTIFY_MODULUS: u64 = 10_000_000;

/// A number field `Q(alpha)` presented by the monic squarefree minimal
/// polynomial of an integral generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberFieldSpec {
    f: IntPoly,
    label: Option<String>,
}

impl NumberFieldSpec {
    /// Accepts a monic polynomial of degree >= 1 that is squarefree over
    /// the integers.  Irreducibility over `Q` is taken on the caller's
    /// word and double-checked opportunistically during certification.
    pub fn new(f: IntPoly) -> Result<Self> {
        if f.degree().map_or(true, |d| d < 1) || !f.is_monic() {
            return Err(Error::contract(
                "field polynomial must be monic of degree >= 1",
            ));
        }
        if !f.is_squarefree_over_z() {
            return Err(Error::contract(
                "field polynomial must be squarefree over Z",
            ));
        }
        Ok(NumberFieldSpec { f, label: None })
    }

    pub fn with_label(f: IntPoly, label: impl Into<String>) -> Result<Self> {
        let mut spec = Self::new(f)?;
        spec.label = Some(label.into());
        Ok(spec)
    }

    /// Parses the canonical text form and validates it as a field polynomial.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(text.parse()?)
    }

    pub fn poly(&self) -> &IntPoly {
        &self.f
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.f.degree().expect("degree >= 1 by construction")
    }
}

/// A prime `p` in a prescribed residue class, proven semi-split by a root
/// of `f mod p` with `f mod p` squarefree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SemiSplitWitness {
    pub p: u64,
    pub root: u64,
    pub class: ResidueClass,
}

/// One witness per canonical generator of `(Z/nZ)*`; a sound proof that
/// the n-th cyclotomic polynomial is irreducible over the field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityCertificate {
    field: NumberFieldSpec,
    n: u64,
    search_bound: u64,
    generators: Vec<ResidueClass>,
    witnesses: Vec<SemiSplitWitness>,
    warnings: Vec<String>,
}

impl IrreducibilityCertificate {
    pub fn field(&self) -> &NumberFieldSpec {
        &self.field
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn search_bound(&self) -> u64 {
        self.search_bound
    }

    pub fn generators(&self) -> &[ResidueClass] {
        &self.generators
    }

    pub fn witnesses(&self) -> &[SemiSplitWitness] {
        &self.witnesses
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// The invertible classes mod `n` exhausted without a witness.  Not a
/// proof of reducibility: it only says no qualifying prime exists below
/// the bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificationFailure {
    pub missing_classes: Vec<ResidueClass>,
    pub search_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertifyOutcome {
    Certified(IrreducibilityCertificate),
    Failed(CertificationFailure),
}

impl CertifyOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, CertifyOutcome::Certified(_))
    }

    pub fn certificate(&self) -> Option<&IrreducibilityCertificate> {
        match self {
            CertifyOutcome::Certified(c) => Some(c),
            CertifyOutcome::Failed(_) => None,
        }
    }

    pub fn failure(&self) -> Option<&CertificationFailure> {
        match self {
            CertifyOutcome::Certified(_) => None,
            CertifyOutcome::Failed(f) => Some(f),
        }
    }
}

// Acceptance test without root extraction; used by the bulk scans.
fn accepts_witness(field: &NumberFieldSpec, p: u64) -> Result<bool> {
    let pb = BigUint::from(p);
    if !poly::is_squarefree_mod_p(field.poly(), &pb)? {
        return Ok(false);
    }
    Ok(poly::count_roots_mod_p(field.poly(), &pb)? >= 1)
}

/// The smallest root of `f mod p` when `f mod p` is squarefree and has
/// one; such a `p` is provably semi-split in the field.
pub fn check_witness(field: &NumberFieldSpec, p: u64) -> Result<Option<u64>> {
    if !arith::is_prime_u64(p) {
        return Err(Error::contract(format!("{p} is not prime")));
    }
    let pb = BigUint::from(p);
    if !poly::is_squarefree_mod_p(field.poly(), &pb)? {
        return Ok(None);
    }
    let fbar = poly::reduce_mod_p(field.poly(), &pb)?;
    let roots = poly::fp_distinct_roots(&fbar)?;
    Ok(roots
        .first()
        .map(|r| r.to_u64().expect("root fits in u64 since p does")))
}

/// The witness with the smallest qualifying prime `p <= bound` in the
/// given invertible class, if any.
pub fn find_witness(
    field: &NumberFieldSpec,
    class: &ResidueClass,
    bound: u64,
) -> Result<Option<SemiSplitWitness>> {
    for p in primes_in_class(class, bound)? {
        if let Some(root) = check_witness(field, p)? {
            return Ok(Some(SemiSplitWitness {
                p,
                root,
                class: *class,
            }));
        }
    }
    Ok(None)
}

/// All primes up to a bound with their witness-acceptance flags; the
/// acceptance of a prime does not depend on any modulus, so one scan
/// serves every census.
#[derive(Clone, Debug)]
pub struct WitnessScan {
    bound: u64,
    primes: Vec<u64>,
    accepted: Vec<bool>,
}

impl WitnessScan {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn total_primes(&self) -> u64 {
        self.primes.len() as u64
    }

    pub fn accepted_count(&self) -> u64 {
        self.accepted.iter().filter(|&&a| a).count() as u64
    }

    /// The accepted primes, ascending.
    pub fn accepted_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes
            .iter()
            .zip(&self.accepted)
            .filter_map(|(&p, &ok)| ok.then_some(p))
    }
}

fn scan_with<F>(field: &NumberFieldSpec, bound: u64, map: F) -> Result<WitnessScan>
where
    F: Fn(&[u64], &dyn Fn(&u64) -> Result<bool>) -> Vec<Result<bool>>,
{
    let primes: Vec<u64> = arith::primes(bound).collect();
    let flags = map(&primes, &|&p| accepts_witness(field, p));
    let accepted = flags.into_iter().collect::<Result<Vec<bool>>>()?;
    Ok(WitnessScan {
        bound,
        primes,
        accepted,
    })
}

/// Scans every prime up to `bound` for witness acceptance (in parallel
/// when the `parallel` feature is on).
pub fn witness_scan(field: &NumberFieldSpec, bound: u64) -> Result<WitnessScan> {
    scan_with(field, bound, |items, f| exec::map_ordered(items, f))
}

/// Sequential variant of [`witness_scan`] with identical output.
pub fn witness_scan_seq(field: &NumberFieldSpec, bound: u64) -> Result<WitnessScan> {
    scan_with(field, bound, |items, f| exec::map_ordered_seq(items, f))
}

/// Searches for one witness per canonical generator of `(Z/nZ)*`.
///
/// For `n <= 2` the certificate is trivially empty.  On success the
/// witnesses are the smallest qualifying primes per class (deterministic);
/// on failure the result lists every invertible class mod `n` that
/// contains no accepted prime up to the bound.
pub fn certify(field: &NumberFieldSpec, n: u64, bound: u64) -> Result<CertifyOutcome> {
    if n == 0 {
        return Err(Error::contract("certify requires n >= 1"));
    }
    if n > MAX_CERTIFY_MODULUS {
        return Err(Error::range(format!(
            "certify supports moduli up to {MAX_CERTIFY_MODULUS}, got {n}"
        )));
    }
    let generators = unit_group_generators(n)?;
    let searched = exec::map_ordered(&generators, |class| find_witness(field, class, bound));
    let mut witnesses = Vec::with_capacity(generators.len());
    let mut exhausted = false;
    for result in searched {
        match result? {
            Some(w) => witnesses.push(w),
            None => exhausted = true,
        }
    }
    if exhausted {
        // Census over every invertible class, sharing one scan of the
        // primes up to the bound.
        let scan = witness_scan(field, bound)?;
        let mut populated = vec![false; n as usize];
        for p in scan.accepted_primes() {
            populated[(p % n) as usize] = true;
        }
        let mut missing = Vec::new();
        for a in 0..n {
            if arith::gcd_u64(a, n) == 1 && !populated[a as usize] {
                missing.push(ResidueClass::new(a, n)?);
            }
        }
        return Ok(CertifyOutcome::Failed(CertificationFailure {
            missing_classes: missing,
            search_bound: bound,
        }));
    }
    debug_assert!(witnesses.iter().all(|w| n % w.p != 0 || w.p > n));
    let warnings = if field_poly_confirmed(field, &witnesses)? {
        Vec::new()
    } else {
        vec![WARN_FIELD_POLY_UNCONFIRMED.to_string()]
    };
    Ok(CertifyOutcome::Certified(IrreducibilityCertificate {
        field: field.clone(),
        n,
        search_bound: bound,
        generators,
        witnesses,
        warnings,
    }))
}

// A single witness prime with f mod p irreducible proves f irreducible
// over Q.  Degree-one polynomials need no proof.
fn field_poly_confirmed(
    field: &NumberFieldSpec,
    witnesses: &[SemiSplitWitness],
) -> Result<bool> {
    if field.degree() == 1 {
        return Ok(true);
    }
    for w in witnesses {
        let fbar = poly::reduce_mod_p(field.poly(), &BigUint::from(w.p))?;
        if poly::fp_is_irreducible(&fbar)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Outcome of re-validating a certificate from scratch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    ok: bool,
    reasons: Vec<String>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.ok
    }

    pub fn reasons(&self) -> &[String] {
        &self.reasons
    }
}

fn closure_generates(generators: &[ResidueClass], n: u64) -> bool {
    let mut seen = vec![false; n as usize];
    let start = 1 % n;
    seen[start as usize] = true;
    let mut frontier = vec![start];
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = arith::mul_mod_u64(x, g.residue(), n);
            if !seen[y as usize] {
                seen[y as usize] = true;
                frontier.push(y);
            }
        }
    }
    (0..n).all(|a| seen[a as usize] == (arith::gcd_u64(a, n) == 1))
}

/// Re-validates every structural invariant of a certificate without
/// reusing any part of the search path: generators are closed over to the
/// full unit group, witness primes are re-tested for primality, class
/// membership and squarefreeness, and each recorded root is re-evaluated
/// directly.
pub fn verify_certificate(cert: &IrreducibilityCertificate) -> VerificationReport {
    let mut reasons: Vec<String> = Vec::new();
    let f = cert.field.poly();
    if f.degree().map_or(true, |d| d < 1) || !f.is_monic() {
        reasons.push("field polynomial is not monic of degree >= 1".into());
    }
    if !f.is_squarefree_over_z() {
        reasons.push("field polynomial is not squarefree over Z".into());
    }
    let n = cert.n;
    if n == 0 {
        reasons.push("modulus n must be positive".into());
        return VerificationReport {
            ok: false,
            reasons,
        };
    }
    if n > MAX_CERTIFY_MODULUS {
        reasons.push(format!(
            "modulus {n} too large to verify generators by closure"
        ));
        return VerificationReport {
            ok: false,
            reasons,
        };
    }
    for g in &cert.generators {
        if g.modulus() != n {
            reasons.push(format!("generator {g} has modulus different from n = {n}"));
        } else if !g.is_invertible() {
            reasons.push(format!("generator {g} is not invertible"));
        }
    }
    if cert.generators.iter().all(|g| g.modulus() == n) && !closure_generates(&cert.generators, n)
    {
        reasons.push("generators do not generate (Z/nZ)*".into());
    }
    if cert.witnesses.len() != cert.generators.len() {
        reasons.push(format!(
            "expected {} witnesses, found {}",
            cert.generators.len(),
            cert.witnesses.len()
        ));
    }
    for (i, w) in cert.witnesses.iter().enumerate() {
        let tag = format!("witness {} (p = {})", i + 1, w.p);
        match cert.generators.get(i) {
            Some(g) if *g != w.class => {
                reasons.push(format!("{tag}: class does not match generator {g}"));
            }
            None => reasons.push(format!("{tag}: no matching generator")),
            _ => {}
        }
        if !arith::is_prime_u64(w.p) {
            reasons.push(format!("{tag}: p is not prime"));
            continue;
        }
        if w.p > cert.search_bound {
            reasons.push(format!("{tag}: p exceeds the search bound"));
        }
        if w.p % w.class.modulus() != w.class.residue() {
            reasons.push(format!("{tag}: p is not in the class {}", w.class));
        }
        if n % w.p == 0 {
            reasons.push(format!("{tag}: p divides n"));
        }
        if w.root >= w.p {
            reasons.push(format!("{tag}: root {} out of range", w.root));
            continue;
        }
        match poly::is_squarefree_mod_p(f, &BigUint::from(w.p)) {
            Ok(true) => {}
            Ok(false) => reasons.push(format!("{tag}: f mod p is not squarefree")),
            Err(e) => reasons.push(format!("{tag}: squarefreeness check failed: {e}")),
        }
        if f.eval_mod_u64(w.root, w.p) != 0 {
            reasons.push(format!("{tag}: root check failed, f({}) != 0 mod p", w.root));
        }
    }
    VerificationReport {
        ok: reasons.is_empty(),
        reasons,
    }
}

/// On-disk certificate format, version 1.
pub const CERTIFICATE_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CertificateDoc {
    version: u32,
    field_poly: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    label: Option<String>,
    n: u64,
    search_bound: u64,
    generators: Vec<GeneratorDoc>,
    witnesses: Vec<WitnessDoc>,
    warnings: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct GeneratorDoc {
    a: u64,
    n: u64,
}

#[derive(Serialize, Deserialize)]
struct WitnessDoc {
    p: u64,
    root: u64,
    class_a: u64,
}

impl IrreducibilityCertificate {
    /// Canonical JSON rendering; serialize/parse round trips are
    /// bit-exact.
    pub fn to_json_string(&self) -> String {
        let doc = CertificateDoc {
            version: CERTIFICATE_FORMAT_VERSION,
            field_poly: self.field.poly().to_string(),
            label: self.field.label().map(str::to_owned),
            n: self.n,
            search_bound: self.search_bound,
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorDoc {
                    a: g.residue(),
                    n: g.modulus(),
                })
                .collect(),
            witnesses: self
                .witnesses
                .iter()
                .map(|w| WitnessDoc {
                    p: w.p,
                    root: w.root,
                    class_a: w.class.residue(),
                })
                .collect(),
            warnings: self.warnings.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("certificate serialization cannot fail")
    }

    /// Parses the JSON certificate format; structural problems (wrong
    /// version, impossible moduli, malformed polynomial) are format
    /// errors, while mathematical invalidity is left to
    /// [`verify_certificate`].
    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: CertificateDoc =
            serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        if doc.version != CERTIFICATE_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported certificate version {}",
                doc.version
            )));
        }
        let f: IntPoly = doc
            .field_poly
            .parse()
            .map_err(|e| Error::Format(format!("field_poly: {e}")))?;
        let field = match doc.label {
            Some(label) => NumberFieldSpec::with_label(f, label),
            None => NumberFieldSpec::new(f),
        }
        .map_err(|e| Error::Format(format!("field_poly: {e}")))?;
        if doc.n == 0 {
            return Err(Error::Format("n must be positive".into()));
        }
        let mut generators = Vec::with_capacity(doc.generators.len());
        for g in &doc.generators {
            generators
                .push(ResidueClass::new(g.a, g.n).map_err(|e| Error::Format(e.to_string()))?);
        }
        let mut witnesses = Vec::with_capacity(doc.witnesses.len());
        for w in &doc.witnesses {
            witnesses.push(SemiSplitWitness {
                p: w.p,
                root: w.root,
                class: ResidueClass::new(w.class_a, doc.n)
                    .map_err(|e| Error::Format(e.to_string()))?,
            });
        }
        Ok(IrreducibilityCertificate {
            field,
            n: doc.n,
            search_bound: doc.search_bound,
            generators,
            witnesses,
            warnings: doc.warnings,
        })
    }
}
