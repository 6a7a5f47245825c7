//! Exact-arithmetic toolkit for certifying irreducibility of cyclotomic
//! polynomials over number fields.
//!
//! The central object is an *irreducibility certificate* for the pair
//! `(f, n)`: for each residue class in a generating set of `(Z/nZ)*` it
//! records a prime `p` in that class together with a root of `f mod p`,
//! with `f mod p` squarefree.  Such a prime is *semi-split* in the field
//! `Q[x]/(f)`, and one witness per generator class proves that the n-th
//! cyclotomic polynomial stays irreducible over that field.  Certificates
//! are searched for, serialized to JSON, and re-verified from scratch.
//!
//! Supporting machinery: deterministic primality and factorization
//! ([`arith`]), exact polynomial arithmetic over `Z` and `F_p` ([`poly`]),
//! cyclotomic polynomial construction ([`cyclotomic`]), the quadratic-field
//! fast path via Legendre/Jacobi symbols and character conductors
//! ([`quadratic`]), and bounded residue-class censuses that scan for the
//! obstructions radical solvability forces ([`solvability`]).
//!
//! With the `parallel` feature (default) the witness scans and per-class
//! searches run on rayon; without it everything runs sequentially with
//! identical results.

pub mod arith;
pub mod certifier;
pub mod cyclotomic;
pub mod error;
mod exec;
pub mod poly;
pub mod quadratic;
pub mod solvability;

pub use error::{Error, Result};
