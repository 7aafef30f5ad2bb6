//! Minimal degrees of fields of definition of prime-degree isogenies of
//! non-CM elliptic curves with rational `j`-invariant, computed as orbit
//! sizes of the admissible mod-`p` Galois images acting on `P¹(F_p)`.
//!
//! The crate never instantiates a curve. Everything reduces to finite group
//! theory inside `GL2(F_p)`:
//!
//! * [`field`]: `F_p` and `F_p(√ε)` arithmetic.
//! * [`gl2`]: matrices and generator-closure subgroups.
//! * [`catalog`]: the Borel, non-split Cartan, its normalizer and powers.
//! * [`action`]: orbits and stabilizers on lines and on nonzero vectors.
//! * [`degrees`]: per-prime degree lower bounds.
//! * [`isogeny_sets`]: the prime sets `I_Q(d)` and their bounds.
//! * [`oracle`]: brute-force enumeration for `p ≤ 31`.
//! * [`verify`]: the consistency suites behind `isodeg verify`.
//! * [`output`]: the structured output records emitted by the CLI.

pub mod action;
pub mod catalog;
pub mod degrees;
pub mod error;
pub mod field;
pub mod gl2;
pub mod isogeny_sets;
pub mod oracle;
pub mod output;
pub mod verify;

pub use error::{Error, Result};
