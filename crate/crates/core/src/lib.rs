//! Exact and numerical laboratory for value sharing of meromorphic functions.
//!
//! The crate has two arms. The exact arm ([`exactfield`]) does arithmetic in
//! rational function fields K(u) and quadratic extensions K(u)[y]/(y² − P(u))
//! over K = ℚ(√d), which is enough to verify sharing patterns and
//! auxiliary-function identities of the classical four-value counterexamples
//! by polynomial factor comparison. The numerical arm ([`meroeval`],
//! [`nevanlinna`]) evaluates the same functions on ℂ and estimates the
//! Nevanlinna functionals T, m, N, N̄, N_s on radius grids. [`theorems`]
//! turns the classical statements into grid-checkable predicates, and
//! [`catalog`] holds the example pairs and triple in both forms.

pub mod catalog;
pub mod exactfield;
pub mod meroeval;
pub mod nevanlinna;
pub mod theorems;
