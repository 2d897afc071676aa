//! Numerical evaluation of the catalog's meromorphic functions: value and
//! first two derivatives, Weierstrass ℘ with lattice construction from a
//! cubic, branch-tracked solutions of the sharing cubic, and the spherical
//! derivative.

pub mod cubic;
pub mod lattice;
pub mod mero;

pub use lattice::{Lattice, MeroError};
pub use mero::{
    MeroWalker,
    chordal, spherical_from, EllipticRational, EvalPoint, ExpRational, MeroFunc, TripleSystem,
};
