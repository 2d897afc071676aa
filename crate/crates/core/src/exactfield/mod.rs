//! Exact arithmetic in K(u) and K(u)[y]/(y² − P(u)) over K = ℚ(√d),
//! with derivation models realizing d/dz, divisor computation on the
//! carrier, sharing reports and the auxiliary functions of value-sharing
//! arguments.

pub mod coeff;
pub mod divisor;
pub mod func;
pub mod mues;
pub mod poly;
pub mod sharing;

pub use coeff::Coeff;
pub use divisor::{divisor, place_degree, poles_of, zeros_of, Place};
pub use func::{ExactFunc, Model};
pub use mues::{
    aux_identity, mues_psi, phi_pair, AuxPreset, AuxReport, AuxVerdict, ExactFieldError,
};
pub use poly::Poly;
pub use sharing::{sharing_report, MultPattern, SharedLocation, SharedValue};
