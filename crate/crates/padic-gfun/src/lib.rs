//! Traces of Frobenius of elliptic curves over small finite fields via
//! McCarthy's p-adic hypergeometric function nGn, cross-validated against
//! brute-force point counting and an exact cyclotomic Gauss-sum oracle.
//!
//! The crate computes, entirely with exact arithmetic:
//!
//! - arithmetic in F_{p^r} ([`finite_field`]), including curve point counts,
//!   the quadratic character and deterministic root finding;
//! - precision-bounded arithmetic in the unramified extension Q_q of Q_p,
//!   Teichmuller lifts and Morita's p-adic gamma function ([`padic`]);
//! - the hypergeometric-type function nGn built from quotients of p-adic
//!   gamma values ([`gfunction`]);
//! - four closed-form trace-of-Frobenius formulas and the transformation
//!   relations between G-values with different parameters
//!   ([`trace_formulas`]);
//! - direct numeric verification of the supporting gamma-function and
//!   floor-sum identities ([`identity_checks`]);
//! - an independent exact oracle for the character-sum toolbox (Gauss sums,
//!   orthogonality, Davenport-Hasse) in cyclotomic integer rings
//!   ([`cyclotomic`]);
//! - sweep machinery with deterministic csv/json artifacts ([`sweep`]) and a
//!   thin command-line front end ([`cli`]).
//!
//! Start with the `examples/` directory: each example exercises one
//! capability end to end.

pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod finite_field;
pub mod gfunction;
pub mod identity_checks;
pub mod padic;
pub mod sweep;
pub mod trace_formulas;
pub mod verify;

pub use error::{Error, Result};
pub use finite_field::{FieldCtx, FqElem, WeierstrassCurve};
pub use gfunction::{Evaluator, GArgs, GValue};
pub use padic::{PadicCtx, PadicNum, Rat};
