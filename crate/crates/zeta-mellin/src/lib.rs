//! Numerical verification of Mellin-transform identities on the critical strip.
//!
//! The library has three layers:
//!
//! * [`specialfn`] — the scalar building blocks: gamma, digamma, zeta (with
//!   derivatives), Stieltjes constants, and the real-valued `Xi` function on
//!   the critical line.
//! * [`lambda`] — the subtracted series `lambda1` / `lambda2` whose Mellin
//!   transforms close in terms of `zeta(1-s)` and powers of `csc(pi s)`,
//!   together with their power-series and integral representations.
//! * [`mellin`] / [`xi_integrals`] — forward and inverse Mellin machinery,
//!   residue extraction, and the cosine-kernel `Xi` integral identities, all
//!   driven through [`mellin::verify_identity`] which produces
//!   [`report::VerificationRecord`]s.
//!
//! Every routine returns [`Result`]; numerical trouble (non-convergent
//! quadrature, exhausted series budgets, cancellation past budget) is an
//! error value, never a silently wrong number.

// Reference constants are kept at their full computed precision even where
// f64 cannot hold every digit; the literal documents the value it was frozen
// from.
#![allow(clippy::excessive_precision)]
// Domain guards are written `!(x > 0.0)` on purpose: the negated form also
// rejects NaN, which `x <= 0.0` would wave through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod logpow;
pub mod specialfn;
pub mod quad;
pub mod lambda;
pub mod mellin;
pub mod xi_integrals;
pub mod report;

pub use error::{Error, Result};
pub use mellin::IdentityId;
