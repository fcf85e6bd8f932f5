//! Scalar special functions: gamma, digamma, zeta and derivatives, Stieltjes
//! constants, and the real completed zeta `Xi` on the critical line.
//!
//! Each function carries an independent second route (a different series or
//! formula), used by the test suite to cross-validate the primary one.

mod digamma;
mod gamma;
mod stieltjes;
mod xi;
mod zeta;

pub use digamma::{digamma, digamma_series_oracle};
pub use gamma::{gamma, gamma_real, gamma_stirling_oracle};
pub use stieltjes::{stieltjes, stieltjes_table, StieltjesTable};
pub use xi::xi_critical;
pub use zeta::{zeta, zeta_deriv, zeta_euler_maclaurin};
