//! Scalar special-function kernels.
//!
//! Everything here is a pure function of its arguments; there is no shared
//! mutable state, so concurrent use from any number of threads is safe.

mod bessel;
mod gamma;
mod gegenbauer;
mod hyp2f1;

pub use bessel::bessel_k;
pub use gamma::{beta, ln_gamma, pochhammer};
pub use gegenbauer::gegenbauer_all;
pub use hyp2f1::{hyp2f1, hyp2f1_shift_a, Hyp2F1Args};

pub(crate) use gamma::{digamma, gamma_signed, rgamma};
pub(crate) use hyp2f1::{hyp2f1_near_unit, hyp2f1_raw, is_nonpos_int};
