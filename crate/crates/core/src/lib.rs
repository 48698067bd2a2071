//! Singular value decomposition of the Fourier transform truncated to
//! `[-c, c]` on `L²(cosh(b·))`, eigenvalue bounds for the associated sech
//! convolution operator, and spectral cut-off extrapolation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod commuting_ode;
pub mod error;
pub mod extrapolation;
pub mod linalg;
pub mod pswf;
pub mod sech_operator;
pub mod special_functions;
pub mod svd_assembly;

pub use error::{Error, Result};
