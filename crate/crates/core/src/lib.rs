//! Twisted q-Euler numbers, polynomials, zeta functions and q-l-functions,
//! evaluated both complex-analytically and through fermionic p-adic
//! integrals in exact modular arithmetic.

pub mod characters;
pub mod cli;
pub mod config;
pub mod cyclotomic;
pub mod error;
pub mod euler;
pub mod lfunctions;
pub mod padic;
mod precise;
pub mod qcore;
pub mod verify;

pub use config::{EvalConfig, OutputFormat};
pub use error::{Error, Result};
pub use qcore::{Exponent, QParam, RootOfUnity, Scalar};
