//! Fixed-precision p-adic and cyclotomic p-adic arithmetic, and the
//! fermionic invariant integral evaluated as stabilised level sums.

mod cyclo;
mod int;
mod integral;

pub use cyclo::{cyclotomic_degree, CycloPadic};
pub use int::{PadicInt, MAX_MODULUS};
pub use integral::{
    fermionic_integral, level_sum, shift_boundary, shift_defect, twisted_moment, twisted_q_moment, FermionicMeasure,
    Integral, MeasureKind, PadicSettings, TwistedTerm, DEFAULT_LEVEL_CAP, MAX_SUMMANDS,
};
