//! Exact arithmetic foundations: big rationals, powers of the 24th root of
//! unity, 2x2 integer matrices, and complex double-precision values.
//!
//! Everything here is immutable after construction and safe to share across
//! threads. Fixed-width integer arithmetic is deliberately absent from the
//! exact paths: symbol evaluation at weight 16 already overflows `i64`.

mod mat2z;
mod rat;
mod zeta24;

pub use mat2z::Mat2Z;
pub use rat::{rat_normalize, Rat, RatExt};
pub use zeta24::Zeta24;

pub(crate) use rat::bigint_pow;

use thiserror::Error;

/// Complex double-precision value, used only for numeric (non-exact) paths.
pub type Cplx = num_complex::Complex64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactNumError {
    #[error("zero denominator")]
    ZeroDenominator,
}
