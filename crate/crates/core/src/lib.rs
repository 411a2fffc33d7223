//! Exact arithmetic for the correspondence between cusp-form period
//! polynomials, Dedekind symbols with polynomial reciprocity laws, and
//! quantum modular forms with polynomial period functions.
//!
//! The crate is organized around the three spaces and the maps between them:
//!
//! - [`polyspace`]: homogeneous polynomial spaces `V_w`, the slash action,
//!   and exact bases of the period-polynomial space `W_w` and the
//!   reciprocity space `U_w`, split by parity.
//! - [`dedekind`]: weight-`w` Dedekind symbols reconstructed from their
//!   reciprocity polynomials, with Hecke operators `T_n^oo`.
//! - [`qmf`]: quantum modular forms on the rationals, the symbol-to-form
//!   map `Psi_w`, the period-polynomial map `H_w`, and Hecke operators.
//! - [`maninhecke`]: the Manin-matrix Hecke action on period polynomials.
//! - [`modgroup`]: `Gamma_0(2)` word decomposition, the eta-like multiplier
//!   system `chi`, coset tables and Schreier generators for `Gamma_0(M)`,
//!   and the multiplier-compatibility machinery for double-coset Hecke
//!   operators.
//! - [`sigma`]: Ramanujan's `sigma(q)` at roots of unity and Zagier's
//!   weight-1 quantum modular form built from it.
//! - [`eichler`]: numerical period polynomials and Eichler integrals of the
//!   discriminant form, bridging the exact bases to an actual cusp form.
//!
//! All algebraic identities are checked in exact rational arithmetic;
//! floating point appears only where a transcendental object (`sigma(q)`,
//! L-values of Delta) forces it.

pub mod dedekind;
pub mod eichler;
pub mod exactnum;
pub mod maninhecke;
pub mod modgroup;
pub mod polyspace;
pub mod qmf;
pub mod report;
pub mod sigma;
pub mod suites;

pub(crate) mod linalg;
pub(crate) mod series;

pub use exactnum::{Cplx, Mat2Z, Rat, Zeta24};
pub use polyspace::HomPoly;
