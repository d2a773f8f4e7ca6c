//! Exact symbolic computation of Chow forms of additive-group orbit
//! closures.
//!
//! A locally nilpotent derivation on affine n-space generates an algebraic
//! action of the additive group. For generic points the closure of the
//! orbit is a projective curve of degree d; this crate computes its Chow
//! form by an explicit determinant of bilinear incidence forms, entirely in
//! exact rational arithmetic, and analyzes boundary strata and blow-up
//! charts to decide Hausdorff-quotient and properness questions relative to
//! the supplied charts.

pub mod check;
pub mod derivation;
pub mod error;
pub mod gamma;
pub mod limits;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod specfile;
pub mod vars;

pub use derivation::{AffinePoint, Derivation, Substitution, DEFAULT_NILPOTENCY_BOUND};
pub use error::{Error, Result};
pub use gamma::{chow_form, chow_form_at, GammaForm};
pub use poly::{Monomial, MultiPoly};
pub use rational::Rational;
pub use vars::{Var, VarKind, VarTable};
