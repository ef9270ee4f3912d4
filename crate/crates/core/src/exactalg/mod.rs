//! Exact arithmetic: rationals, polynomials, matrices and small number fields.

pub mod linalg;
pub mod matrix;
pub mod multipoly;
pub mod ratfunc;
pub mod ring;
pub mod surd;
pub mod unipoly;

pub use matrix::Matrix;
pub use multipoly::MultiPoly;
pub use ratfunc::RationalFunction;
pub use ring::{int, rat, Field, Rational, Ring};
pub use surd::{Surd, SurdField};
pub use unipoly::UniPoly;
