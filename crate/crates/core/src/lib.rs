//! Exact formal-calculus workbench for tensor products of modules over
//! vertex operator algebras.
//!
//! The library is generic over the coefficient ring through
//! [`scalar::Scalar`]. Concrete aliases for the exact rational and
//! Laurent-in-`z` instantiations live at the crate root.

pub mod dual;
pub mod error;
pub mod instances;
pub mod laurent;
pub mod lemmas;
pub mod linalg;
pub mod scalar;
pub mod series;
pub mod tensor;
pub mod vector;
pub mod vertex;

pub use error::{Error, Result};
pub use scalar::{gen_binom, Scalar, ZParam};

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;

/// Exact Laurent polynomials in the formal parameter `z` over the rationals.
pub type ParamScalar = laurent::Laurent<Rational>;

/// Substitutes `z = z0` into a parameter scalar.
pub fn ps_eval(a: &ParamScalar, z0: &Rational) -> Result<Rational> {
    a.eval(z0)
}
