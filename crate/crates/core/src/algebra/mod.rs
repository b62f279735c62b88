//! Exact integer polynomial and form algebra.

pub mod arith;
pub mod factor;
pub mod form;
pub mod poly;
pub mod resultant;
pub mod roots;

pub use arith::{divisors, integer_sqrt_exact, signed_divisors, squarefree_integer};
pub use factor::{factor_form, factor_univariate_deg_le4, Factorization, FormFactorization};
pub use form::{form_substitute, homogenize, BinaryForm, TernaryQuadratic};
pub use poly::{poly_arith, PolyOp, UniPoly};
pub use resultant::{discriminant, is_squarefree_poly, poly_gcd, resultant};
pub use roots::{integer_roots, rational_roots};
