//! Generators of power integral bases in quartic fields.
//!
//! The index form equation of a quartic field is reduced to a cubic resolvent equation
//! and quartic Thue equations, solved exactly where the form allows and by bounded
//! search otherwise. Results are cross-checked against discriminant ratios.

pub mod algebra;
pub mod error;
pub mod families;
pub mod oracle;
pub mod pipeline;
pub mod reduction;
pub mod scan;
pub mod serial;
pub mod thue;

pub use error::{Error, Result};
pub use reduction::{ElementTriple, QuarticPoly, ReductionProblem};
