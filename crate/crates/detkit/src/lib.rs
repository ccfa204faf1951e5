//! Exact arithmetic and verification machinery for determinant families of
//! binomial-coefficient matrices: matrix builders, fraction-free determinant
//! engines, closed-form evaluators, identity verifiers, recurrence guessing,
//! and a parameter-space scanner.
//!
//! Everything is exact: rationals of arbitrary precision, polynomials over
//! them, and factored scalars that track prime powers and a sqrt(pi)
//! exponent. No floating point anywhere.

pub mod exact;
pub mod poly;
pub mod families;
pub mod detengine;
pub mod closedforms;
pub mod verify;
pub mod guess;
pub mod scan;

pub use exact::{Rat, FactoredScalar};
pub use poly::{Poly, MPoly, LaurentPoly, RatFunc};
pub use families::{FamilySpec, Matrix};
