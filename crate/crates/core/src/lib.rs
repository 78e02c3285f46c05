//! Exact arithmetic on naked polynomials: rational coefficients indexed by
//! surinteger exponents, with transfinite long division, a Euclidean gcd and
//! quotient rings.

pub mod cli;
pub mod division;
pub mod error;
pub mod exponents;
pub mod limits;
pub mod napoly;
pub mod quotient;
pub mod ratpoly;
pub mod textio;

pub use division::{divmod, ext_gcd, norm, DivisionTrace, DEFAULT_BUDGET};
pub use error::Error;
pub use exponents::{Ordinal, Surinteger};
pub use limits::{limits, set_limits, Limits};
pub use napoly::{FamilyLength, NakedPoly, TermFamily};
pub use quotient::{Modulus, QuotElem};
