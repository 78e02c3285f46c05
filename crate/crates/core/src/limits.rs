//! Process-wide representation caps.

use std::sync::RwLock;

/// Caps on representation size. Exceeding one is reported as
/// [`Error::RepresentationLimit`](crate::Error::RepresentationLimit).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_ordinal_depth: usize,
    pub max_ordinal_terms: usize,
    /// Archimedean blocks per polynomial.
    pub max_blocks: usize,
    /// Degree of a block's generating-function denominator.
    pub max_denominator_degree: usize,
    /// Number of consecutive exponents a block numerator may span.
    pub max_span: usize,
    /// Degree of the coefficient polynomial `P(n)` in a term family.
    pub max_coeff_poly_degree: usize,
}

impl Limits {
    pub const DEFAULT: Limits = Limits {
        max_ordinal_depth: 8,
        max_ordinal_terms: 64,
        max_blocks: 64,
        max_denominator_degree: 64,
        max_span: 1 << 16,
        max_coeff_poly_degree: 16,
    };
}

impl Default for Limits {
    fn default() -> Self {
        Limits::DEFAULT
    }
}

static LIMITS: RwLock<Limits> = RwLock::new(Limits::DEFAULT);

pub fn limits() -> Limits {
    *LIMITS.read().unwrap_or_else(|e| e.into_inner())
}

pub fn set_limits(l: Limits) {
    *LIMITS.write().unwrap_or_else(|e| e.into_inner()) = l;
}
