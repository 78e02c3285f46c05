//! Exponents: Cantor-normal-form ordinals and the surinteger group built on them.

mod ordinal;
mod surint;

pub use ordinal::{ord_cmp, Ordinal};
pub use surint::{below_gamma, si_add, si_arch_cmp, si_cmp, si_neg, ArchOrdering, Surinteger};
