//! Ordinals below epsilon-zero in Cantor normal form.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::limits::limits;

/// An ordinal `ω^a₁·c₁ + ω^a₂·c₂ + …` with `a₁ > a₂ > …` and every `cᵢ ≥ 1`.
///
/// The empty term list is the ordinal zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, BigUint)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from(1u64)
    }

    /// The ordinal `ω`.
    pub fn omega() -> Self {
        Self::omega_pow(Self::one())
    }

    /// `ω^exponent`.
    pub fn omega_pow(exponent: Ordinal) -> Self {
        Ordinal {
            terms: vec![(exponent, BigUint::one())],
        }
    }

    /// Builds an ordinal from CNF terms, checking ordering and the configured caps.
    pub fn from_terms(terms: Vec<(Ordinal, BigUint)>) -> Result<Self, Error> {
        for (i, (_, c)) in terms.iter().enumerate() {
            if c.is_zero() {
                return Err(Error::InvalidExponent(format!(
                    "ordinal term {i} has a zero coefficient"
                )));
            }
        }
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::InvalidExponent(
                "ordinal exponents must be strictly decreasing".into(),
            ));
        }
        let o = Ordinal { terms };
        o.check_caps()?;
        Ok(o)
    }

    /// `ω·a + b`, the shape used for division step labels.
    pub fn omega_times_plus(a: u64, b: u64) -> Self {
        let mut terms = Vec::new();
        if a > 0 {
            terms.push((Ordinal::one(), BigUint::from(a)));
        }
        if b > 0 {
            terms.push((Ordinal::zero(), BigUint::from(b)));
        }
        Ordinal { terms }
    }

    pub(crate) fn from_terms_unchecked(terms: Vec<(Ordinal, BigUint)>) -> Self {
        Ordinal { terms }
    }

    pub fn terms(&self) -> &[(Ordinal, BigUint)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for natural numbers (including zero).
    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.is_zero())
    }

    /// Exponent of the leading ω-power; `None` for zero.
    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|(e, _)| e)
    }

    /// Nesting depth: zero and the naturals have depth 0 and 1, `ω` has depth 2.
    pub fn depth(&self) -> usize {
        self.terms
            .iter()
            .map(|(e, _)| 1 + e.depth())
            .max()
            .unwrap_or(0)
    }

    /// Total number of CNF terms, counted through all nested exponents.
    pub fn term_count(&self) -> usize {
        self.terms.iter().map(|(e, _)| 1 + e.term_count()).sum()
    }

    pub(crate) fn check_caps(&self) -> Result<(), Error> {
        let lim = limits();
        if self.depth() > lim.max_ordinal_depth {
            return Err(Error::RepresentationLimit(format!(
                "ordinal nesting depth {} exceeds cap {}",
                self.depth(),
                lim.max_ordinal_depth
            )));
        }
        if self.term_count() > lim.max_ordinal_terms {
            return Err(Error::RepresentationLimit(format!(
                "ordinal term count {} exceeds cap {}",
                self.term_count(),
                lim.max_ordinal_terms
            )));
        }
        Ok(())
    }

    /// The value as a `u64` if the ordinal is a small natural number.
    pub fn to_u64(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => u64::try_from(c).ok(),
            _ => None,
        }
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![(Ordinal::zero(), BigUint::from(n))],
            }
        }
    }
}

/// Cantor normal forms compare lexicographically on `(exponent, coefficient)`.
pub fn ord_cmp(a: &Ordinal, b: &Ordinal) -> Ordering {
    for ((ea, ca), (eb, cb)) in a.terms.iter().zip(&b.terms) {
        match ord_cmp(ea, eb).then_with(|| ca.cmp(cb)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.terms.len().cmp(&b.terms.len())
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        ord_cmp(self, other)
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write_power(f, e, c)?;
        }
        Ok(())
    }
}

/// Writes `c*w^(e)` with the short forms `w`, `c*w` and bare `c`.
pub(crate) fn write_power(f: &mut fmt::Formatter<'_>, e: &Ordinal, c: &BigUint) -> fmt::Result {
    if e.is_zero() {
        return write!(f, "{c}");
    }
    if !c.is_one() {
        write!(f, "{c}*")?;
    }
    if *e == Ordinal::one() {
        f.write_str("w")
    } else {
        write!(f, "w^({e})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w_pow(e: u64, c: u64) -> (Ordinal, BigUint) {
        (Ordinal::from(e), BigUint::from(c))
    }

    #[test]
    fn compare_examples() {
        assert_eq!(ord_cmp(&Ordinal::zero(), &Ordinal::zero()), Ordering::Equal);
        let omega_sq = Ordinal::omega_pow(Ordinal::from(2));
        assert_eq!(ord_cmp(&Ordinal::omega(), &omega_sq), Ordering::Less);

        // ω²·3+ω vs ω²·3+5
        let a = Ordinal::from_terms(vec![w_pow(2, 3), w_pow(1, 1)]).unwrap();
        let b = Ordinal::from_terms(vec![w_pow(2, 3), w_pow(0, 5)]).unwrap();
        assert_eq!(ord_cmp(&a, &b), Ordering::Greater);
    }

    #[test]
    fn rejects_bad_terms() {
        assert!(Ordinal::from_terms(vec![w_pow(1, 1), w_pow(2, 1)]).is_err());
        assert!(Ordinal::from_terms(vec![w_pow(1, 0)]).is_err());
    }

    #[test]
    fn depth_cap_is_enforced() {
        let mut o = Ordinal::one();
        for _ in 0..12 {
            o = Ordinal::omega_pow(o);
        }
        let err = Ordinal::from_terms(o.terms().to_vec()).unwrap_err();
        assert!(matches!(err, Error::RepresentationLimit(_)));
    }

    #[test]
    fn display() {
        let a = Ordinal::from_terms(vec![
            (Ordinal::omega(), BigUint::from(2u32)),
            w_pow(1, 3),
            w_pow(0, 5),
        ])
        .unwrap();
        assert_eq!(a.to_string(), "2*w^(w) + 3*w + 5");
        assert_eq!(Ordinal::omega_times_plus(1, 0).to_string(), "w");
    }
}
