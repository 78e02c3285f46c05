//! Surintegers: finite formal sums `Σ ω^αᵢ·zᵢ` with integer coefficients.
//!
//! Addition is termwise on the formal ω-polynomial, which makes the
//! surintegers an ordered abelian group. The order is decided by the sign of
//! the leading coefficient of the difference.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

use super::ordinal::{write_power, Ordinal};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Surinteger {
    terms: Vec<(Ordinal, BigInt)>,
}

/// Relative size of two positive surintegers up to finite multiples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArchOrdering {
    Lower,
    Same,
    Higher,
}

impl Surinteger {
    pub fn zero() -> Self {
        Surinteger { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from(1i64)
    }

    pub fn omega() -> Self {
        Self::omega_pow(Ordinal::one())
    }

    pub fn omega_pow(exponent: Ordinal) -> Self {
        Surinteger {
            terms: vec![(exponent, BigInt::one())],
        }
    }

    /// Builds a surinteger from terms, requiring strictly decreasing exponents
    /// and nonzero coefficients.
    pub fn from_terms(terms: Vec<(Ordinal, BigInt)>) -> Result<Self, Error> {
        if terms.iter().any(|(_, c)| c.is_zero()) {
            return Err(Error::InvalidExponent(
                "surinteger terms must have nonzero coefficients".into(),
            ));
        }
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::InvalidExponent(
                "surinteger exponents must be strictly decreasing".into(),
            ));
        }
        for (e, _) in &terms {
            e.check_caps()?;
        }
        Ok(Surinteger { terms })
    }

    /// Sums terms that may arrive unsorted or with repeated exponents.
    pub fn from_unsorted(mut terms: Vec<(Ordinal, BigInt)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Ordinal, BigInt)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Surinteger { terms: out }
    }

    pub fn terms(&self) -> &[(Ordinal, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn signum(&self) -> Sign {
        match self.terms.first() {
            None => Sign::NoSign,
            Some((_, c)) => c.sign(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Sign::Plus
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Sign::Minus
    }

    /// True when the value is an ordinary integer.
    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.is_zero())
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|(e, _)| e)
    }

    /// The coefficient of `ω⁰`.
    pub fn finite_part(&self) -> BigInt {
        match self.terms.last() {
            Some((e, c)) if e.is_zero() => c.clone(),
            _ => BigInt::zero(),
        }
    }

    /// Everything except the `ω⁰` term. Two surintegers with the same head
    /// differ by an ordinary integer.
    pub fn head(&self) -> Surinteger {
        let mut terms = self.terms.clone();
        if matches!(terms.last(), Some((e, _)) if e.is_zero()) {
            terms.pop();
        }
        Surinteger { terms }
    }

    /// `head + k` for an integer `k`; `self` must have no finite part.
    pub fn with_finite_part(&self, k: &BigInt) -> Surinteger {
        let mut terms = self.head().terms;
        if !k.is_zero() {
            terms.push((Ordinal::zero(), k.clone()));
        }
        Surinteger { terms }
    }

    pub fn add_int(&self, k: &BigInt) -> Surinteger {
        self.with_finite_part(&(self.finite_part() + k))
    }

    pub fn mul_int(&self, k: &BigInt) -> Surinteger {
        if k.is_zero() {
            return Surinteger::zero();
        }
        Surinteger {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * k))
                .collect(),
        }
    }

    /// Converts to an ordinal when every coefficient is positive.
    pub fn to_ordinal(&self) -> Option<Ordinal> {
        if self.terms.iter().any(|(_, c)| !c.is_positive()) {
            return None;
        }
        Some(Ordinal::from_terms_unchecked(
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), c.magnitude().clone()))
                .collect(),
        ))
    }

    pub fn to_i64(&self) -> Option<i64> {
        if !self.is_finite() {
            return None;
        }
        i64::try_from(self.finite_part()).ok()
    }

    pub(crate) fn check_caps(&self) -> Result<(), Error> {
        Ordinal::from_terms_unchecked(
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), c.magnitude().clone()))
                .collect(),
        )
        .check_caps()
    }
}

impl From<i64> for Surinteger {
    fn from(n: i64) -> Self {
        Surinteger::from(BigInt::from(n))
    }
}

impl From<BigInt> for Surinteger {
    fn from(n: BigInt) -> Self {
        if n.is_zero() {
            Surinteger::zero()
        } else {
            Surinteger {
                terms: vec![(Ordinal::zero(), n)],
            }
        }
    }
}

impl From<&Ordinal> for Surinteger {
    fn from(o: &Ordinal) -> Self {
        Surinteger {
            terms: o
                .terms()
                .iter()
                .map(|(e, c)| (e.clone(), BigInt::from(c.clone())))
                .collect(),
        }
    }
}

fn merge(a: &[(Ordinal, BigInt)], b: &[(Ordinal, BigInt)], negate_b: bool) -> Vec<(Ordinal, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let sign = |c: &BigInt| if negate_b { -c } else { c.clone() };
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some((ea, _)), Some((eb, _))) => ea.cmp(eb),
            (Some(_), None) => Ordering::Greater,
            (None, _) => Ordering::Less,
        };
        match ord {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((b[j].0.clone(), sign(&b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = &a[i].1 + sign(&b[j].1);
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Termwise sum.
pub fn si_add(a: &Surinteger, b: &Surinteger) -> Surinteger {
    Surinteger {
        terms: merge(&a.terms, &b.terms, false),
    }
}

pub fn si_neg(a: &Surinteger) -> Surinteger {
    Surinteger {
        terms: a.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
    }
}

/// Total order: the sign of the leading term of `a − b`.
pub fn si_cmp(a: &Surinteger, b: &Surinteger) -> Ordering {
    for ((ea, ca), (eb, cb)) in a.terms.iter().zip(&b.terms) {
        match ea.cmp(eb) {
            Ordering::Greater => return sign_to_ord(ca.sign()),
            Ordering::Less => return sign_to_ord(cb.sign()).reverse(),
            Ordering::Equal => match ca.cmp(cb) {
                Ordering::Equal => continue,
                other => return other,
            },
        }
    }
    let n = a.terms.len().min(b.terms.len());
    match (a.terms.get(n), b.terms.get(n)) {
        (Some((_, c)), None) => sign_to_ord(c.sign()),
        (None, Some((_, c))) => sign_to_ord(c.sign()).reverse(),
        _ => Ordering::Equal,
    }
}

fn sign_to_ord(s: Sign) -> Ordering {
    match s {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// Compares the Archimedean classes of two positive surintegers: `a` is
/// `Lower` than `b` when no finite multiple of `a` reaches `b`.
pub fn si_arch_cmp(a: &Surinteger, b: &Surinteger) -> Result<ArchOrdering, Error> {
    for x in [a, b] {
        if !x.is_positive() {
            return Err(Error::NonPositive(x.to_string()));
        }
    }
    let (ea, eb) = (a.leading_exponent(), b.leading_exponent());
    Ok(match ea.cmp(&eb) {
        Ordering::Less => ArchOrdering::Lower,
        Ordering::Equal => ArchOrdering::Same,
        Ordering::Greater => ArchOrdering::Higher,
    })
}

/// Whether `a` lies in the additive monoid below the γ-number `ω^η`: zero, or a
/// value whose leading ω-exponent is below `η`. This is the reading under which
/// the set is closed under addition.
pub fn below_gamma(a: &Surinteger, eta: &Ordinal) -> bool {
    match a.leading_exponent() {
        None => true,
        Some(e) => e < eta,
    }
}

impl Ord for Surinteger {
    fn cmp(&self, other: &Self) -> Ordering {
        si_cmp(self, other)
    }
}

impl PartialOrd for Surinteger {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Surinteger {
    type Output = Surinteger;
    fn add(self, rhs: &Surinteger) -> Surinteger {
        si_add(self, rhs)
    }
}

impl Add for Surinteger {
    type Output = Surinteger;
    fn add(self, rhs: Surinteger) -> Surinteger {
        si_add(&self, &rhs)
    }
}

impl Sub for &Surinteger {
    type Output = Surinteger;
    fn sub(self, rhs: &Surinteger) -> Surinteger {
        Surinteger {
            terms: merge(&self.terms, &rhs.terms, true),
        }
    }
}

impl Sub for Surinteger {
    type Output = Surinteger;
    fn sub(self, rhs: Surinteger) -> Surinteger {
        &self - &rhs
    }
}

impl Neg for &Surinteger {
    type Output = Surinteger;
    fn neg(self) -> Surinteger {
        si_neg(self)
    }
}

impl Neg for Surinteger {
    type Output = Surinteger;
    fn neg(self) -> Surinteger {
        si_neg(&self)
    }
}

impl fmt::Display for Surinteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_power(f, e, c.magnitude())?;
        }
        Ok(())
    }
}
