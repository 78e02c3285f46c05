//! Quotient rings `ℚ[X^(ℤ∞⁺)] / (m)` on canonical remainders.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::division::{binomial, divmod, ext_gcd};
use crate::error::Error;
use crate::exponents::Surinteger;
use crate::napoly::NakedPoly;
use crate::ratpoly::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus {
    poly: NakedPoly,
    asserted_irreducible: bool,
}

impl Modulus {
    pub fn new(poly: NakedPoly, asserted_irreducible: bool) -> Result<Arc<Modulus>, Error> {
        match poly.degree() {
            Err(_) => Err(Error::InvalidModulus("the zero polynomial".into())),
            Ok(d) if d.is_zero() => Err(Error::InvalidModulus(
                "a constant generates the whole ring".into(),
            )),
            Ok(_) => Ok(Arc::new(Modulus {
                poly,
                asserted_irreducible,
            })),
        }
    }

    pub fn poly(&self) -> &NakedPoly {
        &self.poly
    }

    pub fn asserted_irreducible(&self) -> bool {
        self.asserted_irreducible
    }
}

/// `X^α − c`, the modulus adjoining an α-th root of `c`.
pub fn root_adjoin(alpha: &Surinteger, c: &Q, irreducible: bool) -> Result<Arc<Modulus>, Error> {
    Modulus::new(binomial(alpha, c)?, irreducible)
}

/// `X² + 1`.
pub fn complex_unit_modulus() -> Arc<Modulus> {
    root_adjoin(&Surinteger::from(2), &Q::from_integer((-1).into()), true)
        .expect("X^2 + 1 is a valid modulus")
}

/// A residue class, held by its canonical remainder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotElem {
    rep: NakedPoly,
    modulus: Arc<Modulus>,
}

impl QuotElem {
    pub fn rep(&self) -> &NakedPoly {
        &self.rep
    }

    pub fn modulus(&self) -> &Arc<Modulus> {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

pub fn reduce(p: &NakedPoly, m: &Arc<Modulus>, budget: usize) -> Result<QuotElem, Error> {
    let t = divmod(p, &m.poly, budget)?.into_complete()?;
    Ok(QuotElem {
        rep: t.remainder,
        modulus: Arc::clone(m),
    })
}

pub fn congruent(p: &NakedPoly, q: &NakedPoly, m: &Arc<Modulus>, budget: usize) -> Result<bool, Error> {
    Ok(reduce(&p.sub(q)?, m, budget)?.is_zero())
}

fn same_modulus(a: &QuotElem, b: &QuotElem) -> Result<(), Error> {
    if Arc::ptr_eq(&a.modulus, &b.modulus) || a.modulus == b.modulus {
        Ok(())
    } else {
        Err(Error::ModulusMismatch)
    }
}

pub fn q_add(a: &QuotElem, b: &QuotElem, budget: usize) -> Result<QuotElem, Error> {
    same_modulus(a, b)?;
    reduce(&a.rep.add(&b.rep)?, &a.modulus, budget)
}

pub fn q_neg(a: &QuotElem) -> QuotElem {
    QuotElem {
        rep: a.rep.neg(),
        modulus: Arc::clone(&a.modulus),
    }
}

pub fn q_mul(a: &QuotElem, b: &QuotElem, budget: usize) -> Result<QuotElem, Error> {
    same_modulus(a, b)?;
    reduce(&a.rep.mul(&b.rep)?, &a.modulus, budget)
}

/// The inverse class via the Bézout identity with the modulus.
pub fn q_inv(a: &QuotElem, budget: usize) -> Result<QuotElem, Error> {
    if a.is_zero() {
        return Err(Error::NotInvertible {
            witness: "the zero class".into(),
        });
    }
    let b = ext_gcd(&a.rep, &a.modulus.poly, budget)?;
    if !b.g.is_one() {
        return Err(Error::NotInvertible {
            witness: b.g.to_string(),
        });
    }
    let inv = reduce(&b.u, &a.modulus, budget)?;
    if !q_mul(a, &inv, budget)?.rep.is_one() {
        return Err(Error::Internal("inverse failed to multiply back to 1".into()));
    }
    Ok(inv)
}

/// Order of canonical representatives.
pub fn q_cmp(a: &QuotElem, b: &QuotElem) -> Result<Ordering, Error> {
    same_modulus(a, b)?;
    Ok(a.rep.cmp_poly(&b.rep))
}
