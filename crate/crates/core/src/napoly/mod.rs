//! Naked polynomials: ℚ-valued functions on nonnegative surintegers whose
//! support has a maximum in every nonempty subset.
//!
//! Every exponent splits as `head + k` where `head` carries the infinite
//! part and `k` is an ordinary integer. All exponents sharing a head form one
//! *block*; inside a block the coefficients descend along the integers, so a
//! block is a formal power series in `t = X⁻¹`:
//!
//! ```text
//!   X^(head + top) · N(t) / D(t),   D(0) = 1, N(0) ≠ 0, gcd(N, D) = 1
//! ```
//!
//! That fraction is unique, which makes equality structural. The head-zero
//! block holds the ordinary polynomial part and always has `D = 1`. Term
//! families (`Σ P(n)·ρⁿ·X^(e − d·n)`) are the user-facing view of a block and
//! are computed on demand in [`family`].

mod cursor;
mod family;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use cursor::TermCursor;
pub use family::{Component, FamilyLength, SeriesBlock, TermFamily};

use crate::error::Error;
use crate::exponents::{below_gamma, Ordinal, Surinteger};
use crate::limits::limits;
use crate::ratpoly::{RatPoly, Q};

/// One Archimedean block: `X^(head + top) · num(t) / den(t)` with `t = X⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    top: BigInt,
    num: RatPoly,
    den: RatPoly,
}

impl Block {
    /// Finite part of the block's largest exponent.
    pub fn top(&self) -> &BigInt {
        &self.top
    }

    pub fn numerator(&self) -> &RatPoly {
        &self.num
    }

    pub fn denominator(&self) -> &RatPoly {
        &self.den
    }

    /// True when the block has finitely many terms.
    pub fn is_finite(&self) -> bool {
        self.den.is_one()
    }

    pub fn leading_coeff(&self) -> &Q {
        &self.num.coeffs()[0]
    }

    /// First `n` series coefficients, from the top exponent downward.
    pub fn coefficients(&self, n: usize) -> Vec<Q> {
        self.num.series_div(&self.den, n)
    }

    /// Brings `top, num/den` to canonical form for a block under `head`.
    fn normalize(
        head: &Surinteger,
        mut top: BigInt,
        mut num: RatPoly,
        mut den: RatPoly,
        checked: bool,
    ) -> Result<Option<Block>, Error> {
        if num.is_zero() {
            return Ok(None);
        }
        if !den.is_one() {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.exact_div(&g).expect("gcd divides numerator");
                den = den.exact_div(&g).expect("gcd divides denominator");
            }
            let d0 = den.coeff(0);
            if d0.is_zero() {
                return Err(Error::InvalidFamily(
                    "series denominator must have a nonzero constant term".into(),
                ));
            }
            if !d0.is_one() {
                let inv = d0.recip();
                num = num.scale(&inv);
                den = den.scale(&inv);
            }
        }
        let v = num.valuation().unwrap_or(0);
        if v > 0 {
            num = num.shift_down(v);
            top -= v;
        }
        let block = Block { top, num, den };
        if checked {
            block.validate(head)?;
        }
        Ok(Some(block))
    }

    fn validate(&self, head: &Surinteger) -> Result<(), Error> {
        let lim = limits();
        if head.is_negative() {
            return Err(Error::NegativeExponent(head.add_int(&self.top).to_string()));
        }
        if head.is_zero() {
            if !self.den.is_one() {
                return Err(Error::InfiniteTailUnderflow(self.top.to_string()));
            }
            let low = &self.top - BigInt::from(self.num.len() - 1);
            if low.is_negative() {
                return Err(Error::NegativeExponent(low.to_string()));
            }
        }
        if self.den.degree().unwrap_or(0) > lim.max_denominator_degree {
            return Err(Error::RepresentationLimit(format!(
                "block denominator degree {} exceeds cap {}",
                self.den.degree().unwrap_or(0),
                lim.max_denominator_degree
            )));
        }
        if self.num.len() > lim.max_span {
            return Err(Error::RepresentationLimit(format!(
                "block spans {} exponents, cap is {}",
                self.num.len(),
                lim.max_span
            )));
        }
        Ok(())
    }

    fn add(head: &Surinteger, a: &Block, b: &Block, checked: bool) -> Result<Option<Block>, Error> {
        let top = (&a.top).max(&b.top).clone();
        let sa = shift_amount(&top, &a.top)?;
        let sb = shift_amount(&top, &b.top)?;
        let (num, den) = if a.den == b.den {
            (a.num.shift_up(sa).add(&b.num.shift_up(sb)), a.den.clone())
        } else {
            let g = a.den.gcd(&b.den);
            let fa = b.den.exact_div(&g).expect("gcd divides");
            let fb = a.den.exact_div(&g).expect("gcd divides");
            let den = a.den.mul(&fa);
            let num = a
                .num
                .mul(&fa)
                .shift_up(sa)
                .add(&b.num.mul(&fb).shift_up(sb));
            (num, den)
        };
        Block::normalize(head, top, num, den, checked)
    }

    fn mul(head: &Surinteger, a: &Block, b: &Block) -> Result<Option<Block>, Error> {
        let den = if a.den.is_one() {
            b.den.clone()
        } else if b.den.is_one() {
            a.den.clone()
        } else {
            a.den.mul(&b.den)
        };
        Block::normalize(head, &a.top + &b.top, a.num.mul(&b.num), den, true)
    }

    fn neg(&self) -> Block {
        Block {
            top: self.top.clone(),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

fn shift_amount(top: &BigInt, t: &BigInt) -> Result<usize, Error> {
    let s = top - t;
    match s.to_usize() {
        Some(v) if v <= limits().max_span => Ok(v),
        _ => Err(Error::RepresentationLimit(format!(
            "exponent gap {s} inside one block exceeds the span cap"
        ))),
    }
}

/// A naked polynomial over ℚ. Immutable; all operations return new values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct NakedPoly {
    // keyed by head; iteration in reverse gives descending exponents
    blocks: BTreeMap<Surinteger, Block>,
}

impl NakedPoly {
    pub fn zero() -> Self {
        NakedPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, &Surinteger::zero()).expect("exponent 0 is valid")
    }

    /// The polynomial `X`.
    pub fn x() -> Self {
        Self::x_pow(&Surinteger::one()).expect("exponent 1 is valid")
    }

    pub fn x_pow(e: &Surinteger) -> Result<Self, Error> {
        Self::monomial(Q::one(), e)
    }

    /// `c·X^e`, the polynomial with the single coordinate `c` at `e`.
    pub fn monomial(c: Q, e: &Surinteger) -> Result<Self, Error> {
        if e.is_negative() {
            return Err(Error::NegativeExponent(e.to_string()));
        }
        e.check_caps()?;
        let mut blocks = BTreeMap::new();
        if !c.is_zero() {
            blocks.insert(
                e.head(),
                Block {
                    top: e.finite_part(),
                    num: RatPoly::constant(c),
                    den: RatPoly::one(),
                },
            );
        }
        Ok(NakedPoly { blocks })
    }

    /// Builds `X^(start) · num(t) / den(t)` with `t = X⁻¹` (a single block).
    pub fn from_series(start: &Surinteger, num: RatPoly, den: RatPoly) -> Result<Self, Error> {
        if den.coeff(0).is_zero() {
            return Err(Error::InvalidFamily(
                "series denominator must have a nonzero constant term".into(),
            ));
        }
        if start.is_negative() {
            return Err(Error::NegativeExponent(start.to_string()));
        }
        start.check_caps()?;
        let head = start.head();
        let mut blocks = BTreeMap::new();
        if let Some(b) = Block::normalize(&head, start.finite_part(), num, den, true)? {
            blocks.insert(head, b);
        }
        Ok(NakedPoly { blocks })
    }

    /// Polynomial from a strictly descending list of `(exponent, coefficient)`.
    /// Zero coefficients are skipped.
    pub fn from_terms(terms: &[(Surinteger, Q)]) -> Result<Self, Error> {
        if let Some(i) = terms.windows(2).position(|w| w[0].0 <= w[1].0) {
            return Err(Error::NonDescendingInput(i + 1));
        }
        let mut acc = NakedPoly::zero();
        for (e, c) in terms {
            acc = acc.add(&NakedPoly::monomial(c.clone(), e)?)?;
        }
        Ok(acc)
    }

    /// Reassembles the terms a cursor has not yet produced.
    pub fn from_cursor(cursor: TermCursor) -> Result<Self, Error> {
        cursor.into_remaining()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == NakedPoly::one()
    }

    /// True when the support is finite.
    pub fn is_finite(&self) -> bool {
        self.blocks.values().all(Block::is_finite)
    }

    /// Blocks in descending exponent order.
    pub fn blocks(&self) -> impl DoubleEndedIterator<Item = (&Surinteger, &Block)> + '_ {
        self.blocks.iter().rev()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    fn top_block(&self) -> Option<(&Surinteger, &Block)> {
        self.blocks.iter().next_back()
    }

    /// The largest exponent in the support.
    pub fn degree(&self) -> Result<Surinteger, Error> {
        let (h, b) = self.top_block().ok_or(Error::ZeroPoly)?;
        Ok(h.add_int(&b.top))
    }

    pub fn leading_coeff(&self) -> Result<Q, Error> {
        let (_, b) = self.top_block().ok_or(Error::ZeroPoly)?;
        Ok(b.leading_coeff().clone())
    }

    /// The coordinate at exponent `e`.
    pub fn coeff(&self, e: &Surinteger) -> Q {
        let Some(b) = self.blocks.get(&e.head()) else {
            return Q::zero();
        };
        let Some(idx) = (&b.top - e.finite_part()).to_usize() else {
            return Q::zero();
        };
        if b.is_finite() {
            return b.num.coeff(idx);
        }
        b.coefficients(idx + 1).pop().unwrap_or_else(Q::zero)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &NakedPoly) -> Result<NakedPoly, Error> {
        self.add_impl(other, true)
    }

    fn add_impl(&self, other: &NakedPoly, checked: bool) -> Result<NakedPoly, Error> {
        let (mut out, small) = if self.blocks.len() >= other.blocks.len() {
            (self.blocks.clone(), other)
        } else {
            (other.blocks.clone(), self)
        };
        for (h, b) in &small.blocks {
            match out.remove(h) {
                None => {
                    out.insert(h.clone(), b.clone());
                }
                Some(existing) => {
                    if let Some(sum) = Block::add(h, &existing, b, checked)? {
                        out.insert(h.clone(), sum);
                    }
                }
            }
        }
        let p = NakedPoly { blocks: out };
        if checked {
            p.check_block_count()?;
        }
        Ok(p)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &NakedPoly) -> Result<NakedPoly, Error> {
        self.add(&other.neg())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> NakedPoly {
        NakedPoly {
            blocks: self
                .blocks
                .iter()
                .map(|(h, b)| (h.clone(), b.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> NakedPoly {
        if c.is_zero() {
            return NakedPoly::zero();
        }
        NakedPoly {
            blocks: self
                .blocks
                .iter()
                .map(|(h, b)| {
                    (
                        h.clone(),
                        Block {
                            top: b.top.clone(),
                            num: b.num.scale(c),
                            den: b.den.clone(),
                        },
                    )
                })
                .collect(),
        }
    }

    /// Convolution product.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &NakedPoly) -> Result<NakedPoly, Error> {
        let mut acc: BTreeMap<Surinteger, Block> = BTreeMap::new();
        for (ha, ba) in &self.blocks {
            for (hb, bb) in &other.blocks {
                let h = ha + hb;
                h.check_caps()?;
                let Some(prod) = Block::mul(&h, ba, bb)? else {
                    continue;
                };
                match acc.remove(&h) {
                    None => {
                        acc.insert(h, prod);
                    }
                    Some(existing) => {
                        if let Some(sum) = Block::add(&h, &existing, &prod, true)? {
                            acc.insert(h, sum);
                        }
                    }
                }
            }
        }
        let p = NakedPoly { blocks: acc };
        p.check_block_count()?;
        Ok(p)
    }

    /// `self × c·X^e`, computed by translating every block.
    pub fn mul_monomial(&self, c: &Q, e: &Surinteger) -> Result<NakedPoly, Error> {
        if e.is_negative() {
            return Err(Error::NegativeExponent(e.to_string()));
        }
        if c.is_zero() {
            return Ok(NakedPoly::zero());
        }
        let eh = e.head();
        let ef = e.finite_part();
        let mut blocks = BTreeMap::new();
        for (h, b) in &self.blocks {
            let nh = h + &eh;
            nh.check_caps()?;
            blocks.insert(
                nh,
                Block {
                    top: &b.top + &ef,
                    num: b.num.scale(c),
                    den: b.den.clone(),
                },
            );
        }
        Ok(NakedPoly { blocks })
    }

    fn check_block_count(&self) -> Result<(), Error> {
        let cap = limits().max_blocks;
        if self.blocks.len() > cap {
            return Err(Error::RepresentationLimit(format!(
                "{} Archimedean blocks exceed cap {cap}",
                self.blocks.len()
            )));
        }
        Ok(())
    }

    /// `p ≺ q` iff the leading coefficient of `q − p` is positive.
    pub fn cmp_poly(&self, other: &NakedPoly) -> Ordering {
        let heads: std::collections::BTreeSet<&Surinteger> =
            self.blocks.keys().chain(other.blocks.keys()).collect();
        for h in heads.into_iter().rev() {
            let sign = match (self.blocks.get(h), other.blocks.get(h)) {
                (Some(a), None) => a.leading_coeff().signum(),
                (None, Some(b)) => -b.leading_coeff().signum(),
                (Some(a), Some(b)) if a.top > b.top => a.leading_coeff().signum(),
                (Some(a), Some(b)) if a.top < b.top => -b.leading_coeff().signum(),
                (Some(a), Some(b)) => {
                    // equal tops, so no shift and no cap checks
                    match Block::add(h, a, &b.neg(), false) {
                        Ok(Some(d)) => d.leading_coeff().signum(),
                        Ok(None) => continue,
                        Err(_) => unreachable!("unchecked block addition"),
                    }
                }
                (None, None) => continue,
            };
            return if sign.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        Ordering::Equal
    }

    /// Sign of the leading coefficient (0 for the zero polynomial).
    pub fn signum(&self) -> Ordering {
        self.cmp_poly(&NakedPoly::zero())
    }

    /// Descending stream over the nonzero coordinates.
    pub fn to_terms(&self) -> TermCursor {
        TermCursor::new(self)
    }

    /// The first `k` entries of the coordinate sequence.
    pub fn support_seq(&self, k: usize) -> Vec<(Surinteger, Q)> {
        self.to_terms().take(k).collect()
    }

    /// Order type of the support, `ω·a + b`.
    pub fn support_order_type(&self) -> Ordinal {
        let (mut omegas, mut tail) = (0u64, 0u64);
        for (_, b) in self.blocks() {
            if b.is_finite() {
                tail += b.num.coeffs().iter().filter(|c| !c.is_zero()).count() as u64;
            } else {
                omegas += 1;
                tail = 0;
            }
        }
        Ordinal::omega_times_plus(omegas, tail)
    }

    /// Whether every exponent lies below the γ-number `ω^η`.
    pub fn in_subring(&self, eta: &Ordinal) -> bool {
        self.blocks
            .iter()
            .all(|(h, b)| below_gamma(&h.add_int(&b.top), eta))
    }

    /// The canonical decomposition into term families, falling back to a raw
    /// series for blocks whose coefficient pattern has no rational ratios.
    pub fn components(&self) -> Vec<Component> {
        self.blocks()
            .flat_map(|(h, b)| family::block_components(h, b))
            .collect()
    }

    /// The canonical family decomposition, if every block admits one.
    pub fn families(&self) -> Option<Vec<TermFamily>> {
        self.components()
            .into_iter()
            .map(|c| match c {
                Component::Family(f) => Some(f),
                Component::Series(_) => None,
            })
            .collect()
    }

    /// `Σ_{n<length} P(n)·ρⁿ·X^(start − step·n)`.
    pub fn family(
        coeff_poly: &[Q],
        ratio: &Q,
        start_exp: &Surinteger,
        step: u64,
        length: FamilyLength,
    ) -> Result<NakedPoly, Error> {
        family::build_family(coeff_poly, ratio, start_exp, step, length)
    }
}

impl Ord for NakedPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_poly(other)
    }
}

impl PartialOrd for NakedPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for NakedPoly {
    fn from(c: i64) -> Self {
        NakedPoly::constant(Q::from_integer(BigInt::from(c)))
    }
}
