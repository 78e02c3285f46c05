//! Term families: the `Σ_{n<len} P(n)·ρⁿ·X^(e − d·n)` view of a block.
//!
//! Building a family turns it into a block generating function. Going back,
//! the denominator `D(t)` is split into binomial factors `(1 − τ·t^d)`, one
//! per group of characteristic roots with `μ^d = τ` rational. Each partial
//! fraction becomes one exponential-polynomial family per residue class mod
//! `d`; factors are merged while that lowers the number of components. Roots
//! with no rational power are kept as a raw series.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Block, NakedPoly};
use crate::error::Error;
use crate::exponents::Surinteger;
use crate::limits::limits;
use crate::ratpoly::{qpow, rational_roots_partial, solve_linear, RatPoly, Q};

/// Denominators above this degree are not searched for a family layout.
const MAX_SPLIT_DEGREE: usize = 16;
const MAX_STEP: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyLength {
    Finite(u64),
    Omega,
}

/// `Σ_{n<length} P(n)·ρⁿ·X^(start_exp − step·n)` with `P` given by its
/// coefficients in ascending powers of `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermFamily {
    pub coeff_poly: Vec<Q>,
    pub ratio: Q,
    pub start_exp: Surinteger,
    pub step: u64,
    pub length: FamilyLength,
}

/// A block kept as a raw generating function `X^(start) · N(t)/D(t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesBlock {
    pub start_exp: Surinteger,
    pub numerator: Vec<Q>,
    pub denominator: Vec<Q>,
}

/// One piece of the canonical printed form of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    Family(TermFamily),
    Series(SeriesBlock),
}

impl Component {
    pub fn start_exp(&self) -> &Surinteger {
        match self {
            Component::Family(f) => &f.start_exp,
            Component::Series(s) => &s.start_exp,
        }
    }

    pub fn to_poly(&self) -> Result<NakedPoly, Error> {
        match self {
            Component::Family(f) => f.to_poly(),
            Component::Series(s) => NakedPoly::from_series(
                &s.start_exp,
                RatPoly::from_coeffs(s.numerator.clone()),
                RatPoly::from_coeffs(s.denominator.clone()),
            ),
        }
    }
}

impl TermFamily {
    pub fn monomial(c: Q, e: Surinteger) -> Self {
        TermFamily {
            coeff_poly: vec![c],
            ratio: Q::one(),
            start_exp: e,
            step: 1,
            length: FamilyLength::Finite(1),
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.length == FamilyLength::Finite(1)
    }

    /// Coefficient of the `n`-th term, `P(n)·ρⁿ`.
    pub fn coefficient(&self, n: u64) -> Q {
        let p = RatPoly::from_coeffs(self.coeff_poly.clone());
        p.eval(&Q::from_integer(BigInt::from(n))) * qpow(&self.ratio, n as i64)
    }

    /// Exponent of the `n`-th term.
    pub fn exponent(&self, n: u64) -> Surinteger {
        self.start_exp
            .add_int(&-(BigInt::from(self.step) * BigInt::from(n)))
    }

    pub fn to_poly(&self) -> Result<NakedPoly, Error> {
        build_family(
            &self.coeff_poly,
            &self.ratio,
            &self.start_exp,
            self.step,
            self.length,
        )
    }
}

pub(super) fn build_family(
    coeff_poly: &[Q],
    ratio: &Q,
    start: &Surinteger,
    step: u64,
    length: FamilyLength,
) -> Result<NakedPoly, Error> {
    let lim = limits();
    if step == 0 {
        return Err(Error::InvalidFamily("step must be positive".into()));
    }
    if start.is_negative() {
        return Err(Error::NegativeExponent(start.to_string()));
    }
    let p = RatPoly::from_coeffs(coeff_poly.to_vec());
    if p.degree().unwrap_or(0) > lim.max_coeff_poly_degree {
        return Err(Error::RepresentationLimit(format!(
            "coefficient polynomial degree {} exceeds cap {}",
            p.degree().unwrap_or(0),
            lim.max_coeff_poly_degree
        )));
    }
    let d = usize::try_from(step)
        .ok()
        .filter(|&d| d <= lim.max_span)
        .ok_or_else(|| Error::RepresentationLimit(format!("step {step} exceeds the span cap")))?;
    match length {
        FamilyLength::Finite(0) => Ok(NakedPoly::zero()),
        _ if p.is_zero() => Ok(NakedPoly::zero()),
        FamilyLength::Finite(len) => {
            let span = (len - 1)
                .checked_mul(step)
                .and_then(|s| usize::try_from(s).ok())
                .filter(|&s| s < lim.max_span)
                .ok_or_else(|| {
                    Error::RepresentationLimit(format!("finite family of length {len} is too long"))
                })?;
            let mut coeffs = vec![Q::zero(); span + 1];
            let mut rp = Q::one();
            for n in 0..len as usize {
                coeffs[n * d] = p.eval(&Q::from_integer(BigInt::from(n))) * &rp;
                rp *= ratio;
            }
            NakedPoly::from_series(start, RatPoly::from_coeffs(coeffs), RatPoly::one())
        }
        FamilyLength::Omega => {
            if start.head().is_zero() {
                return Err(Error::InfiniteTailUnderflow(start.to_string()));
            }
            if ratio.is_zero() {
                return Err(Error::InvalidFamily(
                    "an infinite family needs a nonzero ratio".into(),
                ));
            }
            // Σ P(n)xⁿ = R(x)/(1−x)^(k+1) with deg R ≤ k.
            let k = p.degree().unwrap_or(0);
            let one_minus_x = RatPoly::from_coeffs(vec![Q::one(), -Q::one()]);
            let denom_x = one_minus_x.pow(k + 1);
            let head_terms = RatPoly::from_coeffs(
                (0..=k)
                    .map(|n| p.eval(&Q::from_integer(BigInt::from(n))))
                    .collect(),
            );
            let r = head_terms.mul(&denom_x).truncate(k + 1);
            let num = r.substitute_scaled_power(ratio, d);
            let den = denom_x.substitute_scaled_power(ratio, d);
            NakedPoly::from_series(start, num, den)
        }
    }
}

pub(super) fn block_components(head: &Surinteger, block: &Block) -> Vec<Component> {
    if block.is_finite() {
        return block
            .num
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| Component::Family(TermFamily::monomial(c.clone(), exponent_at(head, block, j))))
            .collect();
    }
    let whole = || {
        vec![Component::Series(SeriesBlock {
            start_exp: head.add_int(&block.top),
            numerator: block.num.coeffs().to_vec(),
            denominator: block.den.coeffs().to_vec(),
        })]
    };
    match block.den.degree() {
        Some(m) if m <= MAX_SPLIT_DEGREE => split(head, block).unwrap_or_else(whole),
        _ => whole(),
    }
}

fn exponent_at(head: &Surinteger, block: &Block, index: usize) -> Surinteger {
    head.add_int(&(&block.top - BigInt::from(index)))
}

/// `(1 − τ·t^step)^mult` is divisible by `den`, and `num/den` is proper.
struct Piece {
    tau: Q,
    step: usize,
    mult: usize,
    num: RatPoly,
    den: RatPoly,
    families: Vec<TermFamily>,
}

impl Piece {
    fn new(head: &Surinteger, block: &Block, tau: Q, step: usize, mult: usize, num: RatPoly, den: RatPoly) -> Option<Piece> {
        let pseudo = Block { top: block.top.clone(), num: num.clone(), den: den.clone() };
        let families = decompose_with_step(head, &pseudo, step, &[(tau.clone(), mult)])?;
        Some(Piece { tau, step, mult, num, den, families })
    }

    fn merge(&self, other: &Piece, head: &Surinteger, block: &Block) -> Option<Piece> {
        let base = num_integer::lcm(self.step, other.step);
        let step = [base, 2 * base].into_iter().filter(|&d| d <= MAX_STEP).find(|&d| {
            qpow(&self.tau, (d / self.step) as i64) == qpow(&other.tau, (d / other.step) as i64)
        })?;
        let tau = qpow(&self.tau, (step / self.step) as i64);
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Piece::new(head, block, tau, step, self.mult.max(other.mult), num, den)
    }
}

/// Partial fractions over the binomial factors of the denominator. Roots
/// with no rational power stay together in one raw series.
fn split(head: &Surinteger, block: &Block) -> Option<Vec<Component>> {
    let (atoms, mut leftover) = binomial_atoms(&block.den)?;
    let (poly_part, proper) = block.num.div_rem(&block.den);
    let part = |f: &RatPoly| -> Option<RatPoly> {
        let cof = block.den.exact_div(f)?;
        let inv = inverse_mod(&cof, f)?;
        Some(proper.mul(&inv).div_rem(f).1)
    };
    let mut leftover_num = if leftover.is_one() { RatPoly::zero() } else { part(&leftover)? };
    let mut pieces = Vec::new();
    for (tau, step, mult, den) in atoms {
        let num = part(&den)?;
        match Piece::new(head, block, tau, step, mult, num.clone(), den.clone()) {
            Some(p) => pieces.push(p),
            None => {
                leftover_num = leftover_num.mul(&den).add(&num.mul(&leftover));
                leftover = leftover.mul(&den);
            }
        }
    }
    loop {
        let mut best: Option<(usize, usize, usize, Piece)> = None;
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                let Some(m) = pieces[i].merge(&pieces[j], head, block) else { continue };
                let before = pieces[i].families.len() + pieces[j].families.len();
                let gain = before.saturating_sub(m.families.len());
                if gain > 0 && best.as_ref().is_none_or(|b| gain > b.0) {
                    best = Some((gain, i, j, m));
                }
            }
        }
        let Some((_, i, j, merged)) = best else { break };
        pieces.remove(j);
        pieces[i] = merged;
    }

    let mut monomials: BTreeMap<Surinteger, Q> = BTreeMap::new();
    let mut families = Vec::new();
    for (j, c) in poly_part.coeffs().iter().enumerate() {
        *monomials.entry(exponent_at(head, block, j)).or_insert_with(Q::zero) += c;
    }
    // terms inside the polynomial part's range are written as monomials
    let poly_end = poly_part.degree().map(|k| exponent_at(head, block, k));
    for mut f in pieces.into_iter().flat_map(|p| p.families) {
        while !f.is_monomial() && poly_end.as_ref().is_some_and(|e| f.start_exp >= *e) {
            *monomials.entry(f.start_exp.clone()).or_insert_with(Q::zero) += f.coefficient(0);
            f = advance(f);
        }
        if f.is_monomial() {
            *monomials.entry(f.start_exp.clone()).or_insert_with(Q::zero) += &f.coeff_poly[0];
        } else {
            families.push(f);
        }
    }
    families.extend(
        monomials
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| TermFamily::monomial(c, e)),
    );
    families.sort_by(|a, b| {
        b.start_exp
            .cmp(&a.start_exp)
            .then_with(|| a.ratio.cmp(&b.ratio))
            .then_with(|| a.step.cmp(&b.step))
    });
    let mut out: Vec<Component> = families.into_iter().map(Component::Family).collect();
    if !leftover.is_one() {
        let v = leftover_num.valuation()?;
        out.push(Component::Series(SeriesBlock {
            start_exp: exponent_at(head, block, v),
            numerator: leftover_num.shift_down(v).into_coeffs(),
            denominator: leftover.into_coeffs(),
        }));
    }
    Some(out)
}

/// Drops the first term of an infinite family, then any zero terms after it.
fn advance(f: TermFamily) -> TermFamily {
    let poly = RatPoly::from_coeffs(f.coeff_poly);
    let mut k = 1u64;
    while poly.eval(&Q::from_integer(BigInt::from(k))).is_zero() {
        k += 1;
    }
    TermFamily {
        coeff_poly: poly
            .taylor_shift(&Q::from_integer(BigInt::from(k)))
            .scale(&qpow(&f.ratio, k as i64))
            .into_coeffs(),
        start_exp: f.start_exp.add_int(&-BigInt::from(k * f.step)),
        ..f
    }
}

/// Inverse of `a` modulo `m`, when they are coprime.
fn inverse_mod(a: &RatPoly, m: &RatPoly) -> Option<RatPoly> {
    let (mut r0, mut r1) = (m.clone(), a.div_rem(m).1);
    let (mut s0, mut s1) = (RatPoly::zero(), RatPoly::one());
    while !r1.is_zero() {
        let (quo, rem) = r0.div_rem(&r1);
        let s = s0.sub(&quo.mul(&s1));
        (r0, r1) = (r1, rem);
        (s0, s1) = (s1, s);
    }
    if !r0.is_constant() {
        return None;
    }
    let c = r0.coeff(0);
    Some(s0.scale(&(Q::one() / c)).div_rem(m).1)
}

fn normalize_const(p: RatPoly) -> RatPoly {
    let c = p.coeff(0);
    p.scale(&(Q::one() / c))
}

/// Factors `den` as `Π Fᵢ · L` where the roots of `Fᵢ` satisfy
/// `μ^stepᵢ = τᵢ` with minimal `stepᵢ`, and no root of `L` has a rational
/// power. Returns `(τ, step, mult, F)` with `F | (1 − τ·t^step)^mult`.
#[allow(clippy::type_complexity)]
fn binomial_atoms(den: &RatPoly) -> Option<(Vec<(Q, usize, usize, RatPoly)>, RatPoly)> {
    let m = den.degree()?;
    let mut atoms = Vec::new();
    let mut rest = den.clone();
    let (rational, _) = rational_roots_partial(&reversed(den, m))?;
    for (mu, mult) in rational {
        let f = RatPoly::from_coeffs(vec![Q::one(), -mu.clone()]).pow(mult);
        rest = rest.exact_div(&f)?;
        atoms.push((mu, 1, mult, f));
    }
    let mut sums = PowerSums::new(&rest);
    let mut d = 2;
    while let Some(mr) = rest.degree().filter(|&k| k > 0) {
        if d > (2 * mr * mr + 2).min(MAX_STEP) {
            break;
        }
        let Some(s) = sums.root_power_poly(d) else { break };
        let (taus, _) = rational_roots_partial(&s)?;
        let mut changed = false;
        for (tau, _) in taus {
            let binom = RatPoly::monomial(-tau.clone(), d).add(&RatPoly::one());
            let mut f = RatPoly::one();
            let mut mult = 0;
            loop {
                let g = rest.gcd(&binom);
                if g.is_constant() {
                    break;
                }
                let g = normalize_const(g);
                rest = rest.exact_div(&g)?;
                f = f.mul(&g);
                mult += 1;
            }
            if mult > 0 {
                atoms.push((tau, d, mult, f));
                changed = true;
            }
        }
        if changed {
            sums = PowerSums::new(&rest);
        }
        d += 1;
    }
    Some((atoms, rest))
}

fn reversed(p: &RatPoly, deg: usize) -> RatPoly {
    RatPoly::from_coeffs((0..=deg).rev().map(|i| p.coeff(i)).collect())
}

/// Power sums `p_k = Σ μᵢᵏ` of the characteristic roots of `den(t) = Π(1 − μᵢt)`.
struct PowerSums {
    m: usize,
    e: Vec<Q>,
    sums: Vec<Q>,
}

impl PowerSums {
    const MAX_BITS: u64 = 4096;

    fn new(den: &RatPoly) -> PowerSums {
        let m = den.degree().unwrap_or(0);
        // den(t) = Π(1 − μᵢt), so eₖ(μ) = (−1)ᵏ·den[k]
        let e = (0..=m)
            .map(|k| if k % 2 == 0 { den.coeff(k) } else { -den.coeff(k) })
            .collect();
        PowerSums { m, e, sums: vec![Q::zero()] }
    }

    fn get(&mut self, k: usize) -> Option<&Q> {
        let m = self.m;
        while self.sums.len() <= k {
            let k = self.sums.len();
            let mut pk = if k <= m {
                let v = &self.e[k] * Q::from_integer(BigInt::from(k));
                if k % 2 == 1 { v } else { -v }
            } else {
                Q::zero()
            };
            for i in 1..k.min(m + 1) {
                let term = &self.e[i] * &self.sums[k - i];
                if i % 2 == 1 {
                    pk += term;
                } else {
                    pk -= term;
                }
            }
            if pk.numer().bits() > Self::MAX_BITS || pk.denom().bits() > Self::MAX_BITS {
                return None;
            }
            self.sums.push(pk);
        }
        Some(&self.sums[k])
    }

    /// `Π(y − μᵢ^d)` in ascending coefficients.
    fn root_power_poly(&mut self, d: usize) -> Option<RatPoly> {
        let m = self.m;
        self.get(m * d)?;
        let mut el = vec![Q::one()];
        for j in 1..=m {
            let mut acc = Q::zero();
            for i in 1..=j {
                let term = &el[j - i] * &self.sums[i * d];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            el.push(acc / Q::from_integer(BigInt::from(j)));
        }
        Some(RatPoly::from_coeffs(
            (0..=m)
                .map(|i| {
                    let j = m - i;
                    if j.is_multiple_of(2) { el[j].clone() } else { -el[j].clone() }
                })
                .collect(),
        ))
    }
}

fn decompose_with_step(
    head: &Surinteger,
    block: &Block,
    d: usize,
    taus: &[(Q, usize)],
) -> Option<Vec<TermFamily>> {
    let max_deg = limits().max_coeff_poly_degree;
    // M(u) = Π (1 − τu)^mult, u = t^d
    let mut m_u = RatPoly::one();
    for (tau, mult) in taus {
        m_u = m_u.mul(&RatPoly::from_coeffs(vec![Q::one(), -tau.clone()]).pow(*mult));
    }
    let m_t = m_u.substitute_scaled_power(&Q::one(), d);
    let cofactor = m_t.exact_div(&block.den)?;
    let num = block.num.mul(&cofactor);
    let total: usize = taus.iter().map(|(_, k)| k).sum();

    let mut out = Vec::new();
    for r in 0..d {
        let nr = RatPoly::from_coeffs(num.coeffs().iter().skip(r).step_by(d).cloned().collect());
        if nr.is_zero() {
            continue;
        }
        let (poly_part, proper) = nr.div_rem(&m_u);
        let values = proper.series_div(&m_u, total);
        // unknowns: coefficient of nʲ·τᵢⁿ
        let mut rows = Vec::with_capacity(total);
        for n in 0..total {
            let nq = Q::from_integer(BigInt::from(n));
            let mut row = Vec::with_capacity(total);
            for (tau, mult) in taus {
                let tn = qpow(tau, n as i64);
                let mut nj = Q::one();
                for _ in 0..*mult {
                    row.push(&nj * &tn);
                    nj *= &nq;
                }
            }
            rows.push(row);
        }
        let sol = solve_linear(rows, values)?;
        let mut polys = Vec::with_capacity(taus.len());
        let mut at = 0;
        for (tau, mult) in taus {
            polys.push((tau, RatPoly::from_coeffs(sol[at..at + mult].to_vec())));
            at += mult;
        }
        let eval_all = |n: usize| -> Q {
            let nq = Q::from_integer(BigInt::from(n));
            polys
                .iter()
                .map(|(tau, p)| p.eval(&nq) * qpow(tau, n as i64))
                .fold(Q::zero(), |a, b| a + b)
        };
        let n_star = poly_part.len();
        for n in 0..n_star {
            let v = poly_part.coeff(n) + eval_all(n);
            if !v.is_zero() {
                out.push(TermFamily::monomial(v, exponent_at(head, block, r + d * n)));
            }
        }
        for (tau, p) in &polys {
            if p.is_zero() {
                continue;
            }
            if p.degree().unwrap_or(0) > max_deg {
                return None;
            }
            let mut n0 = n_star;
            while p.eval(&Q::from_integer(BigInt::from(n0))).is_zero() {
                n0 += 1;
            }
            let shifted = p
                .taylor_shift(&Q::from_integer(BigInt::from(n0)))
                .scale(&qpow(tau, n0 as i64));
            out.push(TermFamily {
                coeff_poly: shifted.into_coeffs(),
                ratio: (*tau).clone(),
                start_exp: exponent_at(head, block, r + d * n0),
                step: d as u64,
                length: FamilyLength::Omega,
            });
        }
    }
    out.sort_by(|a, b| {
        b.start_exp
            .cmp(&a.start_exp)
            .then_with(|| a.ratio.cmp(&b.ratio))
    });
    Some(out)
}
