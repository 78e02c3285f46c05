//! Transfinite long division, the Euclidean norm, extended gcd and the
//! factor/root/split/ideal predicates.
//!
//! Division runs the usual leading-term recursion. Past a run of successor
//! steps inside one Archimedean block the quotient increments are fitted to a
//! linear recurrence; the implied ω-tail `T` is then subtracted in one limit
//! step and kept only if `s − q×T` falls below every remainder of the run.

use std::fmt;

use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;
use crate::exponents::{Ordinal, Surinteger};
use crate::limits::limits;
use crate::napoly::NakedPoly;
use crate::ratpoly::{berlekamp_massey, RatPoly, Q};

pub const DEFAULT_BUDGET: usize = 256;

/// Increments needed before a limit step is attempted.
const LIMIT_WINDOW: usize = 4;
const MAX_RUN: usize = 64;
const MAX_RUN_SPAN: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    Successor,
    LimitJump,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionStep {
    pub kind: StepKind,
    pub quotient_increment: NakedPoly,
    pub remainder_after: NakedPoly,
}

/// The ordinal `ω·limit_jumps + successors` at which a division stopped.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct TerminationLabel {
    pub limit_jumps: u64,
    pub successors: u64,
}

impl TerminationLabel {
    pub fn to_ordinal(self) -> Ordinal {
        Ordinal::omega_times_plus(self.limit_jumps, self.successors)
    }
}

impl fmt::Display for TerminationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ordinal())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionTrace {
    pub steps: Vec<DivisionStep>,
    pub termination: TerminationLabel,
    pub quotient: NakedPoly,
    pub remainder: NakedPoly,
    /// Set when the budget ran out; quotient and remainder are then partial
    /// but still satisfy `p = q×quotient + remainder`.
    pub exhausted: bool,
}

impl DivisionTrace {
    fn exhausted_error(&self, chain: Vec<String>) -> Error {
        Error::BudgetExhausted {
            steps: self.steps.len(),
            remainder_degree: self
                .remainder
                .degree()
                .map(|d| d.to_string())
                .unwrap_or_else(|_| "0".into()),
            chain,
        }
    }

    /// The trace as a result, with exhaustion turned into an error.
    pub fn into_complete(self) -> Result<DivisionTrace, Error> {
        if self.exhausted {
            Err(self.exhausted_error(Vec::new()))
        } else {
            Ok(self)
        }
    }
}

/// The Euclidean norm, `degree(p)`.
pub fn norm(p: &NakedPoly) -> Result<Surinteger, Error> {
    p.degree()
}

fn below_divisor(s: &NakedPoly, qdeg: &Surinteger) -> Result<bool, Error> {
    Ok(s.is_zero() || s.degree()? < *qdeg)
}

/// Divides `p` by `q`, spending at most `budget` successor steps between limit
/// steps.
pub fn divmod(p: &NakedPoly, q: &NakedPoly, budget: usize) -> Result<DivisionTrace, Error> {
    if q.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be positive".into()));
    }
    let qdeg = q.degree()?;
    let qlc = q.leading_coeff()?;
    let mut trace = DivisionTrace {
        steps: Vec::new(),
        termination: TerminationLabel::default(),
        quotient: NakedPoly::zero(),
        remainder: p.clone(),
        exhausted: false,
    };
    // (exponent, coefficient) of the successor increments since the last jump
    let mut segment: Vec<(Surinteger, Q)> = Vec::new();
    while !below_divisor(&trace.remainder, &qdeg)? {
        if segment.len() >= budget {
            trace.exhausted = true;
            break;
        }
        let s = &trace.remainder;
        let sdeg = s.degree()?;
        let c = s.leading_coeff()? / &qlc;
        let e = &sdeg - &qdeg;
        let inc = NakedPoly::monomial(c.clone(), &e)?;
        let next = s.sub(&q.mul_monomial(&c, &e)?)?;
        trace.quotient = trace.quotient.add(&inc)?;
        trace.remainder = next;
        trace.steps.push(DivisionStep {
            kind: StepKind::Successor,
            quotient_increment: inc,
            remainder_after: trace.remainder.clone(),
        });
        trace.termination.successors += 1;
        segment.push((e, c));

        if below_divisor(&trace.remainder, &qdeg)? {
            break;
        }
        if let Some((tail, after)) = try_limit(&segment, q, &sdeg, &trace.remainder)? {
            trace.quotient = trace.quotient.add(&tail)?;
            trace.remainder = after;
            trace.steps.push(DivisionStep {
                kind: StepKind::LimitJump,
                quotient_increment: tail,
                remainder_after: trace.remainder.clone(),
            });
            trace.termination.limit_jumps += 1;
            trace.termination.successors = 0;
            segment.clear();
        }
    }
    let back = q.mul(&trace.quotient)?.add(&trace.remainder)?;
    if back != *p {
        return Err(Error::Internal(
            "division identity p = q×quotient + remainder failed".into(),
        ));
    }
    Ok(trace)
}

/// Fits the latest run of increments to a recurrence and tries the implied
/// ω-tail. Returns the tail and the remainder after it when the jump is exact.
fn try_limit(
    segment: &[(Surinteger, Q)],
    q: &NakedPoly,
    prev_deg: &Surinteger,
    s: &NakedPoly,
) -> Result<Option<(NakedPoly, NakedPoly)>, Error> {
    let Some((last_e, _)) = segment.last() else {
        return Ok(None);
    };
    let head = last_e.head();
    if head.is_zero() || !head.is_positive() {
        return Ok(None);
    }
    let run_len = segment
        .iter()
        .rev()
        .take(MAX_RUN)
        .take_while(|(e, _)| e.head() == head)
        .count();
    if run_len < LIMIT_WINDOW {
        return Ok(None);
    }
    let run = &segment[segment.len() - run_len..];
    let f_first = run[0].0.finite_part();
    let f_last = run[run_len - 1].0.finite_part();
    let Some(span) = (&f_first - &f_last).to_usize() else {
        return Ok(None);
    };
    if span >= MAX_RUN_SPAN {
        return Ok(None);
    }
    let mut dense = vec![Q::zero(); span + 1];
    for (e, c) in run {
        let idx = (&f_first - e.finite_part())
            .to_usize()
            .expect("run exponents descend");
        dense[idx] = c.clone();
    }
    let (lambda, l) = berlekamp_massey(&dense);
    if l == 0
        || 2 * l >= dense.len()
        || lambda.degree().unwrap_or(0) > limits().max_denominator_degree
    {
        return Ok(None);
    }
    let numer = lambda.mul(&RatPoly::from_coeffs(dense)).truncate(l);
    let start = head.add_int(&f_first);
    // A candidate that overflows a representation cap is just not taken.
    let attempt = || -> Result<Option<(NakedPoly, NakedPoly)>, Error> {
        let full = NakedPoly::from_series(&start, numer, lambda)?;
        if full.is_finite() {
            return Ok(None);
        }
        let tail = full.sub(&NakedPoly::from_terms(run)?)?;
        let after = s.sub(&q.mul(&tail)?)?;
        let accepted = after.is_zero() || {
            let d = after.degree()?;
            d.head() < prev_deg.head() || d < q.degree()?
        };
        Ok(accepted.then_some((tail, after)))
    };
    Ok(attempt().unwrap_or(None))
}

/// True iff `p = q×r + s` and `s` is zero or below `q` in degree.
pub fn verify_division(p: &NakedPoly, q: &NakedPoly, r: &NakedPoly, s: &NakedPoly) -> bool {
    if q.is_zero() {
        return false;
    }
    let Ok(true) = below_divisor(s, &q.degree().expect("nonzero")) else {
        return false;
    };
    matches!(q.mul(r).and_then(|qr| qr.add(s)), Ok(v) if v == *p)
}

/// True iff `a×b = p`.
pub fn verify_factor(p: &NakedPoly, a: &NakedPoly, b: &NakedPoly) -> bool {
    matches!(a.mul(b), Ok(v) if v == *p)
}

/// True iff `q = X + c` for a rational `c`.
pub fn is_root_poly(q: &NakedPoly) -> bool {
    let Ok(deg) = q.degree() else {
        return false;
    };
    if deg != Surinteger::one() || !q.leading_coeff().is_ok_and(|c| c.is_one()) {
        return false;
    }
    q.blocks().count() == 1 && q.is_finite()
}

/// True iff every entry is a root polynomial and `p` is their product times a
/// rational unit.
pub fn verify_split(p: &NakedPoly, roots: &[NakedPoly]) -> bool {
    if p.is_zero() || !roots.iter().all(is_root_poly) {
        return false;
    }
    let mut prod = NakedPoly::one();
    for r in roots {
        match prod.mul(r) {
            Ok(v) => prod = v,
            Err(_) => return false,
        }
    }
    let lc = p.leading_coeff().expect("nonzero");
    prod.scale(&lc) == *p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    NotMember,
    Exhausted,
}

/// Whether `x` lies in the principal ideal generated by `p`.
pub fn ideal_member(x: &NakedPoly, p: &NakedPoly, budget: usize) -> Result<Membership, Error> {
    let t = divmod(x, p, budget)?;
    Ok(if t.exhausted {
        Membership::Exhausted
    } else if t.remainder.is_zero() {
        Membership::Member
    } else {
        Membership::NotMember
    })
}

/// `u×a + v×b = g` with `g` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bezout {
    pub g: NakedPoly,
    pub u: NakedPoly,
    pub v: NakedPoly,
}

/// Extended Euclid over the division recursion.
pub fn ext_gcd(a: &NakedPoly, b: &NakedPoly, budget: usize) -> Result<Bezout, Error> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::InvalidArgument("gcd of two zero polynomials".into()));
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (NakedPoly::one(), NakedPoly::zero());
    let (mut t0, mut t1) = (NakedPoly::zero(), NakedPoly::one());
    let mut chain: Vec<String> = Vec::new();
    while !r1.is_zero() {
        chain.push(r1.degree()?.to_string());
        let tr = divmod(&r0, &r1, budget)?;
        if tr.exhausted {
            return Err(tr.exhausted_error(chain));
        }
        let s2 = s0.sub(&tr.quotient.mul(&s1)?)?;
        let t2 = t0.sub(&tr.quotient.mul(&t1)?)?;
        (r0, r1) = (r1, tr.remainder);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    let inv = r0.leading_coeff()?.recip();
    let out = Bezout {
        g: r0.scale(&inv),
        u: s0.scale(&inv),
        v: t0.scale(&inv),
    };
    let check = out.u.mul(a)?.add(&out.v.mul(b)?)?;
    if check != out.g {
        return Err(Error::Internal("Bezout identity failed".into()));
    }
    Ok(out)
}

/// `X^α − c`.
pub(crate) fn binomial(alpha: &Surinteger, c: &Q) -> Result<NakedPoly, Error> {
    if !alpha.is_positive() {
        return Err(Error::InvalidExponent(format!(
            "root adjunction needs a positive exponent, got {alpha}"
        )));
    }
    NakedPoly::x_pow(alpha)?.sub(&NakedPoly::constant(c.clone()))
}
