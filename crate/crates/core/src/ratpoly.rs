//! Dense univariate polynomials over ℚ.
//!
//! Used for block generating functions (in `t = X⁻¹`) and for the coefficient
//! polynomials `P(n)` of term families.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `coeffs[i]` is the coefficient of `t^i`; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Q>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c·t^k`.
    pub fn monomial(c: Q, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Q::zero(); k + 1];
        coeffs[k] = c;
        RatPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Q> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of stored coefficients (`degree + 1`, or 0).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn lead(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(out)
    }

    /// Multiplies by `t^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![Q::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        RatPoly { coeffs }
    }

    /// Divides by `t^k`, dropping the low coefficients.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitutes `t ↦ c·t^k`.
    pub fn substitute_scaled_power(&self, c: &Q, k: usize) -> Self {
        let mut out = vec![Q::zero(); (self.coeffs.len().max(1) - 1) * k + 1];
        let mut cp = Q::one();
        for (i, a) in self.coeffs.iter().enumerate() {
            out[i * k] = a * &cp;
            cp *= c;
        }
        Self::from_coeffs(out)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quo = vec![Q::zero(); rem.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quo[i] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quo), Self::from_coeffs(rem))
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (quo, rem) = self.div_rem(d);
        rem.is_zero().then_some(quo)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive_rational();
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Rescales to integer coefficients with content 1 and positive leading
    /// coefficient, which keeps Euclidean remainder sequences small.
    pub fn primitive_rational(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let ints = self.integer_coeffs();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if self.coeffs.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        Self::from_coeffs(
            ints.into_iter()
                .map(|c| Q::from_integer(c / &g))
                .collect(),
        )
    }

    /// Coefficients multiplied by the lcm of their denominators.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        self.coeffs
            .iter()
            .map(|c| (c * Q::from_integer(l.clone())).to_integer())
            .collect()
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    /// `P(n + k)` as a polynomial in `n`.
    pub fn taylor_shift(&self, k: &Q) -> Self {
        // Horner in the shifted variable.
        let lin = RatPoly::from_coeffs(vec![k.clone(), Q::one()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// First `n` coefficients of the power series `self / den`; `den(0) ≠ 0`.
    pub fn series_div(&self, den: &Self, n: usize) -> Vec<Q> {
        let d0_inv = den.coeff(0).recip();
        let mut out: Vec<Q> = Vec::with_capacity(n);
        for j in 0..n {
            let mut v = self.coeff(j);
            for (i, d) in den.coeffs.iter().enumerate().skip(1).take(j) {
                if !d.is_zero() {
                    v -= d * &out[j - i];
                }
            }
            out.push(v * &d0_inv);
        }
        out
    }

    /// Truncates to the first `n` coefficients.
    pub fn truncate(&self, n: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(n).cloned().collect())
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Berlekamp–Massey over ℚ. Returns the connection polynomial `Λ` with
/// `Λ(0) = 1` and the linear complexity `L`, so that
/// `Σ_{i=0}^{L} λᵢ·s_{j−i} = 0` for every `L ≤ j < s.len()`.
pub fn berlekamp_massey(s: &[Q]) -> (RatPoly, usize) {
    let mut c = vec![Q::one()];
    let mut b = vec![Q::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = Q::one();
    for j in 0..s.len() {
        let mut d = s[j].clone();
        for i in 1..=l.min(c.len() - 1) {
            d += &c[i] * &s[j - i];
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &bd;
        let prev = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, Q::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] -= &coef * bi;
        }
        if 2 * l <= j {
            l = j + 1 - l;
            b = prev;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    (RatPoly::from_coeffs(c), l)
}

/// All roots of `p` with multiplicities if `p` splits into linear factors
/// over ℚ; `None` otherwise or when the search space is too large.
pub fn rational_roots(p: &RatPoly) -> Option<Vec<(Q, usize)>> {
    let (roots, rest) = rational_roots_partial(p)?;
    rest.is_constant().then_some(roots)
}

/// Rational roots with multiplicity, plus the cofactor free of them.
pub fn rational_roots_partial(p: &RatPoly) -> Option<(Vec<(Q, usize)>, RatPoly)> {
    const MAX_CANDIDATES: usize = 1 << 14;
    let mut rest = p.primitive_rational();
    let mut roots: Vec<(Q, usize)> = Vec::new();
    if rest.is_zero() {
        return None;
    }
    let zero_mult = rest.valuation().unwrap_or(0);
    if zero_mult > 0 {
        roots.push((Q::zero(), zero_mult));
        rest = rest.shift_down(zero_mult);
    }
    if rest.is_constant() {
        return Some((roots, rest));
    }
    let ints = rest.integer_coeffs();
    let lead_divs = divisors(ints.last()?.magnitude())?;
    let const_divs = divisors(ints[0].magnitude())?;
    if lead_divs.len().saturating_mul(const_divs.len()) > MAX_CANDIDATES {
        return None;
    }
    let residues: Vec<u64> = ints.iter().map(mod_p).collect();
    let mut candidates: Vec<Q> = Vec::new();
    for num in &const_divs {
        for den in &lead_divs {
            if !num.gcd(den).is_one() {
                continue;
            }
            for num in [BigInt::from(num.clone()), -BigInt::from(num.clone())] {
                let den = BigInt::from(den.clone());
                if vanishes_mod_p(&residues, &num, &den) {
                    candidates.push(Q::new_raw(num, den));
                }
            }
        }
    }
    for c in candidates {
        let lin = RatPoly::from_coeffs(vec![-c.clone(), Q::one()]);
        let mut mult = 0;
        while !rest.is_constant() && rest.eval(&c).is_zero() {
            rest = rest.exact_div(&lin)?;
            mult += 1;
        }
        if mult > 0 {
            roots.push((c, mult));
        }
        if rest.is_constant() {
            break;
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Some((roots, rest))
}

const FILTER_PRIME: u64 = (1 << 61) - 1;

fn mod_p(n: &BigInt) -> u64 {
    let m = BigInt::from(FILTER_PRIME);
    n.mod_floor(&m).iter_u64_digits().next().unwrap_or(0)
}

fn mul_p(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % FILTER_PRIME as u128) as u64
}

/// Necessary condition for `c = a/b` to be a root: `Σ cᵢ aⁱ bⁿ⁻ⁱ ≡ 0`.
fn vanishes_mod_p(residues: &[u64], num: &BigInt, den: &BigInt) -> bool {
    let a = mod_p(num);
    let b = mod_p(den);
    let n = residues.len() - 1;
    let mut b_pows = vec![1u64; n + 1];
    for i in 1..=n {
        b_pows[i] = mul_p(b_pows[i - 1], b);
    }
    let mut acc = 0u64;
    let mut a_pow = 1u64;
    for (i, r) in residues.iter().enumerate() {
        acc = (acc + mul_p(mul_p(*r, a_pow), b_pows[n - i])) % FILTER_PRIME;
        a_pow = mul_p(a_pow, a);
    }
    acc == 0
}

/// Positive divisors via trial division; gives up on large cofactors.
fn divisors(n: &BigUint) -> Option<Vec<BigUint>> {
    const TRIAL_LIMIT: u64 = 100_000;
    if n.is_zero() {
        return None;
    }
    let mut rest = n.clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && BigUint::from(p * p) <= rest {
        let bp = BigUint::from(p);
        let mut e = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            factors.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // A cofactor above TRIAL_LIMIT² may be composite. Treating it as prime can
    // only lose divisors, in which case callers see "does not split".
    if !rest.is_one() {
        factors.push((rest, 1));
    }
    let mut divs = vec![BigUint::one()];
    for (f, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pow = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pow);
                pow *= &f;
            }
        }
        divs = next;
        if divs.len() > 1 << 14 {
            return None;
        }
    }
    Some(divs)
}

/// Solves the square system `a·x = b` over ℚ; `None` if singular.
#[allow(clippy::needless_range_loop)]
pub fn solve_linear(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
            let v = &f * &b[col];
            b[r] -= v;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// `base^e` for a possibly negative exponent; `base ≠ 0` when `e < 0`.
pub fn qpow(base: &Q, e: i64) -> Q {
    let mut acc = Q::one();
    let mut b = if e < 0 { base.recip() } else { base.clone() };
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &b;
        }
        k >>= 1;
        if k > 0 {
            b = &b * &b;
        }
    }
    acc
}
