#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::Rng;
use transpoly::ratpoly::RatPoly;
use transpoly::{FamilyLength, NakedPoly, Ordinal, Surinteger};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn xp(e: &Surinteger) -> NakedPoly {
    NakedPoly::x_pow(e).unwrap()
}

pub fn xi(k: i64) -> NakedPoly {
    xp(&Surinteger::from(k))
}

pub fn w_plus(k: i64) -> Surinteger {
    Surinteger::omega().add_int(&BigInt::from(k))
}

/// `a·ω + b`.
pub fn aw_b(a: i64, b: i64) -> Surinteger {
    Surinteger::omega().mul_int(&BigInt::from(a)).add_int(&BigInt::from(b))
}

pub fn from_dense(c: &[Q]) -> NakedPoly {
    let terms: Vec<(Surinteger, Q)> = c
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, x)| !num_traits::Zero::is_zero(*x))
        .map(|(i, x)| (Surinteger::from(i as i64), x.clone()))
        .collect();
    NakedPoly::from_terms(&terms).unwrap()
}

pub fn small_rat(rng: &mut StdRng) -> Q {
    let n = rng.gen_range(-9i64..=9);
    let d = rng.gen_range(1i64..=4);
    qr(n, d)
}

pub fn nonzero_rat(rng: &mut StdRng) -> Q {
    loop {
        let r = small_rat(rng);
        if !num_traits::Zero::is_zero(&r) {
            return r;
        }
    }
}

/// Finite support, exponents `a·ω + b` below ω².
pub fn finite_below_omega_sq(rng: &mut StdRng, max_terms: usize) -> NakedPoly {
    let n = rng.gen_range(0..=max_terms);
    let mut terms = std::collections::BTreeMap::new();
    for _ in 0..n {
        let e = aw_b(rng.gen_range(0..3), rng.gen_range(0..6));
        terms.insert(e, small_rat(rng));
    }
    let list: Vec<(Surinteger, Q)> = terms.into_iter().rev().collect();
    NakedPoly::from_terms(&list).unwrap()
}

/// Integer exponents in `0..=max_deg`.
pub fn finite_integer(rng: &mut StdRng, max_deg: usize) -> Vec<Q> {
    let d = rng.gen_range(0..=max_deg);
    (0..=d).map(|_| q(rng.gen_range(-5i64..=5))).collect()
}

pub fn random_surint(rng: &mut StdRng) -> Surinteger {
    match rng.gen_range(0..4) {
        0 => aw_b(rng.gen_range(1..4), rng.gen_range(-6..7)),
        1 => {
            let w2 = Surinteger::omega_pow(Ordinal::from(2));
            &w2 + &aw_b(rng.gen_range(-2..3), rng.gen_range(-4..5))
        }
        2 => {
            let ww = Surinteger::omega_pow(Ordinal::omega());
            &ww + &aw_b(rng.gen_range(-1..2), rng.gen_range(-4..5))
        }
        _ => aw_b(1, rng.gen_range(-3..4)),
    }
}

/// A canonical value mixing monomials, ω-families with polynomial
/// coefficients and, sometimes, a raw series block.
pub fn fuzzed_poly(rng: &mut StdRng) -> NakedPoly {
    let mut acc = NakedPoly::zero();
    for _ in 0..rng.gen_range(0..4) {
        let e = if rng.gen_bool(0.5) {
            Surinteger::from(rng.gen_range(0..8))
        } else {
            random_surint(rng)
        };
        acc = acc.add(&NakedPoly::monomial(small_rat(rng), &e).unwrap()).unwrap();
    }
    for _ in 0..rng.gen_range(0..3) {
        let deg = rng.gen_range(0..3);
        let cp: Vec<Q> = (0..=deg).map(|_| small_rat(rng)).collect();
        let ratio = [q(1), q(-1), q(2), qr(1, 2), qr(-2, 3), q(3)][rng.gen_range(0..6)].clone();
        let step = rng.gen_range(1..4);
        let f = NakedPoly::family(&cp, &ratio, &random_surint(rng), step, FamilyLength::Omega).unwrap();
        acc = acc.add(&f).unwrap();
    }
    if rng.gen_bool(0.15) {
        let s = NakedPoly::from_series(
            &random_surint(rng),
            RatPoly::from_coeffs(vec![nonzero_rat(rng), small_rat(rng)]),
            RatPoly::from_coeffs(vec![q(1), q(-1), q(-1)]),
        )
        .unwrap();
        acc = acc.add(&s).unwrap();
    }
    acc
}
