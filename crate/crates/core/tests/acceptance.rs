//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use transpoly::division::verify_division;
use transpoly::quotient::{complex_unit_modulus, q_add, q_inv, q_mul, reduce, root_adjoin};
use transpoly::textio::{from_json, parse_poly, to_json};
use transpoly::{divmod, norm, FamilyLength, NakedPoly, Ordinal, Surinteger};

const BUDGET: usize = 10_000;

type Check = Result<(), String>;

/// Name, time limit in seconds, check.
type Criterion = (&'static str, u64, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion1() -> Check {
    let p = xp(&Surinteger::omega());
    let dv = xi(2).add(&NakedPoly::one()).unwrap();
    let t = divmod(&p, &dv, BUDGET).map_err(|e| e.to_string())?;
    ensure(!t.exhausted, || "exhausted".into())?;
    ensure(t.termination.to_ordinal() == Ordinal::omega(), || format!("label {}", t.termination))?;
    ensure(t.remainder.is_zero(), || format!("remainder {}", t.remainder))?;
    let expect = NakedPoly::family(&[q(1)], &q(-1), &w_plus(-2), 2, FamilyLength::Omega).unwrap();
    ensure(t.quotient == expect, || format!("quotient {}", t.quotient))?;
    ensure(dv.mul(&t.quotient).unwrap() == p, || "multiplication-back".into())
}

fn criterion2() -> Check {
    let ww = Surinteger::omega_pow(Ordinal::omega());
    let p = xp(&ww);
    let dv = NakedPoly::family(&[q(1)], &q(1), &w_plus(-3), 3, FamilyLength::Omega).unwrap();
    let t = divmod(&p, &dv, BUDGET).map_err(|e| e.to_string())?;
    ensure(!t.exhausted && t.remainder.is_zero(), || format!("remainder {}", t.remainder))?;
    ensure(verify_division(&p, &dv, &t.quotient, &t.remainder), || "identity".into())?;
    ensure(dv.mul(&t.quotient).unwrap() == p, || "multiplication-back".into())?;

    let p5 = p.add(&xi(5)).unwrap();
    let t5 = divmod(&p5, &dv, BUDGET).map_err(|e| e.to_string())?;
    ensure(t5.remainder == xi(5), || format!("variant remainder {}", t5.remainder))?;
    ensure(verify_division(&p5, &dv, &t5.quotient, &t5.remainder), || "variant identity".into())?;

    // the quotient as printed in the source does not multiply back
    let start = &ww + &aw_b(-1, 3);
    let printed = NakedPoly::family(&[q(1)], &q(1), &start, 3, FamilyLength::Omega).unwrap();
    let back = dv.mul(&printed).unwrap();
    ensure(back != p, || "printed quotient multiplies back".into())?;
    let expect = NakedPoly::family(&[q(1), q(1)], &q(1), &ww, 3, FamilyLength::Omega).unwrap();
    ensure(back == expect, || format!("printed quotient product {back}"))
}

fn criterion3() -> Check {
    let mut rng = StdRng::seed_from_u64(3);
    let zero = NakedPoly::zero();
    let one = NakedPoly::one();
    for i in 0..1000 {
        let a = finite_below_omega_sq(&mut rng, 6);
        let b = finite_below_omega_sq(&mut rng, 6);
        let c = finite_below_omega_sq(&mut rng, 6);
        let add = |x: &NakedPoly, y: &NakedPoly| x.add(y).unwrap();
        let mul = |x: &NakedPoly, y: &NakedPoly| x.mul(y).unwrap();
        let fail = |what: &str| format!("{what} at case {i}: a = {a}, b = {b}, c = {c}");
        ensure(add(&a, &b) == add(&b, &a), || fail("additive commutativity"))?;
        ensure(mul(&a, &b) == mul(&b, &a), || fail("multiplicative commutativity"))?;
        ensure(add(&add(&a, &b), &c) == add(&a, &add(&b, &c)), || fail("additive associativity"))?;
        ensure(mul(&mul(&a, &b), &c) == mul(&a, &mul(&b, &c)), || fail("multiplicative associativity"))?;
        ensure(mul(&a, &add(&b, &c)) == add(&mul(&a, &b), &mul(&a, &c)), || fail("distributivity"))?;
        ensure(add(&a, &zero) == a && mul(&a, &one) == a, || fail("identities"))?;
        ensure(add(&a, &a.neg()).is_zero(), || fail("additive inverse"))?;
        ensure(a.cmp_poly(&b) == add(&a, &c).cmp_poly(&add(&b, &c)), || fail("order translation"))?;
        ensure(a.cmp_poly(&b) == a.sub(&b).unwrap().signum(), || fail("order via difference"))?;
        if a.signum() == Ordering::Greater && b.signum() == Ordering::Greater {
            ensure(mul(&a, &b).signum() == Ordering::Greater, || fail("positive products"))?;
        }
    }
    Ok(())
}

/// Classical long division on dense ascending coefficient vectors.
fn dense_divmod(p: &[Q], q: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut rem = p.to_vec();
    let dq = q.len() - 1;
    let lead = q[dq].clone();
    let mut quo = vec![Q::zero(); p.len().saturating_sub(dq).max(1)];
    while rem.len() > dq {
        let k = rem.len() - 1;
        let c = &rem[k] / &lead;
        for (j, qc) in q.iter().enumerate() {
            let v = &rem[k - dq + j] - &c * qc;
            rem[k - dq + j] = v;
        }
        quo[k - dq] = c;
        rem.pop();
    }
    (quo, rem)
}

fn dense_of(p: &NakedPoly, len: usize) -> Vec<Q> {
    (0..len).map(|k| p.coeff(&Surinteger::from(k as i64))).collect()
}

fn trim(mut v: Vec<Q>) -> Vec<Q> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn criterion4() -> Check {
    let mut rng = StdRng::seed_from_u64(4);
    for i in 0..500 {
        let dq = rng.gen_range(1..=10);
        let mut qc = finite_integer(&mut rng, dq);
        qc.resize(dq + 1, Q::zero());
        qc[dq] = nonzero_rat(&mut rng);
        let rc = finite_integer(&mut rng, 20 - dq);
        let sc = finite_integer(&mut rng, dq - 1);
        let (qp, rp, sp) = (from_dense(&qc), from_dense(&rc), from_dense(&sc));
        let p = qp.mul(&rp).unwrap().add(&sp).unwrap();
        let t = divmod(&p, &qp, BUDGET).map_err(|e| format!("case {i}: {e}"))?;
        let fail = |what: &str| format!("{what} at case {i}: p = {p}, q = {qp}");
        ensure(!t.exhausted, || fail("exhausted"))?;
        ensure(t.quotient == rp && t.remainder == sp, || fail("uniqueness"))?;
        ensure(
            t.remainder.is_zero() || norm(&t.remainder).unwrap() < norm(&qp).unwrap(),
            || fail("norm descent"),
        )?;
        let pd = dense_of(&p, 21);
        let (oq, or) = dense_divmod(&trim(pd), &qc);
        ensure(trim(oq) == trim(dense_of(&t.quotient, 21)), || fail("oracle quotient"))?;
        ensure(trim(or) == trim(dense_of(&t.remainder, 21)), || fail("oracle remainder"))?;
    }
    // the norm bound on transfinite pairs
    for i in 0..200 {
        let p = finite_below_omega_sq(&mut rng, 5);
        let q = finite_below_omega_sq(&mut rng, 3);
        if q.is_zero() {
            continue;
        }
        let t = divmod(&p, &q, BUDGET).map_err(|e| format!("transfinite case {i}: {e}"))?;
        if !t.exhausted {
            ensure(
                t.remainder.is_zero() || norm(&t.remainder).unwrap() < norm(&q).unwrap(),
                || format!("norm descent at transfinite case {i}: p = {p}, q = {q}"),
            )?;
            ensure(verify_division(&p, &q, &t.quotient, &t.remainder), || format!("identity at {i}"))?;
        }
    }
    Ok(())
}

fn criterion5() -> Check {
    let mut rng = StdRng::seed_from_u64(5);
    let w2 = Surinteger::omega_pow(Ordinal::from(2));
    let ww = Surinteger::omega_pow(Ordinal::omega());
    for i in 0..100 {
        let (a, e, max_d) = if rng.gen_bool(0.5) {
            let k = rng.gen_range(1..8);
            let e = match rng.gen_range(0..3) {
                0 => aw_b(rng.gen_range(1..4), rng.gen_range(0..5)),
                1 => &w2 + &Surinteger::from(rng.gen_range(0..5)),
                _ => ww.clone(),
            };
            (Surinteger::from(k), e, k)
        } else {
            let a = aw_b(rng.gen_range(1..4), rng.gen_range(0..8));
            let e = if rng.gen_bool(0.5) { &w2 + &aw_b(rng.gen_range(0..3), 0) } else { ww.clone() };
            (a, e, 8)
        };
        let d = rng.gen_range(1..=max_d);
        let c = nonzero_rat(&mut rng);
        let q = xp(&a).add(&NakedPoly::monomial(c.clone(), &a.add_int(&(-d).into())).unwrap()).unwrap();
        let p = xp(&e);
        let t = divmod(&p, &q, BUDGET).map_err(|err| format!("case {i}: {err}"))?;
        ensure(
            !t.exhausted && t.remainder.is_zero(),
            || format!("case {i}: X^({e}) by {q} left {}", t.remainder),
        )?;
        ensure(verify_division(&p, &q, &t.quotient, &t.remainder), || format!("identity at {i}"))?;
    }
    Ok(())
}

/// `ℚ[i]` by hand: `(re, im)`.
#[derive(Clone, Debug, PartialEq)]
struct Gauss(Q, Q);

impl Gauss {
    fn mul(&self, o: &Gauss) -> Gauss {
        Gauss(&self.0 * &o.0 - &self.1 * &o.1, &self.0 * &o.1 + &self.1 * &o.0)
    }
    fn add(&self, o: &Gauss) -> Gauss {
        Gauss(&self.0 + &o.0, &self.1 + &o.1)
    }
    fn inv(&self) -> Gauss {
        let n = &self.0 * &self.0 + &self.1 * &self.1;
        Gauss(&self.0 / &n, -&self.1 / &n)
    }
    /// `p(i)` for dense ascending coefficients.
    fn eval(c: &[Q]) -> Gauss {
        let mut acc = Gauss(Q::zero(), Q::zero());
        let mut pow = Gauss(Q::one(), Q::zero());
        let i = Gauss(Q::zero(), Q::one());
        for x in c {
            acc = acc.add(&Gauss(x * &pow.0, x * &pow.1));
            pow = pow.mul(&i);
        }
        acc
    }
    fn of(p: &NakedPoly) -> Gauss {
        Gauss(p.coeff(&Surinteger::from(0)), p.coeff(&Surinteger::from(1)))
    }
}

fn criterion6() -> Check {
    let mut rng = StdRng::seed_from_u64(6);
    let m = root_adjoin(&Surinteger::omega(), &q(2), true).map_err(|e| e.to_string())?;
    let unit = reduce(&NakedPoly::one(), &m, BUDGET).unwrap();
    let mut done = 0;
    while done < 200 {
        let c = finite_integer(&mut rng, 4);
        let a = from_dense(&c);
        if a.is_zero() {
            continue;
        }
        done += 1;
        let ra = reduce(&a, &m, BUDGET).map_err(|e| e.to_string())?;
        ensure(ra.rep() == &a, || format!("{a} is not reduced"))?;
        let inv = q_inv(&ra, BUDGET).map_err(|e| format!("inverse of {a}: {e}"))?;
        let prod = q_mul(&ra, &inv, BUDGET).map_err(|e| e.to_string())?;
        ensure(prod == unit, || format!("{a} times {} is {}", inv.rep(), prod.rep()))?;
    }
    let r = reduce(&xp(&w_plus(1)), &m, BUDGET).map_err(|e| e.to_string())?;
    ensure(r.rep() == &NakedPoly::x().scale(&q(2)), || format!("X^(w + 1) reduces to {}", r.rep()))?;

    let ci = complex_unit_modulus();
    for k in 0..200 {
        let ca = finite_integer(&mut rng, 6);
        let cb = finite_integer(&mut rng, 6);
        let (ga, gb) = (Gauss::eval(&ca), Gauss::eval(&cb));
        let ra = reduce(&from_dense(&ca), &ci, BUDGET).map_err(|e| e.to_string())?;
        let rb = reduce(&from_dense(&cb), &ci, BUDGET).map_err(|e| e.to_string())?;
        ensure(Gauss::of(ra.rep()) == ga, || format!("reduce mismatch at {k}"))?;
        let s = q_add(&ra, &rb, BUDGET).map_err(|e| e.to_string())?;
        ensure(Gauss::of(s.rep()) == ga.add(&gb), || format!("sum mismatch at {k}"))?;
        let p = q_mul(&ra, &rb, BUDGET).map_err(|e| e.to_string())?;
        ensure(Gauss::of(p.rep()) == ga.mul(&gb), || format!("product mismatch at {k}"))?;
        if !ra.is_zero() {
            let inv = q_inv(&ra, BUDGET).map_err(|e| e.to_string())?;
            ensure(Gauss::of(inv.rep()) == ga.inv(), || format!("inverse mismatch at {k}"))?;
        }
    }
    Ok(())
}

fn criterion7() -> Check {
    let mut rng = StdRng::seed_from_u64(7);
    for eta in [1u64, 2] {
        let g = Ordinal::from(eta);
        for i in 0..500 {
            let (a, b) = if eta == 1 {
                (from_dense(&finite_integer(&mut rng, 8)), from_dense(&finite_integer(&mut rng, 8)))
            } else {
                let pick = |rng: &mut StdRng| {
                    let p = finite_below_omega_sq(rng, 5);
                    if rng.gen_bool(0.3) {
                        let start = aw_b(rng.gen_range(1..3), rng.gen_range(0..5));
                        let f = NakedPoly::family(&[small_rat(rng)], &q(-1), &start, 1, FamilyLength::Omega)
                            .unwrap();
                        p.add(&f).unwrap()
                    } else {
                        p
                    }
                };
                (pick(&mut rng), pick(&mut rng))
            };
            ensure(a.in_subring(&g) && b.in_subring(&g), || format!("generator left the subring at {i}"))?;
            ensure(a.add(&b).unwrap().in_subring(&g), || format!("sum escapes for eta {eta} at {i}"))?;
            ensure(a.mul(&b).unwrap().in_subring(&g), || format!("product escapes for eta {eta} at {i}"))?;
        }
        let witness = xp(&Surinteger::omega_pow(g.clone()));
        ensure(!witness.in_subring(&g), || format!("X^(w^{eta}) accepted"))?;
    }
    Ok(())
}

fn criterion8() -> Check {
    let mut rng = StdRng::seed_from_u64(8);
    for i in 0..1000 {
        let p = fuzzed_poly(&mut rng);
        let text = p.to_string();
        let back = parse_poly(&text).map_err(|e| format!("case {i}: {text}: {e}"))?;
        ensure(back == p, || format!("text round trip at {i}: {text}"))?;
        let doc = to_json(&p);
        let back = from_json(&doc).map_err(|e| format!("case {i}: {e}"))?;
        ensure(back == p, || format!("json round trip at {i}: {doc}"))?;
    }
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    for name in ["example1", "example2"] {
        let out = Command::new(env!("CARGO_BIN_EXE_transpoly"))
            .env_remove("TRANSPOLY_BUDGET")
            .arg("--script")
            .arg(fixtures.join(format!("{name}.tp")))
            .output()
            .map_err(|e| e.to_string())?;
        let expect = std::fs::read(fixtures.join(format!("{name}.out"))).map_err(|e| e.to_string())?;
        ensure(out.status.success() && out.stdout == expect, || format!("{name} transcript differs"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("X^2 + 1 divides X^w with a limit step", 1, criterion1),
        ("family divisor divides X^(w^w); X^5 variant; printed quotient", 1, criterion2),
        ("ring and ordered-ring axioms on 1000 polynomials", 30, criterion3),
        ("Euclidean property, uniqueness and dense oracle", 30, criterion4),
        ("telescoping two-term divisors", 10, criterion5),
        ("inverses mod X^w - 2 and the X^2 + 1 oracle", 20, criterion6),
        ("subring closure for eta in {1, 2}", 10, criterion7),
        ("text and JSON round trips, golden transcripts", 10, criterion8),
    ];
    let suite = Instant::now();
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|()| {
            ensure(elapsed < Duration::from_secs(*limit), || format!("over the {limit} s limit"))
        });
        match result {
            Ok(()) => println!("[PASS] criterion {}: {name} ({:.2?})", i + 1, elapsed),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name} ({:.2?}): {why}", i + 1, elapsed);
            }
        }
    }
    println!("acceptance: {} of 8 passed in {:.2?}", 8 - failed, suite.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
