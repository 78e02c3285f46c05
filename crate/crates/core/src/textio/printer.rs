use std::fmt::{self, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exponents::Surinteger;
use crate::napoly::{Component, FamilyLength, NakedPoly, SeriesBlock, TermFamily};
use crate::ratpoly::{RatPoly, Q};

pub fn print_surint(s: &Surinteger) -> String {
    s.to_string()
}

pub fn print_poly(p: &NakedPoly) -> String {
    p.to_string()
}

/// A polynomial in `n`, highest power first.
pub fn print_npoly(p: &RatPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let first = out.is_empty();
        let mag = c.abs();
        if c.is_negative() {
            out.push_str(if first { "-" } else { " - " });
        } else if !first {
            out.push_str(" + ");
        }
        let var = match k {
            0 => String::new(),
            1 => "n".into(),
            _ => format!("n^{k}"),
        };
        if var.is_empty() {
            write!(out, "{mag}").unwrap();
        } else if mag.is_one() {
            out.push_str(&var);
        } else {
            write!(out, "{mag}*{var}").unwrap();
        }
    }
    out
}

/// Exponent `X^…` text for a monomial.
fn write_x(out: &mut String, e: &Surinteger) {
    if e.is_zero() {
        return;
    }
    if *e == Surinteger::one() {
        out.push('X');
    } else {
        write!(out, "X^({e})").unwrap();
    }
}

fn write_monomial(out: &mut String, c: &Q, e: &Surinteger) {
    let first = out.is_empty();
    if c.is_negative() {
        out.push_str(if first { "-" } else { " - " });
    } else if !first {
        out.push_str(" + ");
    }
    let mag = c.abs();
    if e.is_zero() {
        write!(out, "{mag}").unwrap();
        return;
    }
    if !mag.is_one() {
        write!(out, "{mag}*").unwrap();
    }
    write_x(out, e);
}

/// `head + f − d·n` in the most readable of the accepted shapes.
fn affine_text(start: &Surinteger, d: u64) -> String {
    let head = start.head();
    let f = start.finite_part();
    let d = BigInt::from(d);
    let mut out = if head.is_zero() {
        String::new()
    } else {
        head.to_string()
    };
    let join = |out: &mut String, negative: bool| {
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
    };
    let n_term = if d.is_one() {
        "n".to_string()
    } else {
        format!("{d}*n")
    };
    if f.is_zero() {
        join(&mut out, true);
        out.push_str(&n_term);
    } else if !d.is_one() && f.is_multiple_of(&d) {
        let k = -(&f / &d);
        if k.is_positive() {
            join(&mut out, true);
            write!(out, "{d}*(n+{k})").unwrap();
        } else {
            join(&mut out, false);
            write!(out, "{d}*({}-n)", k.abs()).unwrap();
        }
    } else {
        join(&mut out, f.is_negative());
        write!(out, "{} - {n_term}", f.abs()).unwrap();
    }
    out
}

fn write_family(out: &mut String, fam: &TermFamily) {
    if fam.is_monomial() {
        write_monomial(out, &fam.coeff_poly[0], &fam.start_exp);
        return;
    }
    if !out.is_empty() {
        out.push_str(" + ");
    }
    let len = match fam.length {
        FamilyLength::Omega => "w".to_string(),
        FamilyLength::Finite(k) => k.to_string(),
    };
    write!(out, "sum(n<{len}, ").unwrap();
    let p = RatPoly::from_coeffs(fam.coeff_poly.clone());
    if p.is_constant() {
        let c = p.coeff(0);
        if !c.is_one() {
            write!(out, "{c} * ").unwrap();
        }
    } else {
        write!(out, "({}) * ", print_npoly(&p)).unwrap();
    }
    if !fam.ratio.is_one() {
        write!(out, "({})^n * ", fam.ratio).unwrap();
    }
    write!(out, "X^({}))", affine_text(&fam.start_exp, fam.step)).unwrap();
}

fn write_list(out: &mut String, v: &[Q]) {
    out.push('[');
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "{c}").unwrap();
    }
    out.push(']');
}

fn write_series(out: &mut String, s: &SeriesBlock) {
    if !out.is_empty() {
        out.push_str(" + ");
    }
    write!(out, "series(X^({}), ", s.start_exp).unwrap();
    write_list(out, &s.numerator);
    out.push_str(", ");
    write_list(out, &s.denominator);
    out.push(')');
}

impl fmt::Display for NakedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for c in self.components() {
            match c {
                Component::Family(fam) => write_family(&mut out, &fam),
                Component::Series(s) => write_series(&mut out, &s),
            }
        }
        f.write_str(&out)
    }
}
