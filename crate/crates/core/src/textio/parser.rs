use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, SourceSpan, TextError};
use crate::exponents::{Ordinal, Surinteger};
use crate::napoly::{FamilyLength, NakedPoly};
use crate::ratpoly::{RatPoly, Q};

const MAX_NESTING: usize = 64;
const RESERVED: [&str; 5] = ["X", "w", "n", "sum", "series"];

type Resolver<'a> = dyn Fn(&str) -> Option<NakedPoly> + 'a;

/// `c + k·n` with a surinteger `c` and an integer slope `k`.
#[derive(Clone, Debug)]
struct Affine {
    c: Surinteger,
    n: BigInt,
}

impl Affine {
    fn constant(c: Surinteger) -> Self {
        Affine { c, n: BigInt::zero() }
    }

    fn as_integer(&self) -> Option<BigInt> {
        (self.n.is_zero() && self.c.is_finite()).then(|| self.c.finite_part())
    }

    fn scale(&self, k: &BigInt) -> Self {
        Affine {
            c: self.c.mul_int(k),
            n: &self.n * k,
        }
    }

    fn add(&self, o: &Affine) -> Self {
        Affine {
            c: &self.c + &o.c,
            n: &self.n + &o.n,
        }
    }
}

/// Parses polynomials one after another from a single line, resolving bare
/// names through `resolver`.
pub struct PolyParser<'a> {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
    resolver: &'a Resolver<'a>,
}

fn no_names(_: &str) -> Option<NakedPoly> {
    None
}

impl<'a> PolyParser<'a> {
    pub fn new(src: &str, resolver: &'a Resolver<'a>) -> Result<Self, ParseError> {
        Ok(PolyParser {
            toks: tokenize(src)?,
            pos: 0,
            depth: 0,
            resolver,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            span: self.span(),
            expected: expected.into(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.error(expected))
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn expect_ident(&mut self, name: &str) -> Result<(), ParseError> {
        if self.is_ident(name) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("`{name}`")))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(self.error(&format!("nesting depth of at most {MAX_NESTING}")));
        }
        Ok(())
    }

    pub fn at_end(&self) -> bool {
        *self.peek() == Tok::End
    }

    /// Fails unless all input has been consumed.
    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    /// Consumes `word` if it is the next token.
    pub fn eat_keyword(&mut self, word: &str) -> bool {
        if self.is_ident(word) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// Consumes a bare integer.
    pub fn integer(&mut self) -> Result<BigInt, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.error("an integer")),
        }
    }

    /// Parses the next polynomial.
    pub fn poly(&mut self) -> Result<NakedPoly, TextError> {
        self.enter()?;
        let mut acc = match self.peek() {
            Tok::Minus => {
                self.bump();
                self.product()?.neg()
            }
            Tok::Plus => {
                self.bump();
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.product()?)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.product()?)?;
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn product(&mut self) -> Result<NakedPoly, TextError> {
        let mut acc = self.poly_factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let f = self.poly_factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn poly_factor(&mut self) -> Result<NakedPoly, TextError> {
        match self.peek().clone() {
            Tok::Int(_) => Ok(NakedPoly::constant(self.unsigned_rational()?)),
            Tok::LParen => {
                self.bump();
                let p = self.poly()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            Tok::Ident(name) => match name.as_str() {
                "X" => {
                    self.bump();
                    let e = if *self.peek() == Tok::Caret {
                        self.bump();
                        self.exponent()?
                    } else {
                        Surinteger::one()
                    };
                    Ok(NakedPoly::x_pow(&e)?)
                }
                "sum" => self.family(),
                "series" => self.series(),
                _ if RESERVED.contains(&name.as_str()) => Err(self.error("a polynomial term").into()),
                _ => {
                    let span = self.span();
                    match (self.resolver)(&name) {
                        Some(p) => {
                            self.bump();
                            Ok(p)
                        }
                        None => Err(ParseError {
                            span,
                            expected: "a bound name".into(),
                            found: format!("unbound identifier `{name}`"),
                        }
                        .into()),
                    }
                }
            },
            _ => Err(self.error("a polynomial term").into()),
        }
    }

    /// `int` or `( surint )` after `X^`.
    fn exponent(&mut self) -> Result<Surinteger, TextError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Surinteger::from(n))
            }
            Tok::LParen => {
                self.bump();
                let a = self.affine(false)?;
                self.expect(Tok::RParen, "`)`")?;
                a.c.check_caps()?;
                Ok(a.c)
            }
            _ => Err(self.error("an exponent").into()),
        }
    }

    fn unsigned_rational(&mut self) -> Result<Q, ParseError> {
        let num = self.integer()?;
        if *self.peek() != Tok::Slash {
            return Ok(Q::from_integer(num));
        }
        self.bump();
        let span = self.span();
        let den = self.integer()?;
        if den.is_zero() {
            return Err(ParseError {
                span,
                expected: "a nonzero denominator".into(),
                found: "integer 0".into(),
            });
        }
        Ok(Q::new(num, den))
    }

    fn signed_rational(&mut self) -> Result<Q, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unsigned_rational()?);
        }
        self.unsigned_rational()
    }

    // sum(n<len, coef * X^(affine))
    fn family(&mut self) -> Result<NakedPoly, TextError> {
        self.expect_ident("sum")?;
        self.expect(Tok::LParen, "`(`")?;
        self.expect_ident("n")?;
        self.expect(Tok::Less, "`<`")?;
        let length = match self.peek().clone() {
            Tok::Ident(w) if w == "w" => {
                self.bump();
                FamilyLength::Omega
            }
            Tok::Int(k) => {
                let span = self.span();
                self.bump();
                let k = u64::try_from(&k).map_err(|_| ParseError {
                    span,
                    expected: "a family length below 2^64".into(),
                    found: format!("integer {k}"),
                })?;
                FamilyLength::Finite(k)
            }
            _ => return Err(self.error("`w` or an integer length").into()),
        };
        self.expect(Tok::Comma, "`,`")?;
        let mut coeff = RatPoly::one();
        let mut ratio = Q::one();
        while !self.is_ident("X") {
            match self.peek() {
                Tok::LParen => {
                    self.bump();
                    let p = self.npoly()?;
                    self.expect(Tok::RParen, "`)`")?;
                    if *self.peek() == Tok::Caret {
                        let span = self.span();
                        self.bump();
                        self.expect_ident("n")?;
                        if !p.is_constant() {
                            return Err(ParseError {
                                span,
                                expected: "a constant ratio before `^n`".into(),
                                found: "a polynomial in n".into(),
                            }
                            .into());
                        }
                        ratio *= p.coeff(0);
                    } else {
                        coeff = coeff.mul(&p);
                    }
                }
                Tok::Int(_) | Tok::Minus => {
                    let c = self.signed_rational()?;
                    coeff = coeff.scale(&c);
                }
                _ => return Err(self.error("a coefficient factor or `X`").into()),
            }
            self.expect(Tok::Star, "`*`")?;
        }
        self.expect_ident("X")?;
        self.expect(Tok::Caret, "`^`")?;
        self.expect(Tok::LParen, "`(`")?;
        let span = self.span();
        let aff = self.affine(true)?;
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::RParen, "`)`")?;
        if !aff.n.is_negative() {
            return Err(ParseError {
                span,
                expected: "an exponent decreasing in n".into(),
                found: format!("slope {}", aff.n),
            }
            .into());
        }
        let step = u64::try_from(-aff.n).map_err(|_| ParseError {
            span,
            expected: "a step below 2^64".into(),
            found: "a larger step".into(),
        })?;
        aff.c.check_caps()?;
        Ok(NakedPoly::family(coeff.coeffs(), &ratio, &aff.c, step, length)?)
    }

    // series(X^(e), [num], [den])
    fn series(&mut self) -> Result<NakedPoly, TextError> {
        self.expect_ident("series")?;
        self.expect(Tok::LParen, "`(`")?;
        self.expect_ident("X")?;
        self.expect(Tok::Caret, "`^`")?;
        let start = self.exponent()?;
        self.expect(Tok::Comma, "`,`")?;
        let num = self.rational_list()?;
        self.expect(Tok::Comma, "`,`")?;
        let span = self.span();
        let den = self.rational_list()?;
        self.expect(Tok::RParen, "`)`")?;
        if den.coeff(0).is_zero() {
            return Err(ParseError {
                span,
                expected: "a denominator with nonzero constant term".into(),
                found: "constant term 0".into(),
            }
            .into());
        }
        Ok(NakedPoly::from_series(&start, num, den)?)
    }

    fn rational_list(&mut self) -> Result<RatPoly, ParseError> {
        self.expect(Tok::LBracket, "`[`")?;
        let mut out = Vec::new();
        if *self.peek() != Tok::RBracket {
            loop {
                out.push(self.signed_rational()?);
                if *self.peek() != Tok::Comma {
                    break;
                }
                self.bump();
            }
        }
        self.expect(Tok::RBracket, "`]`")?;
        Ok(RatPoly::from_coeffs(out))
    }

    /// Polynomial in `n` with rational coefficients.
    fn npoly(&mut self) -> Result<RatPoly, ParseError> {
        self.enter()?;
        let mut acc = match self.peek() {
            Tok::Minus => {
                self.bump();
                self.nterm()?.neg()
            }
            Tok::Plus => {
                self.bump();
                self.nterm()?
            }
            _ => self.nterm()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.nterm()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.nterm()?);
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn nterm(&mut self) -> Result<RatPoly, ParseError> {
        let mut acc = self.nfactor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc.mul(&self.nfactor()?);
        }
        Ok(acc)
    }

    fn nfactor(&mut self) -> Result<RatPoly, ParseError> {
        match self.peek().clone() {
            Tok::Int(_) => Ok(RatPoly::constant(self.unsigned_rational()?)),
            Tok::Ident(s) if s == "n" => {
                self.bump();
                let mut k = 1usize;
                if *self.peek() == Tok::Caret {
                    self.bump();
                    let span = self.span();
                    let e = self.integer()?;
                    k = usize::try_from(&e).ok().filter(|&k| k <= 64).ok_or(ParseError {
                        span,
                        expected: "a power of n of at most 64".into(),
                        found: format!("integer {e}"),
                    })?;
                }
                Ok(RatPoly::monomial(Q::one(), k))
            }
            Tok::LParen => {
                self.bump();
                let p = self.npoly()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            _ => Err(self.error("a rational, `n` or `(`")),
        }
    }

    /// Integer-linear combination of ω-powers, integers and (when `allow_n`)
    /// the index `n`.
    fn affine(&mut self, allow_n: bool) -> Result<Affine, TextError> {
        self.enter()?;
        let mut acc = match self.peek() {
            Tok::Minus => {
                self.bump();
                self.aterm(allow_n)?.scale(&-BigInt::one())
            }
            Tok::Plus => {
                self.bump();
                self.aterm(allow_n)?
            }
            _ => self.aterm(allow_n)?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.aterm(allow_n)?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.add(&self.aterm(allow_n)?.scale(&-BigInt::one()));
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn aterm(&mut self, allow_n: bool) -> Result<Affine, TextError> {
        let mut acc = self.afactor(allow_n)?;
        while *self.peek() == Tok::Star {
            self.bump();
            let span = self.span();
            let f = self.afactor(allow_n)?;
            acc = match (acc.as_integer(), f.as_integer()) {
                (Some(k), _) => f.scale(&k),
                (_, Some(k)) => acc.scale(&k),
                _ => {
                    return Err(ParseError {
                        span,
                        expected: "an integer factor".into(),
                        found: "a product of two non-integers".into(),
                    }
                    .into())
                }
            };
        }
        Ok(acc)
    }

    fn afactor(&mut self, allow_n: bool) -> Result<Affine, TextError> {
        match self.peek().clone() {
            Tok::Int(k) => {
                self.bump();
                Ok(Affine::constant(Surinteger::from(k)))
            }
            Tok::Ident(s) if s == "w" => {
                self.bump();
                if *self.peek() != Tok::Caret {
                    return Ok(Affine::constant(Surinteger::omega()));
                }
                self.bump();
                let e = match self.peek().clone() {
                    Tok::Int(k) => {
                        self.bump();
                        Surinteger::from(k)
                    }
                    Tok::LParen => {
                        self.bump();
                        let a = self.affine(false)?;
                        self.expect(Tok::RParen, "`)`")?;
                        a.c
                    }
                    _ => return Err(self.error("an ordinal exponent").into()),
                };
                let Some(o) = e.to_ordinal() else {
                    return Err(ParseError {
                        span: self.toks[self.pos - 1].span,
                        expected: "an ordinal exponent".into(),
                        found: format!("surinteger {e}"),
                    }
                    .into());
                };
                o.check_caps()?;
                Ok(Affine::constant(Surinteger::omega_pow(o)))
            }
            Tok::Ident(s) if s == "n" && allow_n => {
                self.bump();
                Ok(Affine {
                    c: Surinteger::zero(),
                    n: BigInt::one(),
                })
            }
            Tok::LParen => {
                self.bump();
                let a = self.affine(allow_n)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(a)
            }
            _ => Err(self.error("an exponent term").into()),
        }
    }
}

/// Parses a complete polynomial with no named bindings.
pub fn parse_poly(text: &str) -> Result<NakedPoly, TextError> {
    parse_poly_with(text, &no_names)
}

pub fn parse_poly_with(text: &str, resolver: &Resolver<'_>) -> Result<NakedPoly, TextError> {
    let mut p = PolyParser::new(text, resolver)?;
    let v = p.poly()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_surint(text: &str) -> Result<Surinteger, TextError> {
    let mut p = PolyParser::new(text, &no_names)?;
    let a = p.affine(false)?;
    p.finish()?;
    a.c.check_caps()?;
    Ok(a.c)
}

pub fn parse_ordinal(text: &str) -> Result<Ordinal, TextError> {
    let s = parse_surint(text)?;
    s.to_ordinal().ok_or_else(|| {
        ParseError {
            span: SourceSpan {
                offset: 0,
                length: text.len(),
            },
            expected: "an ordinal".into(),
            found: format!("surinteger {s}"),
        }
        .into()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::ratpoly::q;

    fn w_plus(k: i64) -> Surinteger {
        Surinteger::omega().add_int(&BigInt::from(k))
    }

    #[test]
    fn surint_examples() {
        assert_eq!(parse_surint("0").unwrap(), Surinteger::zero());
        let ww = Surinteger::omega_pow(Ordinal::omega());
        let expect = &(&ww - &Surinteger::omega()) + &Surinteger::from(3);
        assert_eq!(parse_surint("w^(w) - w + 3").unwrap(), expect);
        assert_eq!(parse_surint("w - 2").unwrap(), w_plus(-2));
        assert_eq!(parse_surint("2*w - 3 + w*5").unwrap(), parse_surint("7*w - 3").unwrap());
        assert_eq!(parse_surint("w^2").unwrap(), Surinteger::omega_pow(Ordinal::from(2)));
        assert_eq!(parse_surint("-(w - 3)").unwrap(), -w_plus(-3));
    }

    #[test]
    fn ordinal_examples() {
        assert_eq!(parse_ordinal("w^(w)*2 + 1").unwrap().to_string(), "2*w^(w) + 1");
        assert!(parse_ordinal("w - 1").is_err());
    }

    #[test]
    fn poly_examples() {
        assert_eq!(parse_poly("X^(w)").unwrap(), NakedPoly::x_pow(&Surinteger::omega()).unwrap());
        let p = parse_poly("X^(2) + 1").unwrap();
        assert_eq!(p, NakedPoly::x_pow(&Surinteger::from(2)).unwrap().add(&NakedPoly::one()).unwrap());
        let fam = parse_poly("sum(n<w, (-1)^n * X^(w - 2*(n+1)))").unwrap();
        let expect = NakedPoly::family(&[q(1)], &q(-1), &w_plus(-2), 2, FamilyLength::Omega).unwrap();
        assert_eq!(fam, expect);
    }

    #[test]
    fn products_and_rationals() {
        let p = parse_poly("(X + 1)*(X - 1)").unwrap();
        assert_eq!(p, parse_poly("X^2 - 1").unwrap());
        let h = parse_poly("-3/2*X^(2)").unwrap();
        assert_eq!(h, NakedPoly::monomial(q(-3) / q(2), &Surinteger::from(2)).unwrap());
        assert_eq!(parse_poly("X^(w - 1) * 1/2").unwrap(), parse_poly("1/2*X^(w - 1)").unwrap());
    }

    #[test]
    fn family_forms() {
        let a = parse_poly("sum(n<w, (n^2 + 2*n + 1) * (1/2)^n * X^(w + 3*(1-n)))").unwrap();
        let expect = NakedPoly::family(&[q(1), q(2), q(1)], &(q(1) / q(2)), &w_plus(3), 3, FamilyLength::Omega)
            .unwrap();
        assert_eq!(a, expect);
        let f = parse_poly("sum(n<4, X^(3 - n))").unwrap();
        assert_eq!(f, parse_poly("X^3 + X^2 + X + 1").unwrap());
        let s = parse_poly("series(X^(w), [1], [1, -1, -1])").unwrap();
        assert!(!s.is_finite());
    }

    #[test]
    fn family_underflow_propagates() {
        let err = parse_poly("sum(n<w, X^(5 - 2*n))").unwrap_err();
        assert!(matches!(err, TextError::Engine(Error::InfiniteTailUnderflow(_))));
    }

    #[test]
    fn names_resolve_and_unbound_names_fail() {
        let r = |s: &str| (s == "a").then(|| parse_poly("X + 1").unwrap());
        assert_eq!(parse_poly_with("a*a", &r).unwrap(), parse_poly("X^2 + 2*X + 1").unwrap());
        let err = parse_poly_with("a + b", &r).unwrap_err();
        let TextError::Parse(e) = err else { panic!() };
        assert_eq!(e.span, SourceSpan { offset: 4, length: 1 });
        assert_eq!(e.found, "unbound identifier `b`");
    }

    #[test]
    fn sequential_polys() {
        let mut p = PolyParser::new("X^(w) X^(2)+1 irreducible", &no_names).unwrap();
        assert_eq!(p.poly().unwrap(), parse_poly("X^(w)").unwrap());
        assert_eq!(p.poly().unwrap(), parse_poly("X^2 + 1").unwrap());
        assert!(p.eat_keyword("irreducible"));
        assert!(p.at_end());
    }

    #[test]
    fn error_spans() {
        let TextError::Parse(e) = parse_poly("X^(w +)").unwrap_err() else { panic!() };
        assert_eq!(e.span, SourceSpan { offset: 6, length: 1 });
        assert_eq!(e.expected, "an exponent term");
        assert_eq!(e.to_string(), "parse error at 6..7: expected an exponent term, found `)`");
        let TextError::Parse(e) = parse_poly("1/0").unwrap_err() else { panic!() };
        assert_eq!(e.expected, "a nonzero denominator");
        assert!(parse_poly(&"(".repeat(500)).is_err());
    }
}
