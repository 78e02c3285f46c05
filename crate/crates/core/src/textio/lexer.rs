use num_bigint::BigInt;

use super::{ParseError, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Less,
    End,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Less => "`<`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(super) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub(super) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(i, ch)) = it.peek() {
        if ch.is_whitespace() {
            it.next();
            continue;
        }
        let single = match ch {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '<' => Some(Tok::Less),
            _ => None,
        };
        if let Some(tok) = single {
            it.next();
            out.push(Token {
                tok,
                span: SourceSpan { offset: i, length: 1 },
            });
            continue;
        }
        if ch.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, c)) = it.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                end = j + 1;
                it.next();
            }
            let n: BigInt = src[i..end].parse().expect("ascii digits");
            out.push(Token {
                tok: Tok::Int(n),
                span: SourceSpan { offset: i, length: end - i },
            });
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let mut end = i;
            while let Some(&(j, c)) = it.peek() {
                if !(c.is_ascii_alphanumeric() || c == '_') {
                    break;
                }
                end = j + c.len_utf8();
                it.next();
            }
            out.push(Token {
                tok: Tok::Ident(src[i..end].to_string()),
                span: SourceSpan { offset: i, length: end - i },
            });
            continue;
        }
        return Err(ParseError {
            span: SourceSpan {
                offset: i,
                length: ch.len_utf8(),
            },
            expected: "a token".into(),
            found: format!("character {ch:?}"),
        });
    }
    out.push(Token {
        tok: Tok::End,
        span: SourceSpan {
            offset: src.len(),
            length: 0,
        },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans_are_byte_offsets() {
        let toks = tokenize("X^(w - 12)").unwrap();
        let kinds: Vec<Tok> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Ident("X".into()),
                Tok::Caret,
                Tok::LParen,
                Tok::Ident("w".into()),
                Tok::Minus,
                Tok::Int(BigInt::from(12)),
                Tok::RParen,
                Tok::End
            ]
        );
        assert_eq!(toks[5].span, SourceSpan { offset: 7, length: 2 });
    }

    #[test]
    fn rejects_stray_characters() {
        let err = tokenize("X + ω").unwrap_err();
        assert_eq!(err.span, SourceSpan { offset: 4, length: 2 });
        assert_eq!(err.found, "character 'ω'");
    }
}
