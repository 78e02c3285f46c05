//! The `transpoly` command language.
//!
//! One command per line; `#` starts a comment line. Every command echoes as
//! `> line` in a transcript, followed by its output.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::division::{divmod, ext_gcd, verify_factor, DivisionTrace, DEFAULT_BUDGET};
use crate::error::Error;
use crate::napoly::NakedPoly;
use crate::quotient::{q_inv, reduce, Modulus};
use crate::textio::{poly_json_value, to_json, trace_to_json, ParseError, PolyParser, TextError};

const DEFAULT_SUPP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputMode {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Engine,
}

/// A failed command. `output` holds anything the command printed before
/// failing, such as a partial division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    pub output: String,
}

impl CliError {
    fn parse(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Parse,
            message: message.into(),
            output: String::new(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Parse => 2,
            ErrorKind::Engine => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            kind: ErrorKind::Engine,
            message: e.to_string(),
            output: String::new(),
        }
    }
}

impl From<TextError> for CliError {
    fn from(e: TextError) -> Self {
        match e {
            TextError::Engine(e) => e.into(),
            other => CliError::parse(other.to_string()),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::parse(e.to_string())
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Output(String),
    Quit,
}

#[derive(Clone, Debug)]
pub struct Session {
    bindings: BTreeMap<String, NakedPoly>,
    modulus: Option<Arc<Modulus>>,
    budget: usize,
    output: OutputMode,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(DEFAULT_BUDGET, OutputMode::Text)
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !["X", "w", "n", "sum", "series"].contains(&s)
}

impl Session {
    pub fn new(budget: usize, output: OutputMode) -> Self {
        Session {
            bindings: BTreeMap::new(),
            modulus: None,
            budget: budget.max(1),
            output,
        }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn binding(&self, name: &str) -> Option<&NakedPoly> {
        self.bindings.get(name)
    }

    /// Parses whitespace-separated polynomial arguments starting at byte
    /// `offset` of `line`, plus the trailing words accepted by `tail`.
    fn args<T>(
        &self,
        line: &str,
        offset: usize,
        count: usize,
        tail: impl FnOnce(&mut PolyParser<'_>) -> Result<T, ParseError>,
    ) -> Result<(Vec<NakedPoly>, T), CliError> {
        let resolver = |name: &str| self.bindings.get(name).cloned();
        let rebase = |mut e: ParseError| {
            e.span.offset += offset;
            e
        };
        let mut p = PolyParser::new(&line[offset..], &resolver).map_err(|e| CliError::from(rebase(e)))?;
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            match p.poly() {
                Ok(v) => out.push(v),
                Err(TextError::Parse(e)) => return Err(rebase(e).into()),
                Err(e) => return Err(e.into()),
            }
        }
        let t = tail(&mut p).map_err(rebase)?;
        p.finish().map_err(rebase)?;
        Ok((out, t))
    }

    fn poly_text(&self, p: &NakedPoly) -> String {
        match self.output {
            OutputMode::Text => p.to_string(),
            OutputMode::Json => to_json(p),
        }
    }

    fn modulus(&self) -> Result<&Arc<Modulus>, CliError> {
        self.modulus
            .as_ref()
            .ok_or_else(|| Error::InvalidModulus("no modulus is set".into()).into())
    }

    fn divmod_text(&self, t: &DivisionTrace) -> String {
        match self.output {
            OutputMode::Text => format!(
                "quotient: {}\nremainder: {}\ntermination: {}",
                t.quotient, t.remainder, t.termination
            ),
            OutputMode::Json => trace_to_json(t),
        }
    }

    /// Runs one line. Blank lines and comments produce empty output.
    pub fn eval(&mut self, line: &str) -> Result<Outcome, CliError> {
        let trimmed = line.trim_start();
        let lead = line.len() - trimmed.len();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return Ok(Outcome::Output(String::new()));
        }
        let cmd_end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let cmd = &trimmed[..cmd_end];
        let rest = lead + cmd_end;
        let json = self.output == OutputMode::Json;
        let out = match cmd {
            "quit" | "exit" => {
                self.args(line, rest, 0, |_| Ok(()))?;
                return Ok(Outcome::Quit);
            }
            "let" => {
                let body = &line[rest..];
                let eq = body
                    .find('=')
                    .ok_or_else(|| CliError::parse("expected `let <name> = <poly>`"))?;
                let name = body[..eq].trim();
                if !valid_name(name) {
                    return Err(CliError::parse(format!("invalid name `{name}`")));
                }
                let (v, ()) = self.args(line, rest + eq + 1, 1, |_| Ok(()))?;
                let p = v.into_iter().next().expect("one argument");
                let text = if json {
                    json!({"name": name, "value": poly_json_value(&p)}).to_string()
                } else {
                    format!("{name} = {p}")
                };
                self.bindings.insert(name.to_string(), p);
                text
            }
            "show" => {
                let (v, ()) = self.args(line, rest, 1, |_| Ok(()))?;
                self.poly_text(&v[0])
            }
            "divmod" => {
                let (v, ()) = self.args(line, rest, 2, |_| Ok(()))?;
                let t = divmod(&v[0], &v[1], self.budget)?;
                let text = self.divmod_text(&t);
                if t.exhausted {
                    let mut e = CliError::from(t.into_complete().unwrap_err());
                    e.output = text;
                    return Err(e);
                }
                text
            }
            "cmp" => {
                let (v, ()) = self.args(line, rest, 2, |_| Ok(()))?;
                let word = match v[0].cmp_poly(&v[1]) {
                    std::cmp::Ordering::Less => "less",
                    std::cmp::Ordering::Equal => "equal",
                    std::cmp::Ordering::Greater => "greater",
                };
                if json {
                    json!({ "cmp": word }).to_string()
                } else {
                    word.to_string()
                }
            }
            "deg" => {
                let (v, ()) = self.args(line, rest, 1, |_| Ok(()))?;
                let d = v[0].degree()?;
                if json {
                    json!({ "degree": d.to_string() }).to_string()
                } else {
                    d.to_string()
                }
            }
            "supp" => {
                let (v, k) = self.args(line, rest, 1, |p| {
                    if p.at_end() {
                        Ok(DEFAULT_SUPP)
                    } else {
                        let n = p.integer()?;
                        Ok(usize::try_from(n).unwrap_or(usize::MAX).min(4096))
                    }
                })?;
                let terms = v[0].support_seq(k);
                let order = v[0].support_order_type();
                if json {
                    let list: Vec<Value> = terms
                        .iter()
                        .map(|(e, c)| json!([e.to_string(), format!("{}/{}", c.numer(), c.denom())]))
                        .collect();
                    json!({"terms": list, "orderType": order.to_string()}).to_string()
                } else {
                    let mut s: Vec<String> = terms.iter().map(|(e, c)| format!("{e}: {c}")).collect();
                    s.push(format!("order type: {order}"));
                    s.join("\n")
                }
            }
            "gcd" => {
                let (v, ()) = self.args(line, rest, 2, |_| Ok(()))?;
                let b = ext_gcd(&v[0], &v[1], self.budget)?;
                if json {
                    json!({
                        "gcd": poly_json_value(&b.g),
                        "u": poly_json_value(&b.u),
                        "v": poly_json_value(&b.v),
                    })
                    .to_string()
                } else {
                    format!("gcd: {}\nu: {}\nv: {}", b.g, b.u, b.v)
                }
            }
            "factor?" => {
                let (v, ()) = self.args(line, rest, 3, |_| Ok(()))?;
                let ok = verify_factor(&v[0], &v[1], &v[2]);
                if json {
                    json!({ "factor": ok }).to_string()
                } else {
                    ok.to_string()
                }
            }
            "mod" => self.mod_command(line, rest)?,
            "set" => self.set_command(line, rest)?,
            other => return Err(CliError::parse(format!("unknown command `{other}`"))),
        };
        Ok(Outcome::Output(out))
    }

    fn sub_command(line: &str, rest: usize) -> (&str, usize) {
        let body = &line[rest..];
        let t = body.trim_start();
        let start = rest + (body.len() - t.len());
        let end = t.find(char::is_whitespace).unwrap_or(t.len());
        (&t[..end], start + end)
    }

    fn mod_command(&mut self, line: &str, rest: usize) -> Result<String, CliError> {
        let (sub, rest) = Self::sub_command(line, rest);
        match sub {
            "set" => {
                let (v, irreducible) = self.args(line, rest, 1, |p| Ok(p.eat_keyword("irreducible")))?;
                let m = Modulus::new(v.into_iter().next().expect("one argument"), irreducible)?;
                let text = match self.output {
                    OutputMode::Json => json!({
                        "modulus": poly_json_value(m.poly()),
                        "irreducible": irreducible,
                    })
                    .to_string(),
                    OutputMode::Text if irreducible => {
                        format!("modulus: {} (asserted irreducible)", m.poly())
                    }
                    OutputMode::Text => format!("modulus: {}", m.poly()),
                };
                self.modulus = Some(m);
                Ok(text)
            }
            "reduce" => {
                let (v, ()) = self.args(line, rest, 1, |_| Ok(()))?;
                let r = reduce(&v[0], self.modulus()?, self.budget)?;
                Ok(self.poly_text(r.rep()))
            }
            "inv" => {
                let (v, ()) = self.args(line, rest, 1, |_| Ok(()))?;
                let m = self.modulus()?;
                if !m.asserted_irreducible() {
                    return Err(Error::InvalidModulus(
                        "inverses need a modulus asserted irreducible".into(),
                    )
                    .into());
                }
                let a = reduce(&v[0], m, self.budget)?;
                let inv = q_inv(&a, self.budget)?;
                Ok(self.poly_text(inv.rep()))
            }
            "clear" => {
                self.args(line, rest, 0, |_| Ok(()))?;
                self.modulus = None;
                Ok("modulus cleared".into())
            }
            other => Err(CliError::parse(format!("unknown subcommand `mod {other}`"))),
        }
    }

    fn set_command(&mut self, line: &str, rest: usize) -> Result<String, CliError> {
        let (sub, rest) = Self::sub_command(line, rest);
        let (value, _) = Self::sub_command(line, rest);
        let extra = line[rest..].trim();
        if extra != value {
            return Err(CliError::parse(format!("unexpected input after `{value}`")));
        }
        match sub {
            "budget" => {
                let n: usize = value
                    .parse()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| CliError::parse(format!("expected a positive budget, found `{value}`")))?;
                self.budget = n;
                Ok(format!("budget: {n}"))
            }
            "output" => {
                self.output = match value {
                    "text" => OutputMode::Text,
                    "json" => OutputMode::Json,
                    _ => return Err(CliError::parse(format!("expected `text` or `json`, found `{value}`"))),
                };
                Ok(format!("output: {value}"))
            }
            other => Err(CliError::parse(format!("unknown setting `{other}`"))),
        }
    }
}

/// Options for [`run`].
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub keep_going: bool,
    /// Echo each command as `> line` before its output.
    pub echo: bool,
    pub prompt: bool,
}

/// Executes lines from `input`. Returns the process exit code: 0, or the code
/// of the first failing command.
pub fn run(
    session: &mut Session,
    input: impl BufRead,
    out: &mut impl Write,
    err: &mut impl Write,
    opts: RunOptions,
) -> std::io::Result<i32> {
    let mut code = 0;
    let mut lines = input.lines();
    loop {
        if opts.prompt {
            write!(out, "transpoly> ")?;
            out.flush()?;
        }
        let Some(line) = lines.next() else { break };
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if opts.echo {
            writeln!(out, "> {trimmed}")?;
        }
        match session.eval(trimmed) {
            Ok(Outcome::Quit) => break,
            Ok(Outcome::Output(text)) => {
                if !text.is_empty() {
                    writeln!(out, "{text}")?;
                }
            }
            Err(e) => {
                if !e.output.is_empty() {
                    writeln!(out, "{}", e.output)?;
                }
                out.flush()?;
                writeln!(err, "error: {e}")?;
                if code == 0 {
                    code = e.exit_code();
                }
                if !opts.keep_going && !opts.prompt {
                    break;
                }
            }
        }
    }
    out.flush()?;
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(s: &mut Session, line: &str) -> String {
        match s.eval(line).unwrap() {
            Outcome::Output(t) => t,
            Outcome::Quit => panic!("unexpected quit"),
        }
    }

    #[test]
    fn paper_division() {
        let mut s = Session::default();
        assert_eq!(
            eval(&mut s, "divmod X^(w) X^(2)+1"),
            "quotient: sum(n<w, (-1)^n * X^(w - 2*(n+1)))\nremainder: 0\ntermination: w"
        );
    }

    #[test]
    fn degree_and_cmp() {
        let mut s = Session::default();
        assert_eq!(eval(&mut s, "deg X^(w) + X^(3)"), "w");
        assert_eq!(eval(&mut s, "cmp X^(w) 1000000*X^2"), "greater");
    }

    #[test]
    fn modular_inverse() {
        let mut s = Session::default();
        assert_eq!(eval(&mut s, "mod set X^(w) - 2 irreducible"), "modulus: X^(w) - 2 (asserted irreducible)");
        assert_eq!(eval(&mut s, "mod inv X"), "1/2*X^(w - 1)");
        assert_eq!(eval(&mut s, "mod reduce X^(w + 1)"), "2*X");
    }

    #[test]
    fn bindings() {
        let mut s = Session::default();
        assert_eq!(eval(&mut s, "let q = X^2 + 1"), "q = X^(2) + 1");
        assert_eq!(eval(&mut s, "show q*q"), "X^(4) + 2*X^(2) + 1");
        assert_eq!(eval(&mut s, "factor? q*q q q"), "true");
        let e = s.eval("cmp q r").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.message.contains("unbound identifier `r`"));
        assert!(e.message.contains("at 6..7"));
    }

    #[test]
    fn errors_are_classified() {
        let mut s = Session::default();
        assert_eq!(s.eval("bogus").unwrap_err().exit_code(), 2);
        assert_eq!(s.eval("deg 0").unwrap_err().exit_code(), 3);
        assert_eq!(s.eval("mod reduce X").unwrap_err().exit_code(), 3);
        assert_eq!(s.eval("set budget 0").unwrap_err().exit_code(), 2);
        assert_eq!(s.eval("show sum(n<w, X^(5 - 2*n))").unwrap_err().exit_code(), 3);
    }

    #[test]
    fn exhausted_division_keeps_partial_output() {
        let mut s = Session::default();
        eval(&mut s, "set budget 3");
        let e = s.eval("divmod X^(10) X+1").unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert!(e.message.starts_with("budget exhausted after 3 steps"));
        assert!(e.output.starts_with("quotient: X^(9) - X^(8) + X^(7)"));
    }

    #[test]
    fn json_mode() {
        let mut s = Session::default();
        eval(&mut s, "set output json");
        assert_eq!(eval(&mut s, "show X"), r#"{"schemaVersion":1,"families":[{"coeffPoly":["1/1"],"ratio":"1/1","startExp":"1","step":1,"length":1}]}"#);
        assert_eq!(eval(&mut s, "deg X"), r#"{"degree":"1"}"#);
    }

    #[test]
    fn run_stops_at_first_error() {
        let script = "show X\ncmp a X\nshow 1\n";
        let mut out = Vec::new();
        let mut err = Vec::new();
        let opts = RunOptions { keep_going: false, echo: true, prompt: false };
        let code = run(&mut Session::default(), script.as_bytes(), &mut out, &mut err, opts).unwrap();
        assert_eq!(code, 2);
        assert_eq!(String::from_utf8(out).unwrap(), "> show X\nX\n> cmp a X\n");
        assert!(String::from_utf8(err).unwrap().contains("unbound identifier `a`"));

        let mut out = Vec::new();
        let opts = RunOptions { keep_going: true, ..opts };
        let code = run(&mut Session::default(), script.as_bytes(), &mut out, &mut Vec::new(), opts).unwrap();
        assert_eq!(code, 2);
        assert!(String::from_utf8(out).unwrap().ends_with("> show 1\n1\n"));
    }
}
