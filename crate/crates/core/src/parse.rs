//! Reader for the s-expression knot grammar:
//!
//! ```text
//! expr    := "(" op ")" | "unknot"
//! op      := "torus" int int | "mirror" expr | "rev" expr | "sum" expr expr+
//!          | "wh" expr | "sat" pattern ":r" int expr
//! pattern := name | "(" "twist" pattern int ")" | "(" "compose" pattern pattern ")"
//! name    := [a-z0-9_]+
//! ```
//!
//! The `twist`/`compose` pattern forms are what the printer emits for
//! normalized satellites; plain registry names are the usual input.

use crate::expr::{gcd, KnotExpr, PatternRef};
use crate::pattern::Registry;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        let mut toks = Vec::new();
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c == b'(' {
                toks.push((i, Tok::Open));
                i += 1;
            } else if c == b')' {
                toks.push((i, Tok::Close));
                i += 1;
            } else {
                let start = i;
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'(' && bytes[i] != b')' {
                    i += 1;
                }
                toks.push((start, Tok::Atom(&src[start..i])));
            }
        }
        Lexer { src, toks, pos: 0 }
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.src.len())
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn found(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Open) => "`(`".into(),
            Some(Tok::Close) => "`)`".into(),
            Some(Tok::Atom(a)) => format!("`{a}`"),
        }
    }

    fn error(&self, expected: &[&str]) -> Error {
        Error::Syntax {
            pos: self.offset(),
            expected: expected.join(" | "),
            found: self.found(),
        }
    }

    fn expect_close(&mut self) -> Result<(), Error> {
        match self.peek() {
            Some(Tok::Close) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(&["`)`"])),
        }
    }

    fn atom(&mut self, expected: &[&str]) -> Result<(usize, &'a str), Error> {
        match self.toks.get(self.pos) {
            Some(&(at, Tok::Atom(a))) => {
                self.pos += 1;
                Ok((at, a))
            }
            _ => Err(self.error(expected)),
        }
    }

    fn int(&mut self) -> Result<i64, Error> {
        let save = self.pos;
        let (_, a) = self.atom(&["integer"])?;
        a.parse::<i64>().map_err(|_| {
            self.pos = save;
            self.error(&["integer"])
        })
    }
}

struct Parser<'a, 'r> {
    lx: Lexer<'a>,
    registry: &'r Registry,
}

impl<'a, 'r> Parser<'a, 'r> {
    fn expr(&mut self) -> Result<KnotExpr, Error> {
        match self.lx.peek() {
            Some(Tok::Atom("unknot")) => {
                self.lx.pos += 1;
                Ok(KnotExpr::Unknot)
            }
            Some(Tok::Open) => {
                self.lx.pos += 1;
                let e = self.op()?;
                self.lx.expect_close()?;
                Ok(e)
            }
            _ => Err(self.lx.error(&["`(`", "`unknot`"])),
        }
    }

    fn op(&mut self) -> Result<KnotExpr, Error> {
        const OPS: [&str; 6] = ["torus", "mirror", "rev", "sum", "wh", "sat"];
        let save = self.lx.pos;
        let (at, head) = self.lx.atom(&OPS)?;
        match head {
            "torus" => {
                let p = self.lx.int()?;
                let q = self.lx.int()?;
                if p < 2 || q < 2 {
                    return Err(Error::TorusRange { pos: at, p, q });
                }
                if gcd(p, q) != 1 {
                    return Err(Error::NonCoprime { pos: at, p, q });
                }
                Ok(KnotExpr::torus(p, q))
            }
            "mirror" => Ok(self.expr()?.mirror()),
            "rev" => Ok(self.expr()?.reverse()),
            "wh" => Ok(self.expr()?.wh()),
            "sum" => {
                let mut items = vec![self.expr()?, self.expr()?];
                while !matches!(self.lx.peek(), Some(Tok::Close) | None) {
                    items.push(self.expr()?);
                }
                Ok(KnotExpr::Sum(items))
            }
            "sat" => {
                let pattern = self.pattern()?;
                match self.lx.atom(&["`:r`"])? {
                    (_, ":r") => {}
                    _ => {
                        self.lx.pos -= 1;
                        return Err(self.lx.error(&["`:r`"]));
                    }
                }
                let r = self.lx.int()?;
                let companion = self.expr()?;
                Ok(KnotExpr::sat(pattern, r, companion))
            }
            _ => {
                self.lx.pos = save;
                Err(self.lx.error(&OPS))
            }
        }
    }

    fn pattern(&mut self) -> Result<PatternRef, Error> {
        match self.lx.peek() {
            Some(Tok::Open) => {
                self.lx.pos += 1;
                let save = self.lx.pos;
                let (_, head) = self.lx.atom(&["`twist`", "`compose`"])?;
                let p = match head {
                    "twist" => {
                        let inner = self.pattern()?;
                        let t = self.lx.int()?;
                        inner.twist(t)
                    }
                    "compose" => {
                        let a = self.pattern()?;
                        let b = self.pattern()?;
                        PatternRef::compose(a, b)
                    }
                    _ => {
                        self.lx.pos = save;
                        return Err(self.lx.error(&["`twist`", "`compose`"]));
                    }
                };
                self.lx.expect_close()?;
                Ok(p)
            }
            Some(Tok::Atom(_)) => {
                let save = self.lx.pos;
                let (_, name) = self.lx.atom(&["pattern name"])?;
                if !name
                    .chars()
                    .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
                {
                    self.lx.pos = save;
                    return Err(self.lx.error(&["pattern name [a-z0-9_]+"]));
                }
                if !self.registry.contains(name) {
                    return Err(Error::UnknownPattern(name.to_string()));
                }
                Ok(PatternRef::named(name))
            }
            _ => Err(self.lx.error(&["pattern name", "`(`"])),
        }
    }
}

/// Parse one expression. The result is not normalized.
pub fn parse_expr(text: &str, registry: &Registry) -> Result<KnotExpr, Error> {
    let mut p = Parser {
        lx: Lexer::new(text),
        registry,
    };
    let e = p.expr()?;
    if p.lx.peek().is_some() {
        return Err(p.lx.error(&["end of input"]));
    }
    Ok(e)
}
