//! S-expression reader for problem files, with line/column diagnostics.
//!
//! Files are UTF-8, `#` starts a comment, atoms are whitespace-separated.
//! Rationals are exact: `p` or `p/q` with nonzero `q`.

use std::fmt;

use duality_core::scalar::Scalar;
use duality_core::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub message: String,
}

impl Diagnostic {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        Self { pos, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.pos.line, self.pos.col, self.message)
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn atom(&self) -> Result<&str, Diagnostic> {
        match self {
            Sexp::Atom(s, _) => Ok(s),
            Sexp::List(_, p) => Err(Diagnostic::new(*p, "expected an atom, found a list")),
        }
    }

    pub fn list(&self) -> Result<&[Sexp], Diagnostic> {
        match self {
            Sexp::List(items, _) => Ok(items),
            Sexp::Atom(a, p) => {
                Err(Diagnostic::new(*p, format!("expected a list, found `{a}`")))
            }
        }
    }

    /// List whose head atom is `tag`; returns the remaining items.
    pub fn tagged(&self, tag: &str) -> Result<&[Sexp], Diagnostic> {
        let items = self.list()?;
        match items.first() {
            Some(head) if head.atom().ok() == Some(tag) => Ok(&items[1..]),
            _ => Err(Diagnostic::new(
                self.pos(),
                format!("expected a `({tag} …)` form"),
            )),
        }
    }

    pub fn head(&self) -> Result<&str, Diagnostic> {
        let items = self.list()?;
        items
            .first()
            .ok_or_else(|| Diagnostic::new(self.pos(), "empty list"))?
            .atom()
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Self { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.chars.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }
}

/// Reads every top-level form in the text.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, Diagnostic> {
    let mut lexer = Lexer::new(text);
    let mut out = Vec::new();
    loop {
        lexer.skip_trivia();
        if lexer.chars.peek().is_none() {
            return Ok(out);
        }
        out.push(read_form(&mut lexer)?);
    }
}

fn read_form(lexer: &mut Lexer) -> Result<Sexp, Diagnostic> {
    lexer.skip_trivia();
    let pos = lexer.pos();
    match lexer.chars.peek() {
        None => Err(Diagnostic::new(pos, "unexpected end of input")),
        Some('(') => {
            lexer.bump();
            let mut items = Vec::new();
            loop {
                lexer.skip_trivia();
                match lexer.chars.peek() {
                    Some(')') => {
                        lexer.bump();
                        return Ok(Sexp::List(items, pos));
                    }
                    None => return Err(Diagnostic::new(pos, "unclosed `(`")),
                    _ => items.push(read_form(lexer)?),
                }
            }
        }
        Some(')') => Err(Diagnostic::new(pos, "unmatched `)`")),
        _ => {
            let mut atom = String::new();
            while let Some(&c) = lexer.chars.peek() {
                if c.is_whitespace() || c == '(' || c == ')' || c == '#' {
                    break;
                }
                atom.push(c);
                lexer.bump();
            }
            Ok(Sexp::Atom(atom, pos))
        }
    }
}

/// Parses an exact rational literal `p` or `p/q`.
pub fn parse_rational(s: &Sexp) -> Result<Q, Diagnostic> {
    let text = s.atom()?;
    let pos = s.pos();
    let bad = |msg: &str| Diagnostic::new(pos, format!("{msg}: `{text}`"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let n: i64 = num.parse().map_err(|_| bad("malformed rational"))?;
    let d: i64 = den.parse().map_err(|_| bad("malformed rational"))?;
    if d == 0 {
        return Err(bad("zero denominator"));
    }
    Ok(Q::ratio(n, d))
}

/// Canonical text for a rational (matches the input grammar).
pub fn format_rational(v: &Q) -> String {
    use num_traits::One;
    if v.denom().is_one() {
        format!("{}", v.numer())
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_forms() {
        let forms = read_all("a (b 1/2 (c)) # comment\n d").unwrap();
        assert_eq!(forms.len(), 3);
        assert_eq!(forms[0].atom().unwrap(), "a");
        assert_eq!(forms[1].head().unwrap(), "b");
    }

    #[test]
    fn diagnostics_carry_position() {
        let err = read_all("(a\n(b").unwrap_err();
        assert_eq!(err.pos.line, 1);
        let err = read_all("x )").unwrap_err();
        assert_eq!(err.pos.line, 1);
        assert_eq!(err.pos.col, 3);
    }

    #[test]
    fn rationals() {
        let forms = read_all("3 -4/6 7/1").unwrap();
        assert_eq!(parse_rational(&forms[0]).unwrap(), Q::ratio(3, 1));
        assert_eq!(parse_rational(&forms[1]).unwrap(), Q::ratio(-2, 3));
        assert_eq!(format_rational(&parse_rational(&forms[1]).unwrap()), "-2/3");
        assert_eq!(format_rational(&parse_rational(&forms[2]).unwrap()), "7");
    }

    #[test]
    fn zero_denominator_rejected() {
        let forms = read_all("1/0").unwrap();
        let err = parse_rational(&forms[0]).unwrap_err();
        assert!(err.message.contains("zero denominator"));
    }
}
