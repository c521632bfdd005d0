//! Text format for specifications.
//!
//! ```text
//! spec   ::= line+            one equation per line, `#` starts a comment
//! line   ::= NAME "=" expr
//! expr   ::= term ("+" term)*
//! term   ::= factor+          juxtaposition is the (ordered) product
//! factor ::= "E" | "Z" | "ZL" | "ZR" | "ZLR" | NAME | "Seq" "(" expr ")" | "(" expr ")"
//! NAME   ::= letter (letter | digit | "." | "_")*
//! ```
//!
//! The first equation defines the root. `SZ` names the reserved class
//! `SZ = E + SZ Z` and is added automatically when referenced.

use crate::error::{ParseError, Result};
use crate::expr::{Atom, Expr};
use crate::spec::{Equation, Specification};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Eq,
    Plus,
    Open,
    Close,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let simple = match c {
            '=' => Some(Tok::Eq),
            '+' => Some(Tok::Plus),
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, column });
            i += 1;
        } else if c == '#' {
            break;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '.' || chars[i] == '_')
            {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Name(chars[start..i].iter().collect()),
                column,
            });
        } else {
            return Err(err(line, column, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct LineParser {
    tokens: Vec<Token>,
    pos: usize,
    line: usize,
    end_column: usize,
}

impl LineParser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map_or(self.end_column, |t| t.column)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(err(self.line, self.column(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = Vec::new();
        while matches!(self.peek(), Some(Tok::Name(_) | Tok::Open)) {
            factors.push(self.factor()?);
        }
        match factors.len() {
            0 => Err(err(self.line, self.column(), "expected a term")),
            1 => Ok(factors.pop().unwrap()),
            _ => Ok(Expr::Product(factors)),
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let column = self.column();
        match self.peek().cloned() {
            Some(Tok::Open) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::Close, "`)`")?;
                Ok(e)
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                if let Some(atom) = Atom::from_name(&name) {
                    return Ok(Expr::Atom(atom));
                }
                if name == "Seq" {
                    self.expect(Tok::Open, "`(` after Seq")?;
                    let e = self.expr()?;
                    self.expect(Tok::Close, "`)`")?;
                    return Ok(Expr::seq(e));
                }
                if !is_name(&name) {
                    return Err(err(self.line, column, format!("invalid name `{name}`")));
                }
                Ok(Expr::Ref(name))
            }
            _ => Err(err(self.line, column, "expected a factor")),
        }
    }
}

/// Valid class name: a letter followed by letters, digits, `.` or `_`, and
/// not one of the reserved words `E Z ZL ZR ZLR Seq`.
pub fn is_name(name: &str) -> bool {
    let mut chars = name.chars();
    let starts_ok = chars.next().is_some_and(char::is_alphabetic);
    starts_ok
        && chars.all(|c| c.is_alphanumeric() || c == '.' || c == '_')
        && Atom::from_name(name).is_none()
        && name != "Seq"
}

/// Parses DSL text into a validated specification.
pub fn parse_spec(text: &str) -> Result<Specification> {
    let mut equations = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens = tokenize(raw, line)?;
        if tokens.is_empty() {
            continue;
        }
        let end_column = raw.chars().count() + 1;
        let mut p = LineParser {
            tokens,
            pos: 0,
            line,
            end_column,
        };
        let lhs = match p.peek().cloned() {
            Some(Tok::Name(n)) if is_name(&n) => n,
            Some(Tok::Name(n)) => {
                return Err(err(line, p.column(), format!("`{n}` cannot be defined")).into())
            }
            _ => return Err(err(line, p.column(), "expected a class name").into()),
        };
        p.pos += 1;
        p.expect(Tok::Eq, "`=`")?;
        let rhs = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(err(line, p.column(), "unexpected token after expression").into());
        }
        equations.push(Equation::new(lhs, rhs));
    }
    Specification::new(equations)
}

/// Renders a specification back to DSL text, one equation per line.
pub fn render_spec(spec: &Specification) -> String {
    let mut out = String::new();
    for eq in spec.equations() {
        out.push_str(&eq.to_string());
        out.push('\n');
    }
    out
}
