//! Concrete syntax for closed first-order queries.
//!
//! ```text
//! formula := disj
//! disj    := conj ('|' conj)*
//! conj    := unary ('&' unary)*
//! unary   := '!' unary | ('exists' | 'forall') var (',' var)* '.' formula
//!          | '(' formula ')' | Rel '(' term (',' term)* ')' | term op term
//! op      := '=' | '!=' | '<' | '>'
//! term    := var | "string" | integer
//! ```
//!
//! Quantifier bodies extend as far right as possible. String literals are
//! names, integers are nats.

use crate::error::{Error, Result};
use crate::model::Value;

use super::{CmpOp, Formula, Term};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Pipe,
    Eq,
    Ne,
    Lt,
    Gt,
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        fn advance(i: &mut usize, n: usize, col: &mut usize) {
            *i += n;
            *col += n;
        }
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Pipe),
            '=' => Some(Tok::Eq),
            '<' => Some(Tok::Lt),
            '>' => Some(Tok::Gt),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Spanned {
                tok,
                line: l0,
                col: c0,
            });
            advance(&mut i, 1, &mut col);
            continue;
        }
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(&mut i, 1, &mut col),
            '!' => {
                if chars.get(i + 1) == Some(&'=') {
                    out.push(Spanned {
                        tok: Tok::Ne,
                        line: l0,
                        col: c0,
                    });
                    advance(&mut i, 2, &mut col);
                } else {
                    out.push(Spanned {
                        tok: Tok::Bang,
                        line: l0,
                        col: c0,
                    });
                    advance(&mut i, 1, &mut col);
                }
            }
            '"' => {
                let mut s = String::new();
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None | Some('\n') => {
                            return Err(Error::syntax(l0, c0, "unterminated string literal"))
                        }
                        Some('"') => break,
                        Some('\\') => match chars.get(j + 1) {
                            Some(&e @ ('"' | '\\')) => {
                                s.push(e);
                                j += 2;
                            }
                            _ => return Err(Error::syntax(l0, c0 + (j - i), "bad escape")),
                        },
                        Some(&ch) => {
                            s.push(ch);
                            j += 1;
                        }
                    }
                }
                out.push(Spanned {
                    tok: Tok::Str(s),
                    line: l0,
                    col: c0,
                });
                let n = j + 1 - i;
                advance(&mut i, n, &mut col);
            }
            c if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) => {
                let mut j = i + 1;
                while chars.get(j).is_some_and(char::is_ascii_digit) {
                    j += 1;
                }
                let lit: String = chars[i..j].iter().collect();
                let n = lit
                    .parse()
                    .map_err(|_| Error::syntax(l0, c0, format!("integer `{lit}` out of range")))?;
                out.push(Spanned {
                    tok: Tok::Int(n),
                    line: l0,
                    col: c0,
                });
                let n = j - i;
                advance(&mut i, n, &mut col);
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while chars
                    .get(j)
                    .is_some_and(|&ch| ch.is_alphanumeric() || ch == '_' || ch == '\'')
                {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                out.push(Spanned {
                    tok: Tok::Ident(word),
                    line: l0,
                    col: c0,
                });
                let n = j - i;
                advance(&mut i, n, &mut col);
            }
            other => return Err(Error::syntax(l0, c0, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let s = &self.toks[self.pos];
        Error::syntax(s.line, s.col, msg)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.conj()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Tok::Ident(kw) if kw == "exists" || kw == "forall" => {
                self.bump();
                let mut vars = Vec::new();
                loop {
                    match self.bump() {
                        Tok::Ident(v) if v != "exists" && v != "forall" => vars.push(v),
                        _ => {
                            self.pos -= 1;
                            return Err(self.error("expected a variable name"));
                        }
                    }
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.expect(Tok::Dot, "`.` after quantified variables")?;
                let mut body = self.formula()?;
                for var in vars.into_iter().rev() {
                    body = if kw == "exists" {
                        Formula::Exists {
                            var,
                            sort: None,
                            body: Box::new(body),
                        }
                    } else {
                        Formula::Forall {
                            var,
                            sort: None,
                            body: Box::new(body),
                        }
                    };
                }
                Ok(body)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(rel) if *self.peek2() == Tok::LParen => {
                self.bump();
                self.bump();
                let mut args = vec![self.term()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.term()?);
                }
                self.expect(Tok::RParen, "`)` closing the atom")?;
                Ok(Formula::Atom { rel, args })
            }
            _ => {
                let lhs = self.term()?;
                let op = match self.bump() {
                    Tok::Eq => CmpOp::Eq,
                    Tok::Ne => CmpOp::Ne,
                    Tok::Lt => CmpOp::Lt,
                    Tok::Gt => CmpOp::Gt,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("expected a comparison operator"));
                    }
                };
                let rhs = self.term()?;
                Ok(Formula::Cmp { op, lhs, rhs })
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Ident(v) if v != "exists" && v != "forall" => {
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Term::Const(Value::Name(s)))
            }
            Tok::Int(n) => {
                self.bump();
                Ok(Term::Const(Value::Nat(n)))
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

/// Parses without schema checks.
pub(crate) fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}
