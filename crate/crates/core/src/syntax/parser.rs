//! Recursive-descent parser for the formula grammar.
//!
//! Precedence, loosest first: `<->` (left), `->` (right), `|` (left),
//! `&` (left), then the prefix operators `!`, `~`, `D`. A quantifier
//! `forall x. φ` / `exists x. φ` extends as far right as possible.

use super::formula::{Formula, Term};
use super::signature::Signature;
use super::SyntaxError;

const KEYWORDS: &[&str] = &["bot", "top", "D", "forall", "exists"];

pub(crate) fn is_keyword(name: &str) -> bool {
    KEYWORDS.contains(&name)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    And,
    Or,
    Arrow,
    Iff,
    Bang,
    Tilde,
    Delta,
    Bot,
    Top,
    Forall,
    Exists,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::End => "end of input".to_string(),
            other => format!("{other:?}"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let col = |byte: usize| text[..byte].chars().count() + 1;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '&' | '∧' => Some(Tok::And),
            '|' | '∨' => Some(Tok::Or),
            '!' | '¬' => Some(Tok::Bang),
            '~' | '∼' => Some(Tok::Tilde),
            'Δ' => Some(Tok::Delta),
            '⊥' => Some(Tok::Bot),
            '⊤' => Some(Tok::Top),
            '→' => Some(Tok::Arrow),
            '↔' => Some(Tok::Iff),
            '∀' => Some(Tok::Forall),
            '∃' => Some(Tok::Exists),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col(pos)));
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '-' && next == Some('>') {
            out.push((Tok::Arrow, col(pos)));
            i += 2;
            continue;
        }
        if c == '<' && next == Some('-') && chars.get(i + 2).map(|&(_, c)| c) == Some('>') {
            out.push((Tok::Iff, col(pos)));
            i += 3;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            let tok = match word.as_str() {
                "bot" => Tok::Bot,
                "top" => Tok::Top,
                "D" => Tok::Delta,
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                _ => Tok::Ident(word),
            };
            out.push((tok, col(pos)));
            continue;
        }
        return Err(SyntaxError::Parse {
            column: col(pos),
            message: format!("unexpected character `{c}`"),
        });
    }
    out.push((Tok::End, text.chars().count() + 1));
    Ok(out)
}

enum Mode<'s> {
    Strict(&'s Signature),
    Infer(Signature),
}

struct Parser<'s> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    mode: Mode<'s>,
    scope: Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse {
            column: self.column(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            let found = self.peek().describe();
            self.error(format!("expected {}, found {found}", tok.describe()))
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let right = self.implication()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, SyntaxError> {
        let left = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Tilde => {
                self.bump();
                Ok(Formula::tilde(self.unary()?))
            }
            Tok::Delta => {
                self.bump();
                Ok(Formula::delta(self.unary()?))
            }
            Tok::Forall | Tok::Exists => {
                let universal = self.bump() == Tok::Forall;
                let var = match self.bump() {
                    Tok::Ident(v) => v,
                    other => {
                        self.pos -= 1;
                        return self.error(format!("expected variable, found {}", other.describe()));
                    }
                };
                self.expect(Tok::Dot)?;
                self.scope.push(var.clone());
                let body = self.formula();
                self.scope.pop();
                let body = body?;
                Ok(if universal {
                    Formula::forall(var, body)
                } else {
                    Formula::exists(var, body)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, SyntaxError> {
        let column = self.column();
        match self.bump() {
            Tok::Bot => Ok(Formula::Bottom),
            Tok::Top => Ok(Formula::top()),
            Tok::LParen => {
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => {
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    if *self.peek() != Tok::RParen {
                        loop {
                            args.push(self.term()?);
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RParen)?;
                }
                self.declare_relation(&name, args.len(), column)?;
                Ok(Formula::atom(name, args))
            }
            other => {
                self.pos -= usize::from(other != Tok::End);
                self.error(format!("expected a formula, found {}", other.describe()))
            }
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let column = self.column();
        match self.bump() {
            Tok::Ident(name) => {
                if self.scope.contains(&name) {
                    return Ok(Term::Var(name));
                }
                match &mut self.mode {
                    Mode::Strict(sig) => {
                        if sig.has_constant(&name) {
                            Ok(Term::Const(name))
                        } else if sig.arity(&name).is_some() {
                            Err(SyntaxError::Parse {
                                column,
                                message: format!("relation symbol `{name}` used as a term"),
                            })
                        } else {
                            Ok(Term::Var(name))
                        }
                    }
                    Mode::Infer(sig) => {
                        sig.add_constant(&name).map_err(|_| SyntaxError::Parse {
                            column,
                            message: format!("`{name}` is already a relation symbol"),
                        })?;
                        Ok(Term::Const(name))
                    }
                }
            }
            other => {
                self.pos -= usize::from(other != Tok::End);
                self.error(format!("expected a term, found {}", other.describe()))
            }
        }
    }

    fn declare_relation(&mut self, name: &str, arity: usize, column: usize) -> Result<(), SyntaxError> {
        match &mut self.mode {
            Mode::Strict(sig) => match sig.arity(name) {
                None => Err(SyntaxError::UndeclaredSymbol {
                    name: name.to_string(),
                    column,
                }),
                Some(expected) if expected != arity => Err(SyntaxError::ArityMismatch {
                    name: name.to_string(),
                    expected,
                    found: arity,
                    column,
                }),
                Some(_) => Ok(()),
            },
            Mode::Infer(sig) => match sig.arity(name) {
                Some(expected) if expected != arity => Err(SyntaxError::ArityMismatch {
                    name: name.to_string(),
                    expected,
                    found: arity,
                    column,
                }),
                _ => sig.add_relation(name, arity).map_err(|_| SyntaxError::Parse {
                    column,
                    message: format!("`{name}` is already a constant"),
                }),
            },
        }
    }

    fn finish(&mut self, f: Formula) -> Result<Formula, SyntaxError> {
        if *self.peek() != Tok::End {
            let found = self.peek().describe();
            return self.error(format!("unexpected {found} after formula"));
        }
        Ok(f)
    }
}

/// Parses `text` against a declared signature.
///
/// Identifiers in term position resolve to an enclosing bound variable first,
/// then to a declared constant, and otherwise to a free variable.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        mode: Mode::Strict(sig),
        scope: Vec::new(),
    };
    let f = p.formula()?;
    p.finish(f)
}

/// Parses `text` and infers its signature: every relation becomes declared at
/// the arity it is used with, and every unbound term becomes a constant.
pub fn parse_formula_inferred(text: &str) -> Result<(Formula, Signature), SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        mode: Mode::Infer(Signature::new()),
        scope: Vec::new(),
    };
    let f = p.formula()?;
    let f = p.finish(f)?;
    match p.mode {
        Mode::Infer(sig) => Ok((f, sig)),
        Mode::Strict(_) => unreachable!(),
    }
}
