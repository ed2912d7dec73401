//! Boolean expressions over `X1..Xs`.
//!
//! ```text
//! or    := xor ( "|" xor )*
//! xor   := and ( "^" and )*
//! and   := unary ( "&" unary )*
//! unary := "!" unary | atom
//! atom  := "X" digits | "0" | "1" | "(" or ")"
//! ```
//!
//! Binary operators are left-associative; `!` binds tightest.

use std::fmt;

use crate::boolmodel::BoolFn;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolExpr {
    Const(bool),
    /// 1-based state index.
    Var(usize),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Xor(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn eval(&self, bits: usize) -> bool {
        match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Var(i) => (bits >> (i - 1)) & 1 == 1,
            BoolExpr::Not(e) => !e.eval(bits),
            BoolExpr::And(a, b) => a.eval(bits) && b.eval(bits),
            BoolExpr::Xor(a, b) => a.eval(bits) ^ b.eval(bits),
            BoolExpr::Or(a, b) => a.eval(bits) || b.eval(bits),
        }
    }

    /// Largest state index mentioned, 0 when there is none.
    pub fn max_state(&self) -> usize {
        match self {
            BoolExpr::Const(_) => 0,
            BoolExpr::Var(i) => *i,
            BoolExpr::Not(e) => e.max_state(),
            BoolExpr::And(a, b) | BoolExpr::Xor(a, b) | BoolExpr::Or(a, b) => {
                a.max_state().max(b.max_state())
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            BoolExpr::Or(..) => 1,
            BoolExpr::Xor(..) => 2,
            BoolExpr::And(..) => 3,
            BoolExpr::Not(_) => 4,
            BoolExpr::Const(_) | BoolExpr::Var(_) => 5,
        }
    }
}

impl fmt::Display for BoolExpr {
    /// Minimal parentheses; reparses to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, e: &BoolExpr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            BoolExpr::Const(b) => write!(f, "{}", u8::from(*b)),
            BoolExpr::Var(i) => write!(f, "X{i}"),
            BoolExpr::Not(e) => {
                write!(f, "!")?;
                child(f, e, 4)
            }
            BoolExpr::And(a, b) | BoolExpr::Xor(a, b) | BoolExpr::Or(a, b) => {
                let p = self.precedence();
                let op = match self {
                    BoolExpr::And(..) => "&",
                    BoolExpr::Xor(..) => "^",
                    _ => "|",
                };
                child(f, a, p)?;
                write!(f, " {op} ")?;
                // left-associative: an equal-precedence right child needs parentheses
                child(f, b, p + 1)
            }
        }
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    /// Column of `chars[0]` in the source line, 1-based.
    base_column: usize,
    max_state: Option<usize>,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn column(&self, pos: usize) -> usize {
        self.base_column + pos
    }

    fn error(&self, pos: usize, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.column(pos), message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parse_binary(
        &mut self,
        op: char,
        next: fn(&mut Self) -> Result<BoolExpr>,
        make: fn(Box<BoolExpr>, Box<BoolExpr>) -> BoolExpr,
    ) -> Result<BoolExpr> {
        let mut lhs = next(self)?;
        while self.peek() == Some(op) {
            self.pos += 1;
            let rhs = next(self)?;
            lhs = make(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<BoolExpr> {
        self.parse_binary('|', Self::xor, BoolExpr::Or)
    }

    fn xor(&mut self) -> Result<BoolExpr> {
        self.parse_binary('^', Self::and, BoolExpr::Xor)
    }

    fn and(&mut self) -> Result<BoolExpr> {
        self.parse_binary('&', Self::unary, BoolExpr::And)
    }

    fn unary(&mut self) -> Result<BoolExpr> {
        if self.peek() == Some('!') {
            self.pos += 1;
            return Ok(BoolExpr::Not(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<BoolExpr> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            None => Err(self.error(start, "expected an expression, found end of input")),
            Some('(') => {
                self.pos += 1;
                let inner = self.or()?;
                if self.peek() == Some(')') {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    Err(self.error(start, "unclosed '('"))
                }
            }
            Some('0') => {
                self.pos += 1;
                Ok(BoolExpr::Const(false))
            }
            Some('1') => {
                self.pos += 1;
                Ok(BoolExpr::Const(true))
            }
            Some('X') => {
                self.pos += 1;
                let digits_start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if digits_start == self.pos {
                    return Err(self.error(start, "expected a state index after 'X'"));
                }
                let text: String = self.chars[digits_start..self.pos].iter().collect();
                let index: usize = text
                    .parse()
                    .map_err(|_| self.error(start, format!("bad state index {text}")))?;
                if index == 0 || self.max_state.is_some_and(|s| index > s) {
                    return Err(self.error(start, format!("unknown variable X{text}")));
                }
                Ok(BoolExpr::Var(index))
            }
            Some(c) => Err(self.error(start, format!("unexpected character '{c}'"))),
        }
    }
}

/// Parses a whole expression. `line`/`base_column` locate it in a larger
/// document for error messages; `states` bounds variable indices.
pub(crate) fn parse_expr_at(
    text: &str,
    line: usize,
    base_column: usize,
    states: Option<usize>,
) -> Result<BoolExpr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line,
        base_column,
        max_state: states,
        _src: text,
    };
    let e = p.or()?;
    if let Some(c) = p.peek() {
        let msg = if c == ')' {
            "unmatched ')'".to_string()
        } else {
            format!("unexpected character '{c}'")
        };
        return Err(p.error(p.pos, msg));
    }
    Ok(e)
}

pub fn parse_expr(text: &str) -> Result<BoolExpr> {
    parse_expr_at(text, 1, 1, None)
}

/// Truth table of `e` over `s` states.
pub fn compile_expr(e: &BoolExpr, states: usize) -> Result<BoolFn> {
    if e.max_state() > states {
        return Err(Error::param(format!(
            "unknown variable X{} for {states} states",
            e.max_state()
        )));
    }
    BoolFn::from_fn(states, |a| e.eval(a.index()))
}

/// Canonical expression for a truth table: `0`, `1`, or the disjunction of
/// its minterms in ascending assignment order.
pub fn expr_for_table(f: &BoolFn) -> String {
    let ones = f.count_ones();
    if ones == 0 {
        return "0".into();
    }
    if ones == f.len() {
        return "1".into();
    }
    f.ones()
        .map(|idx| {
            (1..=f.states())
                .map(|i| {
                    if (idx >> (i - 1)) & 1 == 1 {
                        format!("X{i}")
                    } else {
                        format!("!X{i}")
                    }
                })
                .collect::<Vec<_>>()
                .join(" & ")
        })
        .collect::<Vec<_>>()
        .join(" | ")
}
