//! Recursive-descent parser over token streams.
//!
//! Precedence: NOT binds tighter than AND, AND tighter than OR; binary
//! operators are left-associative. Canonical text is fully parenthesized so
//! precedence only matters for non-canonical (but still valid) inputs.
//!
//! Typing is enforced during parsing: a bare numeric expression in Boolean
//! position (e.g. an AND operand that is a field) is a type error, not a
//! syntax error, matching the language's two-type system.

use crate::ast::{CmpOp, Expr, NumExpr, DEFAULT_MAX_DEPTH};
use crate::error::GptlError;
use crate::token::{lex, TokenKind};

/// Parse one signal from text using the default depth bound.
pub fn parse_signal(text: &str) -> Result<Expr, GptlError> {
    parse_signal_bounded(text, DEFAULT_MAX_DEPTH)
}

/// Parse one signal from text with an explicit depth bound.
pub fn parse_signal_bounded(text: &str, max_depth: usize) -> Result<Expr, GptlError> {
    let tokens = lex(text)?;
    parse_tokens_bounded(&tokens, max_depth)
}

/// Parse a token sequence (no framing tokens) using the default depth bound.
pub fn parse_tokens(tokens: &[TokenKind]) -> Result<Expr, GptlError> {
    parse_tokens_bounded(tokens, DEFAULT_MAX_DEPTH)
}

pub fn parse_tokens_bounded(tokens: &[TokenKind], max_depth: usize) -> Result<Expr, GptlError> {
    let mut p = Parser { tokens, pos: 0 };
    let expr = p.expr()?;
    if p.pos != tokens.len() {
        return Err(GptlError::Syntax(format!(
            "trailing input after expression at token {}",
            p.pos
        )));
    }
    expr.check_depth(max_depth)?;
    Ok(expr)
}

struct Parser<'a> {
    tokens: &'a [TokenKind],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<TokenKind> {
        self.tokens.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<TokenKind> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: TokenKind, ctx: &str) -> Result<(), GptlError> {
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(GptlError::Syntax(format!(
                "expected `{}` {ctx}, found `{}`",
                want.text(),
                t.text()
            ))),
            None => Err(GptlError::Syntax(format!(
                "expected `{}` {ctx}, found end of input",
                want.text()
            ))),
        }
    }

    fn expr(&mut self) -> Result<Expr, GptlError> {
        let mut lhs = self.and_expr()?;
        while self.peek() == Some(TokenKind::Or) {
            self.bump();
            let rhs = self.and_expr()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Expr, GptlError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(TokenKind::And) {
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, GptlError> {
        if self.peek() == Some(TokenKind::Not) {
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::Not(Box::new(inner)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, GptlError> {
        match self.peek() {
            Some(TokenKind::LParen) => {
                self.bump();
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "to close group")?;
                Ok(inner)
            }
            Some(_) => self.comparison(),
            None => Err(GptlError::Syntax(
                "expected expression, found end of input".into(),
            )),
        }
    }

    fn comparison(&mut self) -> Result<Expr, GptlError> {
        let lhs = self.numeric()?;
        let op = match self.peek() {
            Some(TokenKind::Gt) => CmpOp::Gt,
            Some(TokenKind::Lt) => CmpOp::Lt,
            Some(TokenKind::Ge) => CmpOp::Ge,
            Some(TokenKind::Le) => CmpOp::Le,
            Some(TokenKind::Eq) => CmpOp::Eq,
            // A numeric expression where a Boolean is required.
            other => {
                let found = other.map_or("end of input".to_string(), |t| {
                    format!("`{}`", t.text())
                });
                return Err(GptlError::Type(format!(
                    "numeric expression in Boolean position: expected comparison operator, found {found}"
                )));
            }
        };
        self.bump();
        let rhs = self.numeric()?;
        Ok(Expr::Cmp { op, lhs, rhs })
    }

    fn numeric(&mut self) -> Result<NumExpr, GptlError> {
        match self.bump() {
            Some(TokenKind::Field(f)) => Ok(NumExpr::Field(f)),
            Some(TokenKind::Num(n)) => Ok(NumExpr::Const(n)),
            Some(TokenKind::Indicator(ind)) => {
                self.expect(TokenKind::LParen, "after indicator name")?;
                let field = match self.bump() {
                    Some(TokenKind::Field(f)) => f,
                    Some(t) => {
                        return Err(GptlError::Syntax(format!(
                            "indicator argument must be a field, found `{}`",
                            t.text()
                        )))
                    }
                    None => {
                        return Err(GptlError::Syntax(
                            "indicator argument must be a field, found end of input".into(),
                        ))
                    }
                };
                self.expect(TokenKind::Comma, "between indicator arguments")?;
                let period = match self.bump() {
                    Some(TokenKind::Num(n)) if n.is_period() => n,
                    Some(TokenKind::Num(n)) => {
                        return Err(GptlError::Type(format!(
                            "`{}` is not a valid indicator period",
                            n.text()
                        )))
                    }
                    Some(t) => {
                        return Err(GptlError::Syntax(format!(
                            "indicator period must be an integer constant, found `{}`",
                            t.text()
                        )))
                    }
                    None => {
                        return Err(GptlError::Syntax(
                            "indicator period must be an integer constant, found end of input"
                                .into(),
                        ))
                    }
                };
                self.expect(TokenKind::RParen, "to close indicator call")?;
                Ok(NumExpr::Indicator { ind, field, period })
            }
            Some(TokenKind::Not) => Err(GptlError::Type(
                "Boolean expression in numeric position".into(),
            )),
            Some(t) => Err(GptlError::Syntax(format!(
                "expected numeric expression, found `{}`",
                t.text()
            ))),
            None => Err(GptlError::Syntax(
                "expected numeric expression, found end of input".into(),
            )),
        }
    }
}
