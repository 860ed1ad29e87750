//! Canonical serialization: one text form and one token form per AST.
//!
//! Every Boolean node is wrapped in parentheses, operands keep their order,
//! and no other normalization is applied. Structurally equal ASTs therefore
//! serialize identically, and `parse(serialize(t)) == t`.

use crate::ast::{Expr, NumExpr};
use crate::error::GptlError;
use crate::parser::parse_signal;
use crate::token::TokenKind;

/// Canonical token sequence for a signal (no SOS/EOS framing).
pub fn signal_tokens(e: &Expr) -> Vec<TokenKind> {
    let mut out = Vec::new();
    push_expr(e, &mut out);
    out
}

/// Canonical token sequences for all four signals in block order.
pub fn strategy_tokens(s: &crate::ast::Strategy) -> [Vec<TokenKind>; 4] {
    [
        signal_tokens(&s.le),
        signal_tokens(&s.se),
        signal_tokens(&s.lx),
        signal_tokens(&s.sx),
    ]
}

fn push_expr(e: &Expr, out: &mut Vec<TokenKind>) {
    match e {
        Expr::And(l, r) => {
            out.push(TokenKind::LParen);
            push_expr(l, out);
            out.push(TokenKind::And);
            push_expr(r, out);
            out.push(TokenKind::RParen);
        }
        Expr::Or(l, r) => {
            out.push(TokenKind::LParen);
            push_expr(l, out);
            out.push(TokenKind::Or);
            push_expr(r, out);
            out.push(TokenKind::RParen);
        }
        Expr::Not(inner) => {
            out.push(TokenKind::LParen);
            out.push(TokenKind::Not);
            push_expr(inner, out);
            out.push(TokenKind::RParen);
        }
        Expr::Cmp { op, lhs, rhs } => {
            out.push(TokenKind::LParen);
            push_num(lhs, out);
            out.push(match op {
                crate::ast::CmpOp::Gt => TokenKind::Gt,
                crate::ast::CmpOp::Lt => TokenKind::Lt,
                crate::ast::CmpOp::Ge => TokenKind::Ge,
                crate::ast::CmpOp::Le => TokenKind::Le,
                crate::ast::CmpOp::Eq => TokenKind::Eq,
            });
            push_num(rhs, out);
            out.push(TokenKind::RParen);
        }
    }
}

fn push_num(n: &NumExpr, out: &mut Vec<TokenKind>) {
    match n {
        NumExpr::Field(f) => out.push(TokenKind::Field(*f)),
        NumExpr::Const(c) => out.push(TokenKind::Num(*c)),
        NumExpr::Indicator { ind, field, period } => {
            out.push(TokenKind::Indicator(*ind));
            out.push(TokenKind::LParen);
            out.push(TokenKind::Field(*field));
            out.push(TokenKind::Comma);
            out.push(TokenKind::Num(*period));
            out.push(TokenKind::RParen);
        }
    }
}

/// Canonical text for a signal.
pub fn signal_text(e: &Expr) -> String {
    match e {
        Expr::And(l, r) => format!("({} & {})", signal_text(l), signal_text(r)),
        Expr::Or(l, r) => format!("({} | {})", signal_text(l), signal_text(r)),
        Expr::Not(inner) => format!("(~ {})", signal_text(inner)),
        Expr::Cmp { op, lhs, rhs } => {
            format!("({} {} {})", num_text(lhs), op.symbol(), num_text(rhs))
        }
    }
}

fn num_text(n: &NumExpr) -> String {
    match n {
        NumExpr::Field(f) => f.name().to_string(),
        NumExpr::Const(c) => c.text().to_string(),
        NumExpr::Indicator { ind, field, period } => {
            format!("{}({}, {})", ind.name(), field.name(), period.text())
        }
    }
}

/// Parse then re-serialize: the canonical text of any valid input string.
pub fn canonicalize(text: &str) -> Result<String, GptlError> {
    Ok(signal_text(&parse_signal(text)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_signal;

    #[test]
    fn canonical_text_round_trips() {
        let src = "(close > SMA(close, 20)) & ~(RSI(high, 14) >= 70)";
        let ast = parse_signal(src).unwrap();
        let text = signal_text(&ast);
        assert_eq!(
            text,
            "((close > SMA(close, 20)) & (~ (RSI(high, 14) >= 70)))"
        );
        assert_eq!(parse_signal(&text).unwrap(), ast);
        // Canonicalizing canonical text is the identity.
        assert_eq!(canonicalize(&text).unwrap(), text);
    }

    #[test]
    fn tokens_parse_back() {
        let ast = parse_signal("((low < 0.9) | (volume >= 150))").unwrap();
        let toks = signal_tokens(&ast);
        assert_eq!(crate::parser::parse_tokens(&toks).unwrap(), ast);
    }
}
