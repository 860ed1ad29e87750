//! GPTL: a closed, typed DSL for rule-based trading strategies.
//!
//! A strategy is four Boolean signal expressions — long entry (LE), short
//! entry (SE), long exit (LX), short exit (SX) — over OHLCV fields, technical
//! indicator calls, and a fixed table of numeric constants. The grammar is
//! closed and statically typed: every value produced by the generator or the
//! mutation operators parses, type-checks, and respects the depth bounds.
//!
//! The crate provides:
//! - lexing and parsing of fully parenthesized signal text ([`parse_signal`]),
//! - a canonical serializer (one text form and one token form per AST),
//! - seeded random program generation ([`random_strategy`]),
//! - type-preserving discrete mutation ([`mutate_discrete`]),
//! - normalized token and AST edit distances.

pub mod ast;
pub mod distance;
pub mod error;
pub mod generate;
pub mod mutate;
pub mod parser;
pub mod serialize;
pub mod token;

pub use ast::{CmpOp, Expr, NumExpr, SignalId, Strategy, DEFAULT_MAX_DEPTH, DEFAULT_MIN_DEPTH};
pub use distance::{ast_edit_distance, levenshtein, token_edit_distance};
pub use error::GptlError;
pub use generate::{random_signal, random_strategy, MutationConfig, OpWeights};
pub use mutate::{mutate_discrete, mutate_signal, MutationOp};
pub use parser::{parse_signal, parse_signal_bounded, parse_tokens};
pub use serialize::{canonicalize, signal_text, signal_tokens, strategy_tokens};
pub use token::{lex, Field, Indicator, NumId, TokenKind, NUMERIC_TABLE};
