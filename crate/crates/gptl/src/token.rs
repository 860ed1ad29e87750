//! Token vocabulary: the closed set of lexemes a GPTL program is made of.
//!
//! Numeric literals are not free-form; they index a fixed table of
//! discretized constants, so the vocabulary stays finite and every
//! token can carry a stable id in sequence models.

use crate::error::GptlError;

/// OHLCV bar field referenced by a program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Open,
    High,
    Low,
    Close,
    Volume,
}

impl Field {
    pub const ALL: [Field; 5] = [
        Field::Open,
        Field::High,
        Field::Low,
        Field::Close,
        Field::Volume,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Field::Open => "open",
            Field::High => "high",
            Field::Low => "low",
            Field::Close => "close",
            Field::Volume => "volume",
        }
    }

    pub fn from_name(s: &str) -> Option<Field> {
        Field::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// Technical indicator callable from a program. All take `(field, period)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Indicator {
    Sma,
    Ema,
    Rsi,
    Max,
    Min,
    Std,
}

impl Indicator {
    pub const ALL: [Indicator; 6] = [
        Indicator::Sma,
        Indicator::Ema,
        Indicator::Rsi,
        Indicator::Max,
        Indicator::Min,
        Indicator::Std,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Indicator::Sma => "SMA",
            Indicator::Ema => "EMA",
            Indicator::Rsi => "RSI",
            Indicator::Max => "MAX",
            Indicator::Min => "MIN",
            Indicator::Std => "STD",
        }
    }

    pub fn from_name(s: &str) -> Option<Indicator> {
        Indicator::ALL.into_iter().find(|i| i.name() == s)
    }
}

/// One entry of the numeric constant table.
#[derive(Debug, Clone, Copy)]
pub struct NumEntry {
    /// Exact text form; parsing matches against this string.
    pub text: &'static str,
    pub value: f64,
    pub integer: bool,
}

const fn int_entry(text: &'static str, value: f64) -> NumEntry {
    NumEntry {
        text,
        value,
        integer: true,
    }
}

const fn float_entry(text: &'static str, value: f64) -> NumEntry {
    NumEntry {
        text,
        value,
        integer: false,
    }
}

/// The closed numeric vocabulary: integer thresholds/periods plus a small
/// grid of price-scale floats. `1` and `1.0` are distinct tokens with equal
/// values; canonical text keeps them apart.
pub const NUMERIC_TABLE: [NumEntry; 22] = [
    int_entry("0", 0.0),
    int_entry("1", 1.0),
    int_entry("2", 2.0),
    int_entry("5", 5.0),
    int_entry("10", 10.0),
    int_entry("14", 14.0),
    int_entry("20", 20.0),
    int_entry("25", 25.0),
    int_entry("30", 30.0),
    int_entry("50", 50.0),
    int_entry("70", 70.0),
    int_entry("75", 75.0),
    int_entry("80", 80.0),
    int_entry("100", 100.0),
    int_entry("150", 150.0),
    int_entry("200", 200.0),
    float_entry("0.5", 0.5),
    float_entry("0.9", 0.9),
    float_entry("1.0", 1.0),
    float_entry("1.1", 1.1),
    float_entry("1.5", 1.5),
    float_entry("2.0", 2.0),
];

/// Indicator periods must be integer tokens within these bounds.
pub const MIN_PERIOD: u32 = 2;
pub const MAX_PERIOD: u32 = 200;

/// Index into [`NUMERIC_TABLE`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NumId(u8);

impl NumId {
    pub fn new(index: usize) -> NumId {
        assert!(index < NUMERIC_TABLE.len(), "numeric id out of range");
        NumId(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn entry(self) -> &'static NumEntry {
        &NUMERIC_TABLE[self.0 as usize]
    }

    pub fn value(self) -> f64 {
        self.entry().value
    }

    pub fn text(self) -> &'static str {
        self.entry().text
    }

    pub fn is_integer(self) -> bool {
        self.entry().integer
    }

    /// Exact text match against the table; no free-form literals.
    pub fn from_text(s: &str) -> Option<NumId> {
        NUMERIC_TABLE
            .iter()
            .position(|e| e.text == s)
            .map(|i| NumId(i as u8))
    }

    pub fn all() -> impl Iterator<Item = NumId> {
        (0..NUMERIC_TABLE.len()).map(|i| NumId(i as u8))
    }

    /// Whether this token is usable as an indicator period.
    pub fn is_period(self) -> bool {
        let e = self.entry();
        e.integer && e.value >= MIN_PERIOD as f64 && e.value <= MAX_PERIOD as f64
    }

    /// The period grid: integer table entries within the period bounds.
    pub fn period_ids() -> Vec<NumId> {
        NumId::all().filter(|id| id.is_period()).collect()
    }
}

/// A lexical token. `Pad`, `Sos`, `Eos`, and `Unk` exist for sequence-model
/// framing and never appear in parsed program text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Pad,
    Sos,
    Eos,
    Unk,
    And,
    Or,
    Not,
    Gt,
    Lt,
    Ge,
    Le,
    Eq,
    LParen,
    RParen,
    Comma,
    Field(Field),
    Indicator(Indicator),
    Num(NumId),
}

impl TokenKind {
    pub fn text(self) -> &'static str {
        match self {
            TokenKind::Pad => "<pad>",
            TokenKind::Sos => "<sos>",
            TokenKind::Eos => "<eos>",
            TokenKind::Unk => "<unk>",
            TokenKind::And => "&",
            TokenKind::Or => "|",
            TokenKind::Not => "~",
            TokenKind::Gt => ">",
            TokenKind::Lt => "<",
            TokenKind::Ge => ">=",
            TokenKind::Le => "<=",
            TokenKind::Eq => "==",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::Comma => ",",
            TokenKind::Field(f) => f.name(),
            TokenKind::Indicator(i) => i.name(),
            TokenKind::Num(n) => n.text(),
        }
    }
}

/// Lex program text into tokens. Identifiers and numeric literals must match
/// the closed vocabulary exactly; anything else is a syntax error.
pub fn lex(text: &str) -> Result<Vec<TokenKind>, GptlError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '&' => {
                out.push(TokenKind::And);
                i += 1;
            }
            '|' => {
                out.push(TokenKind::Or);
                i += 1;
            }
            '~' => {
                out.push(TokenKind::Not);
                i += 1;
            }
            '(' => {
                out.push(TokenKind::LParen);
                i += 1;
            }
            ')' => {
                out.push(TokenKind::RParen);
                i += 1;
            }
            ',' => {
                out.push(TokenKind::Comma);
                i += 1;
            }
            '>' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push(TokenKind::Ge);
                    i += 2;
                } else {
                    out.push(TokenKind::Gt);
                    i += 1;
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push(TokenKind::Le);
                    i += 2;
                } else {
                    out.push(TokenKind::Lt);
                    i += 1;
                }
            }
            '=' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push(TokenKind::Eq);
                    i += 2;
                } else {
                    return Err(GptlError::Syntax("single '=' is not an operator".into()));
                }
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphabetic() {
                    i += 1;
                }
                let word = &text[start..i];
                if let Some(f) = Field::from_name(word) {
                    out.push(TokenKind::Field(f));
                } else if let Some(ind) = Indicator::from_name(word) {
                    out.push(TokenKind::Indicator(ind));
                } else {
                    return Err(GptlError::Syntax(format!("unknown identifier `{word}`")));
                }
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_digit() || bytes[i] == b'.')
                {
                    i += 1;
                }
                let lit = &text[start..i];
                match NumId::from_text(lit) {
                    Some(id) => out.push(TokenKind::Num(id)),
                    None => {
                        return Err(GptlError::Syntax(format!(
                            "numeric literal `{lit}` is not in the constant table"
                        )))
                    }
                }
            }
            other => {
                return Err(GptlError::Syntax(format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(out)
}
