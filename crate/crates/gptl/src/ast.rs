//! Typed AST. The node types make ill-typed programs unrepresentable:
//! logical operators only hold Boolean children, comparisons only hold
//! numeric children, and indicator calls only hold a field plus an integer
//! period token.

use serde::{Deserialize, Serialize};

use crate::error::GptlError;
use crate::parser::parse_signal;
use crate::serialize::signal_text;
use crate::token::{Field, Indicator, NumId};

pub const DEFAULT_MAX_DEPTH: usize = 8;
pub const DEFAULT_MIN_DEPTH: usize = 2;

/// Comparison operator over numeric operands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Gt,
    Lt,
    Ge,
    Le,
    Eq,
}

impl CmpOp {
    pub const ALL: [CmpOp; 5] = [CmpOp::Gt, CmpOp::Lt, CmpOp::Ge, CmpOp::Le, CmpOp::Eq];

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Gt => ">",
            CmpOp::Lt => "<",
            CmpOp::Ge => ">=",
            CmpOp::Le => "<=",
            CmpOp::Eq => "==",
        }
    }

    pub fn apply(self, lhs: f64, rhs: f64) -> bool {
        match self {
            CmpOp::Gt => lhs > rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Le => lhs <= rhs,
            // Constants are discretized, so exact equality is well-defined.
            CmpOp::Eq => lhs == rhs,
        }
    }
}

/// Numeric-typed expression: a bar field, a table constant, or an indicator
/// call `IND(field, period)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NumExpr {
    Field(Field),
    Const(NumId),
    Indicator {
        ind: Indicator,
        field: Field,
        period: NumId,
    },
}

impl NumExpr {
    /// Leaves count 1; an indicator call counts 2 (the field argument is a
    /// child node, the period is payload).
    pub fn depth(&self) -> usize {
        match self {
            NumExpr::Field(_) | NumExpr::Const(_) => 1,
            NumExpr::Indicator { .. } => 2,
        }
    }
}

/// Boolean-typed expression: the body of one signal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Cmp {
        op: CmpOp,
        lhs: NumExpr,
        rhs: NumExpr,
    },
}

impl Expr {
    pub fn depth(&self) -> usize {
        match self {
            Expr::And(l, r) | Expr::Or(l, r) => 1 + l.depth().max(r.depth()),
            Expr::Not(e) => 1 + e.depth(),
            Expr::Cmp { lhs, rhs, .. } => 1 + lhs.depth().max(rhs.depth()),
        }
    }

    pub fn check_depth(&self, max_depth: usize) -> Result<(), GptlError> {
        let depth = self.depth();
        if depth > max_depth {
            Err(GptlError::Depth {
                depth,
                max: max_depth,
            })
        } else {
            Ok(())
        }
    }
}

/// Which of the four signals a subtree belongs to. Order is fixed and is the
/// same order used for latent blocks downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalId {
    Le,
    Se,
    Lx,
    Sx,
}

impl SignalId {
    pub const ALL: [SignalId; 4] = [SignalId::Le, SignalId::Se, SignalId::Lx, SignalId::Sx];

    pub fn index(self) -> usize {
        match self {
            SignalId::Le => 0,
            SignalId::Se => 1,
            SignalId::Lx => 2,
            SignalId::Sx => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SignalId::Le => "le",
            SignalId::Se => "se",
            SignalId::Lx => "lx",
            SignalId::Sx => "sx",
        }
    }

    pub fn from_index(i: usize) -> SignalId {
        SignalId::ALL[i]
    }
}

/// A complete strategy: four Boolean signal roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Strategy {
    pub le: Expr,
    pub se: Expr,
    pub lx: Expr,
    pub sx: Expr,
}

impl Strategy {
    pub fn signal(&self, id: SignalId) -> &Expr {
        match id {
            SignalId::Le => &self.le,
            SignalId::Se => &self.se,
            SignalId::Lx => &self.lx,
            SignalId::Sx => &self.sx,
        }
    }

    pub fn signal_mut(&mut self, id: SignalId) -> &mut Expr {
        match id {
            SignalId::Le => &mut self.le,
            SignalId::Se => &mut self.se,
            SignalId::Lx => &mut self.lx,
            SignalId::Sx => &mut self.sx,
        }
    }

    pub fn signals(&self) -> [&Expr; 4] {
        [&self.le, &self.se, &self.lx, &self.sx]
    }

    pub fn max_signal_depth(&self) -> usize {
        self.signals().iter().map(|e| e.depth()).max().unwrap()
    }

    pub fn check_depth(&self, max_depth: usize) -> Result<(), GptlError> {
        for s in self.signals() {
            s.check_depth(max_depth)?;
        }
        Ok(())
    }

    pub fn from_texts(le: &str, se: &str, lx: &str, sx: &str) -> Result<Strategy, GptlError> {
        Ok(Strategy {
            le: parse_signal(le)?,
            se: parse_signal(se)?,
            lx: parse_signal(lx)?,
            sx: parse_signal(sx)?,
        })
    }
}

/// Wire form: one JSON object per strategy with canonical signal text.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategyText {
    pub le: String,
    pub se: String,
    pub lx: String,
    pub sx: String,
}

impl From<&Strategy> for StrategyText {
    fn from(s: &Strategy) -> StrategyText {
        StrategyText {
            le: signal_text(&s.le),
            se: signal_text(&s.se),
            lx: signal_text(&s.lx),
            sx: signal_text(&s.sx),
        }
    }
}

impl TryFrom<&StrategyText> for Strategy {
    type Error = GptlError;

    fn try_from(t: &StrategyText) -> Result<Strategy, GptlError> {
        Strategy::from_texts(&t.le, &t.se, &t.lx, &t.sx)
    }
}

impl Serialize for Strategy {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        StrategyText::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Strategy {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Strategy, D::Error> {
        let text = StrategyText::deserialize(deserializer)?;
        Strategy::try_from(&text).map_err(serde::de::Error::custom)
    }
}
