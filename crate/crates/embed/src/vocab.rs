//! Token vocabulary for sequence models: a stable id per GPTL token plus
//! SOS/EOS framing, padding, and a hash that checkpoints embed so stale
//! weights cannot be loaded against a different vocabulary.

use gptl::{Expr, Field, GptlError, Indicator, NumId, TokenKind};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VocabError {
    #[error("sequence of {len} tokens exceeds the maximum length {max}")]
    TooLong { len: usize, max: usize },
    #[error("unknown token id {0}")]
    UnknownId(u32),
    #[error("decoded sequence failed to parse: {0}")]
    Parse(#[from] GptlError),
}

pub const PAD_ID: u32 = 0;
pub const SOS_ID: u32 = 1;
pub const EOS_ID: u32 = 2;
pub const UNK_ID: u32 = 3;

/// The closed token table in a fixed order.
#[derive(Debug, Clone)]
pub struct Vocab {
    tokens: Vec<TokenKind>,
    hash: String,
}

impl Default for Vocab {
    fn default() -> Self {
        Self::new()
    }
}

impl Vocab {
    pub fn new() -> Vocab {
        let mut tokens = vec![
            TokenKind::Pad,
            TokenKind::Sos,
            TokenKind::Eos,
            TokenKind::Unk,
            TokenKind::And,
            TokenKind::Or,
            TokenKind::Not,
            TokenKind::Gt,
            TokenKind::Lt,
            TokenKind::Ge,
            TokenKind::Le,
            TokenKind::Eq,
            TokenKind::LParen,
            TokenKind::RParen,
            TokenKind::Comma,
        ];
        tokens.extend(Field::ALL.into_iter().map(TokenKind::Field));
        tokens.extend(Indicator::ALL.into_iter().map(TokenKind::Indicator));
        tokens.extend(NumId::all().map(TokenKind::Num));
        let mut hasher = Sha256::new();
        for t in &tokens {
            hasher.update(t.text().as_bytes());
            hasher.update([0u8]);
        }
        let hash = hex_string(&hasher.finalize());
        Vocab { tokens, hash }
    }

    pub fn size(&self) -> usize {
        self.tokens.len()
    }

    /// Stable content hash of the token table.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn id_of(&self, kind: TokenKind) -> u32 {
        self.tokens
            .iter()
            .position(|t| *t == kind)
            .expect("token kinds are closed") as u32
    }

    pub fn kind_of(&self, id: u32) -> Result<TokenKind, VocabError> {
        self.tokens
            .get(id as usize)
            .copied()
            .ok_or(VocabError::UnknownId(id))
    }

    /// Token ids for one signal with SOS/EOS framing, unpadded.
    pub fn tokenize_signal(&self, e: &Expr, max_seq_len: usize) -> Result<Vec<u32>, VocabError> {
        let body = gptl::signal_tokens(e);
        let len = body.len() + 2;
        if len > max_seq_len {
            return Err(VocabError::TooLong {
                len,
                max: max_seq_len,
            });
        }
        let mut ids = Vec::with_capacity(len);
        ids.push(SOS_ID);
        ids.extend(body.iter().map(|t| self.id_of(*t)));
        ids.push(EOS_ID);
        Ok(ids)
    }

    /// Parse a framed id sequence back into an AST. Input is everything the
    /// decoder produced for one signal: the leading SOS is optional, the
    /// sequence ends at the first EOS, and PAD is ignored after it.
    pub fn detokenize_signal(&self, ids: &[u32]) -> Result<Expr, VocabError> {
        let mut body = Vec::new();
        let mut started = false;
        for (i, &id) in ids.iter().enumerate() {
            if i == 0 && id == SOS_ID {
                continue;
            }
            if id == EOS_ID {
                started = true;
                break;
            }
            if id == PAD_ID || id == SOS_ID || id == UNK_ID {
                return Err(VocabError::Parse(GptlError::Syntax(format!(
                    "framing token id {id} inside signal body"
                ))));
            }
            body.push(self.kind_of(id)?);
            started = true;
        }
        if !started && body.is_empty() {
            return Err(VocabError::Parse(GptlError::Syntax(
                "empty token sequence".into(),
            )));
        }
        Ok(gptl::parse_tokens(&body)?)
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use gptl::parse_signal;

    #[test]
    fn vocab_is_stable_and_small() {
        let v = Vocab::new();
        assert_eq!(v.size(), 15 + 5 + 6 + 22);
        assert_eq!(v.id_of(TokenKind::Pad), PAD_ID);
        assert_eq!(v.id_of(TokenKind::Sos), SOS_ID);
        assert_eq!(v.id_of(TokenKind::Eos), EOS_ID);
        // Hash is deterministic across constructions.
        assert_eq!(v.hash(), Vocab::new().hash());
    }

    #[test]
    fn tokenize_round_trip() {
        let v = Vocab::new();
        let e = parse_signal("((close > SMA(close, 20)) & (~ (RSI(high, 14) >= 70)))").unwrap();
        let ids = v.tokenize_signal(&e, 96).unwrap();
        assert_eq!(ids[0], SOS_ID);
        assert_eq!(*ids.last().unwrap(), EOS_ID);
        let back = v.detokenize_signal(&ids).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn too_long_is_rejected() {
        let v = Vocab::new();
        let e = parse_signal("(close > 5)").unwrap();
        assert!(matches!(
            v.tokenize_signal(&e, 4),
            Err(VocabError::TooLong { .. })
        ));
    }
}
