use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use sha2::{Digest, Sha256};

use crate::datagen::{Statement, StatementSet};
use crate::rng;

pub const CLS: &str = "<cls>";
pub const UNK: &str = "<unk>";
pub const CLS_ID: u32 = 0;
pub const UNK_ID: u32 = 1;

/// Lowercases and splits on whitespace; every punctuation character is a
/// token of its own.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars().flat_map(char::to_lowercase) {
        if c.is_whitespace() || c.is_ascii_punctuation() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if c.is_ascii_punctuation() {
                out.push(c.to_string());
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Surface text of one statement as fed to the model.
pub fn statement_text(s: &Statement) -> String {
    match s {
        Statement::Sentence { text, .. } => text.clone(),
        Statement::Qa { question, answer, .. } => format!("{question} The answer is {answer}."),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
}

impl Vocabulary {
    /// Reserved tokens followed by `tokens` in sorted order.
    pub fn from_tokens<I: IntoIterator<Item = String>>(tokens: I) -> Self {
        let rest: BTreeSet<String> = tokens.into_iter().filter(|t| t != CLS && t != UNK).collect();
        let tokens: Vec<String> = [CLS.to_string(), UNK.to_string()].into_iter().chain(rest).collect();
        Self::from_listing(tokens)
    }

    /// Exactly `tokens`, in order. The first two must be the reserved tokens.
    pub(crate) fn from_listing(tokens: Vec<String>) -> Self {
        let index = tokens.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        Vocabulary { tokens, index }
    }

    /// Every token of every statement in `sets`.
    pub fn build<'a>(sets: impl IntoIterator<Item = &'a StatementSet>) -> Self {
        let mut all = BTreeSet::new();
        for set in sets {
            for s in &set.statements {
                all.extend(tokenize(&statement_text(s)));
            }
        }
        Self::from_tokens(all)
    }

    /// This vocabulary with `new` appended; existing ids are unchanged.
    pub fn extended(&self, new: &[String]) -> Self {
        let mut tokens = self.tokens.clone();
        tokens.extend(new.iter().filter(|t| !self.index.contains_key(*t)).cloned());
        Self::from_listing(tokens)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, token: &str) -> u32 {
        self.index.get(token).copied().unwrap_or(UNK_ID)
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn hash(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        for t in &self.tokens {
            h.update(t.as_bytes());
            h.update(b"\n");
        }
        let mut out = [0u8; 32];
        out.copy_from_slice(&h.finalize());
        out
    }
}

/// CLS followed by the statements' tokens; `offsets[k]..offsets[k + 1]` is
/// statement `k` of the (shuffled) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedSet {
    pub tokens: Vec<u32>,
    pub offsets: Vec<usize>,
}

impl TokenizedSet {
    pub fn segments(&self) -> impl Iterator<Item = &[u32]> {
        self.offsets.windows(2).map(|w| &self.tokens[w[0]..w[1]])
    }

    pub fn statement_count(&self) -> usize {
        self.offsets.len() - 1
    }
}

/// Shuffles the statements with `shuffle_seed` and concatenates their token
/// ids after CLS.
pub fn serialize_set(vocab: &Vocabulary, s: &StatementSet, shuffle_seed: u64) -> TokenizedSet {
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.shuffle(&mut rng::stream(shuffle_seed, &[rng::tag("serialize")]));
    let mut tokens = vec![CLS_ID];
    let mut offsets = vec![1];
    for i in order {
        tokens.extend(tokenize(&statement_text(&s.statements[i])).iter().map(|t| vocab.id(t)));
        offsets.push(tokens.len());
    }
    TokenizedSet { tokens, offsets }
}
