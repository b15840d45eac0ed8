//! The set scorer: token serialization, a mean-pooled embedding encoder with
//! one tanh layer, a scalar energy head and a two-way class head.

mod io;
mod params;
mod vocab;

pub use io::{from_bytes, load_params, save_params, to_bytes, FORMAT_VERSION};
pub use params::{inconsistent_probability, param_count, Cache, Features, ModelConfig, ModelParams};
pub use vocab::{serialize_set, statement_text, tokenize, TokenizedSet, Vocabulary, CLS, CLS_ID, UNK, UNK_ID};

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("version mismatch: {0}")]
    VersionMismatch(String),
    #[error("corrupt parameter file: {0}")]
    CorruptFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
