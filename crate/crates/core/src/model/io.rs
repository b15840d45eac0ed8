//! Parameter file: magic, format version, dims, init seed, vocabulary hash,
//! vocabulary listing, then every weight as little-endian f64 in layout order.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::params::{param_count, ModelConfig, ModelParams};
use super::vocab::{Vocabulary, CLS, UNK};
use super::ModelError;

const MAGIC: &[u8; 8] = b"SETCOHM\0";
pub const FORMAT_VERSION: u32 = 1;

pub fn to_bytes(p: &ModelParams) -> Vec<u8> {
    let mut out = Vec::with_capacity(64 + p.theta.len() * 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    for n in [p.dim, p.hidden, p.vocab.len(), p.pair_buckets] {
        out.extend_from_slice(&(n as u64).to_le_bytes());
    }
    out.extend_from_slice(&p.init_seed.to_le_bytes());
    out.extend_from_slice(&p.vocab.hash());
    for t in p.vocab.tokens() {
        out.extend_from_slice(&(t.len() as u32).to_le_bytes());
        out.extend_from_slice(t.as_bytes());
    }
    for x in &p.theta {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], ModelError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| ModelError::CorruptFile(format!("truncated at byte {}", self.pos)))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32, ModelError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, ModelError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn usize(&mut self, limit: u64, what: &str) -> Result<usize, ModelError> {
        let n = self.u64()?;
        if n > limit {
            return Err(ModelError::CorruptFile(format!("implausible {what} {n}")));
        }
        Ok(n as usize)
    }
}

pub fn from_bytes(buf: &[u8]) -> Result<ModelParams, ModelError> {
    let mut r = Reader { buf, pos: 0 };
    if r.take(8)? != MAGIC {
        return Err(ModelError::CorruptFile("not a parameter file".into()));
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(ModelError::VersionMismatch(format!(
            "format version {version}, expected {FORMAT_VERSION}"
        )));
    }
    let dim = r.usize(1 << 16, "dimension")?;
    let hidden = r.usize(1 << 16, "hidden width")?;
    let vocab_len = r.usize(1 << 24, "vocabulary size")?;
    let pair_buckets = r.usize(1 << 24, "pair table size")?;
    let init_seed = r.u64()?;
    let stored_hash: [u8; 32] = r.take(32)?.try_into().unwrap();
    let mut tokens = Vec::with_capacity(vocab_len);
    for _ in 0..vocab_len {
        let n = r.u32()? as usize;
        let t = std::str::from_utf8(r.take(n)?).map_err(|e| ModelError::CorruptFile(e.to_string()))?;
        tokens.push(t.to_string());
    }
    if tokens.len() < 2 || tokens[0] != CLS || tokens[1] != UNK {
        return Err(ModelError::CorruptFile("reserved tokens missing".into()));
    }
    let vocab = Vocabulary::from_listing(tokens);
    if vocab.hash() != stored_hash {
        return Err(ModelError::VersionMismatch("vocabulary hash does not match listing".into()));
    }
    let cfg = ModelConfig {
        dim,
        hidden,
        pair_buckets,
        init_scale: 0.0,
    };
    let n = param_count(vocab.len(), &cfg);
    let mut theta = Vec::with_capacity(n);
    for _ in 0..n {
        let x = f64::from_le_bytes(r.take(8)?.try_into().unwrap());
        if !x.is_finite() {
            return Err(ModelError::CorruptFile("non-finite weight".into()));
        }
        theta.push(x);
    }
    if r.pos != buf.len() {
        return Err(ModelError::CorruptFile(format!("{} trailing bytes", buf.len() - r.pos)));
    }
    Ok(ModelParams {
        vocab,
        dim,
        hidden,
        pair_buckets,
        init_seed,
        theta,
    })
}

pub fn save_params(p: &ModelParams, path: impl AsRef<Path>) -> Result<(), ModelError> {
    let mut f = fs::File::create(path)?;
    f.write_all(&to_bytes(p))?;
    Ok(())
}

pub fn load_params(path: impl AsRef<Path>) -> Result<ModelParams, ModelError> {
    from_bytes(&fs::read(path)?)
}
