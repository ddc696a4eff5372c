//! Binary checkpoint format.
//!
//! ```text
//! magic          8 bytes   "TASTE001"
//! embed_dim      u32
//! hidden_dim     u32
//! activation     u8        0 = tanh, 1 = sigmoid
//! class count    u8        3
//! class names    per class: u8 length + ASCII name (negative, neutral, positive)
//! embedding hash 32 bytes  SHA-256 of the embedding file, zeros if unknown
//! tensor count   u32
//! tensors        per tensor in store order: u32 rows, u32 cols, rows*cols f32
//! ```
//!
//! All integers and floats are little-endian; tensors are row-major.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::params::{CandidateActivation, ModelParams, ModelShape, NUM_CLASSES};
use super::ModelError;
use crate::neural::{Matrix, ParamStore};
use crate::Sentiment;

pub const MAGIC: &[u8; 8] = b"TASTE001";

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub params: ModelParams,
    pub embedding_hash: [u8; 32],
}

pub fn write_checkpoint<W: Write>(mut w: W, params: &ModelParams, embedding_hash: [u8; 32]) -> std::io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(params.embed_dim() as u32).to_le_bytes())?;
    w.write_all(&(params.hidden_dim() as u32).to_le_bytes())?;
    w.write_all(&[params.activation().code(), NUM_CLASSES as u8])?;
    for s in Sentiment::ALL {
        w.write_all(&[s.as_str().len() as u8])?;
        w.write_all(s.as_str().as_bytes())?;
    }
    w.write_all(&embedding_hash)?;
    w.write_all(&(params.store().len() as u32).to_le_bytes())?;
    for p in params.store().iter() {
        w.write_all(&(p.value.rows() as u32).to_le_bytes())?;
        w.write_all(&(p.value.cols() as u32).to_le_bytes())?;
        for &v in p.value.as_slice() {
            w.write_all(&(v as f32).to_le_bytes())?;
        }
    }
    w.flush()
}

pub fn save_checkpoint(
    path: impl AsRef<Path>,
    params: &ModelParams,
    embedding_hash: [u8; 32],
) -> Result<(), ModelError> {
    let file = File::create(path)?;
    write_checkpoint(BufWriter::new(file), params, embedding_hash)?;
    Ok(())
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<Checkpoint, ModelError> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    read_checkpoint(&bytes)
}

/// Parses a complete checkpoint image. Nothing is returned unless every
/// byte is accounted for.
pub fn read_checkpoint(bytes: &[u8]) -> Result<Checkpoint, ModelError> {
    let mut r = ByteReader { bytes, pos: 0 };
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(ModelError::Format("not a checkpoint (bad magic)".to_owned()));
    }
    r.pos = MAGIC.len();

    let embed_dim = r.u32()? as usize;
    let hidden_dim = r.u32()? as usize;
    let activation = CandidateActivation::from_code(r.u8()?)
        .ok_or_else(|| ModelError::Corruption("unknown activation code".to_owned()))?;
    let classes = r.u8()? as usize;
    if classes != NUM_CLASSES {
        return Err(ModelError::Corruption(format!("checkpoint has {} classes, expected {}", classes, NUM_CLASSES)));
    }
    for expected in Sentiment::ALL {
        let len = r.u8()? as usize;
        let name = r.take(len)?;
        if name != expected.as_str().as_bytes() {
            return Err(ModelError::Corruption(format!(
                "class order mismatch: found '{}' where '{}' was expected",
                String::from_utf8_lossy(name),
                expected
            )));
        }
    }
    let mut embedding_hash = [0u8; 32];
    embedding_hash.copy_from_slice(r.take(32)?);

    let shape = ModelShape { embed_dim, hidden_dim, activation };
    if embed_dim == 0 || hidden_dim == 0 {
        return Err(ModelError::Corruption("zero dimension in header".to_owned()));
    }
    let layout = ModelParams::layout(shape);
    let count = r.u32()? as usize;
    if count != layout.len() {
        return Err(ModelError::Corruption(format!("{} tensors in file, expected {}", count, layout.len())));
    }

    let mut store = ParamStore::new();
    for (name, rows, cols, _) in layout {
        let (fr, fc) = (r.u32()? as usize, r.u32()? as usize);
        if (fr, fc) != (rows, cols) {
            return Err(ModelError::Corruption(format!(
                "tensor {} is {}x{} in file, header implies {}x{}",
                name, fr, fc, rows, cols
            )));
        }
        let raw = r.take(rows * cols * 4)?;
        let data: Vec<f64> = raw.chunks_exact(4).map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64).collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::Corruption(format!("non-finite value in tensor {}", name)));
        }
        store.add(name, Matrix::from_vec(rows, cols, data)?);
    }
    if r.pos != bytes.len() {
        return Err(ModelError::Corruption(format!("{} trailing bytes", bytes.len() - r.pos)));
    }
    Ok(Checkpoint { params: ModelParams::from_store(shape, store)?, embedding_hash })
}

struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], ModelError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or_else(|| {
            ModelError::Corruption(format!("file truncated at byte {} (needed {} more)", self.pos, n))
        })?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8, ModelError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, ModelError> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }
}
