//! Word embeddings in the GloVe text format.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use sha2::{Digest, Sha256};

use super::CorpusError;

/// Frozen word vectors. Lookups never fail: unknown words map to the
/// all-zero vector.
#[derive(Clone, Debug)]
pub struct EmbeddingTable {
    dim: usize,
    index: HashMap<String, usize>,
    data: Vec<f64>,
    oov: Vec<f64>,
    skipped: usize,
    content_hash: [u8; 32],
}

impl EmbeddingTable {
    pub fn new(dim: usize) -> Self {
        EmbeddingTable {
            dim,
            index: HashMap::new(),
            data: Vec::new(),
            oov: vec![0.0; dim],
            skipped: 0,
            content_hash: [0; 32],
        }
    }

    /// Adds or replaces a vector. Panics if `vector.len() != dim`.
    pub fn insert(&mut self, word: impl Into<String>, vector: &[f64]) {
        assert_eq!(vector.len(), self.dim, "embedding width mismatch");
        let word = word.into();
        match self.index.get(&word) {
            Some(&row) => self.data[row * self.dim..(row + 1) * self.dim].copy_from_slice(vector),
            None => {
                self.index.insert(word, self.index.len());
                self.data.extend_from_slice(vector);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Lines dropped while loading.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    /// SHA-256 of the source file, all zeros for tables built in memory.
    pub fn content_hash(&self) -> [u8; 32] {
        self.content_hash
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.index.get(word).map(|&row| &self.data[row * self.dim..(row + 1) * self.dim])
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    /// Exact match first, then the lowercased form, then the OOV vector.
    pub fn lookup(&self, word: &str) -> &[f64] {
        self.get(word).or_else(|| self.get(&word.to_lowercase())).unwrap_or(&self.oov)
    }

    pub fn oov_vector(&self) -> &[f64] {
        &self.oov
    }
}

/// Loads every well-formed line of a `word v1 .. v_dim` file.
pub fn load_embeddings(path: impl AsRef<Path>, dim: usize) -> Result<EmbeddingTable, CorpusError> {
    load_embeddings_filtered(path, dim, None)
}

/// Like [`load_embeddings`], keeping only words in `vocab` (and their
/// lowercased forms) when given. Large embedding files do not fit in memory
/// at 64-bit precision otherwise.
pub fn load_embeddings_filtered(
    path: impl AsRef<Path>,
    dim: usize,
    vocab: Option<&HashSet<String>>,
) -> Result<EmbeddingTable, CorpusError> {
    if dim == 0 {
        return Err(CorpusError::Format { line: 0, msg: "embedding dimension must be positive".to_owned() });
    }
    let file = File::open(path.as_ref())?;
    let mut reader = BufReader::new(HashingReader { inner: file, hasher: Sha256::new() });
    let mut table = EmbeddingTable::new(dim);
    let mut parsed = 0usize;
    let mut buf = String::new();
    let mut values = Vec::with_capacity(dim);

    loop {
        buf.clear();
        if reader.read_line(&mut buf)? == 0 {
            break;
        }
        let line = buf.trim_end_matches(['\n', '\r']);
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(' ');
        let word = fields.next().unwrap_or("");
        values.clear();
        let ok = fields.try_for_each(|f| f.parse::<f64>().map(|v| values.push(v)).map_err(|_| ())).is_ok()
            && values.len() == dim
            && !word.is_empty()
            && values.iter().all(|v| v.is_finite());
        if !ok {
            table.skipped += 1;
            continue;
        }
        parsed += 1;
        let wanted = vocab.is_none_or(|v| v.contains(word));
        if wanted {
            table.insert(word, &values);
        }
    }
    // Drain to make the hash cover the whole file.
    std::io::copy(&mut reader, &mut std::io::sink())?;

    if parsed == 0 {
        return Err(CorpusError::Format {
            line: 0,
            msg: format!("no parseable {}-dimensional vectors in {}", dim, path.as_ref().display()),
        });
    }
    if table.skipped > 0 {
        log::warn!("skipped {} malformed embedding lines", table.skipped);
    }
    table.content_hash = reader.into_inner().hasher.finalize().into();
    Ok(table)
}

struct HashingReader<R> {
    inner: R,
    hasher: Sha256,
}

impl<R: Read> Read for HashingReader<R> {
    fn read(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        let n = self.inner.read(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }
}
