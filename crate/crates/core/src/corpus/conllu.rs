//! Enriched CoNLL-U.
//!
//! Plain CoNLL-U with one addition: the MISC column may carry `Chunk=B` or
//! `Chunk=I` to mark noun-chunk spans computed by an external chunker. A `B`
//! opens a chunk, following `I` marks extend it.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::tree::{DepTree, Span, Token};
use super::CorpusError;

const CHUNK_KEY: &str = "Chunk";

/// Iterator over the sentences of a CoNLL-U stream.
///
/// Each item is one sentence; a sentence that fails validation is reported
/// as an error and reading continues with the next block.
pub struct ConlluReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
    sentence_no: usize,
    done: bool,
}

impl<R: BufRead> ConlluReader<R> {
    pub fn new(read: R) -> Self {
        ConlluReader { lines: read.lines(), line_no: 0, sentence_no: 0, done: false }
    }

    fn next_block(&mut self) -> Option<Result<Vec<(usize, String)>, CorpusError>> {
        let mut block = Vec::new();
        loop {
            match self.lines.next() {
                None => {
                    self.done = true;
                    return (!block.is_empty()).then_some(Ok(block));
                }
                Some(Err(e)) => {
                    self.done = true;
                    return Some(Err(CorpusError::Io(e)));
                }
                Some(Ok(line)) => {
                    self.line_no += 1;
                    let line = line.trim_end_matches('\r').to_owned();
                    if line.trim().is_empty() {
                        if !block.is_empty() {
                            return Some(Ok(block));
                        }
                    } else {
                        block.push((self.line_no, line));
                    }
                }
            }
        }
    }
}

impl<R: BufRead> Iterator for ConlluReader<R> {
    type Item = Result<DepTree, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let block = match self.next_block()? {
            Ok(b) => b,
            Err(e) => return Some(Err(e)),
        };
        self.sentence_no += 1;
        Some(parse_block(&block, self.sentence_no))
    }
}

fn parse_block(block: &[(usize, String)], sentence: usize) -> Result<DepTree, CorpusError> {
    let mut comments = Vec::new();
    let mut tokens = Vec::new();
    let mut marks = Vec::new();

    for (line_no, line) in block {
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim().to_owned());
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(CorpusError::Format {
                line: *line_no,
                msg: format!("expected 10 tab-separated columns, found {}", cols.len()),
            });
        }
        // Multiword ranges and empty nodes carry no tree structure.
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let id: usize = cols[0]
            .parse()
            .map_err(|_| CorpusError::Format { line: *line_no, msg: format!("invalid token id '{}'", cols[0]) })?;
        if id != tokens.len() + 1 {
            return Err(CorpusError::Format {
                line: *line_no,
                msg: format!("token id {} out of sequence, expected {}", id, tokens.len() + 1),
            });
        }
        let head: usize = cols[6]
            .parse()
            .map_err(|_| CorpusError::Format { line: *line_no, msg: format!("invalid head '{}'", cols[6]) })?;
        let (misc, mark) = split_chunk_mark(cols[9]).map_err(|msg| CorpusError::Format { line: *line_no, msg })?;
        marks.push(mark);
        tokens.push(Token {
            index: id,
            form: cols[1].to_owned(),
            lemma: cols[2].to_owned(),
            upos: cols[3].to_owned(),
            xpos: cols[4].to_owned(),
            feats: cols[5].to_owned(),
            head: head.checked_sub(1),
            deprel: cols[7].to_owned(),
            deps: cols[8].to_owned(),
            misc,
        });
    }

    let first_line = block.first().map_or(0, |(l, _)| *l);
    let spans = chunk_spans_from_marks(&marks).map_err(|msg| CorpusError::Format { line: first_line, msg })?;
    DepTree::new(tokens, spans).map(|t| t.with_comments(comments)).map_err(|source| CorpusError::Tree {
        sentence,
        line: first_line,
        source,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ChunkMark {
    Begin,
    Inside,
}

fn split_chunk_mark(misc: &str) -> Result<(String, Option<ChunkMark>), String> {
    if misc == "_" {
        return Ok((misc.to_owned(), None));
    }
    let mut mark = None;
    let mut rest = Vec::new();
    for kv in misc.split('|') {
        match kv.split_once('=') {
            Some((CHUNK_KEY, v)) => {
                mark = Some(match v {
                    "B" => ChunkMark::Begin,
                    "I" => ChunkMark::Inside,
                    other => return Err(format!("invalid chunk mark '{}'", other)),
                })
            }
            _ => rest.push(kv),
        }
    }
    let misc = if rest.is_empty() { "_".to_owned() } else { rest.join("|") };
    Ok((misc, mark))
}

/// `None` when the sentence carries no marks at all, so that a sentence
/// without chunk annotation falls back to the built-in chunker.
fn chunk_spans_from_marks(marks: &[Option<ChunkMark>]) -> Result<Option<Vec<Span>>, String> {
    if marks.iter().all(Option::is_none) {
        return Ok(None);
    }
    let mut spans = Vec::new();
    let mut open: Option<usize> = None;
    for (i, m) in marks.iter().enumerate() {
        match m {
            Some(ChunkMark::Begin) => {
                if let Some(s) = open.take() {
                    spans.push(Span::new(s, i));
                }
                open = Some(i);
            }
            Some(ChunkMark::Inside) => {
                if open.is_none() {
                    return Err(format!("Chunk=I without preceding Chunk=B at token {}", i + 1));
                }
            }
            None => {
                if let Some(s) = open.take() {
                    spans.push(Span::new(s, i));
                }
            }
        }
    }
    if let Some(s) = open {
        spans.push(Span::new(s, marks.len()));
    }
    Ok(Some(spans))
}

/// Reads every sentence, failing on the first malformed one.
pub fn read_conllu(path: impl AsRef<Path>) -> Result<Vec<DepTree>, CorpusError> {
    let file = File::open(path.as_ref())?;
    ConlluReader::new(BufReader::new(file)).collect()
}

/// Reads every sentence, keeping per-sentence failures in place so that
/// positions stay aligned with other per-sentence files.
pub fn read_conllu_lenient(path: impl AsRef<Path>) -> Result<Vec<Result<DepTree, CorpusError>>, CorpusError> {
    let file = File::open(path.as_ref())?;
    let mut out = Vec::new();
    for item in ConlluReader::new(BufReader::new(file)) {
        if let Err(CorpusError::Io(e)) = item {
            return Err(CorpusError::Io(e));
        }
        out.push(item);
    }
    Ok(out)
}

pub fn write_tree<W: Write>(mut w: W, tree: &DepTree) -> std::io::Result<()> {
    for c in tree.comments() {
        writeln!(w, "# {}", c)?;
    }
    let mut marks = vec![None; tree.len()];
    for span in tree.chunk_spans().unwrap_or(&[]) {
        marks[span.start] = Some("B");
        for m in &mut marks[span.start + 1..span.end] {
            *m = Some("I");
        }
    }
    for (tok, mark) in tree.tokens().iter().zip(marks) {
        let misc = match (mark, tok.misc.as_str()) {
            (None, m) => m.to_owned(),
            (Some(c), "_") => format!("{}={}", CHUNK_KEY, c),
            (Some(c), m) => format!("{}|{}={}", m, CHUNK_KEY, c),
        };
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            tok.index,
            tok.form,
            tok.lemma,
            tok.upos,
            tok.xpos,
            tok.feats,
            tok.head.map_or(0, |h| h + 1),
            tok.deprel,
            tok.deps,
            misc
        )?;
    }
    writeln!(w)
}

pub fn write_conllu<W: Write>(mut w: W, trees: &[DepTree]) -> std::io::Result<()> {
    for t in trees {
        write_tree(&mut w, t)?;
    }
    Ok(())
}
