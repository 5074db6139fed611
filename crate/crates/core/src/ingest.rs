//! Line-oriented transaction input.
//!
//! One transaction per line. A line containing a comma is split on commas,
//! otherwise on whitespace. Blank lines and lines starting with `#` are
//! skipped. Sequence numbers are positional: the n-th transaction emitted
//! gets `seq = n`.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::window::Transaction;

/// A line that had separators but no items.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed transaction line: {line:?}")]
pub struct MalformedLine {
    pub line: String,
}

/// Parses one input line. `Ok(None)` for blank and comment lines.
pub fn parse_transaction(line: &str, seq: u64) -> Result<Option<Transaction>, MalformedLine> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let items: Vec<&str> = if trimmed.contains(',') {
        trimmed
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .collect()
    } else {
        trimmed.split_whitespace().collect()
    };
    if items.is_empty() {
        return Err(MalformedLine {
            line: line.to_string(),
        });
    }
    Ok(Some(Transaction::new(seq, items)))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SourceStats {
    pub lines_read: u64,
    pub transactions_emitted: u64,
    pub malformed_lines: u64,
}

impl SourceStats {
    /// Blank and comment lines.
    pub fn skipped_lines(&self) -> u64 {
        self.lines_read - self.transactions_emitted - self.malformed_lines
    }
}

/// Where to read transactions from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputSpec {
    Stdin,
    Path(PathBuf),
}

impl InputSpec {
    /// `-` means standard input.
    pub fn parse(arg: &str) -> Self {
        if arg == "-" {
            InputSpec::Stdin
        } else {
            InputSpec::Path(Path::new(arg).to_path_buf())
        }
    }
}

pub type LineSource = io::Lines<Box<dyn BufRead>>;

/// Opens `spec` as a [`TransactionSource`]. Only opening can fail here; read
/// errors surface from the iterator.
pub fn open_source(spec: &InputSpec) -> io::Result<TransactionSource<LineSource>> {
    let reader: Box<dyn BufRead> = match spec {
        InputSpec::Stdin => Box::new(BufReader::new(io::stdin())),
        InputSpec::Path(path) => Box::new(BufReader::new(File::open(path)?)),
    };
    Ok(TransactionSource::new(reader.lines()))
}

/// Streams transactions from lines, reading each line exactly once.
///
/// Malformed lines (and lines that are not valid UTF-8) are counted and
/// skipped; any other I/O error is yielded and ends the stream.
#[derive(Debug)]
pub struct TransactionSource<L> {
    lines: L,
    stats: SourceStats,
    failed: bool,
}

impl<L> TransactionSource<L>
where
    L: Iterator<Item = io::Result<String>>,
{
    pub fn new(lines: L) -> Self {
        TransactionSource {
            lines,
            stats: SourceStats::default(),
            failed: false,
        }
    }

    pub fn stats(&self) -> SourceStats {
        self.stats
    }

    pub fn into_inner(self) -> L {
        self.lines
    }
}

impl<R: BufRead> TransactionSource<io::Lines<R>> {
    pub fn from_reader(reader: R) -> Self {
        TransactionSource::new(reader.lines())
    }
}

impl<L> Iterator for TransactionSource<L>
where
    L: Iterator<Item = io::Result<String>>,
{
    type Item = io::Result<Transaction>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(e) if e.kind() == io::ErrorKind::InvalidData => {
                    self.stats.lines_read += 1;
                    self.stats.malformed_lines += 1;
                    continue;
                }
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e));
                }
            };
            self.stats.lines_read += 1;
            match parse_transaction(&line, self.stats.transactions_emitted + 1) {
                Ok(Some(txn)) => {
                    self.stats.transactions_emitted += 1;
                    return Some(Ok(txn));
                }
                Ok(None) => {}
                Err(_) => self.stats.malformed_lines += 1,
            }
        }
    }
}
