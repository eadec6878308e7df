//! Minimal FASTA and plain-text ingestion.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub name: String,
    pub seq: Vec<u8>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Ingest<'a> {
    pub uppercase: bool,
    /// Reject letters outside this alphabet.
    pub strict: Option<&'a Alphabet>,
}

impl Ingest<'_> {
    fn push_line(&self, seq: &mut Vec<u8>, line: &[u8]) -> Result<()> {
        for &b in line {
            if b == b'\r' {
                continue;
            }
            let b = if self.uppercase {
                b.to_ascii_uppercase()
            } else {
                b
            };
            if let Some(a) = self.strict {
                if !a.contains(b) {
                    return Err(Error::ForeignLetter(b));
                }
            }
            seq.push(b);
        }
        Ok(())
    }
}

/// Parses FASTA records; line breaks inside a sequence are dropped.
pub fn parse_fasta(data: &[u8], opts: Ingest<'_>) -> Result<Vec<Record>> {
    let mut records: Vec<Record> = Vec::new();
    for line in data.split(|&b| b == b'\n') {
        let line = line.strip_suffix(b"\r").unwrap_or(line);
        if let Some(header) = line.strip_prefix(b">") {
            let name = String::from_utf8_lossy(header).trim().to_string();
            records.push(Record {
                name,
                seq: Vec::new(),
            });
        } else if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        } else {
            let rec = records
                .last_mut()
                .ok_or_else(|| Error::Fasta("sequence line before any header".into()))?;
            opts.push_line(&mut rec.seq, line)?;
        }
    }
    if records.is_empty() {
        return Err(Error::Fasta("no records".into()));
    }
    Ok(records)
}

/// FASTA when the first non-blank byte is `>`, otherwise a single record made
/// of all lines joined.
pub fn parse_sequences(data: &[u8], default_name: &str, opts: Ingest<'_>) -> Result<Vec<Record>> {
    let first = data.iter().find(|b| !b.is_ascii_whitespace());
    if first == Some(&b'>') {
        return parse_fasta(data, opts);
    }
    let mut seq = Vec::with_capacity(data.len());
    for line in data.split(|&b| b == b'\n') {
        opts.push_line(&mut seq, line)?;
    }
    Ok(vec![Record {
        name: default_name.to_string(),
        seq,
    }])
}
