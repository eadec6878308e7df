//! The q-gram distance table.
//!
//! For every q-gram `g`, `M[encode(g)]` is the smallest edit distance between
//! `g` and any factor of the doubled pattern `x' = x · x[..m-1]`. Factors longer
//! than `2q` can never beat the empty factor (distance `q`), so this equals the
//! minimum over the prefixes of every length-`2q` window of `x'`.
//!
//! Each entry is the minimum of the last row of a semi-global matrix with the
//! q-gram down the side and `x'` across the top. Q-grams are enumerated
//! depth-first in encoding order so that rows for shared prefixes are
//! computed once.

use std::io::{Read, Write};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::verify::doubled;

/// Default cap on `σ^q` table entries (one byte each).
pub const DEFAULT_BUDGET: usize = 1 << 22;

const MAGIC: &[u8; 8] = b"CIRCIDX1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QGramIndex {
    q: usize,
    alphabet: Alphabet,
    table: Vec<u8>,
}

impl QGramIndex {
    pub fn build(pattern: &[u8], q: usize, alphabet: &Alphabet, budget: usize) -> Result<Self> {
        let m = pattern.len();
        if m == 0 {
            return Err(Error::EmptyPattern);
        }
        if q == 0 || q >= m || q >= u8::MAX as usize {
            return Err(Error::BadGramLength { q, m });
        }
        let entries = check_budget(alphabet, q, budget)?;
        let xp = doubled(pattern);
        let width = xp.len() + 1;
        let cap = q as u8;

        let sigma = alphabet.size();
        // mismatch[a][j] = 1 when rank a differs from x'[j-1]; column 0 unused
        let mismatch: Vec<Vec<u8>> = (0..sigma)
            .map(|a| {
                let letter = alphabet.unrank(a);
                std::iter::once(0)
                    .chain(xp.iter().map(|&b| u8::from(b != letter)))
                    .collect()
            })
            .collect();
        let mut rows = vec![0u8; (q + 1) * width];
        let mut scratch = vec![0u8; width];
        let mut table = Vec::with_capacity(entries);
        // iterative DFS over the q-gram trie; digits[i] is the rank at depth i
        let mut digits = vec![0usize; q];
        let mut depth = 0;
        loop {
            // fill rows depth+1..q for the current digits
            while depth + 1 < q {
                let (done, rest) = rows.split_at_mut((depth + 1) * width);
                let prev = &done[depth * width..];
                let cur = &mut rest[..width];
                next_row(
                    prev,
                    cur,
                    &mismatch[digits[depth]],
                    depth as u8 + 1,
                    cap,
                    &mut scratch,
                );
                depth += 1;
            }
            table.push(leaf_min(
                &rows[depth * width..(depth + 1) * width],
                &mismatch[digits[depth]],
                cap,
            ));

            // advance the odometer; rows above the changed digit stay valid
            let mut i = q;
            loop {
                if i == 0 {
                    debug_assert_eq!(table.len(), entries);
                    return Ok(QGramIndex {
                        q,
                        alphabet: alphabet.clone(),
                        table,
                    });
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < sigma {
                    break;
                }
                digits[i] = 0;
            }
            depth = i;
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    /// Table entry for an encoded q-gram.
    #[inline]
    pub fn get(&self, code: usize) -> u8 {
        self.table[code]
    }

    /// `None` when `gram` has a letter outside the alphabet.
    #[inline]
    pub fn lookup(&self, gram: &[u8]) -> Option<u8> {
        debug_assert_eq!(gram.len(), self.q);
        self.alphabet.encode(gram).map(|c| self.table[c])
    }

    /// Assembles an index from a precomputed table.
    pub fn from_parts(q: usize, alphabet: Alphabet, table: Vec<u8>) -> Result<Self> {
        let expected = alphabet
            .qgram_space(q)
            .ok_or_else(|| Error::IndexFormat("table size overflows".into()))?;
        if table.len() != expected {
            return Err(Error::IndexFormat(format!(
                "expected {expected} entries, got {}",
                table.len()
            )));
        }
        Ok(QGramIndex { q, alphabet, table })
    }

    /// Layout: `CIRCIDX1`, one byte σ, one byte q, σ letters in rank order,
    /// then the `σ^q` table bytes.
    pub fn write_to(&self, mut out: impl Write) -> Result<()> {
        let sigma = u8::try_from(self.alphabet.size())
            .map_err(|_| Error::IndexFormat("alphabet larger than 255 letters".into()))?;
        out.write_all(MAGIC)?;
        out.write_all(&[sigma, self.q as u8])?;
        out.write_all(self.alphabet.letters())?;
        out.write_all(&self.table)?;
        out.flush()?;
        Ok(())
    }

    pub fn read_from(mut input: impl Read) -> Result<Self> {
        let mut header = [0u8; 10];
        input
            .read_exact(&mut header)
            .map_err(|_| Error::IndexFormat("truncated header".into()))?;
        if &header[..8] != MAGIC {
            return Err(Error::IndexFormat("bad magic".into()));
        }
        let (sigma, q) = (header[8] as usize, header[9] as usize);
        let mut letters = vec![0u8; sigma];
        input
            .read_exact(&mut letters)
            .map_err(|_| Error::IndexFormat("truncated alphabet".into()))?;
        let alphabet = Alphabet::from_letters(&letters)?;
        let mut table = Vec::new();
        input.read_to_end(&mut table)?;
        Self::from_parts(q, alphabet, table)
    }
}

/// One row of the semi-global matrix from the row above, capped at `cap`.
///
/// Vertical and diagonal moves are taken first; horizontal moves are then
/// propagated by doubling shifts, which is exact because no horizontal run
/// longer than `cap` can lower a capped value. Every pass is branch-free over
/// whole slices so it vectorizes.
fn next_row(prev: &[u8], cur: &mut [u8], mismatch: &[u8], first: u8, cap: u8, scratch: &mut [u8]) {
    cur[0] = first;
    for ((c, (&d, &v)), &x) in cur[1..]
        .iter_mut()
        .zip(prev.iter().zip(&prev[1..]))
        .zip(&mismatch[1..])
    {
        *c = d.saturating_add(x).min(v.saturating_add(1));
    }
    let width = cur.len();
    let mut shift = 1usize;
    while shift < cap as usize && shift < width {
        let s = shift as u8;
        scratch[..shift].copy_from_slice(&cur[..shift]);
        for ((o, &a), &b) in scratch[shift..]
            .iter_mut()
            .zip(&cur[shift..])
            .zip(&cur[..width - shift])
        {
            *o = a.min(b.saturating_add(s));
        }
        cur.copy_from_slice(scratch);
        shift *= 2;
    }
    for c in cur.iter_mut() {
        *c = (*c).min(cap);
    }
}

/// Minimum of the row below `prev`. Horizontal moves never lower a row
/// minimum, so only vertical and diagonal moves are needed.
fn leaf_min(prev: &[u8], mismatch: &[u8], cap: u8) -> u8 {
    let inner = prev
        .iter()
        .zip(&prev[1..])
        .zip(&mismatch[1..])
        .map(|((&d, &v), &x)| d.saturating_add(x).min(v.saturating_add(1)))
        .fold(u8::MAX, u8::min);
    inner.min(prev[0].saturating_add(1)).min(cap)
}

/// Number of table entries, or a refusal naming the required size.
pub fn check_budget(alphabet: &Alphabet, q: usize, budget: usize) -> Result<usize> {
    match alphabet.qgram_space(q) {
        Some(n) if n <= budget => Ok(n),
        Some(n) => Err(Error::BudgetExceeded {
            required: n.to_string(),
            budget,
        }),
        None => Err(Error::BudgetExceeded {
            required: format!("{}^{}", alphabet.size(), q),
            budget,
        }),
    }
}
