//! Exact verification of a text block against every rotation of the pattern.
//!
//! For a block `w` of length `2m` and each rotation `x^r`, the verifier runs a
//! `k`-differences diagonal transition over `reverse(x^r)` against
//! `reverse(w)`. In the reversed matrix an end column is a start position in
//! the block, so one pass per rotation yields the minimal distance of every
//! candidate start. Letter comparisons are answered in O(1) from a table of
//! backward common-extension lengths between the doubled pattern and the
//! block, which keeps a block at `O(m^2 k)` work.

use crate::edit::WaveSet;
use crate::error::{Error, Result};

/// `x[i..] x[..i]`.
pub fn rotate(x: &[u8], i: usize) -> Result<Vec<u8>> {
    if i >= x.len() {
        return Err(Error::RotationOutOfRange { i, m: x.len() });
    }
    let mut r = Vec::with_capacity(x.len());
    r.extend_from_slice(&x[i..]);
    r.extend_from_slice(&x[..i]);
    Ok(r)
}

/// `x` followed by `x[..m-1]`; every rotation of `x` is a factor.
pub fn doubled(x: &[u8]) -> Vec<u8> {
    let mut d = Vec::with_capacity((2 * x.len()).saturating_sub(1));
    d.extend_from_slice(x);
    d.extend_from_slice(&x[..x.len().saturating_sub(1)]);
    d
}

/// A slice of the text starting at absolute position `offset`.
#[derive(Debug, Clone, Copy)]
pub struct Block<'a> {
    pub offset: usize,
    pub data: &'a [u8],
}

impl<'a> Block<'a> {
    /// `text[offset .. offset + 2m]`, clipped to the end of the text.
    pub fn at(text: &'a [u8], offset: usize, m: usize) -> Self {
        let end = (offset + 2 * m).min(text.len());
        Block {
            offset,
            data: &text[offset..end],
        }
    }
}

/// A factor `text[start .. start + length]` within `distance` of rotation
/// `rotation` of the pattern.
///
/// Ordering is by `(start, rotation, distance, length)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub start: usize,
    pub rotation: usize,
    pub distance: usize,
    pub length: usize,
}

impl Occurrence {
    pub fn new(start: usize, length: usize, rotation: usize, distance: usize) -> Self {
        Occurrence {
            start,
            rotation,
            distance,
            length,
        }
    }
}

/// Keeps one occurrence per `(start, rotation)`: the smallest distance, then
/// the shortest length. The result is sorted.
pub fn dedup(mut occ: Vec<Occurrence>) -> Vec<Occurrence> {
    occ.sort_unstable();
    occ.dedup_by_key(|o| (o.start, o.rotation));
    occ
}

/// Work done by the verifier, in table cells and diagonal steps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyWork {
    pub blocks: u64,
    pub lce_cells: u64,
    pub wave_steps: u64,
    pub resolved: u64,
}

impl VerifyWork {
    pub fn total(&self) -> u64 {
        self.lce_cells + self.wave_steps
    }
}

const UNREACHED: i64 = i64::MIN / 4;
const NO_HIT: u32 = u32::MAX;

/// Reusable verification state for one pattern and threshold.
#[derive(Debug, Clone)]
pub struct Verifier {
    pattern: Vec<u8>,
    doubled: Vec<u8>,
    k: usize,
    lce: Vec<u32>,
    prev: Vec<i64>,
    cur: Vec<i64>,
    best: Vec<u32>,
    work: VerifyWork,
}

impl Verifier {
    pub fn new(pattern: &[u8], k: usize) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::EmptyPattern);
        }
        if k >= pattern.len() {
            return Err(Error::ThresholdTooLarge {
                k,
                m: pattern.len(),
            });
        }
        Ok(Verifier {
            pattern: pattern.to_vec(),
            doubled: doubled(pattern),
            k,
            lce: Vec::new(),
            prev: Vec::new(),
            cur: Vec::new(),
            best: Vec::new(),
            work: VerifyWork::default(),
        })
    }

    pub fn work(&self) -> VerifyWork {
        self.work
    }

    pub fn reset_work(&mut self) {
        self.work = VerifyWork::default();
    }

    /// All occurrences starting in the first `m - k` positions of the block,
    /// deduplicated.
    pub fn verify(&mut self, block: &Block<'_>) -> Vec<Occurrence> {
        let m = self.pattern.len();
        self.verify_starts(block, m - self.k)
    }

    /// All occurrences starting in the first `starts` positions of the block.
    pub fn verify_starts(&mut self, block: &Block<'_>, starts: usize) -> Vec<Occurrence> {
        let m = self.pattern.len();
        let k = self.k;
        let w = block.data;
        let n = w.len();
        let starts = starts.min(n);
        self.work.blocks += 1;
        // an occurrence is at least m - k long
        if starts == 0 || n + k < m {
            return Vec::new();
        }
        self.fill_lce(w);

        let (n_i, m_i, k_i) = (n as i64, m as i64, k as i64);
        // reversed end columns N - s for starts s < `starts` sit on these diagonals
        let lo = n_i + 1 - starts as i64 - m_i;
        let hi = n_i - m_i;
        let base = lo - k_i - 1;
        let width = (hi + k_i - base + 2) as usize;
        self.prev.resize(width, UNREACHED);
        self.cur.resize(width, UNREACHED);
        self.best.resize(n + 1, NO_HIT);

        let mut found = Vec::new();
        for r in 0..m {
            self.best.fill(NO_HIT);
            self.prev.fill(UNREACHED);
            for h in 0..=k_i {
                self.cur.fill(UNREACHED);
                let dlo = (lo - (k_i - h)).max(-h);
                let dhi = (hi + (k_i - h)).min(n_i);
                for d in dlo..=dhi {
                    let slot = (d - base) as usize;
                    let start_row = (-d).max(0);
                    let last_row = m_i.min(n_i - d);
                    if start_row > last_row {
                        continue;
                    }
                    let mut row = if h >= start_row { start_row } else { UNREACHED };
                    if h > 0 {
                        row = row
                            .max(self.prev[slot].saturating_add(1))
                            .max(self.prev[slot - 1])
                            .max(self.prev[slot + 1].saturating_add(1));
                    }
                    if row < start_row {
                        continue;
                    }
                    row = row.min(last_row);
                    if row < m_i && row + d < n_i {
                        let a = (r as i64 + m_i - 1 - row) as usize;
                        let b = (n_i - 1 - row - d) as usize;
                        row += i64::from(self.lce[a * n + b]).min(m_i - row);
                    }
                    self.cur[slot] = row;
                    self.work.wave_steps += 1;
                    if row == m_i {
                        let e = (m_i + d) as usize;
                        if self.best[e] == NO_HIT {
                            self.best[e] = h as u32;
                        }
                    }
                }
                std::mem::swap(&mut self.prev, &mut self.cur);
            }
            for s in 0..starts {
                let h = self.best[n - s];
                if h != NO_HIT {
                    found.push(self.resolve(block, s, r, h as usize));
                }
            }
        }
        dedup(found)
    }

    /// Shortest factor at block position `s` reaching distance `h` against
    /// rotation `r`.
    fn resolve(&mut self, block: &Block<'_>, s: usize, r: usize, h: usize) -> Occurrence {
        let m = self.pattern.len();
        let rotation = &self.doubled[r..r + m];
        let end = (s + m + self.k).min(block.data.len());
        let waves = WaveSet::from_scratch(rotation, &block.data[s..end], h);
        self.work.resolved += 1;
        let (length, distance) = waves
            .occurrence_scan()
            .into_iter()
            .map(|(j, d)| (d, j))
            .min()
            .map(|(d, j)| (j, d))
            .expect("diagonal transition found a hit");
        debug_assert_eq!(distance, h);
        Occurrence::new(block.offset + s, length, r, distance)
    }

    /// `lce[a][b]`: length of the longest common suffix of `doubled[..=a]`
    /// and `w[..=b]`.
    fn fill_lce(&mut self, w: &[u8]) {
        let n = w.len();
        let rows = self.doubled.len();
        self.lce.clear();
        self.lce.resize(rows * n, 0);
        for (a, &xa) in self.doubled.iter().enumerate() {
            for (b, &wb) in w.iter().enumerate() {
                if xa == wb {
                    let ext = if a > 0 && b > 0 {
                        self.lce[(a - 1) * n + b - 1]
                    } else {
                        0
                    };
                    self.lce[a * n + b] = ext + 1;
                }
            }
        }
        self.work.lce_cells += (rows * n) as u64;
    }
}

/// One-shot form of [`Verifier::verify`].
pub fn verify_block(pattern: &[u8], k: usize, block: &Block<'_>) -> Result<Vec<Occurrence>> {
    Ok(Verifier::new(pattern, k)?.verify(block))
}
