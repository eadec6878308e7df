//! Unit-cost edit distance: the full dynamic programming matrix, a `k`-banded
//! variant, and h-waves.
//!
//! The h-wave `H_h` holds, for each diagonal `d = j - i`, the lowest cell
//! `(i, j)` whose value is exactly `h`. Values along a diagonal never
//! decrease and grow by at most one per step, so the waves `H_0..H_k` encode
//! every cell of value `<= k`. A cell on the last row or column counts as
//! lowest for its value.

/// Row-major `(m+1) x (n+1)` matrix of edit distances between prefixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<u32>,
}

impl DpMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.cells[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.cells[i * self.cols..(i + 1) * self.cols]
    }

    /// Bottom-right cell.
    pub fn distance(&self) -> u32 {
        self.cells[self.cells.len() - 1]
    }
}

pub fn full_edit_distance(x: &[u8], y: &[u8]) -> DpMatrix {
    let rows = x.len() + 1;
    let cols = y.len() + 1;
    let mut cells = vec![0u32; rows * cols];
    for (j, c) in cells[..cols].iter_mut().enumerate() {
        *c = j as u32;
    }
    for i in 1..rows {
        cells[i * cols] = i as u32;
        for j in 1..cols {
            let diag = cells[(i - 1) * cols + j - 1] + u32::from(x[i - 1] != y[j - 1]);
            let up = cells[(i - 1) * cols + j] + 1;
            let left = cells[i * cols + j - 1] + 1;
            cells[i * cols + j] = diag.min(up).min(left);
        }
    }
    DpMatrix { rows, cols, cells }
}

/// `δ(x, y)` if it is at most `k`, otherwise `None`. Only cells with
/// `|j - i| <= k` are computed.
pub fn banded_edit_distance(x: &[u8], y: &[u8], k: usize) -> Option<usize> {
    let (m, n) = (x.len(), y.len());
    if m.abs_diff(n) > k {
        return None;
    }
    // Values above k are clamped to `cap`; cells outside the band are >= k+1.
    let cap = k + 1;
    let mut prev = vec![cap; n + 1];
    let mut cur = vec![cap; n + 1];
    for (j, v) in prev.iter_mut().enumerate().take(k.min(n) + 1) {
        *v = j;
    }
    for i in 1..=m {
        let lo = i.saturating_sub(k);
        let hi = (i + k).min(n);
        if lo > 0 {
            cur[lo - 1] = cap;
        }
        for j in lo..=hi {
            let v = if j == 0 {
                i
            } else {
                let diag = prev[j - 1] + usize::from(x[i - 1] != y[j - 1]);
                let up = if j <= i - 1 + k { prev[j] + 1 } else { cap };
                let left = cur[j - 1] + 1;
                diag.min(up).min(left)
            };
            cur[j] = v.min(cap);
        }
        if hi < n {
            cur[hi + 1] = cap;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    (prev[n] <= k).then_some(prev[n])
}

/// Cell position `(i, j)` in a dynamic programming matrix.
pub type Cell = (usize, usize);

/// The waves `H_0..H_k` of the matrix for a pattern of length `rows` against
/// a text of length `cols`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveSet {
    k: usize,
    rows: usize,
    cols: usize,
    /// `waves[h][d + k]`
    waves: Vec<Vec<Option<Cell>>>,
}

const UNREACHED: i64 = i64::MIN / 4;

impl WaveSet {
    /// Builds the waves by diagonal transition: the furthest row reachable
    /// with cost `<= h` on diagonal `d` follows from level `h - 1` on
    /// diagonals `d - 1`, `d`, `d + 1`, then slides along matching letters.
    pub fn from_scratch(x: &[u8], y: &[u8], k: usize) -> Self {
        let (m, n) = (x.len() as i64, y.len() as i64);
        let width = 2 * k + 1;
        let off = k as i64;
        let mut prev = vec![UNREACHED; width + 2];
        let mut cur = vec![UNREACHED; width + 2];
        let mut waves = vec![vec![None; width]; k + 1];
        for h in 0..=k as i64 {
            cur.fill(UNREACHED);
            for d in -h..=h {
                // skip diagonals that do not intersect the matrix
                if d > n || -d > m {
                    continue;
                }
                let slot = (d + off + 1) as usize;
                let start_row = (-d).max(0);
                let last_row = m.min(n - d);
                let mut row = UNREACHED;
                if h == d.abs() {
                    row = start_row;
                }
                if h > 0 {
                    row = row
                        .max(prev[slot].saturating_add(1))
                        .max(prev[slot - 1])
                        .max(prev[slot + 1].saturating_add(1));
                }
                if row < start_row {
                    continue;
                }
                row = row.min(last_row);
                while row < last_row && x[row as usize] == y[(row + d) as usize] {
                    row += 1;
                }
                cur[slot] = row;
                if row > prev[slot] {
                    waves[h as usize][(d + off) as usize] =
                        Some((row as usize, (row + d) as usize));
                }
            }
            std::mem::swap(&mut prev, &mut cur);
        }
        WaveSet {
            k,
            rows: m as usize,
            cols: n as usize,
            waves,
        }
    }

    /// Waves for `x` rotated left by one letter, given the waves of `x`
    /// against `y`.
    ///
    /// Recomputes the band in `O(k^2 + k·|x|)`; the result is identical to
    /// `from_scratch` on the rotated pattern.
    pub fn rotate_pattern(&self, x: &[u8], y: &[u8]) -> WaveSet {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(y.len(), self.cols);
        if x.is_empty() {
            return self.clone();
        }
        let mut rotated = Vec::with_capacity(x.len());
        rotated.extend_from_slice(&x[1..]);
        rotated.push(x[0]);
        WaveSet::from_scratch(&rotated, y, self.k)
    }

    /// Waves for `(x, y[1..])`. Returns `None` when `y` is empty.
    pub fn drop_text_prefix(&self, x: &[u8], y: &[u8]) -> Option<WaveSet> {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(y.len(), self.cols);
        let rest = y.get(1..)?;
        Some(WaveSet::from_scratch(x, rest, self.k))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Lowest cell with value `h` on diagonal `d`, if any.
    pub fn entry(&self, h: usize, d: isize) -> Option<Cell> {
        let idx = d + self.k as isize;
        if h > self.k || idx < 0 || idx as usize > 2 * self.k {
            return None;
        }
        self.waves[h][idx as usize]
    }

    /// Entries of `H_h` as `(diagonal, cell)`.
    pub fn wave(&self, h: usize) -> impl Iterator<Item = (isize, Cell)> + '_ {
        let k = self.k as isize;
        self.waves[h]
            .iter()
            .enumerate()
            .filter_map(move |(idx, e)| e.map(|c| (idx as isize - k, c)))
    }

    /// Every column `j` with `D[m][j] <= k`, paired with that value, in
    /// increasing `j`.
    ///
    /// Each cell of value `<= k` on the last row is the lowest cell of its
    /// diagonal, so it appears in exactly one wave.
    pub fn occurrence_scan(&self) -> Vec<(usize, usize)> {
        let mut hits: Vec<(usize, usize)> = (0..=self.k)
            .flat_map(|h| {
                self.wave(h)
                    .filter(|&(_, (i, _))| i == self.rows)
                    .map(move |(_, (_, j))| (j, h))
            })
            .collect();
        hits.sort_unstable();
        hits
    }

    /// `δ(x, y)` when the bottom-right cell holds a value `<= k`.
    pub fn distance(&self) -> Option<usize> {
        self.occurrence_scan()
            .into_iter()
            .find(|&(j, _)| j == self.cols)
            .map(|(_, h)| h)
    }
}
