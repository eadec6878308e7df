//! Brute-force references built only on the plain dynamic programming matrix.

use crate::alphabet::Alphabet;
use crate::edit::full_edit_distance;
use crate::error::{Error, Result};
use crate::index::QGramIndex;
use crate::verify::{dedup, doubled, rotate, Occurrence};

/// Every `(start, rotation)` with some factor `t[start .. start + L]` within
/// distance `k` of that rotation, reported with the smallest distance and
/// then the smallest length.
///
/// Per rotation, one column-wise pass of the reversed semi-global matrix
/// gives the best distance for every start; hits are then resolved with a
/// full matrix against `t[start .. start + m + k]`.
pub fn oracle_search(text: &[u8], pattern: &[u8], k: usize) -> Vec<Occurrence> {
    let m = pattern.len();
    let n = text.len();
    if m == 0 || k >= m {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut col = vec![0u32; m + 1];
    for r in 0..m {
        let rot = rotate(pattern, r).expect("rotation in range");
        let rev: Vec<u8> = rot.iter().rev().copied().collect();
        for (i, c) in col.iter_mut().enumerate() {
            *c = i as u32;
        }
        // column e covers reversed text[..e], i.e. starts at n - e
        for e in 1..=n {
            let letter = text[n - e];
            let mut diag = col[0];
            col[0] = 0;
            for i in 1..=m {
                let v = (diag + u32::from(rev[i - 1] != letter))
                    .min(col[i] + 1)
                    .min(col[i - 1] + 1);
                diag = col[i];
                col[i] = v;
            }
            if col[m] as usize <= k {
                let start = n - e;
                let end = (start + m + k).min(n);
                let dp = full_edit_distance(&rot, &text[start..end]);
                let (distance, length) = dp
                    .row(m)
                    .iter()
                    .enumerate()
                    .map(|(len, &d)| (d as usize, len))
                    .min()
                    .expect("row is non-empty");
                debug_assert_eq!(distance, col[m] as usize);
                out.push(Occurrence::new(start, length, r, distance));
            }
        }
    }
    dedup(out)
}

/// Reference q-gram table: for each q-gram, the minimum full edit distance to
/// every factor of the doubled pattern of length at most `2q`, the empty
/// factor included.
pub fn index_oracle(pattern: &[u8], q: usize, alphabet: &Alphabet) -> Result<QGramIndex> {
    let space = alphabet.qgram_space(q).filter(|&s| s <= 4096);
    let Some(_) = space else {
        return Err(Error::OracleScale(format!("sigma^q above 4096 (q={q})")));
    };
    if pattern.len() > 32 {
        return Err(Error::OracleScale(format!(
            "pattern length {} above 32",
            pattern.len()
        )));
    }
    if q == 0 || q >= pattern.len() {
        return Err(Error::BadGramLength {
            q,
            m: pattern.len(),
        });
    }
    let xp = doubled(pattern);
    let mut factors: Vec<&[u8]> = vec![&[]];
    for i in 0..xp.len() {
        for len in 1..=(2 * q).min(xp.len() - i) {
            factors.push(&xp[i..i + len]);
        }
    }
    let table = alphabet
        .qgrams(q)
        .map(|g| {
            factors
                .iter()
                .map(|f| full_edit_distance(&g, f).distance())
                .min()
                .expect("empty factor is always present") as u8
        })
        .collect();
    QGramIndex::from_parts(q, alphabet.clone(), table)
}
