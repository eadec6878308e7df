//! Sliding-window search with q-gram filtration.
//!
//! A window of length `m - k` slides over the text. For each window, q-grams
//! are read right to left from its end and their table values summed; each
//! value lower-bounds the edit cost of aligning that q-gram inside any
//! occurrence, so once the sum exceeds `k` no occurrence can start at or
//! before the leftmost letter read and the window moves one past it.
//! Windows that survive `J` q-grams are verified exactly and the window moves
//! by `m - k`.

use std::thread;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::index::{self, QGramIndex};
use crate::verify::{dedup, Block, Occurrence, Verifier};

/// Grid resolution for the difference-rate parameter `c`.
const C_STEPS: u32 = 100;
const PLAN_ROUNDS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Filter,
    VerifyAll,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Filter => "filter",
            Mode::VerifyAll => "verify-all",
        })
    }
}

/// Knobs for [`plan`].
#[derive(Debug, Clone)]
pub struct PlanOptions {
    pub q: Option<usize>,
    pub c: Option<f64>,
    pub epsilon: f64,
    /// Upper bound on `σ^q`.
    pub budget: usize,
    /// `None` picks filtering when feasible.
    pub mode: Option<Mode>,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            q: None,
            c: None,
            epsilon: 0.5,
            budget: index::DEFAULT_BUDGET,
            mode: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchPlan {
    pub m: usize,
    pub k: usize,
    pub sigma: usize,
    pub q: usize,
    pub c: f64,
    pub d: f64,
    /// q-grams read per window before deciding to verify.
    pub grams: usize,
    pub window_len: usize,
    pub verified_shift: usize,
    /// Smallest shift after a rejected window, `window_len - grams·q + 1`.
    pub unverified_shift: usize,
    pub epsilon: f64,
    pub mode: Mode,
}

impl SearchPlan {
    pub fn verify_all(m: usize, k: usize, sigma: usize, epsilon: f64) -> Result<Self> {
        check_mk(m, k)?;
        Ok(SearchPlan {
            m,
            k,
            sigma,
            q: 0,
            c: 0.0,
            d: 0.0,
            grams: 0,
            window_len: m - k,
            verified_shift: m - k,
            unverified_shift: m - k,
            epsilon,
            mode: Mode::VerifyAll,
        })
    }

    /// Checks every invariant a filtering plan must satisfy.
    pub fn validate(&self) -> Result<()> {
        check_mk(self.m, self.k)?;
        if self.mode == Mode::VerifyAll {
            return Ok(());
        }
        check_filter(self.m, self.k, self.sigma, self.q, self.c, self.epsilon).map(|_| ())
    }
}

fn check_mk(m: usize, k: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::EmptyPattern);
    }
    if k >= m {
        return Err(Error::ThresholdTooLarge { k, m });
    }
    Ok(())
}

/// `1 - c + 2c·log_σ c + 2(1-c)·log_σ(1-c)`: the exponent governing how
/// unlikely a random q-gram is to match with fewer than `cq` differences.
pub fn difference_exponent(c: f64, sigma: usize) -> f64 {
    let ln_sigma = (sigma as f64).ln();
    let log = |v: f64| if v > 0.0 { v.ln() / ln_sigma } else { 0.0 };
    1.0 - c + 2.0 * c * log(c) + 2.0 * (1.0 - c) * log(1.0 - c)
}

/// `1 + ceil(k / (c·q))`.
pub fn grams_per_window(k: usize, c: f64, q: usize) -> usize {
    let ratio = k as f64 / (c * q as f64);
    1 + (ratio - 1e-9).ceil().max(0.0) as usize
}

/// Validates `(q, c)` for filtering, returning `d` on success.
fn check_filter(m: usize, k: usize, sigma: usize, q: usize, c: f64, epsilon: f64) -> Result<f64> {
    let w = m - k;
    let bad = |msg: String| Err(Error::InvalidPlan(msg));
    if q == 0 || q >= m {
        return bad(format!("q must satisfy 1 <= q < m={m}, got {q}"));
    }
    if !(c > 0.0 && c < 1.0) {
        return bad(format!("c must lie in (0, 1), got {c}"));
    }
    let d = difference_exponent(c, sigma);
    if d <= 0.0 {
        return bad(format!(
            "c={c} gives d={d:.4} for sigma={sigma}; d > 0 is required"
        ));
    }
    let denom = epsilon * m as f64 - k as f64 - q as f64;
    if k > 0 && (denom <= 0.0 || c < k as f64 / denom - 1e-12) {
        return bad(format!(
            "c must satisfy k/(eps*m - k - q) <= c with d > 0 (k={k}, m={m}, q={q}, eps={epsilon})"
        ));
    }
    if (w as f64) < 2.0 * q as f64 + k as f64 / c - 1e-9 {
        return bad(format!(
            "window m-k={w} must hold 2q + k/c = {:.2}",
            2.0 * q as f64 + k as f64 / c
        ));
    }
    let grams = grams_per_window(k, c, q);
    if grams * q > w {
        return bad(format!(
            "{grams} q-grams of length {q} do not fit window {w}"
        ));
    }
    Ok(d)
}

fn filter_plan(
    m: usize,
    k: usize,
    sigma: usize,
    q: usize,
    c: f64,
    epsilon: f64,
) -> Result<SearchPlan> {
    let d = check_filter(m, k, sigma, q, c, epsilon)?;
    let grams = grams_per_window(k, c, q);
    let w = m - k;
    Ok(SearchPlan {
        m,
        k,
        sigma,
        q,
        c,
        d,
        grams,
        window_len: w,
        verified_shift: w,
        unverified_shift: w - grams * q + 1,
        epsilon,
        mode: Mode::Filter,
    })
}

/// Chooses `(q, c)` for a pattern of length `m`, threshold `k` and alphabet
/// size `sigma`.
///
/// Without overrides, `c` is the grid point with the largest `d` that meets
/// the lower bound `k/(εm - k - q)` and the window constraint
/// `m - k >= 2q + k/c`; `q` is then `ceil((3 log_σ m + log_σ k) / d)` clamped
/// to the memory budget and the window, and the two are iterated to a fixed
/// point. When nothing is feasible the plan verifies every window.
pub fn plan(m: usize, k: usize, sigma: usize, opts: &PlanOptions) -> Result<SearchPlan> {
    check_mk(m, k)?;
    if !(opts.epsilon > 0.0 && opts.epsilon <= 1.0) {
        return Err(Error::InvalidPlan(format!(
            "epsilon must lie in (0, 1], got {}",
            opts.epsilon
        )));
    }
    if opts.mode == Some(Mode::VerifyAll) {
        return SearchPlan::verify_all(m, k, sigma, opts.epsilon);
    }
    let planned = match (opts.q, opts.c) {
        (Some(q), Some(c)) => {
            budget_q(sigma, opts.budget, q)?;
            Some(filter_plan(m, k, sigma, q, c, opts.epsilon)?)
        }
        (Some(q), None) => {
            budget_q(sigma, opts.budget, q)?;
            match best_c(m, k, sigma, q, opts.epsilon) {
                Some(c) => Some(filter_plan(m, k, sigma, q, c, opts.epsilon)?),
                None => {
                    return Err(Error::InvalidPlan(format!(
                        "no c in (0, 1) satisfies k/(eps*m - k - q) <= c, d > 0 and m-k >= 2q + k/c for q={q}"
                    )))
                }
            }
        }
        (None, c) => fixed_point(m, k, sigma, c, opts)?,
    };
    match (planned, opts.mode) {
        (Some(p), _) => Ok(p),
        (None, Some(Mode::Filter)) => Err(Error::InvalidPlan(format!(
            "no feasible filtering parameters for m={m}, k={k}, sigma={sigma}"
        ))),
        (None, _) => SearchPlan::verify_all(m, k, sigma, opts.epsilon),
    }
}

fn budget_q(sigma: usize, budget: usize, q: usize) -> Result<()> {
    if q > max_budget_q(sigma, budget) {
        return Err(Error::BudgetExceeded {
            required: format!("{sigma}^{q}"),
            budget,
        });
    }
    Ok(())
}

/// Largest `q` with `σ^q <= budget`.
fn max_budget_q(sigma: usize, budget: usize) -> usize {
    let mut q = 0;
    let mut size = 1usize;
    while let Some(next) = size.checked_mul(sigma) {
        if next > budget {
            break;
        }
        size = next;
        q += 1;
    }
    q
}

/// Smallest grid `c` (hence largest `d`) feasible for this `q`.
fn best_c(m: usize, k: usize, sigma: usize, q: usize, epsilon: f64) -> Option<f64> {
    (1..C_STEPS)
        .map(|i| f64::from(i) / f64::from(C_STEPS))
        .find(|&c| check_filter(m, k, sigma, q, c, epsilon).is_ok())
}

fn fixed_point(
    m: usize,
    k: usize,
    sigma: usize,
    fixed_c: Option<f64>,
    opts: &PlanOptions,
) -> Result<Option<SearchPlan>> {
    let log = |v: f64| v.ln() / (sigma as f64).ln();
    let numerator = 3.0 * log(m as f64) + log(k.max(1) as f64);
    let q_cap = max_budget_q(sigma, opts.budget).min(m - 1).min(254);
    if q_cap == 0 {
        return Ok(None);
    }
    let feasible = |q: usize| match fixed_c {
        Some(c) => check_filter(m, k, sigma, q, c, opts.epsilon)
            .ok()
            .map(|_| c),
        None => best_c(m, k, sigma, q, opts.epsilon),
    };

    let q0 = (3.0 * log(m as f64) + log(k.max(sigma) as f64)).ceil() as usize;
    let mut q = q0.clamp(1, q_cap);
    let mut chosen = None;
    for _ in 0..PLAN_ROUNDS {
        let Some((qf, c)) = (1..=q).rev().find_map(|q| feasible(q).map(|c| (q, c))) else {
            break;
        };
        chosen = Some((qf, c));
        let d = difference_exponent(c, sigma);
        let window_q = ((m - k) as f64 - k as f64 / c) / 2.0;
        let target = (numerator / d).ceil().max(1.0);
        let next = target.min(window_q.floor()).min(q_cap as f64).max(1.0) as usize;
        if next == qf {
            break;
        }
        q = next;
    }
    chosen
        .map(|(q, c)| filter_plan(m, k, sigma, q, c, opts.epsilon))
        .transpose()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterDecision {
    Verify { grams_read: usize },
    Skip { shift: usize, grams_read: usize },
}

/// Reads up to `plan.grams` q-grams backwards from the end of the window at
/// `start`. Letters outside the alphabet make a q-gram count as zero.
pub fn filter_window(
    text: &[u8],
    start: usize,
    plan: &SearchPlan,
    idx: &QGramIndex,
) -> FilterDecision {
    let q = plan.q;
    let end = start + plan.window_len;
    debug_assert!(end <= text.len());
    let mut sum = 0usize;
    for j in 1..=plan.grams {
        let from = end - j * q;
        sum += idx.lookup(&text[from..from + q]).unwrap_or(0) as usize;
        if sum > plan.k {
            return FilterDecision::Skip {
                shift: plan.window_len - j * q + 1,
                grams_read: j,
            };
        }
    }
    FilterDecision::Verify {
        grams_read: plan.grams,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub windows_examined: u64,
    pub windows_verified: u64,
    pub qgrams_read: u64,
    pub chars_inspected: u64,
    pub occurrences_reported: u64,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.windows_examined += other.windows_examined;
        self.windows_verified += other.windows_verified;
        self.qgrams_read += other.qgrams_read;
        self.chars_inspected += other.chars_inspected;
        self.occurrences_reported += other.occurrences_reported;
    }
}

/// Per-window notification from [`search_observed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowEvent {
    /// No occurrence starts in `start .. start + shift`.
    Skipped {
        start: usize,
        shift: usize,
    },
    Verified {
        start: usize,
    },
}

pub fn search(
    text: &[u8],
    pattern: &[u8],
    plan: &SearchPlan,
    idx: Option<&QGramIndex>,
) -> Result<(Vec<Occurrence>, SearchStats)> {
    search_observed(text, pattern, plan, idx, |_| {})
}

pub fn search_observed(
    text: &[u8],
    pattern: &[u8],
    plan: &SearchPlan,
    idx: Option<&QGramIndex>,
    mut observe: impl FnMut(WindowEvent),
) -> Result<(Vec<Occurrence>, SearchStats)> {
    let m = pattern.len();
    let k = plan.k;
    if plan.m != m {
        return Err(Error::InvalidPlan(format!(
            "plan is for m={}, pattern has length {m}",
            plan.m
        )));
    }
    let idx = match (plan.mode, idx) {
        (Mode::Filter, Some(idx)) if idx.q() == plan.q => Some(idx),
        (Mode::Filter, _) => {
            return Err(Error::InvalidPlan(format!(
                "filter mode needs an index with q={}",
                plan.q
            )))
        }
        (Mode::VerifyAll, _) => None,
    };
    let mut verifier = Verifier::new(pattern, k)?;
    let mut stats = SearchStats::default();
    let mut found = Vec::new();
    let n = text.len();
    let w = plan.window_len;
    let mut p = 0;
    // occurrences are at least m - k long, so no start beyond n - w matters
    while p + w <= n {
        stats.windows_examined += 1;
        if let Some(idx) = idx {
            match filter_window(text, p, plan, idx) {
                FilterDecision::Skip { shift, grams_read } => {
                    stats.qgrams_read += grams_read as u64;
                    stats.chars_inspected += (grams_read * plan.q) as u64;
                    observe(WindowEvent::Skipped { start: p, shift });
                    p += shift;
                    continue;
                }
                FilterDecision::Verify { grams_read } => {
                    stats.qgrams_read += grams_read as u64;
                    stats.chars_inspected += (grams_read * plan.q) as u64;
                }
            }
        }
        let block = Block::at(text, p, m);
        stats.windows_verified += 1;
        stats.chars_inspected += block.data.len() as u64;
        observe(WindowEvent::Verified { start: p });
        found.extend(verifier.verify(&block));
        p += plan.verified_shift;
    }
    let found = dedup(found);
    stats.occurrences_reported = found.len() as u64;
    Ok((found, stats))
}

/// Splits the start positions into `chunks` ranges searched on separate
/// threads. Each chunk sees `2m - 1` extra letters so occurrences starting
/// near its end are complete; results are merged and deduplicated.
pub fn search_chunked(
    text: &[u8],
    pattern: &[u8],
    plan: &SearchPlan,
    idx: Option<&QGramIndex>,
    chunks: usize,
) -> Result<(Vec<Occurrence>, SearchStats)> {
    let n = text.len();
    let chunks = chunks.max(1);
    if chunks == 1 || n == 0 {
        return search(text, pattern, plan, idx);
    }
    let m = pattern.len();
    let step = n.div_ceil(chunks);
    let results: Vec<Result<(Vec<Occurrence>, SearchStats)>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..n)
            .step_by(step)
            .map(|lo| {
                let hi = (lo + step).min(n);
                let slice = &text[lo..(hi + 2 * m - 1).min(n)];
                scope.spawn(move || {
                    let (occ, stats) = search(slice, pattern, plan, idx)?;
                    let occ = occ
                        .into_iter()
                        .filter(|o| o.start < hi - lo)
                        .map(|o| Occurrence {
                            start: o.start + lo,
                            ..o
                        })
                        .collect();
                    Ok((occ, stats))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search thread panicked"))
            .collect()
    });
    let mut all = Vec::new();
    let mut stats = SearchStats::default();
    for r in results {
        let (occ, s) = r?;
        all.extend(occ);
        stats.merge(&s);
    }
    let all = dedup(all);
    stats.occurrences_reported = all.len() as u64;
    Ok((all, stats))
}

/// A pattern with its plan and, in filter mode, its q-gram index.
#[derive(Debug, Clone)]
pub struct Matcher {
    pattern: Vec<u8>,
    plan: SearchPlan,
    index: Option<QGramIndex>,
}

impl Matcher {
    pub fn new(pattern: &[u8], k: usize, alphabet: &Alphabet) -> Result<Self> {
        Self::with_options(pattern, k, alphabet, &PlanOptions::default())
    }

    pub fn with_options(
        pattern: &[u8],
        k: usize,
        alphabet: &Alphabet,
        opts: &PlanOptions,
    ) -> Result<Self> {
        let plan = plan(pattern.len(), k, alphabet.size(), opts)?;
        let index = match plan.mode {
            Mode::Filter => Some(QGramIndex::build(pattern, plan.q, alphabet, opts.budget)?),
            Mode::VerifyAll => None,
        };
        Ok(Matcher {
            pattern: pattern.to_vec(),
            plan,
            index,
        })
    }

    /// Uses a previously built index, which must match the plan's `q`.
    pub fn with_index(pattern: &[u8], plan: SearchPlan, index: Option<QGramIndex>) -> Result<Self> {
        plan.validate()?;
        if plan.m != pattern.len() {
            return Err(Error::InvalidPlan(
                "plan does not match pattern length".into(),
            ));
        }
        if plan.mode == Mode::Filter && index.as_ref().map(QGramIndex::q) != Some(plan.q) {
            return Err(Error::InvalidPlan(format!("index must have q={}", plan.q)));
        }
        Ok(Matcher {
            pattern: pattern.to_vec(),
            plan,
            index,
        })
    }

    pub fn pattern(&self) -> &[u8] {
        &self.pattern
    }

    pub fn plan(&self) -> &SearchPlan {
        &self.plan
    }

    pub fn index(&self) -> Option<&QGramIndex> {
        self.index.as_ref()
    }

    pub fn search(&self, text: &[u8]) -> (Vec<Occurrence>, SearchStats) {
        search(text, &self.pattern, &self.plan, self.index.as_ref()).expect("matcher is consistent")
    }

    pub fn search_chunked(&self, text: &[u8], chunks: usize) -> (Vec<Occurrence>, SearchStats) {
        search_chunked(text, &self.pattern, &self.plan, self.index.as_ref(), chunks)
            .expect("matcher is consistent")
    }
}
