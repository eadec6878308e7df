//! Experiments on uniformly random texts.
//!
//! Every letter of text and pattern is drawn uniformly from the alphabet with
//! a ChaCha8 generator seeded from `Experiment::seed`; draws happen in the
//! order pairs × repetitions × (text, pattern), so a seed fixes every table
//! apart from timings.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::index::DEFAULT_BUDGET;
use crate::search::{Matcher, Mode, PlanOptions};

#[derive(Debug, Clone)]
pub struct Experiment {
    pub seed: u64,
    pub sigma: usize,
    pub n: usize,
    pub pairs: Vec<(usize, usize)>,
    pub reps: usize,
    /// `None` lets the planner choose.
    pub mode: Option<Mode>,
    pub budget: usize,
}

impl Experiment {
    pub fn new(sigma: usize, n: usize, pairs: Vec<(usize, usize)>, reps: usize, seed: u64) -> Self {
        Experiment {
            seed,
            sigma,
            n,
            pairs,
            reps,
            mode: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub m: usize,
    pub k: usize,
    pub mode: Mode,
    pub q: usize,
    pub c: f64,
    pub windows_verified_rate: f64,
    pub chars_per_text_char: f64,
    pub occurrences: u64,
    pub build_secs: f64,
    pub search_secs: f64,
}

/// `ACGT` for four letters, otherwise consecutive printable bytes.
pub fn bench_alphabet(sigma: usize) -> Result<Alphabet> {
    match sigma {
        4 => Ok(Alphabet::dna()),
        2..=26 => Alphabet::from_letters(&(b'a'..b'a' + sigma as u8).collect::<Vec<_>>()),
        27..=94 => Alphabet::from_letters(&(b'!'..b'!' + sigma as u8).collect::<Vec<_>>()),
        0 | 1 => Err(Error::AlphabetTooSmall(sigma)),
        _ => Err(Error::InvalidPlan(format!(
            "bench supports sigma up to 94, got {sigma}"
        ))),
    }
}

pub fn random_string(rng: &mut impl Rng, alphabet: &Alphabet, len: usize) -> Vec<u8> {
    (0..len)
        .map(|_| alphabet.unrank(rng.gen_range(0..alphabet.size())))
        .collect()
}

pub fn run_experiment(e: &Experiment) -> Result<Vec<BenchRow>> {
    if e.reps == 0 {
        return Err(Error::InvalidPlan("repetitions must be at least 1".into()));
    }
    let alphabet = bench_alphabet(e.sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(e.seed);
    let opts = PlanOptions {
        mode: e.mode,
        budget: e.budget,
        ..Default::default()
    };
    let mut rows = Vec::with_capacity(e.pairs.len());
    for &(m, k) in &e.pairs {
        let (mut examined, mut verified, mut chars, mut occ) = (0u64, 0u64, 0u64, 0u64);
        let (mut build_secs, mut search_secs) = (0.0, 0.0);
        let mut planned = None;
        for _ in 0..e.reps {
            let text = random_string(&mut rng, &alphabet, e.n);
            let pattern = random_string(&mut rng, &alphabet, m);
            let t0 = Instant::now();
            let matcher = Matcher::with_options(&pattern, k, &alphabet, &opts)?;
            let t1 = Instant::now();
            let (hits, stats) = matcher.search(&text);
            build_secs += (t1 - t0).as_secs_f64();
            search_secs += t1.elapsed().as_secs_f64();
            examined += stats.windows_examined;
            verified += stats.windows_verified;
            chars += stats.chars_inspected;
            occ += hits.len() as u64;
            planned = Some(matcher.plan().clone());
        }
        let plan = planned.expect("reps >= 1");
        let reps = e.reps as f64;
        rows.push(BenchRow {
            m,
            k,
            mode: plan.mode,
            q: plan.q,
            c: plan.c,
            windows_verified_rate: if examined == 0 {
                0.0
            } else {
                verified as f64 / examined as f64
            },
            chars_per_text_char: chars as f64 / (reps * e.n.max(1) as f64),
            occurrences: occ,
            build_secs: build_secs / reps,
            search_secs: search_secs / reps,
        });
    }
    Ok(rows)
}

pub const TSV_HEADER: &str =
    "m\tk\tmode\tq\tc\twindows_verified_rate\tchars_per_text_char\toccurrences\tbuild_secs\twall_time";

pub fn format_rows(rows: &[BenchRow]) -> String {
    let mut s = String::new();
    writeln!(s, "{TSV_HEADER}").unwrap();
    for r in rows {
        writeln!(
            s,
            "{}\t{}\t{}\t{}\t{:.2}\t{:.6}\t{:.6}\t{}\t{:.4}\t{:.4}",
            r.m,
            r.k,
            r.mode,
            r.q,
            r.c,
            r.windows_verified_rate,
            r.chars_per_text_char,
            r.occurrences,
            r.build_secs,
            r.search_secs
        )
        .unwrap();
    }
    s
}

/// Parses `m1:k1,m2:k2,...`.
pub fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (m, k) = p
                .trim()
                .split_once(':')
                .ok_or_else(|| Error::InvalidPlan(format!("expected m:k, got {p:?}")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPlan(format!("bad number in {p:?}")))
            };
            Ok((parse(m)?, parse(k)?))
        })
        .collect()
}
