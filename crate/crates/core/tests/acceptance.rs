//! Acceptance suite. Prints one `PASS` or `FAIL` line per criterion and exits
//! non-zero when any criterion fails.
//!
//! Run alone with `cargo test --release --test acceptance`.

use std::time::Instant;

use circmatch::bench::{bench_alphabet, random_string, run_experiment, Experiment};
use circmatch::cli::main_with_args;
use circmatch::edit::{banded_edit_distance, full_edit_distance, Cell, WaveSet};
use circmatch::oracle::{index_oracle, oracle_search};
use circmatch::search::{self, search_observed, Mode, PlanOptions, WindowEvent};
use circmatch::verify::{Block, Verifier};
use circmatch::{rotate, Alphabet, Matcher, Occurrence, QGramIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Table budget for the randomized correctness runs; keeps index builds cheap
/// while still admitting filtering plans for every alphabet.
const SMALL_BUDGET: usize = 1 << 14;

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(name: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome { name, pass, detail }
}

fn main() {
    let runs: [fn() -> Vec<Outcome>; 8] = [
        oracle_equivalence_and_skip_safety,
        rotation_fidelity,
        edit_core_cross_checks,
        index_correctness,
        verifier_growth,
        average_case_trend,
        determinism_and_cache,
        chunked_concurrency,
    ];
    let mut failed = 0;
    for run in runs {
        for o in run() {
            let tag = if o.pass { "PASS" } else { "FAIL" };
            println!("{tag} {}: {}", o.name, o.detail);
            failed += usize::from(!o.pass);
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn mutate(rng: &mut impl Rng, s: &[u8], letters: &[u8], edits: usize) -> Vec<u8> {
    let mut v = s.to_vec();
    for _ in 0..edits {
        let letter = letters[rng.gen_range(0..letters.len())];
        match rng.gen_range(0..3) {
            0 if !v.is_empty() => {
                let i = rng.gen_range(0..v.len());
                v[i] = letter;
            }
            1 if v.len() > 1 => {
                v.remove(rng.gen_range(0..v.len()));
            }
            _ => {
                let i = rng.gen_range(0..=v.len());
                v.insert(i, letter);
            }
        }
    }
    v
}

/// A forced filtering plan, trying the planner first and then short grams.
fn filter_matcher(pattern: &[u8], k: usize, alphabet: &Alphabet) -> Option<Matcher> {
    let base = PlanOptions {
        budget: SMALL_BUDGET,
        mode: Some(Mode::Filter),
        ..Default::default()
    };
    std::iter::once(None)
        .chain([3, 2, 1].map(Some))
        .find_map(|q| Matcher::with_options(pattern, k, alphabet, &PlanOptions { q, ..base }).ok())
}

struct Instance {
    text: Vec<u8>,
    pattern: Vec<u8>,
    k: usize,
    alphabet: Alphabet,
    planted: Option<(usize, usize)>,
}

fn random_instance(rng: &mut impl Rng, sigma: usize, plant: bool) -> Instance {
    let alphabet = bench_alphabet(sigma).unwrap();
    let m = rng.gen_range(6..=64);
    let k = rng.gen_range(0..=m / 4);
    let n = rng.gen_range(m..=2000);
    let pattern = random_string(rng, &alphabet, m);
    let mut text = random_string(rng, &alphabet, n);
    let mut planted = None;
    if plant {
        let r = rng.gen_range(0..m);
        let edits = rng.gen_range(0..=k);
        let v = mutate(
            rng,
            &rotate(&pattern, r).unwrap(),
            alphabet.letters(),
            edits,
        );
        let p = rng.gen_range(0..=n.saturating_sub(v.len()));
        let end = (p + v.len()).min(n);
        text.splice(p..end, v);
        planted = Some((p, r));
    }
    Instance {
        text,
        pattern,
        k,
        alphabet,
        planted,
    }
}

/// Criteria 1 and 5.
fn oracle_equivalence_and_skip_safety() -> Vec<Outcome> {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c1);
    let sigmas = [2, 4, 20];
    let (mut instances, mut mismatches, mut filtered, mut planted_missing) = (0, 0, 0, 0);
    let (mut skips, mut skipped_starts, mut misses) = (0u64, 0u64, 0u64);
    for i in 0..600 {
        let inst = random_instance(&mut rng, sigmas[i % 3], i >= 500);
        let expected = oracle_search(&inst.text, &inst.pattern, inst.k);
        instances += 1;
        if let Some((p, r)) = inst.planted {
            if !expected.iter().any(|o| o.start == p && o.rotation == r) {
                planted_missing += 1;
            }
        }

        let opts = PlanOptions {
            budget: SMALL_BUDGET,
            ..Default::default()
        };
        let planned = Matcher::with_options(&inst.pattern, inst.k, &inst.alphabet, &opts).unwrap();
        if planned.search(&inst.text).0 != expected {
            mismatches += 1;
        }

        if let Some(fm) = filter_matcher(&inst.pattern, inst.k, &inst.alphabet) {
            filtered += 1;
            let mut events = Vec::new();
            let (got, _) = search_observed(&inst.text, &inst.pattern, fm.plan(), fm.index(), |e| {
                events.push(e)
            })
            .unwrap();
            if got != expected {
                mismatches += 1;
            }
            for e in events {
                if let WindowEvent::Skipped { start, shift } = e {
                    skips += 1;
                    skipped_starts += shift as u64;
                    misses += expected
                        .iter()
                        .filter(|o| (start..start + shift).contains(&o.start))
                        .count() as u64;
                }
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    vec![
        outcome(
            "criterion 1 (oracle equivalence)",
            mismatches == 0 && planted_missing == 0 && secs < 60.0,
            format!(
                "{instances} instances ({filtered} also under forced filtering), {mismatches} mismatches, \
                 {planted_missing} planted occurrences missing, {secs:.1}s (limit 60s)"
            ),
        ),
        outcome(
            "criterion 5 (filtration safety)",
            misses == 0 && skips > 0,
            format!("{skips} skips covering {skipped_starts} starts, {misses} occurrences inside skipped ranges"),
        ),
    ]
}

/// Criterion 2.
fn rotation_fidelity() -> Vec<Outcome> {
    let expected = [
        "abababbc", "bababbca", "ababbcab", "babbcaba", "abbcabab", "bbcababa", "bcababab",
        "cabababb",
    ];
    let got: Vec<String> = (0..8)
        .map(|i| String::from_utf8(rotate(b"abababbc", i).unwrap()).unwrap())
        .collect();
    let pass = got.iter().zip(expected).all(|(g, e)| g == e);
    vec![outcome(
        "criterion 2 (rotation fidelity)",
        pass,
        format!("{got:?}"),
    )]
}

fn waves_from_matrix(x: &[u8], y: &[u8], k: usize) -> Vec<Vec<Option<Cell>>> {
    let dp = full_edit_distance(x, y);
    let (m, n) = (x.len(), y.len());
    let mut waves = vec![vec![None; 2 * k + 1]; k + 1];
    for i in 0..=m {
        for j in 0..=n {
            let v = dp.get(i, j) as usize;
            if v <= k && (i == m || j == n || dp.get(i + 1, j + 1) as usize == v + 1) {
                waves[v][(j as isize - i as isize + k as isize) as usize] = Some((i, j));
            }
        }
    }
    waves
}

fn waves_agree(w: &WaveSet, x: &[u8], y: &[u8]) -> bool {
    let k = w.k();
    let expected = waves_from_matrix(x, y, k);
    *w == WaveSet::from_scratch(x, y, k)
        && (0..=k).all(|h| {
            (-(k as isize)..=k as isize)
                .all(|d| w.entry(h, d) == expected[h][(d + k as isize) as usize])
        })
}

/// Criterion 3.
fn edit_core_cross_checks() -> Vec<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c3);
    let letters = b"abcd";
    let (mut banded_bad, mut waves_bad, mut scan_bad, mut wavesets) = (0, 0, 0, 0);
    for _ in 0..1000 {
        let sigma = rng.gen_range(2..=4);
        let gen = |rng: &mut ChaCha8Rng| -> Vec<u8> {
            let len = rng.gen_range(0..=32);
            (0..len).map(|_| letters[rng.gen_range(0..sigma)]).collect()
        };
        let mut x = gen(&mut rng);
        let mut y = gen(&mut rng);
        let k = rng.gen_range(0..=8);

        let full = full_edit_distance(&x, &y).distance() as usize;
        if banded_edit_distance(&x, &y, k) != (full <= k).then_some(full) {
            banded_bad += 1;
        }

        let last_row: Vec<(usize, usize)> = full_edit_distance(&x, &y)
            .row(x.len())
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v as usize <= k)
            .map(|(j, &v)| (j, v as usize))
            .collect();
        let mut w = WaveSet::from_scratch(&x, &y, k);
        if w.occurrence_scan() != last_row {
            scan_bad += 1;
        }

        wavesets += 1;
        if !waves_agree(&w, &x, &y) {
            waves_bad += 1;
        }
        for _ in 0..4 {
            if rng.gen_bool(0.5) && !x.is_empty() {
                w = w.rotate_pattern(&x, &y);
                x.rotate_left(1);
            } else if let Some(next) = w.drop_text_prefix(&x, &y) {
                w = next;
                y.remove(0);
            } else {
                continue;
            }
            wavesets += 1;
            if !waves_agree(&w, &x, &y) {
                waves_bad += 1;
            }
        }
    }
    vec![outcome(
        "criterion 3 (edit-core cross-checks)",
        banded_bad == 0 && waves_bad == 0 && scan_bad == 0,
        format!(
            "1000 pairs: {banded_bad} banded mismatches, {waves_bad}/{wavesets} wave sets differing, \
             {scan_bad} occurrence scans differing"
        ),
    )]
}

/// Criterion 4.
fn index_correctness() -> Vec<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c4);
    let mut bad = 0;
    for _ in 0..100 {
        let sigma = rng.gen_range(2..=4);
        let alphabet = bench_alphabet(sigma).unwrap();
        let q = rng.gen_range(1..=3);
        let m = rng.gen_range(q + 1..=32);
        let x = random_string(&mut rng, &alphabet, m);
        let built = QGramIndex::build(&x, q, &alphabet, SMALL_BUDGET).unwrap();
        let reference = index_oracle(&x, q, &alphabet).unwrap();
        if built.table() != reference.table() {
            bad += 1;
        }
    }
    vec![outcome(
        "criterion 4 (index correctness)",
        bad == 0,
        format!("100 tables, {bad} differing from the brute-force table"),
    )]
}

/// Criterion 6. Work is averaged over random blocks of length `2m`.
fn verifier_growth() -> Vec<Outcome> {
    let alphabet = Alphabet::dna();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c6);
    let ms = [16usize, 32, 64];
    let mut lines = Vec::new();
    let mut pass = true;
    for k in [2usize, 4] {
        let work: Vec<f64> = ms
            .iter()
            .map(|&m| {
                let trials = 20;
                let total: u64 = (0..trials)
                    .map(|_| {
                        let pattern = random_string(&mut rng, &alphabet, m);
                        let text = random_string(&mut rng, &alphabet, 2 * m);
                        let mut v = Verifier::new(&pattern, k).unwrap();
                        v.verify(&Block::at(&text, 0, m));
                        v.work().total()
                    })
                    .sum();
                total as f64 / trials as f64
            })
            .collect();
        // beta fitted on the smallest m; larger m may exceed it by the same 15% slack
        let beta = work[0] / (ms[0] * ms[0] * k) as f64;
        for (i, &m) in ms.iter().enumerate() {
            let bound = 1.15 * beta * (m * m * k) as f64;
            pass &= work[i] <= bound;
        }
        let ratios: Vec<f64> = work.windows(2).map(|w| w[1] / w[0]).collect();
        pass &= ratios.iter().all(|&r| r <= 4.6);
        lines.push(format!(
            "k={k}: work {:?}, beta={beta:.3}, doubling ratios {:?}",
            work.iter().map(|w| w.round() as u64).collect::<Vec<_>>(),
            ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>()
        ));
    }
    vec![outcome(
        "criterion 6 (verifier growth)",
        pass,
        lines.join("; "),
    )]
}

/// Criterion 7.
fn average_case_trend() -> Vec<Outcome> {
    let t0 = Instant::now();
    let e = Experiment::new(4, 200_000, vec![(32, 1), (64, 2), (128, 4), (256, 8)], 5, 7);
    let rows = run_experiment(&e).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    let decreasing = rows
        .windows(2)
        .all(|w| w[1].chars_per_text_char < w[0].chars_per_text_char);
    let rare = rows
        .iter()
        .filter(|r| r.m >= 64)
        .all(|r| r.windows_verified_rate < 0.1);
    let table: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "m={} q={} scan={:.4} verified={:.4}",
                r.m, r.q, r.chars_per_text_char, r.windows_verified_rate
            )
        })
        .collect();
    vec![outcome(
        "criterion 7 (average-case trend)",
        decreasing && rare && secs < 120.0,
        format!("{}; {secs:.1}s (limit 120s)", table.join(", ")),
    )]
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = main_with_args(
        std::iter::once("circmatch").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, out)
}

/// Criterion 8.
fn determinism_and_cache() -> Vec<Outcome> {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c8);
    let alphabet = Alphabet::dna();
    let pattern = random_string(&mut rng, &alphabet, 48);
    let mut text = random_string(&mut rng, &alphabet, 50_000);
    for p in [1000, 20_000, 40_000] {
        let rot = rotate(&pattern, p % 48).unwrap();
        text.splice(p..p + 48, mutate(&mut rng, &rot, alphabet.letters(), 2));
    }
    let text_path = dir.path().join("text.fa");
    let mut fasta = b">chr\n".to_vec();
    for line in text.chunks(60) {
        fasta.extend_from_slice(line);
        fasta.push(b'\n');
    }
    std::fs::write(&text_path, fasta).unwrap();
    let cache = dir.path().join("x.idx");
    let pat = String::from_utf8(pattern.clone()).unwrap();
    let base = [
        "--pattern",
        pat.as_str(),
        "--text",
        text_path.to_str().unwrap(),
        "-k",
        "3",
        "--alphabet",
        "dna",
    ];

    let (c1, first) = cli(&base);
    let (c2, second) = cli(&base);
    let mut cached = base.to_vec();
    cached.extend(["--index-cache", cache.to_str().unwrap()]);
    let (c3, built) = cli(&cached);
    let cache_written = cache.exists();
    let (c4, loaded) = cli(&cached);
    let cli_ok = [c1, c2, c3, c4] == [0; 4]
        && first == second
        && first == built
        && built == loaded
        && cache_written;

    let fresh = Matcher::new(&pattern, 3, &alphabet).unwrap();
    let mut bytes = Vec::new();
    fresh.index().unwrap().write_to(&mut bytes).unwrap();
    let reloaded = QGramIndex::read_from(&bytes[..]).unwrap();
    let round = Matcher::with_index(&pattern, fresh.plan().clone(), Some(reloaded)).unwrap();
    let (a, _) = fresh.search(&text);
    let (b, _) = round.search(&text);
    let rows = first.iter().filter(|&&c| c == b'\n').count();

    vec![outcome(
        "criterion 8 (determinism and cache)",
        cli_ok && a == b && rows == a.len(),
        format!(
            "{rows} TSV rows identical across 2 plain and 2 cached runs: {cli_ok}; \
             serialized index reproduces {} occurrences: {}",
            a.len(),
            a == b
        ),
    )]
}

/// Criterion 9.
fn chunked_concurrency() -> Vec<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c9);
    let sigmas = [2, 4, 20];
    let mut bad = 0;
    let mut total = 0;
    for i in 0..50 {
        let inst = random_instance(&mut rng, sigmas[i % 3], i % 2 == 0);
        let opts = PlanOptions {
            budget: SMALL_BUDGET,
            ..Default::default()
        };
        let matchers = [
            Matcher::with_options(&inst.pattern, inst.k, &inst.alphabet, &opts).ok(),
            filter_matcher(&inst.pattern, inst.k, &inst.alphabet),
        ];
        for m in matchers.iter().flatten() {
            let single = search::search(&inst.text, &inst.pattern, m.plan(), m.index())
                .unwrap()
                .0;
            let chunked: Vec<Occurrence> = m.search_chunked(&inst.text, 4).0;
            total += 1;
            if format!("{single:?}") != format!("{chunked:?}") {
                bad += 1;
            }
        }
    }
    vec![outcome(
        "criterion 9 (chunked concurrency)",
        bad == 0,
        format!("50 instances, {total} plans, {bad} differing between 4 chunks and 1"),
    )]
}
