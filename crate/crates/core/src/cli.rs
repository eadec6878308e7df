//! Command-line front end.
//!
//! Output is one TSV row per occurrence: `record, start, length, rotation,
//! distance`. Exit status follows grep: 0 when something matched, 1 when
//! nothing did, 2 on error.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::alphabet::Alphabet;
use crate::bench::{self, Experiment};
use crate::error::{Error, Result};
use crate::fasta::{parse_sequences, Ingest, Record};
use crate::index::{QGramIndex, DEFAULT_BUDGET};
use crate::oracle::oracle_search;
use crate::search::{self, Mode, PlanOptions, SearchPlan, SearchStats};
use crate::verify::Occurrence;

/// Largest `n·m²` accepted in oracle mode.
pub const ORACLE_LIMIT: u128 = 100_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "circmatch",
    version,
    about = "Find factors of a text within edit distance k of any rotation of a pattern",
    args_conflicts_with_subcommands = true,
    subcommand_negates_reqs = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run searches on uniformly random texts and print a TSV table.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RunMode {
    Auto,
    Filter,
    VerifyAll,
    Oracle,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Pattern given literally.
    #[arg(
        long,
        required_unless_present = "pattern_file",
        conflicts_with = "pattern_file"
    )]
    pub pattern: Option<String>,
    /// Pattern read from a file (first FASTA record, or the whole file).
    #[arg(long, value_name = "PATH")]
    pub pattern_file: Option<PathBuf>,
    /// Text file, FASTA or plain; `-` reads standard input.
    #[arg(long, value_name = "PATH", required = true)]
    pub text: Option<String>,
    /// Maximum number of differences.
    #[arg(short = 'k', default_value_t = 0)]
    pub k: usize,
    /// `dna`, `auto`, or `letters:STR`.
    #[arg(long, default_value = "auto")]
    pub alphabet: String,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = RunMode::Auto)]
    pub mode: RunMode,
    /// Append a commented block of search counters.
    #[arg(long)]
    pub stats: bool,
    /// Load the q-gram table from PATH, or build and store it there.
    #[arg(long, value_name = "PATH")]
    pub index_cache: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Print a column header line.
    #[arg(long)]
    pub header: bool,
    /// Fold input letters to upper case.
    #[arg(long)]
    pub uppercase: bool,
    /// Reject letters outside an explicit alphabet.
    #[arg(long)]
    pub strict: bool,
    /// Maximum q-gram table entries.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 4)]
    pub sigma: usize,
    #[arg(long, default_value_t = 200_000)]
    pub n: usize,
    /// Comma-separated `m:k` pairs.
    #[arg(long, default_value = "32:1,64:2,128:4,256:8")]
    pub pairs: String,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = RunMode::Auto)]
    pub mode: RunMode,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let result = match &cli.command {
        Some(Command::Bench(b)) => run_bench(b, out).map(|()| true),
        None => run(&cli.search, out),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "circmatch: {e}");
            2
        }
    }
}

fn read_input(path: &str) -> Result<Vec<u8>> {
    let mut data = Vec::new();
    if path == "-" {
        io::stdin().lock().read_to_end(&mut data)?;
    } else {
        BufReader::new(File::open(path)?).read_to_end(&mut data)?;
    }
    Ok(data)
}

/// Runs a search; `Ok(true)` when at least one occurrence was written.
pub fn run(args: &SearchArgs, out: &mut dyn Write) -> Result<bool> {
    let explicit = match args.alphabet.as_str() {
        "auto" => None,
        name => Some(Alphabet::from_preset(name)?),
    };
    let ingest = Ingest {
        uppercase: args.uppercase,
        strict: explicit.as_ref().filter(|_| args.strict),
    };

    let pattern = match (&args.pattern, &args.pattern_file) {
        (Some(p), _) => {
            let recs = parse_sequences(p.as_bytes(), "pattern", ingest)?;
            recs.into_iter().next().map(|r| r.seq).unwrap_or_default()
        }
        (None, Some(path)) => {
            let data = read_input(&path.to_string_lossy())?;
            let recs = parse_sequences(&data, "pattern", ingest)?;
            recs.into_iter().next().map(|r| r.seq).unwrap_or_default()
        }
        (None, None) => return Err(Error::EmptyPattern),
    };
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let text_path = args.text.as_deref().unwrap_or("-");
    let records = parse_sequences(&read_input(text_path)?, text_path, ingest)?;

    let alphabet = match explicit {
        Some(a) => a,
        None => Alphabet::auto(
            std::iter::once(pattern.as_slice()).chain(records.iter().map(|r| r.seq.as_slice())),
        )?,
    };
    let m = pattern.len();
    let k = args.k;
    if k >= m {
        return Err(Error::ThresholdTooLarge { k, m });
    }

    let mut out = BufWriter::new(out);
    if args.header {
        writeln!(out, "record\tstart\tlength\trotation\tdistance")?;
    }
    let mut stats = SearchStats::default();
    let mut any = false;
    let mode_label;
    let mut plan_note = None;

    if args.mode == RunMode::Oracle {
        mode_label = "oracle".to_string();
        for rec in &records {
            let cost = rec.seq.len() as u128 * (m as u128).pow(2);
            if cost > ORACLE_LIMIT {
                return Err(Error::OracleScale(format!(
                    "record {} has n*m^2 = {cost} > {ORACLE_LIMIT}",
                    rec.name
                )));
            }
            let hits = oracle_search(&rec.seq, &pattern, k);
            stats.occurrences_reported += hits.len() as u64;
            any |= !hits.is_empty();
            write_hits(&mut out, rec, &hits)?;
        }
    } else {
        let opts = PlanOptions {
            q: args.q,
            c: args.c,
            epsilon: args.epsilon,
            budget: args.budget,
            mode: match args.mode {
                RunMode::Filter => Some(Mode::Filter),
                RunMode::VerifyAll => Some(Mode::VerifyAll),
                _ => None,
            },
        };
        let plan = search::plan(m, k, alphabet.size(), &opts)?;
        let index = match plan.mode {
            Mode::Filter => Some(load_or_build_index(
                args.index_cache.as_deref(),
                &pattern,
                &plan,
                &alphabet,
                args.budget,
            )?),
            Mode::VerifyAll => None,
        };
        mode_label = plan.mode.to_string();
        if plan.mode == Mode::Filter {
            plan_note = Some(format!(
                "# q={}\n# c={:.2}\n# d={:.4}\n# grams={}",
                plan.q, plan.c, plan.d, plan.grams
            ));
        }
        for rec in &records {
            let (hits, s) =
                search::search_chunked(&rec.seq, &pattern, &plan, index.as_ref(), args.threads)?;
            stats.merge(&s);
            any |= !hits.is_empty();
            write_hits(&mut out, rec, &hits)?;
        }
    }

    if args.stats {
        writeln!(out, "# windows_examined={}", stats.windows_examined)?;
        writeln!(out, "# windows_verified={}", stats.windows_verified)?;
        writeln!(out, "# qgrams_read={}", stats.qgrams_read)?;
        writeln!(out, "# chars_inspected={}", stats.chars_inspected)?;
        writeln!(out, "# occurrences={}", stats.occurrences_reported)?;
        writeln!(out, "# mode={mode_label}")?;
        if let Some(note) = plan_note {
            writeln!(out, "{note}")?;
        }
    }
    out.flush()?;
    Ok(any)
}

fn write_hits(out: &mut impl Write, rec: &Record, hits: &[Occurrence]) -> Result<()> {
    for o in hits {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            rec.name, o.start, o.length, o.rotation, o.distance
        )?;
    }
    Ok(())
}

/// A cached table is reused only when its `q` and alphabet match the plan;
/// the file carries no record of the pattern it was built from.
fn load_or_build_index(
    cache: Option<&Path>,
    pattern: &[u8],
    plan: &SearchPlan,
    alphabet: &Alphabet,
    budget: usize,
) -> Result<QGramIndex> {
    if let Some(path) = cache {
        if path.exists() {
            let idx = QGramIndex::read_from(BufReader::new(File::open(path)?))?;
            if idx.q() == plan.q && idx.alphabet() == alphabet {
                return Ok(idx);
            }
        }
    }
    let idx = QGramIndex::build(pattern, plan.q, alphabet, budget)?;
    if let Some(path) = cache {
        idx.write_to(BufWriter::new(File::create(path)?))?;
    }
    Ok(idx)
}

pub fn run_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let mut e = Experiment::new(
        args.sigma,
        args.n,
        bench::parse_pairs(&args.pairs)?,
        args.reps,
        args.seed,
    );
    e.budget = args.budget;
    e.mode = match args.mode {
        RunMode::Auto => None,
        RunMode::Filter => Some(Mode::Filter),
        RunMode::VerifyAll => Some(Mode::VerifyAll),
        RunMode::Oracle => return Err(Error::InvalidPlan("bench does not run the oracle".into())),
    };
    let rows = bench::run_experiment(&e)?;
    out.write_all(bench::format_rows(&rows).as_bytes())?;
    Ok(())
}
