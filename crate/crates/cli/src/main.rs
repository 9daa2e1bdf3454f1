mod config;

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use letterblocks::dictionary::{
    build_base_letters, ingest_with_summary, read_rated_words, DelimitedFormat,
};
use letterblocks::manifest::{RunManifest, RunRecord, RunTiming};
use letterblocks::search::{Algorithm, ProgressPoint, SearchInputs, TreeVariant};
use letterblocks::{
    allocate_repetitions, build_base_permutation, letter_frequencies, reference_base_permutation,
    reference_frequencies, score, search_space_size, word_report, CubeSet, Dictionary,
    IngestConfig, Move, MoveTable, SearchConfig, Target, SEED2K,
};

use config::{FileConfig, GeneticFlags};

#[derive(Parser)]
#[command(
    name = "letterblocks",
    version,
    about = "Search letter layouts for six-cube mono/rainbow word blocks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filter a rated word list into a dictionary file.
    Ingest(IngestArgs),
    /// Score one 36-letter layout.
    Score(ScoreArgs),
    /// Letter frequencies, repetition plan and base layout.
    Plan(PlanArgs),
    /// Run a search and write its report.
    Run(RunArgs),
    /// Rerun a report from its manifest and compare.
    Replay(ReplayArgs),
    /// Run the built-in self checks.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct DictArg {
    /// Dictionary file, one word per line.
    #[arg(long, env = "LETTERBLOCKS_DICT")]
    dict: PathBuf,
}

impl DictArg {
    fn load(&self) -> Result<Dictionary> {
        let file = File::open(&self.dict)
            .with_context(|| format!("cannot open dictionary {}", self.dict.display()))?;
        Dictionary::read_from(BufReader::new(file))
            .with_context(|| format!("cannot read dictionary {}", self.dict.display()))
    }
}

#[derive(Args)]
struct IngestArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Also write the filter counts as JSON.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long, default_value = ",")]
    delimiter: char,
    #[arg(long, default_value = "word")]
    word_column: String,
    #[arg(long, default_value = "rating")]
    rating_column: String,
    /// Input is one word per line with no ratings.
    #[arg(long)]
    plain: bool,
    /// Inclusive age-of-acquisition ceiling.
    #[arg(long, default_value_t = 14.0)]
    max_aoa: f64,
    #[arg(long, default_value_t = 1)]
    min_len: usize,
    #[arg(long, default_value_t = 6)]
    max_len: usize,
}

#[derive(Args)]
struct ScoreArgs {
    permutation: String,
    #[command(flatten)]
    dict: DictArg,
    /// List the mono and rainbow words.
    #[arg(long)]
    words: bool,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long, default_value_t = 6)]
    cubes: usize,
    /// Derive frequencies from this dictionary instead of the reference table.
    #[arg(long)]
    dict: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmName {
    Random,
    Anneal,
    Tree,
    Genetic,
}

impl AlgorithmName {
    fn as_str(self) -> &'static str {
        match self {
            AlgorithmName::Random => "random",
            AlgorithmName::Anneal => "anneal",
            AlgorithmName::Tree => "tree",
            AlgorithmName::Genetic => "genetic",
        }
    }
}

#[derive(Args)]
struct RunArgs {
    algorithm: AlgorithmName,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    dict: DictArg,
    /// TOML file with run settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    target: Option<Target>,
    /// Shuffles, iterations, unique permutations or evaluations, by algorithm.
    #[arg(long, visible_alias = "iters")]
    budget: Option<u64>,
    #[arg(long)]
    top_k: Option<usize>,
    /// Evaluations between progress lines.
    #[arg(long)]
    progress_every: Option<u64>,
    /// Starting layout: base, seed2k or a 36-letter permutation.
    #[arg(long)]
    root: Option<String>,
    /// Shuffle source: table, corpus or a 36-letter permutation.
    #[arg(long)]
    base: Option<String>,
    /// Genetic generation-zero individual; repeatable.
    #[arg(long = "scenario-seed")]
    scenario_seeds: Vec<String>,
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long)]
    cooling: Option<f64>,
    #[arg(long)]
    variant: Option<TreeVariant>,
    #[arg(long)]
    generations: Option<u64>,
    #[arg(long)]
    elites: Option<usize>,
    #[arg(long)]
    crossed_elite: Option<usize>,
    #[arg(long)]
    crossed_mixed: Option<usize>,
    #[arg(long)]
    mutated: Option<usize>,
    #[arg(long)]
    random: Option<usize>,
    #[arg(long)]
    repair: bool,
    #[arg(short, long, default_value = "report.json")]
    output: PathBuf,
    /// Suppress progress lines.
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Args)]
struct ReplayArgs {
    report: PathBuf,
    #[command(flatten)]
    dict: DictArg,
}

#[derive(Args)]
struct VerifyArgs {
    /// Swap one same-color move for an illegal one before checking.
    #[arg(long, hide = true)]
    corrupt_move_table: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Score(a) => score_cmd(a),
        Command::Plan(a) => plan(a),
        Command::Run(a) => run(a),
        Command::Replay(a) => replay(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn ingest(a: IngestArgs) -> Result<ExitCode> {
    let file =
        File::open(&a.input).with_context(|| format!("cannot open {}", a.input.display()))?;
    let records = if a.plain {
        let text = io::read_to_string(file)?;
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| (l.trim().to_string(), 0.0))
            .collect()
    } else {
        if !a.delimiter.is_ascii() {
            bail!("delimiter must be a single ASCII character");
        }
        let format = DelimitedFormat {
            delimiter: a.delimiter as u8,
            word_column: a.word_column,
            rating_column: a.rating_column,
        };
        read_rated_words(file, &format)?
    };
    let config = IngestConfig {
        max_aoa: a.max_aoa,
        min_len: a.min_len,
        max_len: a.max_len,
    };
    let (dict, summary) = ingest_with_summary(&records, &config)?;
    let mut out = BufWriter::new(File::create(&a.output)?);
    dict.write_to(&mut out)?;
    out.flush()?;
    let json = serde_json::to_string_pretty(&summary)?;
    if let Some(path) = &a.summary {
        fs::write(path, format!("{json}\n"))?;
    }
    println!("{json}");
    Ok(ExitCode::SUCCESS)
}

fn parse_permutation(text: &str) -> Result<CubeSet> {
    text.parse::<CubeSet>()
        .with_context(|| format!("invalid permutation {text:?}"))
}

fn score_cmd(a: ScoreArgs) -> Result<ExitCode> {
    let cs = parse_permutation(&a.permutation)?;
    let dict = a.dict.load()?;
    let s = score(&cs, &dict);
    println!("mono {}\nrainbow {}\nsum {}", s.mono, s.rainbow, s.sum);
    if a.words {
        let report = word_report(&cs, &dict);
        println!("mono words: {}", report.mono.join(" "));
        println!("rainbow words: {}", report.rainbow.join(" "));
    }
    Ok(ExitCode::SUCCESS)
}

fn plan(a: PlanArgs) -> Result<ExitCode> {
    let freq = match &a.dict {
        Some(path) => letter_frequencies(&DictArg { dict: path.clone() }.load()?)?,
        None => reference_frequencies(),
    };
    let plan = allocate_repetitions(&freq, a.cubes)?;
    println!("letter thousandths repetitions");
    for &c in freq.ranking() {
        println!("{c} {:>4} {}", freq.thousandths(c), plan.get(c));
    }
    println!("base {}", build_base_letters(&plan, &freq));
    println!("search_space {}", search_space_size(&plan));
    Ok(ExitCode::SUCCESS)
}

/// Resolves `table`, `corpus` or a literal permutation.
fn resolve_base(spec: &str, dict: &Dictionary) -> Result<CubeSet> {
    match spec {
        "table" => Ok(reference_base_permutation()),
        "corpus" => {
            let freq = letter_frequencies(dict)?;
            let plan = allocate_repetitions(&freq, 6)?;
            Ok(build_base_permutation(&plan, &freq)?)
        }
        other => parse_permutation(other),
    }
}

fn resolve_root(spec: &str, base: &CubeSet) -> Result<CubeSet> {
    match spec {
        "base" => Ok(*base),
        "seed2k" => parse_permutation(SEED2K),
        other => parse_permutation(other),
    }
}

fn build_run(a: &RunArgs, dict: &Dictionary) -> Result<RunManifest> {
    let file = match &a.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    file.check_sections(a.algorithm.as_str())?;

    let algorithm = match a.algorithm {
        AlgorithmName::Random => Algorithm::Random,
        AlgorithmName::Anneal => {
            Algorithm::Anneal(file.anneal.unwrap_or_default().resolve(a.t0, a.cooling))
        }
        AlgorithmName::Tree => Algorithm::Tree {
            variant: file.tree.unwrap_or_default().resolve(a.variant)?,
        },
        AlgorithmName::Genetic => {
            let flags = GeneticFlags {
                generations: a.generations,
                elites: a.elites,
                crossed_elite: a.crossed_elite,
                crossed_mixed: a.crossed_mixed,
                mutated: a.mutated,
                random: a.random,
                repair: a.repair,
            };
            Algorithm::Genetic(file.genetic.unwrap_or_default().resolve(&flags))
        }
    };
    let default_budget = match a.algorithm {
        AlgorithmName::Random => 10_000,
        AlgorithmName::Anneal => 250_000,
        AlgorithmName::Tree => 150_000,
        // generations bound the run; the evaluation cap is off by default
        AlgorithmName::Genetic => u64::MAX,
    };
    let target = a.target.or(file.target).unwrap_or(Target::Sum);
    let budget = a.budget.or(file.budget).unwrap_or(default_budget);
    let mut config = SearchConfig::new(algorithm, target, budget, a.seed);
    if let Some(k) = a.top_k.or(file.top_k) {
        config.top_k = k;
    }
    if let Some(n) = a.progress_every.or(file.progress_every) {
        config.progress_interval = n;
    }
    config.validate()?;

    let base_spec = a
        .base
        .clone()
        .or(file.base.clone())
        .unwrap_or_else(|| "table".into());
    let base = resolve_base(&base_spec, dict)?;
    let mut inputs = SearchInputs::new(base);
    if matches!(a.algorithm, AlgorithmName::Anneal | AlgorithmName::Tree) {
        let root_spec = a
            .root
            .clone()
            .or(file.root.clone())
            .unwrap_or_else(|| "base".into());
        let root = resolve_root(&root_spec, &base)?;
        if root != base {
            inputs.root = Some(root);
        }
    } else if a.root.is_some() {
        bail!("--root applies only to anneal and tree runs");
    }
    let seeds = if a.scenario_seeds.is_empty() {
        file.scenario_seeds.clone().unwrap_or_default()
    } else {
        a.scenario_seeds.clone()
    };
    if !seeds.is_empty() && !matches!(a.algorithm, AlgorithmName::Genetic) {
        bail!("scenario seeds apply only to genetic runs");
    }
    inputs.scenario_seeds = seeds
        .iter()
        .map(|s| parse_permutation(s))
        .collect::<Result<_>>()?;
    Ok(RunManifest::new(config, inputs, dict))
}

fn unix_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

fn timing_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".timing.json");
    output.with_file_name(name)
}

fn print_progress(p: &ProgressPoint) {
    println!(
        "progress evaluations={} mono={} rainbow={} sum={}",
        p.evaluations, p.best_mono, p.best_rainbow, p.best_sum
    );
}

fn run(a: RunArgs) -> Result<ExitCode> {
    let dict = a.dict.load()?;
    let manifest = build_run(&a, &dict)?;
    let started_unix_ms = unix_ms();
    let clock = Instant::now();
    let quiet = a.quiet;
    let mut sink = |p: &ProgressPoint| {
        if !quiet {
            print_progress(p)
        }
    };
    let record = manifest.execute(&dict, &mut sink)?;
    let wall_seconds = clock.elapsed().as_secs_f64();

    fs::write(&a.output, record.to_json())
        .with_context(|| format!("cannot write {}", a.output.display()))?;
    let timing = RunTiming {
        started_unix_ms,
        finished_unix_ms: unix_ms(),
        wall_seconds,
        evaluations_per_second: record.report.evaluations as f64 / wall_seconds.max(1e-9),
    };
    fs::write(
        timing_path(&a.output),
        serde_json::to_string_pretty(&timing)? + "\n",
    )?;
    print_summary(&record);
    Ok(ExitCode::SUCCESS)
}

fn print_summary(record: &RunRecord) {
    let r = &record.report;
    println!(
        "done {} evaluations={} unique={} stop={:?}",
        r.algorithm, r.evaluations, r.unique_permutations, r.stop_reason
    );
    for target in Target::ALL {
        println!("top {target}");
        for e in r.top.get(target) {
            println!(
                "  {} {:>5} {:>5} {:>5} {}",
                e.permutation, e.score.mono, e.score.rainbow, e.score.sum, e.found_at
            );
        }
    }
}

fn replay(a: ReplayArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&a.report)
        .with_context(|| format!("cannot read {}", a.report.display()))?;
    let record = RunRecord::from_json(&text)?;
    let dict = a.dict.load()?;
    let again = record.manifest.execute(&dict, &mut ())?;
    if again.to_json() == text {
        println!("replay identical: {} evaluations", again.report.evaluations);
        Ok(ExitCode::SUCCESS)
    } else {
        println!("replay differs from {}", a.report.display());
        Ok(ExitCode::FAILURE)
    }
}

fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let summary = if a.corrupt_move_table {
        let mut moves = MoveTable::canonical().moves().to_vec();
        moves[95] = Move::new(0, 7)?;
        letterblocks::verify::run_with_move_table(&MoveTable::from_moves(moves))
    } else {
        letterblocks::verify::run_all()
    };
    println!("{summary}");
    Ok(if summary.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
