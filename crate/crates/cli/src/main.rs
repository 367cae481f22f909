//! Command-line front end for grammar comparison.
//!
//! Exit codes: 0 probably equivalent (or success for non-compare commands),
//! 1 different, 2 inconclusive, 3 class mismatch, 64 usage error, 65 bad
//! input data, 70 internal failure.

use std::fs;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cfgcmp::distinguish::{
    census_sweep, condition_p, evaluate_word_set, suffix_substitution, numeric_identity_check,
    CensusConfig, CondPMode, IdentityCheck, WordSet,
};
use cfgcmp::engine::{compare, CompareConfig, Outcome};
use cfgcmp::eqsystem::{contraction_params, EquationSystem};
use cfgcmp::grammar::{
    analyze_structure, default_probe_mu, parse_grammar, scalar_class_probe, ClassProbe, Grammar,
    PROBE_BLOWUP, PROBE_MAX_ITER,
};
use cfgcmp::linalg::{random_substitution, Substitution};
use cfgcmp::oracle::{default_iter_cap, series_slice};
use cfgcmp::solver::{iterate, DEFAULT_MAX_ITER, DEFAULT_TOL};

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_SOFTWARE: u8 = 70;

#[derive(Parser)]
#[command(name = "cfgcmp", version, about = "Compare context-free grammars via matrix substitutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare two grammars and print a verdict.
    Compare(CompareArgs),
    /// Solve one grammar's matrix equation system under a substitution.
    Solve(SolveArgs),
    /// List the words of a grammar up to a length, with ambiguity counts.
    Enumerate(EnumerateArgs),
    /// Distinguishability checks for two finite word sets.
    Distinguish(DistinguishArgs),
    /// Sweep small word-set pairs for ones no 2x2 substitution separates.
    Census(CensusArgs),
    /// Probe whether a grammar's ambiguity growth admits the matrix method.
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct CompareArgs {
    /// Grammar files.
    left: String,
    right: String,
    /// Matrix dimensions, comma-separated.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 3])]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long = "tol-equal", default_value_t = 1e-10)]
    tol_equal: f64,
    #[arg(long = "tol-diff", default_value_t = 1e-7)]
    tol_diff: f64,
    #[arg(long = "oracle-len", default_value_t = 8)]
    oracle_len: usize,
    /// Override the contraction-derived norm cap.
    #[arg(long)]
    delta: Option<f64>,
    /// Escalation norm caps tried when the base trials all agree.
    #[arg(long, value_delimiter = ',')]
    escalate: Option<Vec<f64>>,
    #[arg(long)]
    json: bool,
    /// Omit timestamp and wall-time for byte-reproducible output.
    #[arg(long = "no-timestamp")]
    no_timestamp: bool,
}

#[derive(Args)]
struct SolveArgs {
    grammar: String,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Norm cap; defaults to the system's contraction-safe cap.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Use the scalar substitution t for every terminal instead of random
    /// matrices.
    #[arg(long)]
    scalar: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    grammar: String,
    #[arg(long = "max-len", default_value_t = 8, value_parser = clap::value_parser!(u32).range(0..=12))]
    max_len: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    /// Associated-polynomial criterion for 2x2 triangular substitutions.
    Condp,
    /// Exact suffix-operator construction.
    Suffix,
    /// Random dense substitutions.
    Numeric,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Set,
    Multiset,
}

#[derive(Args)]
struct DistinguishArgs {
    /// Comma-separated words; letters are single characters.
    #[arg(long)]
    left: String,
    #[arg(long)]
    right: String,
    #[arg(long, value_enum, default_value_t = Method::Condp)]
    method: Method,
    /// Comparison mode for the condp method.
    #[arg(long, value_enum, default_value_t = Mode::Multiset)]
    mode: Mode,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CensusArgs {
    /// Alphabet letters, e.g. "abc".
    #[arg(long, default_value = "abc")]
    alphabet: String,
    #[arg(long = "max-words", default_value_t = 3)]
    max_words: usize,
    #[arg(long = "max-len", default_value_t = 5)]
    max_len: usize,
    /// Only sets of exactly max-words words.
    #[arg(long = "exact-words")]
    exact_words: bool,
    /// Only words of exactly max-len letters.
    #[arg(long = "exact-len")]
    exact_len: bool,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Report one representative per alphabet-permutation orbit.
    #[arg(long = "dedup-permutations")]
    dedup_permutations: bool,
    /// One JSON document instead of JSON lines.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    grammar: String,
    /// Scalar value substituted for every terminal; defaults to a
    /// convergence-safe value derived from the grammar.
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long = "max-iter", default_value_t = PROBE_MAX_ITER)]
    max_iter: usize,
    #[arg(long, default_value_t = PROBE_BLOWUP)]
    blowup: f64,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not usage errors.
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EX_USAGE,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code)
        }
    }
}

struct CliError {
    exit_code: u8,
    message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

fn data_err(message: impl ToString) -> CliError {
    CliError { exit_code: EX_DATAERR, message: message.to_string() }
}

fn internal_err(message: impl ToString) -> CliError {
    CliError { exit_code: EX_SOFTWARE, message: message.to_string() }
}

fn load_grammar(path: &str) -> Result<Grammar, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| data_err(format!("cannot read {path}: {e}")))?;
    parse_grammar(&text).map_err(|e| data_err(format!("{path}: {e}")))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Compare(args) => run_compare(args),
        Command::Solve(args) => run_solve(args),
        Command::Enumerate(args) => run_enumerate(args),
        Command::Distinguish(args) => run_distinguish(args),
        Command::Census(args) => run_census(args),
        Command::Classify(args) => run_classify(args),
    }
}

fn run_compare(args: CompareArgs) -> Result<ExitCode, CliError> {
    let left = load_grammar(&args.left)?;
    let right = load_grammar(&args.right)?;
    let mut cfg = CompareConfig {
        dims: args.dims,
        trials_per_dim: args.trials,
        seed: args.seed,
        equal_tol: args.tol_equal,
        different_tol: args.tol_diff,
        oracle_len: args.oracle_len,
        delta_override: args.delta,
        ..CompareConfig::default()
    };
    if let Some(esc) = args.escalate {
        cfg.escalation_deltas = esc;
    }

    let started = Instant::now();
    let verdict = compare(&left, &right, &cfg).map_err(data_err)?;
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    if args.json {
        let mut doc = serde_json::to_value(&verdict).map_err(internal_err)?;
        if !args.no_timestamp {
            let obj = doc.as_object_mut().expect("verdict serializes to an object");
            obj.insert("wall_time_ms".to_string(), json!(wall_ms));
            let unix = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            obj.insert("timestamp_unix".to_string(), json!(unix));
        }
        println!("{}", serde_json::to_string_pretty(&doc).map_err(internal_err)?);
    } else {
        print_verdict_human(&verdict, wall_ms, args.no_timestamp);
    }
    Ok(ExitCode::from(verdict.exit_code() as u8))
}

fn print_verdict_human(verdict: &cfgcmp::engine::Verdict, wall_ms: f64, no_timestamp: bool) {
    let outcome = match verdict.outcome {
        Outcome::Different => "DIFFERENT",
        Outcome::ProbablyEquivalent => "PROBABLY EQUIVALENT",
        Outcome::Inconclusive => "INCONCLUSIVE",
        Outcome::ClassMismatch => "CLASS MISMATCH",
    };
    println!("verdict: {outcome}");
    println!("trials run: {} (base norm cap {:.6})", verdict.trials_run, verdict.delta_base);
    let compared: Vec<f64> = verdict.trials.iter().filter_map(|t| t.diff).collect();
    if let Some(max) = compared.iter().copied().reduce(f64::max) {
        println!("max normalized diff: {max:.3e} over {} compared trials", compared.len());
    }
    if let Some(sub) = &verdict.witness_substitution {
        println!(
            "witness substitution: dim {}, seed {}, norm cap {:.6}",
            sub.dim,
            sub.seed.map(|s| s.to_string()).unwrap_or_else(|| "-".into()),
            sub.norm_bound
        );
    }
    if let Some(w) = &verdict.oracle_witness {
        let word = if w.word.is_empty() { "eps" } else { &w.word };
        println!("witness word: {word} (coefficients {} vs {})", w.coeff_left, w.coeff_right);
    }
    if let Some(len) = verdict.oracle_len_effective {
        println!("oracle checked words up to length {len}");
    }
    if let Some(note) = &verdict.note {
        println!("note: {note}");
    }
    if !no_timestamp {
        println!("wall time: {wall_ms:.1} ms");
    }
}

fn run_solve(args: SolveArgs) -> Result<ExitCode, CliError> {
    let grammar = load_grammar(&args.grammar)?;
    let sys = EquationSystem::compile(&grammar).map_err(data_err)?;
    let (nbar, delta_max) = contraction_params(&sys);
    let sub: Substitution = match args.scalar {
        Some(t) => Substitution::scalar(grammar.terminals.iter().cloned(), t),
        None => {
            let delta = args.delta.unwrap_or(delta_max);
            random_substitution(&grammar.terminals, args.dim, delta, args.seed)
        }
    };
    let solution = iterate(&sys, &sub, DEFAULT_TOL, DEFAULT_MAX_ITER).map_err(data_err)?;
    if args.json {
        let doc = json!({
            "nbar": nbar,
            "delta_max": delta_max,
            "substitution": sub,
            "solution": solution,
        });
        println!("{}", serde_json::to_string_pretty(&doc).map_err(internal_err)?);
    } else {
        println!("system:\n{}", sys.render());
        println!("nbar: {nbar}, contraction-safe norm cap: {delta_max:.6}");
        println!("status: {:?} after {} iterations (residual {:.3e})", solution.status, solution.iterations, solution.residual);
        for var in &sys.variables {
            let m = &solution.assignment[var];
            println!("{var}: norm {:.6e}", m.frobenius_norm());
        }
        let axiom = &sys.variables[0];
        println!("axiom component {axiom}:\n{}", solution.assignment[axiom]);
    }
    Ok(ExitCode::SUCCESS)
}

fn word_sort_key(word: &str) -> (usize, String) {
    let letters = if word.is_empty() {
        0
    } else if word.contains('.') {
        word.split('.').count()
    } else {
        word.chars().count()
    };
    (letters, word.to_string())
}

fn run_enumerate(args: EnumerateArgs) -> Result<ExitCode, CliError> {
    let grammar = load_grammar(&args.grammar)?;
    let max_len = args.max_len as usize;
    let slice = series_slice(&grammar, max_len, default_iter_cap(&grammar, max_len))
        .map_err(data_err)?;
    let mut entries: Vec<(&String, &u64)> = slice.coefficients.iter().collect();
    entries.sort_by_key(|(w, _)| word_sort_key(w));
    if args.json {
        let words: Vec<Value> = entries
            .iter()
            .map(|(w, c)| json!({"word": if w.is_empty() { "eps" } else { w.as_str() }, "coefficient": c}))
            .collect();
        let doc = json!({
            "max_len": slice.max_len,
            "stabilized": slice.stabilized,
            "words": words,
        });
        println!("{}", serde_json::to_string_pretty(&doc).map_err(internal_err)?);
    } else {
        if !slice.stabilized {
            eprintln!("warning: series did not stabilize; output may be incomplete");
        }
        for (word, coeff) in entries {
            let shown = if word.is_empty() { "eps" } else { word.as_str() };
            println!("{shown}\t{coeff}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_distinguish(args: DistinguishArgs) -> Result<ExitCode, CliError> {
    let left = WordSet::parse(&args.left).map_err(data_err)?;
    let right = WordSet::parse(&args.right).map_err(data_err)?;
    match args.method {
        Method::Condp => {
            let mode = match args.mode {
                Mode::Set => CondPMode::Set,
                Mode::Multiset => CondPMode::Multiset,
            };
            let satisfied = condition_p(&left, &right, mode).map_err(data_err)?;
            if args.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "method": "condp",
                        "mode": format!("{:?}", args.mode).to_lowercase(),
                        "satisfied": satisfied,
                    }))
                    .map_err(internal_err)?
                );
            } else if satisfied {
                println!("condition P: satisfied");
            } else {
                println!("condition P: not satisfied");
            }
        }
        Method::Suffix => {
            let (sub, column) = suffix_substitution(&left, &right).map_err(data_err)?;
            let gap = evaluate_word_set(&left, &sub).max_abs_diff(&evaluate_word_set(&right, &sub));
            if args.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "method": "suffix",
                        "dimension": sub.dim,
                        "column": column,
                        "gap": gap,
                        "substitution": sub,
                    }))
                    .map_err(internal_err)?
                );
            } else {
                println!("suffix substitution: dimension {}, integer gap {gap}", sub.dim);
            }
        }
        Method::Numeric => {
            let check = numeric_identity_check(&left, &right, args.dim, args.trials, args.seed)
                .map_err(data_err)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&check).map_err(internal_err)?);
            } else {
                match check {
                    IdentityCheck::AlwaysEqual { trials, max_rel_diff } => println!(
                        "always equal over {trials} trials at dimension {} (max relative diff {max_rel_diff:.3e})",
                        args.dim
                    ),
                    IdentityCheck::DistinguishedBy { trial, rel_diff, .. } => println!(
                        "distinguished at trial {trial} (relative diff {rel_diff:.3e})"
                    ),
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_census(args: CensusArgs) -> Result<ExitCode, CliError> {
    let cfg = CensusConfig {
        alphabet: args.alphabet.chars().collect(),
        max_words: args.max_words,
        max_len: args.max_len,
        exact_words: args.exact_words,
        exact_len: args.exact_len,
        trials: args.trials,
        seed: args.seed,
        dedup_letter_permutations: args.dedup_permutations,
    };
    let pairs = census_sweep(&cfg).map_err(data_err)?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({ "pairs": pairs, "count": pairs.len() }))
                .map_err(internal_err)?
        );
    } else {
        for pair in &pairs {
            println!("{}", serde_json::to_string(pair).map_err(internal_err)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_classify(args: ClassifyArgs) -> Result<ExitCode, CliError> {
    let grammar = load_grammar(&args.grammar)?;
    let report = analyze_structure(&grammar);
    let mu = args.mu.unwrap_or_else(|| default_probe_mu(&grammar));
    let probe =
        scalar_class_probe(&grammar, mu, args.max_iter, args.blowup).map_err(data_err)?;
    if args.json {
        let doc = match &probe {
            ClassProbe::Converged(values) => json!({
                "class": "first",
                "mu": mu,
                "values": values,
                "nbar": report.nbar,
                "renaming_cyclic": report.renaming_cyclic,
            }),
            ClassProbe::Diverged { iteration } => json!({
                "class": "second",
                "mu": mu,
                "diverged_at_iteration": iteration,
                "nbar": report.nbar,
                "renaming_cyclic": report.renaming_cyclic,
            }),
        };
        println!("{}", serde_json::to_string_pretty(&doc).map_err(internal_err)?);
    } else {
        match &probe {
            ClassProbe::Converged(values) => {
                println!("class: first (scalar probe converged at mu = {mu})");
                for (var, value) in values {
                    println!("{var} = {value:.9}");
                }
            }
            ClassProbe::Diverged { iteration } => {
                println!("class: second (scalar probe diverged at iteration {iteration}, mu = {mu})");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
