//! Command-line front end: prove problems, print inferred instantiations,
//! replay from instantiated facts, and benchmark a directory of problems.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use parakeet::driver::{
    bench_one, instantiate_text, prove_text, replay_text, BenchRow, DriverError, ExtMode,
    OutcomeKind, RunOptions, RunReport,
};
use parakeet::parse::LambdaMode;
use parakeet::prover::ProverLimits;

#[derive(Parser)]
#[command(
    name = "parakeet",
    about = "A first-order prover that reports how your facts were instantiated",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Maximum number of generated clauses per search.
    #[arg(long, global = true, default_value_t = 10_000)]
    limit_clauses: u64,

    /// Wall-clock limit per search, in seconds.
    #[arg(long, global = true, default_value_t = 10.0)]
    limit_seconds: f64,

    /// Lambda encoding; defaults to the problem file's option, else lifting.
    #[arg(long, global = true, value_enum)]
    lambda: Option<LambdaArg>,

    /// Extensionality handling.
    #[arg(long, global = true, value_enum, default_value_t = ExtArg::Auto)]
    ext: ExtArg,

    /// Close leftover variables with `undefined` (on) or wildcards (off);
    /// defaults to the problem file's option, else on.
    #[arg(long, global = true, value_enum)]
    undefined: Option<OnOff>,

    /// Worker threads for `bench`.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Command {
    /// Prove a problem and print the numbered proof.
    Prove { file: PathBuf },
    /// Prove, then print the inferred instantiation suggestions and the
    /// substitution-free transformed proof's step counts.
    Instantiate { file: PathBuf },
    /// Prove, instantiate the facts, and search again from them.
    Replay { file: PathBuf },
    /// Run the full pipeline over every problem in a directory.
    Bench { dir: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum LambdaArg {
    Lifting,
    Combinators,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtArg {
    Auto,
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tie_seed = std::env::var("PARAKEET_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(0);
    let opts = RunOptions {
        limits: ProverLimits {
            max_generated_clauses: cli.limit_clauses,
            max_seconds: cli.limit_seconds,
            use_ext: false,
            tie_seed,
        },
        lambda_mode: cli.lambda.map(|l| match l {
            LambdaArg::Lifting => LambdaMode::Lifting,
            LambdaArg::Combinators => LambdaMode::Combinators,
        }),
        ext: match cli.ext {
            ExtArg::Auto => ExtMode::Auto,
            ExtArg::On => ExtMode::On,
            ExtArg::Off => ExtMode::Off,
        },
        undefined: cli.undefined.map(|u| matches!(u, OnOff::On)),
    };

    match &cli.command {
        Command::Prove { file } => run_single(file, &opts, cli.format, prove_text),
        Command::Instantiate { file } => run_single(file, &opts, cli.format, instantiate_text),
        Command::Replay { file } => run_single(file, &opts, cli.format, replay_text),
        Command::Bench { dir } => run_bench(dir, &opts, cli.format, cli.jobs),
    }
}

fn run_single(
    file: &Path,
    opts: &RunOptions,
    format: FormatArg,
    pipeline: fn(&str, &RunOptions) -> Result<RunReport, DriverError>,
) -> ExitCode {
    let text = match std::fs::read_to_string(file) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("{}: {err}", file.display());
            return ExitCode::from(3);
        }
    };
    match pipeline(&text, opts) {
        Ok(report) => {
            print_report(file, &report, format);
            exit_code_of(&report)
        }
        Err(err) => {
            eprintln!("{}: {err}", file.display());
            ExitCode::from(3)
        }
    }
}

fn exit_code_of(report: &RunReport) -> ExitCode {
    match report.outcome {
        Some(OutcomeKind::Refuted) => ExitCode::from(0),
        Some(OutcomeKind::Saturated) => ExitCode::from(1),
        Some(OutcomeKind::ResourceOut) | None => ExitCode::from(2),
    }
}

fn print_report(file: &Path, report: &RunReport, format: FormatArg) {
    match format {
        FormatArg::Text => {
            println!("{}", file.display());
            print!("{}", report.plain_text());
        }
        FormatArg::Csv => {
            println!("file,outcome,generated,kept,elapsed,steps_before,steps_after,replay_ok");
            println!(
                "{},{},{},{},{:.4},{},{},{}",
                file.display(),
                report.outcome.map(|o| o.to_string()).unwrap_or_default(),
                report.stats.generated,
                report.stats.kept,
                report.stats.elapsed,
                report
                    .steps_before
                    .map(|s| s.to_string())
                    .unwrap_or_default(),
                report
                    .steps_after
                    .map(|s| s.to_string())
                    .unwrap_or_default(),
                report
                    .replay
                    .as_ref()
                    .map(|r| r.succeeded.to_string())
                    .unwrap_or_default(),
            );
        }
        FormatArg::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report_json(file, report)).unwrap()
            );
        }
    }
}

fn report_json(file: &Path, report: &RunReport) -> serde_json::Value {
    json!({
        "file": file.display().to_string(),
        "outcome": report.outcome.map(|o| o.to_string()),
        "stats": {
            "generated": report.stats.generated,
            "kept": report.stats.kept,
            "elapsed": report.stats.elapsed,
        },
        "proof": report.proof_listing,
        "suggestions": report
            .suggestions
            .iter()
            .map(|s| json!({
                "fact": s.fact,
                "bindings": s.bindings
                    .iter()
                    .map(|(v, t)| json!({ "variable": v, "term": t.to_string() }))
                    .collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>(),
        "decode_issues": report.decode_issues,
        "steps_before": report.steps_before,
        "steps_after": report.steps_after,
        "transformed_subst_free": report.transformed_subst_free,
        "replay": report.replay.as_ref().map(|r| json!({
            "succeeded": r.succeeded,
            "rounds": r.rounds.iter().map(|round| json!({
                "with_ext": round.with_ext,
                "outcome": round.outcome.to_string(),
                "generated": round.stats.generated,
                "elapsed": round.stats.elapsed,
            })).collect::<Vec<_>>(),
        })),
    })
}

fn run_bench(dir: &Path, opts: &RunOptions, format: FormatArg, jobs: usize) -> ExitCode {
    let mut files: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(entries) => entries
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| {
                matches!(
                    p.extension().and_then(|e| e.to_str()),
                    Some("pk") | Some("p") | Some("tptp")
                )
            })
            .collect(),
        Err(err) => {
            eprintln!("{}: {err}", dir.display());
            return ExitCode::from(3);
        }
    };
    files.sort();

    let next = Mutex::new(0usize);
    let rows = Mutex::new(Vec::<BenchRow>::new());
    let jobs = jobs.max(1).min(files.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let index = {
                    let mut guard = next.lock().unwrap();
                    let i = *guard;
                    *guard += 1;
                    i
                };
                let Some(path) = files.get(index) else { break };
                let name = path
                    .file_name()
                    .map(|n| n.to_string_lossy().to_string())
                    .unwrap_or_else(|| path.display().to_string());
                let row = match std::fs::read_to_string(path) {
                    Ok(text) => bench_one(&name, &text, opts),
                    Err(err) => BenchRow::error(&name, err.to_string()),
                };
                rows.lock().unwrap().push(row);
            });
        }
    });
    let mut rows = rows.into_inner().unwrap();
    rows.sort_by(|a, b| a.name.cmp(&b.name));

    match format {
        FormatArg::Csv => {
            println!("{}", BenchRow::CSV_HEADER);
            for row in &rows {
                println!("{}", row.csv_line());
            }
        }
        FormatArg::Json => {
            let rows_json: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "status": r.status,
                        "generated": r.generated,
                        "kept": r.kept,
                        "elapsed": r.elapsed,
                        "steps_before": r.steps_before,
                        "steps_after": r.steps_after,
                        "subst_free": r.subst_free,
                        "transform_ok": r.transform_ok,
                        "replay_ok": r.replay_ok,
                        "replay_generated": r.replay_generated,
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "rows": rows_json,
                    "summary": summary_json(&rows),
                }))
                .unwrap()
            );
        }
        FormatArg::Text => {
            println!(
                "{:<24} {:<12} {:>9} {:>9} {:>8} {:>6} {:>6} {:>10} {:>11}",
                "problem",
                "status",
                "generated",
                "steps",
                "after",
                "sfree",
                "tform",
                "replay_ok",
                "replay_gen"
            );
            for row in &rows {
                println!(
                    "{:<24} {:<12} {:>9} {:>9} {:>8} {:>6} {:>6} {:>10} {:>11}",
                    row.name,
                    row.status,
                    row.generated,
                    row.steps_before,
                    row.steps_after,
                    row.subst_free,
                    row.transform_ok,
                    row.replay_ok.map(|b| b.to_string()).unwrap_or_default(),
                    row.replay_generated
                        .map(|g| g.to_string())
                        .unwrap_or_default(),
                );
            }
            print_text_summary(&rows);
        }
    }
    ExitCode::from(0)
}

fn print_text_summary(rows: &[BenchRow]) {
    if rows.is_empty() {
        println!("no problems found");
        return;
    }
    let total = rows.len();
    let refuted = rows.iter().filter(|r| r.status == "refutation").count();
    let transformed = rows.iter().filter(|r| r.transform_ok).count();
    let subst_free = rows.iter().filter(|r| r.subst_free).count();
    println!(
        "refutations: {refuted}/{total}; transforms: {transformed}/{refuted}; \
         subst-free: {subst_free}/{refuted}"
    );
    if let Some(median) = median_reduction(rows) {
        println!("median replay clause reduction: {median}");
    }
}

fn median_reduction(rows: &[BenchRow]) -> Option<i64> {
    let mut reductions: Vec<i64> = rows
        .iter()
        .filter_map(|r| r.replay_generated.map(|g| r.generated as i64 - g as i64))
        .collect();
    if reductions.is_empty() {
        return None;
    }
    reductions.sort_unstable();
    Some(reductions[reductions.len() / 2])
}

fn summary_json(rows: &[BenchRow]) -> serde_json::Value {
    let total = rows.len();
    let refuted = rows.iter().filter(|r| r.status == "refutation").count();
    json!({
        "total": total,
        "refutations": refuted,
        "transforms": rows.iter().filter(|r| r.transform_ok).count(),
        "subst_free": rows.iter().filter(|r| r.subst_free).count(),
        "median_replay_reduction": median_reduction(rows),
    })
}
