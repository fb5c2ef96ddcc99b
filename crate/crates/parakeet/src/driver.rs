//! End-to-end pipelines: prove a problem, suggest instantiations, replay
//! from instantiated facts, and benchmark. The command-line tool and the
//! browser demo are thin wrappers around this module; everything here works
//! on strings and returns structured reports.

use std::fmt;

use crate::clause::Clause;
use crate::clausify::{clausify_problem, ClausifiedProblem, ClausifyError};
use crate::decode::{Instantiation, WildcardScope};
use crate::infer::{filter_fact_uses, infer, merge_all, transform, EngineError};
use crate::parse::{parse_problem, LambdaMode, ParseError, Problem};
use crate::proof::{check_proof, count_steps, is_subst_free, AxiomSource, Proof};
use crate::prover::{prove, ProverError, ProverLimits, ProverOutcome, SearchStats, Stopwatch};
use crate::surface::SurfaceTerm;

/// How the extensionality axiom is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtMode {
    /// Honor the problem file's `option ext`; replay tries a round without
    /// ext first and falls back to a round with it.
    #[default]
    Auto,
    On,
    Off,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub limits: ProverLimits,
    /// Overrides the problem file's lambda mode when set.
    pub lambda_mode: Option<LambdaMode>,
    pub ext: ExtMode,
    /// Overrides the problem file's `option undefined` when set.
    pub undefined: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeKind {
    Refuted,
    Saturated,
    ResourceOut,
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeKind::Refuted => write!(f, "refutation"),
            OutcomeKind::Saturated => write!(f, "saturated"),
            OutcomeKind::ResourceOut => write!(f, "resource-out"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReplayRound {
    pub with_ext: bool,
    pub outcome: OutcomeKind,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Default)]
pub struct ReplayReport {
    pub rounds: Vec<ReplayRound>,
    pub succeeded: bool,
}

impl ReplayReport {
    /// Stats of the successful round, if any.
    pub fn successful_stats(&self) -> Option<&SearchStats> {
        self.rounds
            .iter()
            .find(|r| r.outcome == OutcomeKind::Refuted)
            .map(|r| &r.stats)
    }
}

/// Everything a run produced. Fields are filled in as far as the requested
/// pipeline goes: `prove` stops after the search, `instantiate` adds
/// suggestions and the transformed proof, `replay` adds replay rounds.
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub outcome: Option<OutcomeKind>,
    pub stats: SearchStats,
    pub proof_listing: Option<String>,
    pub machine_proof: Option<String>,
    pub suggestions: Vec<Instantiation>,
    pub decode_issues: Vec<String>,
    pub steps_before: Option<u64>,
    pub steps_after: Option<u64>,
    pub transformed_subst_free: Option<bool>,
    pub transformed_checks: Option<bool>,
    pub replay: Option<ReplayReport>,
}

impl RunReport {
    pub fn plain_text(&self) -> String {
        let mut out = String::new();
        if let Some(outcome) = self.outcome {
            out.push_str(&format!(
                "outcome: {outcome} (generated {}, kept {}, {:.3}s)\n",
                self.stats.generated, self.stats.kept, self.stats.elapsed
            ));
        }
        if let Some(listing) = &self.proof_listing {
            out.push_str("proof:\n");
            out.push_str(listing);
        }
        if !self.suggestions.is_empty() {
            out.push_str("suggested instantiations:\n");
            for suggestion in &self.suggestions {
                out.push_str(&format!("  {suggestion}\n"));
            }
        }
        for issue in &self.decode_issues {
            out.push_str(&format!("note: {issue}\n"));
        }
        if let (Some(before), Some(after)) = (self.steps_before, self.steps_after) {
            let subst_free = self.transformed_subst_free.unwrap_or(false);
            let checks = self.transformed_checks.unwrap_or(false);
            out.push_str(&format!(
                "transform: {before} steps before, {after} after; subst-free: {}; checked: {}\n",
                yesno(subst_free),
                yesno(checks),
            ));
        }
        if let Some(replay) = &self.replay {
            for (i, round) in replay.rounds.iter().enumerate() {
                out.push_str(&format!(
                    "replay round {} ({}): {} (generated {}, kept {}, {:.3}s)\n",
                    i + 1,
                    if round.with_ext {
                        "with ext"
                    } else {
                        "without ext"
                    },
                    round.outcome,
                    round.stats.generated,
                    round.stats.kept,
                    round.stats.elapsed,
                ));
            }
            out.push_str(&format!(
                "replay: {}\n",
                if replay.succeeded {
                    "succeeded"
                } else {
                    "failed"
                }
            ));
        }
        out
    }
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Debug)]
pub enum DriverError {
    Parse(ParseError),
    Clausify(ClausifyError),
    Prover(ProverError),
    Engine(EngineError),
}

impl fmt::Display for DriverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DriverError::Parse(e) => write!(f, "parse error: {e}"),
            DriverError::Clausify(e) => write!(f, "clausification error: {e}"),
            DriverError::Prover(e) => write!(f, "prover error: {e}"),
            DriverError::Engine(e) => write!(f, "instantiation error: {e}"),
        }
    }
}

impl std::error::Error for DriverError {}

impl From<ParseError> for DriverError {
    fn from(e: ParseError) -> Self {
        DriverError::Parse(e)
    }
}

impl From<ClausifyError> for DriverError {
    fn from(e: ClausifyError) -> Self {
        DriverError::Clausify(e)
    }
}

impl From<ProverError> for DriverError {
    fn from(e: ProverError) -> Self {
        DriverError::Prover(e)
    }
}

impl From<EngineError> for DriverError {
    fn from(e: EngineError) -> Self {
        DriverError::Engine(e)
    }
}

/// A parsed and clausified problem, ready to be searched.
pub struct PreparedProblem {
    pub problem: Problem,
    pub clausified: ClausifiedProblem,
    pub lambda_mode: LambdaMode,
    pub use_ext: bool,
    pub instantiate_undefined: bool,
}

pub fn prepare(text: &str, opts: &RunOptions) -> Result<PreparedProblem, DriverError> {
    let problem = parse_problem(text)?;
    let lambda_mode = opts
        .lambda_mode
        .or(problem.options.lambda_mode)
        .unwrap_or(LambdaMode::Lifting);
    let use_ext = match opts.ext {
        ExtMode::On => true,
        ExtMode::Off => false,
        ExtMode::Auto => problem.options.ext.unwrap_or(false),
    };
    let instantiate_undefined = opts.undefined.or(problem.options.undefined).unwrap_or(true);
    let clausified = clausify_problem(&problem, lambda_mode, instantiate_undefined)?;
    Ok(PreparedProblem {
        problem,
        clausified,
        lambda_mode,
        use_ext,
        instantiate_undefined,
    })
}

fn axioms_of(clausified: &ClausifiedProblem) -> Vec<(AxiomSource, Clause)> {
    clausified
        .facts
        .iter()
        .map(|(name, clause)| (AxiomSource::Fact(name.clone()), clause.clone()))
        .chain(
            clausified
                .defs
                .iter()
                .map(|(name, clause)| (AxiomSource::Definition(name.clone()), clause.clone())),
        )
        .collect()
}

fn run_search(
    prepared: &PreparedProblem,
    limits: &ProverLimits,
    use_ext: bool,
) -> Result<ProverOutcome, DriverError> {
    let axioms = axioms_of(&prepared.clausified);
    let limits = ProverLimits {
        use_ext,
        ..limits.clone()
    };
    Ok(prove(&axioms, &prepared.clausified.goal_clauses, &limits)?)
}

fn outcome_kind(outcome: &ProverOutcome) -> OutcomeKind {
    match outcome {
        ProverOutcome::Refutation(..) => OutcomeKind::Refuted,
        ProverOutcome::Saturated(_) => OutcomeKind::Saturated,
        ProverOutcome::ResourceOut(_) => OutcomeKind::ResourceOut,
    }
}

/// Parses and proves; fills outcome, stats and the proof listing.
pub fn prove_text(text: &str, opts: &RunOptions) -> Result<RunReport, DriverError> {
    let prepared = prepare(text, opts)?;
    let outcome = run_search(&prepared, &opts.limits, prepared.use_ext)?;
    let mut report = RunReport {
        outcome: Some(outcome_kind(&outcome)),
        stats: *outcome.stats(),
        ..RunReport::default()
    };
    if let Some(proof) = outcome.proof() {
        report.proof_listing = Some(proof.listing());
        report.machine_proof = Some(proof.to_machine());
    }
    Ok(report)
}

/// Decodes and merges the instantiations of a refutation.
pub fn suggestions_for(
    proof: &Proof,
    prepared: &PreparedProblem,
) -> Result<(Vec<Instantiation>, Vec<String>), DriverError> {
    let uses = infer(proof)?;
    let (fact_uses, mut issues) = filter_fact_uses(&uses, &prepared.clausified.fact_table);
    let ctx = &prepared.clausified.decode_ctx;
    let mut decoded = Vec::new();
    for fact_use in fact_uses {
        let mut scope = WildcardScope::new();
        let mut inst = Instantiation::new(fact_use.fact.clone());
        inst.clause_vars = fact_use.domain.clone();
        for (var, term) in fact_use.bindings.iter() {
            match ctx.decode_binding(term, &mut scope) {
                Ok(surface) => {
                    inst.bindings.insert(var.clone(), surface);
                }
                Err(err) => issues.push(format!("fact {}, variable {var}: {err}", fact_use.fact)),
            }
        }
        decoded.push(inst);
    }
    let merged = merge_all(decoded);
    let finalized = merged
        .into_iter()
        .map(|inst| {
            let mut scope = WildcardScope::new();
            ctx.finalize(inst, &mut scope)
        })
        .collect();
    Ok((finalized, issues))
}

/// Proves, infers instantiations, and transforms the proof.
pub fn instantiate_text(text: &str, opts: &RunOptions) -> Result<RunReport, DriverError> {
    let prepared = prepare(text, opts)?;
    let outcome = run_search(&prepared, &opts.limits, prepared.use_ext)?;
    let mut report = RunReport {
        outcome: Some(outcome_kind(&outcome)),
        stats: *outcome.stats(),
        ..RunReport::default()
    };
    let Some(proof) = outcome.proof() else {
        return Ok(report);
    };
    report.proof_listing = Some(proof.listing());
    report.machine_proof = Some(proof.to_machine());
    let (suggestions, issues) = suggestions_for(proof, &prepared)?;
    report.suggestions = suggestions;
    report.decode_issues = issues;
    let transformed = transform(proof)?;
    report.steps_before = Some(count_steps(proof));
    report.steps_after = Some(count_steps(&transformed));
    report.transformed_subst_free = Some(is_subst_free(&transformed));
    report.transformed_checks = Some(check_proof(&transformed).is_ok());
    Ok(report)
}

/// Builds the replay problem: each merged instantiation becomes one
/// instantiated fact; an empty suggestion list replays the original facts.
pub fn replay_problem(
    prepared: &PreparedProblem,
    suggestions: &[Instantiation],
) -> Result<Problem, DriverError> {
    let mut facts: Vec<(String, crate::surface::Formula)> = Vec::new();
    if suggestions.is_empty() {
        facts = prepared.problem.facts.clone();
    } else {
        let mut seen_counts: std::collections::BTreeMap<String, usize> =
            std::collections::BTreeMap::new();
        for suggestion in suggestions {
            let Some((_, formula)) = prepared
                .problem
                .facts
                .iter()
                .find(|(name, _)| *name == suggestion.fact)
            else {
                continue;
            };
            let bindings: Vec<(String, SurfaceTerm)> = suggestion
                .bindings
                .iter()
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect();
            let instantiated = formula
                .instantiate(&bindings)
                .map_err(|_| DriverError::Clausify(ClausifyError::NormalizationBudget))?;
            let count = seen_counts.entry(suggestion.fact.clone()).or_insert(0);
            let name = if *count == 0 {
                suggestion.fact.clone()
            } else {
                format!("{}_{}", suggestion.fact, count)
            };
            *count += 1;
            facts.push((name, instantiated));
        }
    }
    Ok(Problem {
        facts,
        goal: prepared.problem.goal.clone(),
        options: prepared.problem.options.clone(),
        predicates: prepared.problem.predicates.clone(),
        fixed_consts: prepared.problem.fixed_consts.clone(),
    })
}

/// The full replay pipeline: prove, instantiate, reclausify the
/// instantiated facts and search again. The replay search gets five times
/// the original search's elapsed time (floored to keep tiny problems from
/// starving the replay). When the first round saturates or runs out, a
/// round with the extensionality axiom is tried.
pub fn replay_text(text: &str, opts: &RunOptions) -> Result<RunReport, DriverError> {
    let prepared = prepare(text, opts)?;
    let watch = Stopwatch::start();
    let outcome = run_search(&prepared, &opts.limits, prepared.use_ext)?;
    let original_elapsed = watch.elapsed_secs();
    let mut report = RunReport {
        outcome: Some(outcome_kind(&outcome)),
        stats: *outcome.stats(),
        ..RunReport::default()
    };
    let Some(proof) = outcome.proof() else {
        return Ok(report);
    };
    report.proof_listing = Some(proof.listing());
    report.machine_proof = Some(proof.to_machine());
    let (suggestions, issues) = suggestions_for(proof, &prepared)?;
    report.suggestions = suggestions;
    report.decode_issues = issues;
    let transformed = transform(proof)?;
    report.steps_before = Some(count_steps(proof));
    report.steps_after = Some(count_steps(&transformed));
    report.transformed_subst_free = Some(is_subst_free(&transformed));
    report.transformed_checks = Some(check_proof(&transformed).is_ok());

    let replayed = replay_problem(&prepared, &report.suggestions)?;
    let reclausified = clausify_problem(
        &replayed,
        prepared.lambda_mode,
        prepared.instantiate_undefined,
    )?;
    let replay_prepared = PreparedProblem {
        problem: replayed,
        clausified: reclausified,
        lambda_mode: prepared.lambda_mode,
        use_ext: false,
        instantiate_undefined: prepared.instantiate_undefined,
    };
    let replay_limits = ProverLimits {
        max_seconds: 5.0 * original_elapsed.max(0.2),
        ..opts.limits.clone()
    };
    let rounds_ext: &[bool] = match opts.ext {
        ExtMode::On => &[true],
        ExtMode::Off => &[false],
        ExtMode::Auto => &[false, true],
    };
    let mut replay = ReplayReport::default();
    for &with_ext in rounds_ext {
        let outcome = run_search(&replay_prepared, &replay_limits, with_ext)?;
        let kind = outcome_kind(&outcome);
        replay.rounds.push(ReplayRound {
            with_ext,
            outcome: kind,
            stats: *outcome.stats(),
        });
        if kind == OutcomeKind::Refuted {
            replay.succeeded = true;
            break;
        }
    }
    report.replay = Some(replay);
    Ok(report)
}

/// One line of the benchmark table.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub name: String,
    pub status: String,
    pub generated: u64,
    pub kept: u64,
    pub elapsed: f64,
    pub steps_before: u64,
    pub steps_after: u64,
    pub subst_free: bool,
    pub transform_ok: bool,
    pub replay_ok: Option<bool>,
    pub replay_generated: Option<u64>,
    pub replay_with_ext: Option<bool>,
}

impl BenchRow {
    pub fn error(name: &str, message: String) -> BenchRow {
        BenchRow {
            name: name.to_string(),
            status: format!("error: {message}"),
            generated: 0,
            kept: 0,
            elapsed: 0.0,
            steps_before: 0,
            steps_after: 0,
            subst_free: false,
            transform_ok: false,
            replay_ok: None,
            replay_generated: None,
            replay_with_ext: None,
        }
    }

    pub const CSV_HEADER: &'static str = "name,status,generated,kept,elapsed,steps_before,\
steps_after,subst_free,transform_ok,replay_ok,replay_generated,replay_with_ext";

    pub fn csv_line(&self) -> String {
        fn opt<T: fmt::Display>(v: &Option<T>) -> String {
            v.as_ref().map(|x| x.to_string()).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{:.4},{},{},{},{},{},{},{}",
            csv_field(&self.name),
            csv_field(&self.status),
            self.generated,
            self.kept,
            self.elapsed,
            self.steps_before,
            self.steps_after,
            self.subst_free,
            self.transform_ok,
            opt(&self.replay_ok),
            opt(&self.replay_generated),
            opt(&self.replay_with_ext),
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs the full pipeline on one problem text for the benchmark table.
/// Failures become an error row instead of aborting the run.
pub fn bench_one(name: &str, text: &str, opts: &RunOptions) -> BenchRow {
    match replay_text(text, opts) {
        Err(err) => BenchRow::error(name, err.to_string()),
        Ok(report) => {
            let status = report
                .outcome
                .map(|o| o.to_string())
                .unwrap_or_else(|| "unknown".to_string());
            let replay = report.replay.as_ref();
            BenchRow {
                name: name.to_string(),
                status,
                generated: report.stats.generated,
                kept: report.stats.kept,
                elapsed: report.stats.elapsed,
                steps_before: report.steps_before.unwrap_or(0),
                steps_after: report.steps_after.unwrap_or(0),
                subst_free: report.transformed_subst_free.unwrap_or(false),
                transform_ok: report.transformed_checks.unwrap_or(false),
                replay_ok: replay.map(|r| r.succeeded),
                replay_generated: replay
                    .and_then(|r| r.successful_stats())
                    .map(|s| s.generated),
                replay_with_ext: replay.and_then(|r| {
                    r.rounds
                        .iter()
                        .find(|round| round.outcome == OutcomeKind::Refuted)
                        .map(|round| round.with_ext)
                }),
            }
        }
    }
}
