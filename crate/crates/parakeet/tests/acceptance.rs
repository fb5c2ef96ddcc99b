//! Acceptance suite. Each test covers one release criterion at its stated
//! tolerance and prints one pass line; run with `--nocapture` to see them.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use common::{
    corpus_files, dpll_satisfiable, fixture, random_ground_problem, random_horn_problem, Rng,
};
use parakeet::clause::Clause;
use parakeet::clausify::clausify_fact;
use parakeet::decode::WildcardScope;
use parakeet::driver::{
    bench_one, instantiate_text, prepare, replay_text, OutcomeKind, RunOptions,
};
use parakeet::infer::{infer, transform};
use parakeet::parse::{parse_problem, LambdaMode};
use parakeet::proof::{check_proof, count_steps, is_subst_free, topo_order, AxiomSource};
use parakeet::prover::{prove, ProverLimits, ProverOutcome};
use parakeet::surface::{alpha_eq, SurfaceTerm};
use parakeet::term::{reserved, Substitution, Term};

fn suc(t: Term) -> Term {
    Term::app("Suc", vec![t])
}

fn prove_prepared(
    prepared: &parakeet::driver::PreparedProblem,
    limits: &ProverLimits,
) -> ProverOutcome {
    let axioms: Vec<_> = prepared
        .clausified
        .facts
        .iter()
        .map(|(n, c)| (AxiomSource::Fact(n.clone()), c.clone()))
        .chain(
            prepared
                .clausified
                .defs
                .iter()
                .map(|(n, c)| (AxiomSource::Definition(n.clone()), c.clone())),
        )
        .collect();
    let limits = ProverLimits {
        use_ext: prepared.use_ext,
        ..limits.clone()
    };
    prove(&axioms, &prepared.clausified.goal_clauses, &limits).unwrap()
}

/// Criterion 1: on the worked example, `infer` returns the expected axiom
/// uses up to a consistent renaming of the one fresh variable, and the
/// filtered suggestions are alpha-equal to the expected bindings. Under 1 s.
#[test]
fn criterion_1_golden_worked_example() {
    let start = Instant::now();
    let text = fixture("worked_example.pk");
    let prepared = prepare(&text, &RunOptions::default()).unwrap();
    let outcome = prove_prepared(&prepared, &ProverLimits::default());
    let proof = outcome.proof().expect("refutation");
    let uses = infer(proof).unwrap();
    assert_eq!(uses.len(), 4, "goal, F1, F2, F3");

    let by_fact = |name: &str| {
        uses.iter()
            .find(|u| u.source.fact_name() == Some(name))
            .unwrap_or_else(|| panic!("use of {name}"))
    };
    let goal_use = uses.iter().find(|u| u.source.is_goal()).expect("goal use");
    assert!(
        goal_use.sub.is_empty(),
        "goal clause carries the empty substitution"
    );

    // F1 accumulates {fresh -> Suc(x), m -> 0, n -> Suc(x)} for one fresh
    // variable that is not a variable of the clause.
    let f1 = by_fact("F1");
    let f1_clause_vars = f1.clause.vars();
    assert_eq!(f1.sub.len(), 3);
    assert_eq!(f1.sub.get("m"), Some(&Term::constant("0")));
    assert_eq!(f1.sub.get("n"), Some(&suc(Term::constant("x"))));
    let fresh: Vec<&String> = f1
        .sub
        .domain()
        .filter(|v| !f1_clause_vars.contains(*v))
        .collect();
    assert_eq!(fresh.len(), 1, "exactly one fresh variable in F1's use");
    let fresh = fresh[0].clone();
    assert_eq!(f1.sub.get(&fresh), Some(&suc(Term::constant("x"))));

    // F2 accumulates the same fresh variable bound to Suc(x).
    let f2 = by_fact("F2");
    assert_eq!(f2.sub.len(), 1);
    assert_eq!(f2.sub.get(&fresh), Some(&suc(Term::constant("x"))));

    // F3 is used with exactly {n -> x}.
    let f3 = by_fact("F3");
    assert_eq!(f3.sub, Substitution::singleton("n", Term::constant("x")));

    // Filtered suggestions: F1 with {m -> 0, n -> Suc x}, F3 with {n -> x}.
    let report = instantiate_text(&text, &RunOptions::default()).unwrap();
    let suggestion = |name: &str| {
        report
            .suggestions
            .iter()
            .find(|s| s.fact == name)
            .unwrap_or_else(|| panic!("suggestion for {name}"))
    };
    let s1 = suggestion("F1");
    assert_eq!(s1.bindings.len(), 2);
    assert!(alpha_eq(
        s1.bindings.get("m").unwrap(),
        &SurfaceTerm::constant("0")
    ));
    assert!(alpha_eq(
        s1.bindings.get("n").unwrap(),
        &SurfaceTerm::app(SurfaceTerm::constant("Suc"), SurfaceTerm::constant("x"))
    ));
    let s3 = suggestion("F3");
    assert_eq!(s3.bindings.len(), 1);
    assert!(alpha_eq(
        s3.bindings.get("n").unwrap(),
        &SurfaceTerm::constant("x")
    ));
    assert!(suggestion("F2").bindings.is_empty());

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 1 (golden worked example): pass ({elapsed:?})");
}

/// Criterion 2: over the corpus plus at least 100 random provable problems,
/// every transformed proof checks, is Subst-free, has no more steps than
/// the original, and uses only instantiated axiom clauses. Under 60 s.
#[test]
fn criterion_2_transform_property_suite() {
    let start = Instant::now();
    let mut checked = 0;

    let mut check_problem = |name: &str, text: &str| -> bool {
        let prepared = match prepare(text, &RunOptions::default()) {
            Ok(p) => p,
            Err(e) => panic!("{name}: {e}"),
        };
        let limits = ProverLimits {
            max_generated_clauses: 5_000,
            max_seconds: 5.0,
            ..ProverLimits::default()
        };
        let outcome = prove_prepared(&prepared, &limits);
        let Some(proof) = outcome.proof() else {
            return false;
        };
        let transformed = transform(proof).unwrap();
        assert_eq!(check_proof(&transformed), Ok(()), "{name}: (a) checks");
        assert!(is_subst_free(&transformed), "{name}: (b) Subst-free");
        assert!(
            count_steps(&transformed) <= count_steps(proof),
            "{name}: (c) step count"
        );
        let instantiated: BTreeSet<Clause> = infer(proof)
            .unwrap()
            .into_iter()
            .map(|u| u.clause.apply(&u.sub))
            .collect();
        for node in topo_order(&transformed.root) {
            if node.is_axiom() {
                assert!(
                    instantiated.contains(&node.clause),
                    "{name}: (d) axiom {} is an instantiated original",
                    node.clause
                );
                assert!(
                    transformed.registry.contains_key(&node.clause),
                    "{name}: (d) registry covers used axioms"
                );
            }
        }
        checked += 1;
        true
    };

    for (name, text) in corpus_files() {
        assert!(
            check_problem(&name, &text),
            "{name}: corpus must be provable"
        );
    }

    let mut rng = Rng::new(0xACCE55);
    let mut provable = 0;
    let mut attempts = 0;
    while provable < 100 && attempts < 1_000 {
        attempts += 1;
        let text = random_horn_problem(&mut rng);
        if check_problem(&format!("random{attempts}"), &text) {
            provable += 1;
        }
    }
    assert!(provable >= 100, "only {provable} provable random problems");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!("criterion 2 (transform suite): pass ({checked} proofs, {elapsed:?})");
}

/// Criterion 3: the even/power fixture merges into exactly one
/// instantiation, and reclausifying the instantiated fact reproduces the
/// two instantiated clauses exactly.
#[test]
fn criterion_3_merging_example() {
    let text = fixture("even_power.pk");
    let report = instantiate_text(&text, &RunOptions::default()).unwrap();
    assert_eq!(report.outcome, Some(OutcomeKind::Refuted));
    assert_eq!(
        report.suggestions.len(),
        1,
        "exactly one merged instantiation"
    );
    let merged = &report.suggestions[0];
    assert_eq!(merged.fact, "EvenPow");
    assert_eq!(merged.bindings.len(), 3);
    assert_eq!(merged.bindings.get("x"), Some(&SurfaceTerm::constant("a")));
    assert_eq!(merged.bindings.get("y"), Some(&SurfaceTerm::constant("b")));
    assert_eq!(merged.bindings.get("n"), Some(&SurfaceTerm::constant("2")));

    // Reclausify the instantiated fact and compare against the
    // individually instantiated clauses.
    let problem = parse_problem(&text).unwrap();
    let fact = &problem.facts[0].1;
    let original = clausify_fact("EvenPow", fact, LambdaMode::Lifting).unwrap();
    let bindings: Vec<(String, SurfaceTerm)> = merged
        .bindings
        .iter()
        .map(|(v, t)| (v.clone(), t.clone()))
        .collect();
    let instantiated_formula = fact.instantiate(&bindings).unwrap();
    let reclausified =
        clausify_fact("EvenPow", &instantiated_formula, LambdaMode::Lifting).unwrap();
    let sub = Substitution::from_pairs(vec![
        ("x".to_string(), Term::constant("a")),
        ("y".to_string(), Term::constant("b")),
        ("n".to_string(), Term::constant("2")),
    ]);
    let expected: BTreeSet<Clause> = original
        .clauses
        .iter()
        .map(|(c, _)| c.apply(&sub))
        .collect();
    let got: BTreeSet<Clause> = reclausified
        .clauses
        .iter()
        .map(|(c, _)| c.clone())
        .collect();
    assert_eq!(got, expected);
    assert_eq!(got.len(), 2);
    println!("criterion 3 (merging example): pass");
}

/// Criterion 4: the surjectivity fixture suggests a lambda for f and a
/// wildcard-bearing term for y.
#[test]
fn criterion_4_lambda_and_wildcard_decoding() {
    let report = instantiate_text(&fixture("example3.pk"), &RunOptions::default()).unwrap();
    assert_eq!(report.outcome, Some(OutcomeKind::Refuted));
    let surj = report
        .suggestions
        .iter()
        .find(|s| s.fact == "surjD")
        .expect("surjD suggestion");
    let f = surj.bindings.get("f").expect("binding for f");
    let expected_f = SurfaceTerm::lam(
        "c",
        SurfaceTerm::app(
            SurfaceTerm::constant("g"),
            SurfaceTerm::app(SurfaceTerm::constant("Suc"), SurfaceTerm::var("c")),
        ),
    );
    assert!(alpha_eq(f, &expected_f), "f bound to {f}");

    let y = surj.bindings.get("y").expect("binding for y");
    let SurfaceTerm::App(suc_head, inner) = y else {
        panic!("y bound to {y}")
    };
    assert_eq!(suc_head.as_ref(), &SurfaceTerm::constant("Suc"));
    let SurfaceTerm::App(g_head, wildcard) = inner.as_ref() else {
        panic!("y bound to {y}")
    };
    assert_eq!(g_head.as_ref(), &SurfaceTerm::constant("g"));
    let SurfaceTerm::Var(w) = wildcard.as_ref() else {
        panic!("expected a wildcard, got {wildcard}")
    };
    assert!(reserved::is_wildcard(w), "fresh wildcard, got {w}");
    assert_eq!(y.to_string(), "Suc (g _)");
    println!("criterion 4 (lambda and wildcard decoding): pass");
}

/// Criterion 5: with lambda-lifting, the instantiated surjectivity fixture
/// replays only with ext injected (failing without it within 10,000
/// generated clauses), and the ext_first fixture needs ext originally but
/// not after instantiation.
#[test]
fn criterion_5_extensionality_behavior() {
    let opts = RunOptions {
        limits: ProverLimits {
            max_generated_clauses: 10_000,
            max_seconds: 30.0,
            ..ProverLimits::default()
        },
        ..RunOptions::default()
    };
    let report = replay_text(&fixture("example5.pk"), &opts).unwrap();
    assert_eq!(report.outcome, Some(OutcomeKind::Refuted), "original proof");
    let replay = report.replay.expect("replay ran");
    assert_eq!(replay.rounds.len(), 2);
    assert!(!replay.rounds[0].with_ext);
    assert_ne!(
        replay.rounds[0].outcome,
        OutcomeKind::Refuted,
        "replay must fail without ext"
    );
    assert!(
        replay.rounds[0].stats.generated <= 10_000,
        "failure within the clause budget"
    );
    assert!(replay.rounds[1].with_ext);
    assert_eq!(
        replay.rounds[1].outcome,
        OutcomeKind::Refuted,
        "replay must succeed with ext"
    );

    // Symmetric direction: provable only with ext originally, but the
    // eta-reduced instantiated fact closes the goal without it.
    let report = replay_text(&fixture("ext_first.pk"), &RunOptions::default()).unwrap();
    assert_eq!(report.outcome, Some(OutcomeKind::Refuted));
    let replay = report.replay.expect("replay ran");
    assert!(!replay.rounds[0].with_ext);
    assert_eq!(replay.rounds[0].outcome, OutcomeKind::Refuted);
    println!("criterion 5 (extensionality behavior): pass");
}

/// Criterion 6: 1000 randomized cases each for the substitution composition
/// law and the encode/decode round trip (exact without lambdas, beta-eta
/// alpha-equal with them).
#[test]
fn criterion_6_randomized_law_suites() {
    use parakeet::clausify::compile_term;
    use parakeet::surface::beta_eta_normalize;

    let mut rng = Rng::new(0xC0FFEE);
    for case in 0..1000 {
        let s1 = common_subst(&mut rng);
        let s2 = common_subst(&mut rng);
        let t = common_term(&mut rng, 0);
        let composed = Substitution::compose(&s1, &s2);
        assert_eq!(
            composed.apply(&t),
            s1.apply(&s2.apply(&t)),
            "case {case}: composition law for {s1} o {s2} on {t}"
        );
    }

    let mut rng = Rng::new(0xDEC0DE);
    for case in 0..1000 {
        let flat = common_surface(&mut rng, 0, false);
        let (fo, ctx) = compile_term(&flat, LambdaMode::Lifting).unwrap();
        let decoded = ctx.decode_term(&fo).unwrap();
        assert_eq!(decoded, flat, "case {case}: lambda-free round trip");

        let lam = common_surface(&mut rng, 0, true);
        let mode = if case % 2 == 0 {
            LambdaMode::Lifting
        } else {
            LambdaMode::Combinators
        };
        let (fo, ctx) = compile_term(&lam, mode).unwrap();
        let mut scope = WildcardScope::new();
        let decoded = ctx.decode_binding(&fo, &mut scope).unwrap();
        let normal = beta_eta_normalize(&lam, 100_000).unwrap();
        assert!(
            alpha_eq(&decoded, &normal),
            "case {case}: {lam} decoded to {decoded}, normal form {normal}"
        );
    }
    println!("criterion 6 (composition and round-trip suites): pass (2000 cases)");
}

fn common_term(rng: &mut Rng, depth: u32) -> Term {
    if depth >= 3 || rng.chance(1, 2) {
        match rng.below(4) {
            0 => Term::var("u"),
            1 => Term::var("v"),
            2 => Term::constant("c0"),
            _ => Term::constant("c1"),
        }
    } else if rng.chance(1, 2) {
        Term::app("f1", vec![common_term(rng, depth + 1)])
    } else {
        Term::app(
            "h2",
            vec![common_term(rng, depth + 1), common_term(rng, depth + 1)],
        )
    }
}

fn common_subst(rng: &mut Rng) -> Substitution {
    let mut sub = Substitution::empty();
    for var in ["u", "v", "w"] {
        if rng.chance(1, 2) {
            sub.bind(var.to_string(), common_term(rng, 1));
        }
    }
    sub
}

fn common_surface(rng: &mut Rng, depth: u32, lambdas: bool) -> SurfaceTerm {
    if depth >= 3 || rng.chance(1, 3) {
        match rng.below(4) {
            0 => SurfaceTerm::var(if lambdas { "p" } else { "u" }),
            1 => SurfaceTerm::var(if lambdas { "q" } else { "v" }),
            2 => SurfaceTerm::constant("g"),
            _ => SurfaceTerm::constant("c0"),
        }
    } else if lambdas && rng.chance(1, 3) {
        let binder = if rng.chance(1, 2) { "p" } else { "q" };
        SurfaceTerm::lam(binder, common_surface(rng, depth + 1, lambdas))
    } else {
        SurfaceTerm::app(
            common_surface(rng, depth + 1, lambdas),
            common_surface(rng, depth + 1, lambdas),
        )
    }
}

/// Criterion 7: over the bundled corpus, the replay search generates no
/// more clauses than the original on at least 80% of problems, and the
/// transformed step count never grows. Writes the full distribution as CSV.
#[test]
fn criterion_7_search_space_reduction() {
    let opts = RunOptions::default();
    let rows: Vec<_> = corpus_files()
        .into_iter()
        .map(|(name, text)| bench_one(&name, &text, &opts))
        .collect();
    let total = rows.len();
    let mut csv = String::from(parakeet::driver::BenchRow::CSV_HEADER);
    csv.push('\n');
    let mut reduced = 0;
    for row in &rows {
        csv.push_str(&row.csv_line());
        csv.push('\n');
        assert_eq!(row.status, "refutation", "{}", row.name);
        assert!(row.transform_ok, "{}", row.name);
        assert!(
            row.steps_after <= row.steps_before,
            "{}: step count must not grow",
            row.name
        );
        if row.replay_generated.unwrap_or(u64::MAX) <= row.generated {
            reduced += 1;
        }
    }
    let out = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("bench_corpus.csv");
    std::fs::write(&out, &csv).unwrap();
    let rate = reduced as f64 / total as f64;
    assert!(
        rate >= 0.8,
        "replay reduced the search on {reduced}/{total} problems"
    );
    println!(
        "criterion 7 (search-space reduction): pass ({reduced}/{total} reduced, \
         distribution at {})",
        out.display()
    );
}

/// Criterion 8: on 200 random ground problems the prover and a brute-force
/// DPLL oracle agree exactly.
#[test]
fn criterion_8_soundness_oracle() {
    let mut rng = Rng::new(0x0DDB411);
    let mut unsat = 0;
    let mut sat = 0;
    for round in 0..200 {
        let clauses = random_ground_problem(&mut rng);
        let satisfiable = dpll_satisfiable(&clauses);
        let axioms: Vec<_> = clauses
            .iter()
            .enumerate()
            .map(|(i, c)| (AxiomSource::Fact(format!("C{i}")), c.clone()))
            .collect();
        let outcome = prove(&axioms, &[], &ProverLimits::default()).unwrap();
        match outcome {
            ProverOutcome::Refutation(proof, _) => {
                assert!(!satisfiable, "round {round}: refuted a satisfiable set");
                assert_eq!(check_proof(&proof), Ok(()));
                unsat += 1;
            }
            ProverOutcome::Saturated(_) => {
                assert!(satisfiable, "round {round}: missed a refutation");
                sat += 1;
            }
            ProverOutcome::ResourceOut(_) => {
                panic!("round {round}: ground problems must terminate")
            }
        }
    }
    assert_eq!(unsat + sat, 200);
    println!("criterion 8 (soundness oracle): pass ({unsat} unsat, {sat} sat)");
}
