//! Integration tests over the bundled fixtures: every refutation the prover
//! produces is independently checked, listings round-trip, transformed
//! proofs replay, and the prover agrees with a brute-force satisfiability
//! oracle on random ground problems.

mod common;

use common::{corpus_files, dpll_satisfiable, fixture, random_ground_problem, Rng};
use parakeet::driver::OutcomeKind;
use parakeet::driver::{instantiate_text, prepare, prove_text, replay_text, RunOptions};
use parakeet::infer::infer;
use parakeet::proof::{check_proof, AxiomSource, Proof};
use parakeet::prover::{prove, ProverLimits, ProverOutcome};

fn default_opts() -> RunOptions {
    RunOptions::default()
}

#[test]
fn every_corpus_problem_is_refuted_and_checked() {
    for (name, text) in corpus_files() {
        let prepared = prepare(&text, &default_opts()).unwrap();
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
            ..ProverLimits::default()
        };
        let outcome = prove(&axioms, &prepared.clausified.goal_clauses, &limits).unwrap();
        let ProverOutcome::Refutation(proof, _) = outcome else {
            panic!("{name}: expected a refutation");
        };
        assert_eq!(
            check_proof(&proof),
            Ok(()),
            "{name}: prover output must check"
        );
    }
}

#[test]
fn machine_listings_of_prover_output_round_trip() {
    for (name, text) in corpus_files() {
        let report = prove_text(&text, &default_opts()).unwrap();
        let machine = report.machine_proof.expect("refutation");
        let parsed = Proof::parse_machine(&machine).unwrap_or_else(|e| {
            panic!("{name}: listing failed to parse back: {e}");
        });
        assert_eq!(check_proof(&parsed), Ok(()), "{name}");
        assert_eq!(parsed.to_machine(), machine, "{name}: round trip is stable");
    }
}

#[test]
fn transform_holds_across_the_corpus() {
    for (name, text) in corpus_files() {
        let report = instantiate_text(&text, &default_opts()).unwrap();
        assert_eq!(report.outcome, Some(OutcomeKind::Refuted), "{name}");
        assert_eq!(report.transformed_checks, Some(true), "{name}");
        assert_eq!(report.transformed_subst_free, Some(true), "{name}");
        assert!(
            report.steps_after.unwrap() <= report.steps_before.unwrap(),
            "{name}: transform may not grow the proof"
        );
    }
}

#[test]
fn instantiated_axiom_clauses_replay_through_the_search() {
    // Re-running the prover on the instantiated axiom clauses themselves
    // (not the decoded facts) must succeed.
    for (name, text) in corpus_files() {
        let prepared = prepare(&text, &default_opts()).unwrap();
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
            ..ProverLimits::default()
        };
        let outcome = prove(&axioms, &prepared.clausified.goal_clauses, &limits).unwrap();
        let proof = outcome
            .proof()
            .unwrap_or_else(|| panic!("{name}: refutation"));
        let uses = infer(proof).unwrap();
        let mut replay_axioms = Vec::new();
        let mut replay_goals = Vec::new();
        for axiom_use in &uses {
            let instantiated = axiom_use.clause.apply(&axiom_use.sub);
            if axiom_use.source.is_goal() {
                replay_goals.push(instantiated);
            } else {
                replay_axioms.push((axiom_use.source.clone(), instantiated));
            }
        }
        let outcome = prove(&replay_axioms, &replay_goals, &limits).unwrap();
        assert!(
            matches!(outcome, ProverOutcome::Refutation(..)),
            "{name}: instantiated clauses must still refute"
        );
    }
}

#[test]
fn full_replay_pipeline_succeeds_on_the_corpus() {
    for (name, text) in corpus_files() {
        let report = replay_text(&text, &default_opts()).unwrap();
        assert_eq!(report.outcome, Some(OutcomeKind::Refuted), "{name}");
        let replay = report.replay.expect("replay ran");
        assert!(replay.succeeded, "{name}: replay must succeed");
    }
}

#[test]
fn prover_agrees_with_dpll_on_random_ground_problems() {
    let mut rng = Rng::new(0xFEED);
    let mut unsat_seen = 0;
    let mut sat_seen = 0;
    for round in 0..60 {
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
                assert!(
                    !satisfiable,
                    "round {round}: refuted a satisfiable set: {clauses:?}"
                );
                assert_eq!(check_proof(&proof), Ok(()));
                unsat_seen += 1;
            }
            ProverOutcome::Saturated(_) => {
                assert!(
                    satisfiable,
                    "round {round}: saturated on an unsatisfiable set: {clauses:?}"
                );
                sat_seen += 1;
            }
            ProverOutcome::ResourceOut(_) => {
                panic!("round {round}: ground problems must terminate")
            }
        }
    }
    assert!(unsat_seen > 5, "the generator should produce unsat cases");
    assert!(sat_seen > 5, "the generator should produce sat cases");
}

#[test]
fn tptp_pipeline_produces_suggestions() {
    let report = instantiate_text(&fixture("corpus/chain.p"), &default_opts()).unwrap();
    assert_eq!(report.outcome, Some(OutcomeKind::Refuted));
    // The transitivity axiom is used with concrete endpoints.
    assert!(report.suggestions.iter().any(|s| s.fact == "trans"));
}

#[test]
fn example5_replay_needs_ext() {
    let report = replay_text(&fixture("example5.pk"), &default_opts()).unwrap();
    let replay = report.replay.unwrap();
    assert_eq!(replay.rounds.len(), 2, "first round fails, second succeeds");
    assert!(!replay.rounds[0].with_ext);
    assert_ne!(replay.rounds[0].outcome, OutcomeKind::Refuted);
    assert!(replay.rounds[1].with_ext);
    assert_eq!(replay.rounds[1].outcome, OutcomeKind::Refuted);
}

#[test]
fn ext_first_fixture_sheds_ext_on_replay() {
    let report = replay_text(&fixture("ext_first.pk"), &default_opts()).unwrap();
    assert_eq!(report.outcome, Some(OutcomeKind::Refuted));
    let replay = report.replay.unwrap();
    assert_eq!(replay.rounds.len(), 1);
    assert!(!replay.rounds[0].with_ext);
    assert_eq!(replay.rounds[0].outcome, OutcomeKind::Refuted);
}

#[test]
fn ext_fixture_saturates_without_the_option_and_proves_with_it() {
    use parakeet::driver::ExtMode;
    let text = fixture("ext_first.pk");
    let tight = parakeet::prover::ProverLimits {
        max_generated_clauses: 3_000,
        max_seconds: 5.0,
        ..parakeet::prover::ProverLimits::default()
    };
    let without = RunOptions {
        ext: ExtMode::Off,
        limits: tight.clone(),
        ..RunOptions::default()
    };
    let report = prove_text(&text, &without).unwrap();
    assert_ne!(report.outcome, Some(OutcomeKind::Refuted));
    let with = RunOptions {
        ext: ExtMode::On,
        limits: tight,
        ..RunOptions::default()
    };
    let report = prove_text(&text, &with).unwrap();
    assert_eq!(report.outcome, Some(OutcomeKind::Refuted));
}

#[test]
fn random_equational_chains_refute_and_transform() {
    use common::random_equational_problem;
    use parakeet::infer::transform;
    use parakeet::proof::{count_steps, is_subst_free};
    let mut rng = common::Rng::new(0xE9A110);
    for round in 0..50 {
        let (clauses, goal) = random_equational_problem(&mut rng);
        let axioms: Vec<_> = clauses
            .iter()
            .enumerate()
            .map(|(i, c)| (AxiomSource::Fact(format!("E{i}")), c.clone()))
            .collect();
        let limits = ProverLimits {
            max_generated_clauses: 20_000,
            max_seconds: 20.0,
            ..ProverLimits::default()
        };
        let outcome = prove(&axioms, &[goal.clone()], &limits).unwrap();
        let ProverOutcome::Refutation(proof, _) = outcome else {
            panic!("round {round}: chain must refute; goal {goal}");
        };
        assert_eq!(check_proof(&proof), Ok(()), "round {round}");
        let transformed = transform(&proof).unwrap();
        assert_eq!(check_proof(&transformed), Ok(()), "round {round}");
        assert!(is_subst_free(&transformed), "round {round}");
        assert!(
            count_steps(&transformed) <= count_steps(&proof),
            "round {round}"
        );
    }
}
