//! Randomized property suites: substitution algebra, unification, clause
//! invariants, kernel rule properties, and the encode/decode round trip.

use std::collections::BTreeSet;

use proptest::prelude::*;

use parakeet::clause::{Clause, Literal};
use parakeet::clausify::compile_term;
use parakeet::decode::WildcardScope;
use parakeet::parse::LambdaMode;
use parakeet::proof::{derive, ProofNode, Rule};
use parakeet::surface::{alpha_eq, beta_eta_normalize, SurfaceTerm};
use parakeet::term::{Substitution, Term};
use parakeet::unify::{match_term, mgu};

// ---------------------------------------------------------------------------
// Generators.
// ---------------------------------------------------------------------------

const VARS: [&str; 4] = ["u", "v", "w", "z"];

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        proptest::sample::select(&VARS[..]).prop_map(Term::var),
        proptest::sample::select(&["c0", "c1"][..]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (proptest::sample::select(&["f1", "g1"][..]), inner.clone())
                .prop_map(|(f, a)| Term::app(f, vec![a])),
            (inner.clone(), inner).prop_map(|(a, b)| Term::app("h2", vec![a, b])),
        ]
    })
}

fn arb_subst() -> impl Strategy<Value = Substitution> {
    proptest::collection::btree_map(
        proptest::sample::select(&VARS[..]).prop_map(str::to_string),
        arb_term(),
        0..3,
    )
    .prop_map(Substitution::from_pairs)
}

fn arb_literal() -> impl Strategy<Value = Literal> {
    (any::<bool>(), arb_term())
        .prop_map(|(positive, t)| Literal::new(positive, Term::app("p", vec![t])))
}

fn arb_clause() -> impl Strategy<Value = Clause> {
    proptest::collection::vec(arb_literal(), 0..5).prop_map(Clause::new)
}

/// Lambda-free surface terms over a small signature.
fn arb_surface_flat() -> impl Strategy<Value = SurfaceTerm> {
    let leaf = prop_oneof![
        proptest::sample::select(&VARS[..]).prop_map(SurfaceTerm::var),
        proptest::sample::select(&["g", "h", "c0"][..]).prop_map(SurfaceTerm::constant),
    ];
    leaf.prop_recursive(3, 20, 2, |inner| {
        (inner.clone(), inner).prop_map(|(f, a)| SurfaceTerm::app(f, a))
    })
}

/// Surface terms that may contain lambdas (binders drawn from a disjoint
/// pool so shadowing stays simple).
fn arb_surface_lambda() -> impl Strategy<Value = SurfaceTerm> {
    let leaf = prop_oneof![
        proptest::sample::select(&["p", "q", "r"][..]).prop_map(SurfaceTerm::var),
        proptest::sample::select(&["g", "h", "c0"][..]).prop_map(SurfaceTerm::constant),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| SurfaceTerm::app(f, a)),
            (proptest::sample::select(&["p", "q", "r"][..]), inner)
                .prop_map(|(x, b)| SurfaceTerm::lam(x, b)),
        ]
    })
}

// ---------------------------------------------------------------------------
// Substitutions and clauses.
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn composition_law(s1 in arb_subst(), s2 in arb_subst(), t in arb_term()) {
        let composed = Substitution::compose(&s1, &s2);
        prop_assert_eq!(composed.apply(&t), s1.apply(&s2.apply(&t)));
    }

    #[test]
    fn encode_decode_flat_round_trip(t in arb_surface_flat()) {
        let (fo, ctx) = compile_term(&t, LambdaMode::Lifting).unwrap();
        let decoded = ctx.decode_term(&fo).unwrap();
        prop_assert_eq!(&decoded, &t, "fo: {}", fo);
    }

    #[test]
    fn encode_decode_lambda_round_trip(t in arb_surface_lambda()) {
        for mode in [LambdaMode::Lifting, LambdaMode::Combinators] {
            let (fo, ctx) = compile_term(&t, mode).unwrap();
            let mut scope = WildcardScope::new();
            let decoded = ctx.decode_binding(&fo, &mut scope).unwrap();
            let normal = beta_eta_normalize(&t, 100_000).unwrap();
            prop_assert!(
                alpha_eq(&decoded, &normal),
                "mode {:?}: decoded {} vs normal {}",
                mode,
                decoded,
                normal
            );
        }
    }
}

proptest! {
    #[test]
    fn substitution_never_lengthens_clauses(c in arb_clause(), s in arb_subst()) {
        prop_assert!(c.apply(&s).len() <= c.len());
    }

    #[test]
    fn clause_dedup_is_idempotent(c in arb_clause()) {
        let again = Clause::new(c.iter().cloned());
        prop_assert_eq!(&again, &c);
    }

    #[test]
    fn mgu_soundness(t1 in arb_term(), t2 in arb_term()) {
        if let Ok(sub) = mgu(&t1, &t2) {
            prop_assert_eq!(sub.apply(&t1), sub.apply(&t2));
        }
    }

    #[test]
    fn match_soundness(pattern in arb_term(), s in arb_subst()) {
        let target = s.apply(&pattern);
        let found = match_term(&pattern, &target).unwrap();
        prop_assert_eq!(found.apply(&pattern), target);
        for var in found.domain() {
            prop_assert!(pattern.contains_var(var));
        }
    }

    #[test]
    fn decode_is_alpha_stable(t in arb_surface_lambda()) {
        // Renaming binders before encoding must not change the decoded
        // term up to alpha.
        let renamed = parakeet::surface::canonicalize_binders(&t);
        let (fo1, ctx1) = compile_term(&t, LambdaMode::Lifting).unwrap();
        let (fo2, ctx2) = compile_term(&renamed, LambdaMode::Lifting).unwrap();
        let mut s1 = WildcardScope::new();
        let mut s2 = WildcardScope::new();
        let d1 = ctx1.decode_binding(&fo1, &mut s1).unwrap();
        let d2 = ctx2.decode_binding(&fo2, &mut s2).unwrap();
        prop_assert!(alpha_eq(&d1, &d2), "{d1} vs {d2}");
    }

    #[test]
    fn decoded_bindings_are_beta_eta_normal(t in arb_surface_lambda()) {
        let (fo, ctx) = compile_term(&t, LambdaMode::Combinators).unwrap();
        let mut scope = WildcardScope::new();
        let decoded = ctx.decode_binding(&fo, &mut scope).unwrap();
        let renormalized = beta_eta_normalize(&decoded, 100_000).unwrap();
        prop_assert!(alpha_eq(&decoded, &renormalized));
    }
}

// ---------------------------------------------------------------------------
// Unification failure against a brute-force oracle.
// ---------------------------------------------------------------------------

/// All ground terms over {f/1, a/0} with at most three applications of f.
fn small_ground_terms() -> Vec<Term> {
    let mut out = vec![Term::constant("a")];
    for _ in 0..3 {
        let next = Term::app("f", vec![out.last().unwrap().clone()]);
        out.push(next);
    }
    out
}

fn small_oracle_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::var("x")),
        Just(Term::var("y")),
        Just(Term::constant("a")),
    ];
    leaf.prop_recursive(3, 8, 1, |inner| inner.prop_map(|t| Term::app("f", vec![t])))
}

proptest! {
    #[test]
    fn mgu_failure_matches_brute_force(t1 in small_oracle_term(), t2 in small_oracle_term()) {
        if mgu(&t1, &t2).is_ok() {
            return Ok(());
        }
        // No ground substitution over the small universe may unify them.
        let mut vars: BTreeSet<String> = t1.vars();
        vars.extend(t2.vars());
        let vars: Vec<String> = vars.into_iter().collect();
        let universe = small_ground_terms();
        let mut assignment = vec![0usize; vars.len()];
        'outer: loop {
            let sub = Substitution::from_pairs(
                vars.iter()
                    .zip(&assignment)
                    .map(|(v, &i)| (v.clone(), universe[i].clone())),
            );
            prop_assert_ne!(sub.apply(&t1), sub.apply(&t2), "mgu failed but {} unifies", sub);
            // Advance the odometer.
            let mut i = 0;
            loop {
                if i == vars.len() {
                    break 'outer;
                }
                assignment[i] += 1;
                if assignment[i] < universe.len() {
                    break;
                }
                assignment[i] = 0;
                i += 1;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Kernel rule properties.
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn resolve_never_reintroduces_the_pivot(
        left_extra in proptest::collection::vec(arb_literal(), 0..3),
        right_extra in proptest::collection::vec(arb_literal(), 0..3),
        pivot in arb_term(),
    ) {
        let pivot = Term::app("p", vec![pivot]);
        let mut left = left_extra.clone();
        left.push(Literal::pos(pivot.clone()));
        let mut right = right_extra.clone();
        right.push(Literal::neg(pivot.clone()));
        let ln = ProofNode::axiom(Clause::new(left));
        let rn = ProofNode::axiom(Clause::new(right));
        let node = derive(Rule::Resolve(pivot.clone()), vec![ln, rn]).unwrap();
        let pos = Literal::pos(pivot.clone());
        let neg = Literal::neg(pivot);
        if node.clause.contains(&pos) {
            prop_assert!(left_extra.contains(&pos) || right_extra.contains(&pos));
        }
        if node.clause.contains(&neg) {
            prop_assert!(left_extra.contains(&neg) || right_extra.contains(&neg));
        }
    }

    #[test]
    fn subst_node_clause_is_the_instantiated_child(c in arb_clause(), s in arb_subst()) {
        let child = ProofNode::axiom(c.clone());
        let node = derive(Rule::Subst(s.clone()), vec![child]).unwrap();
        prop_assert_eq!(&node.clause, &c.apply(&s));
    }
}
