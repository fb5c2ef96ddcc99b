//! Syntactic unification and matching.

use crate::term::{Substitution, Term};

/// Why two terms failed to unify or match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnifyError {
    SymbolClash {
        left: String,
        right: String,
    },
    ArityClash {
        symbol: String,
        left: usize,
        right: usize,
    },
    OccursCheck {
        var: String,
        term: Term,
    },
    /// Matching only: the pattern has a function where the target has a
    /// variable, or a pattern variable would need two different images.
    NotAnInstance,
}

impl std::fmt::Display for UnifyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UnifyError::SymbolClash { left, right } => {
                write!(f, "symbol clash: {left} vs {right}")
            }
            UnifyError::ArityClash {
                symbol,
                left,
                right,
            } => {
                write!(f, "arity clash on {symbol}: {left} vs {right}")
            }
            UnifyError::OccursCheck { var, term } => {
                write!(f, "occurs check: {var} in {term}")
            }
            UnifyError::NotAnInstance => write!(f, "target is not an instance of the pattern"),
        }
    }
}

impl std::error::Error for UnifyError {}

/// Most general unifier of two terms, with the occurs check enforced.
pub fn mgu(t1: &Term, t2: &Term) -> Result<Substitution, UnifyError> {
    let mut sub = Substitution::empty();
    unify_into(t1, t2, &mut sub)?;
    Ok(sub)
}

fn unify_into(t1: &Term, t2: &Term, sub: &mut Substitution) -> Result<(), UnifyError> {
    let t1 = resolve(t1, sub);
    let t2 = resolve(t2, sub);
    match (&t1, &t2) {
        (Term::Var(a), Term::Var(b)) if a == b => Ok(()),
        (Term::Var(v), t) | (t, Term::Var(v)) => {
            let image = sub.apply(t);
            if image.contains_var(v) {
                return Err(UnifyError::OccursCheck {
                    var: v.clone(),
                    term: image,
                });
            }
            // Keep earlier bindings fully resolved so the result stays
            // idempotent and can be applied simultaneously.
            let elim = Substitution::singleton(v.clone(), image.clone());
            let updated: Vec<(String, Term)> = sub
                .iter()
                .map(|(var, term)| (var.clone(), elim.apply(term)))
                .collect();
            *sub = Substitution::from_pairs(updated);
            sub.bind(v.clone(), image);
            Ok(())
        }
        (Term::App(f, fa), Term::App(g, ga)) => {
            if f != g {
                return Err(UnifyError::SymbolClash {
                    left: f.clone(),
                    right: g.clone(),
                });
            }
            if fa.len() != ga.len() {
                return Err(UnifyError::ArityClash {
                    symbol: f.clone(),
                    left: fa.len(),
                    right: ga.len(),
                });
            }
            for (a, b) in fa.iter().zip(ga.iter()) {
                unify_into(a, b, sub)?;
            }
            Ok(())
        }
    }
}

fn resolve(term: &Term, sub: &Substitution) -> Term {
    match term {
        Term::Var(v) => match sub.get(v) {
            Some(image) => image.clone(),
            None => term.clone(),
        },
        _ => term.clone(),
    }
}

/// A matching assignment. Unlike [`Substitution`], identity bindings are
/// kept: a pattern variable that matched itself must not later match a
/// different term.
pub type MatchBindings = std::collections::BTreeMap<String, Term>;

/// Matches `pattern` against `target`: finds a substitution over the
/// pattern's variables whose application yields exactly `target`. Variables
/// of the target are treated as constants.
pub fn match_term(pattern: &Term, target: &Term) -> Result<Substitution, UnifyError> {
    match match_extend(pattern, target, MatchBindings::new()) {
        Some(bindings) => Ok(Substitution::from_pairs(bindings)),
        None => Err(UnifyError::NotAnInstance),
    }
}

/// Matching that extends an existing partial assignment; used by subsumption.
pub fn match_extend(
    pattern: &Term,
    target: &Term,
    bindings: MatchBindings,
) -> Option<MatchBindings> {
    let mut bindings = bindings;
    if match_into(pattern, target, &mut bindings) {
        Some(bindings)
    } else {
        None
    }
}

fn match_into(pattern: &Term, target: &Term, bindings: &mut MatchBindings) -> bool {
    match pattern {
        Term::Var(v) => match bindings.get(v) {
            Some(bound) => bound == target,
            None => {
                bindings.insert(v.clone(), target.clone());
                true
            }
        },
        Term::App(f, fa) => match target {
            Term::Var(_) => false,
            Term::App(g, ga) => {
                f == g
                    && fa.len() == ga.len()
                    && fa
                        .iter()
                        .zip(ga.iter())
                        .all(|(a, b)| match_into(a, b, bindings))
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn suc(t: Term) -> Term {
        Term::app("Suc", vec![t])
    }

    fn less(a: Term, b: Term) -> Term {
        Term::app("less", vec![a, b])
    }

    #[test]
    fn mgu_of_identical_variables_is_empty() {
        assert_eq!(
            mgu(&Term::var("x"), &Term::var("x")).unwrap(),
            Substitution::empty()
        );
    }

    #[test]
    fn mgu_unifies_both_sides() {
        let t1 = less(Term::constant("0"), Term::var("y"));
        let t2 = less(Term::var("m"), suc(Term::var("x")));
        let sub = mgu(&t1, &t2).unwrap();
        let expected = less(Term::constant("0"), suc(Term::var("x")));
        assert_eq!(sub.apply(&t1), expected);
        assert_eq!(sub.apply(&t2), expected);
        assert_eq!(sub.get("m"), Some(&Term::constant("0")));
        assert_eq!(sub.get("y"), Some(&suc(Term::var("x"))));
    }

    #[test]
    fn occurs_check_fails() {
        let err = mgu(&Term::var("x"), &suc(Term::var("x"))).unwrap_err();
        assert!(matches!(err, UnifyError::OccursCheck { .. }));
    }

    #[test]
    fn mgu_resolves_chained_bindings() {
        // f(x, x) against f(y, g(z)) must map both x and y to g(z).
        let t1 = Term::app("f", vec![Term::var("x"), Term::var("x")]);
        let t2 = Term::app(
            "f",
            vec![Term::var("y"), Term::app("g", vec![Term::var("z")])],
        );
        let sub = mgu(&t1, &t2).unwrap();
        assert_eq!(sub.apply(&t1), sub.apply(&t2));
    }

    #[test]
    fn match_finds_instance() {
        let pattern = less(Term::var("m"), Term::var("n"));
        let target = less(Term::constant("0"), suc(Term::var("x")));
        let sub = match_term(&pattern, &target).unwrap();
        assert_eq!(sub.apply(&pattern), target);
        for var in sub.domain() {
            assert!(pattern.contains_var(var));
        }
    }

    #[test]
    fn match_ground_term_against_itself() {
        let t = less(Term::constant("0"), Term::constant("1"));
        assert_eq!(match_term(&t, &t).unwrap(), Substitution::empty());
    }

    #[test]
    fn match_rejects_variable_target_for_applied_pattern() {
        let err = match_term(&suc(Term::var("x")), &Term::var("y")).unwrap_err();
        assert_eq!(err, UnifyError::NotAnInstance);
    }

    #[test]
    fn match_keeps_identity_bindings_consistent() {
        // p(x, x) is not a generalization of p(x, c): the first occurrence
        // binds x to itself and the second may not rebind it.
        let pattern = Term::app("p", vec![Term::var("x"), Term::var("x")]);
        let target = Term::app("p", vec![Term::var("x"), Term::constant("c")]);
        assert_eq!(match_term(&pattern, &target), Err(UnifyError::NotAnInstance));
        let flipped = Term::app("p", vec![Term::constant("c"), Term::var("x")]);
        assert_eq!(match_term(&pattern, &flipped), Err(UnifyError::NotAnInstance));
        // Matching a variable against itself still succeeds.
        let same = Term::app("p", vec![Term::var("x"), Term::var("x")]);
        assert_eq!(match_term(&pattern, &same).unwrap(), Substitution::empty());
    }
}
