//! Untyped first-order terms and substitutions.
//!
//! Terms are either variables or a symbol applied to arguments; constants are
//! applications with no arguments. A handful of symbol names are reserved for
//! the encoding of the surface language (see [`reserved`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Reserved symbol names and prefixes.
pub mod reserved {
    /// Binary symbol used to encode curried / variable-headed application.
    pub const APP: &str = "app";
    /// Prefix of Skolem symbols introduced by the clausifier.
    pub const SKOLEM_PREFIX: &str = "sk%";
    /// Prefix of supercombinator symbols introduced by lambda-lifting.
    pub const SUPERCOMB_PREFIX: &str = "ll%";
    /// Prefix of wildcard variables standing in for erased Skolem terms.
    pub const WILDCARD_PREFIX: &str = "_w%";
    /// The polymorphic default constant used to close leftover variables.
    pub const UNDEFINED: &str = "undefined";
    /// The equality predicate.
    pub const EQ: &str = "=";
    /// Bracket-abstraction combinators.
    pub const COMBINATORS: [&str; 5] = ["K", "S", "B", "C", "I"];

    pub fn is_skolem(name: &str) -> bool {
        name.starts_with(SKOLEM_PREFIX)
    }

    pub fn is_supercombinator(name: &str) -> bool {
        name.starts_with(SUPERCOMB_PREFIX)
    }

    pub fn is_wildcard(name: &str) -> bool {
        name.starts_with(WILDCARD_PREFIX)
    }

    pub fn is_combinator(name: &str) -> bool {
        COMBINATORS.contains(&name)
    }
}

/// A first-order term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    pub fn constant(symbol: impl Into<String>) -> Term {
        Term::App(symbol.into(), Vec::new())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> u64 {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<u64>(),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => {
                for arg in args {
                    arg.collect_vars(out);
                }
            }
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(name)),
        }
    }

    /// The subterm at `path`, if the path is valid.
    pub fn subterm_at(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => match self {
                Term::Var(_) => None,
                Term::App(_, args) => args.get(i)?.subterm_at(rest),
            },
        }
    }

    /// Replaces the subterm at `path` with `replacement`.
    pub fn replace_at(&self, path: &[usize], replacement: &Term) -> Option<Term> {
        match path.split_first() {
            None => Some(replacement.clone()),
            Some((&i, rest)) => match self {
                Term::Var(_) => None,
                Term::App(sym, args) => {
                    let mut args = args.clone();
                    let slot = args.get_mut(i)?;
                    *slot = slot.replace_at(rest, replacement)?;
                    Some(Term::App(sym.clone(), args))
                }
            },
        }
    }

    /// All positions of proper and improper subterms, in preorder.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.collect_positions(&mut prefix, &mut out);
        out
    }

    fn collect_positions(&self, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(prefix.clone());
        if let Term::App(_, args) = self {
            for (i, arg) in args.iter().enumerate() {
                prefix.push(i);
                arg.collect_positions(prefix, out);
                prefix.pop();
            }
        }
    }
}

/// Total order on terms: variables before applications, variables by name,
/// applications by symbol name, then arity, then arguments.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a.cmp(b),
            (Term::Var(_), Term::App(..)) => Ordering::Less,
            (Term::App(..), Term::Var(_)) => Ordering::Greater,
            (Term::App(f, fa), Term::App(g, ga)) => f
                .cmp(g)
                .then_with(|| fa.len().cmp(&ga.len()))
                .then_with(|| fa.cmp(ga)),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(sym, args) => {
                write!(f, "{sym}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, arg) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{arg}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// A finite map from variable names to terms.
///
/// Application is simultaneous: bindings never apply to each other's ranges
/// during a single application. Identity bindings are not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution {
    bindings: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn empty() -> Substitution {
        Substitution::default()
    }

    pub fn singleton(var: impl Into<String>, term: Term) -> Substitution {
        let mut sub = Substitution::empty();
        sub.bind(var.into(), term);
        sub
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, Term)>) -> Substitution {
        let mut sub = Substitution::empty();
        for (var, term) in pairs {
            sub.bind(var, term);
        }
        sub
    }

    /// Adds a binding, dropping it if it is the identity.
    pub fn bind(&mut self, var: String, term: Term) {
        if matches!(&term, Term::Var(v) if *v == var) {
            self.bindings.remove(&var);
        } else {
            self.bindings.insert(var, term);
        }
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.bindings.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &String> {
        self.bindings.keys()
    }

    /// Applies the substitution to a term.
    pub fn apply(&self, term: &Term) -> Term {
        match term {
            Term::Var(v) => match self.bindings.get(v) {
                Some(image) => image.clone(),
                None => term.clone(),
            },
            Term::App(sym, args) => {
                Term::App(sym.clone(), args.iter().map(|a| self.apply(a)).collect())
            }
        }
    }

    /// Composition: `compose(s1, s2)` first applies `s2` and then `s1`, so
    /// that applying the result equals applying `s2` followed by `s1`.
    pub fn compose(s1: &Substitution, s2: &Substitution) -> Substitution {
        let mut out = Substitution::empty();
        for (var, term) in &s2.bindings {
            out.bind(var.clone(), s1.apply(term));
        }
        for (var, term) in &s1.bindings {
            if !s2.bindings.contains_key(var) {
                out.bind(var.clone(), term.clone());
            }
        }
        out
    }

    /// Keeps only the bindings whose variable satisfies the predicate.
    pub fn restrict(&self, mut keep: impl FnMut(&str) -> bool) -> Substitution {
        Substitution {
            bindings: self
                .bindings
                .iter()
                .filter(|(v, _)| keep(v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (var, term)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{var} -> {term}")?;
        }
        write!(f, "}}")
    }
}

/// Generates fresh variable names `base_k` that avoid a set of used names.
#[derive(Debug, Clone, Default)]
pub struct FreshVars {
    counter: u64,
    used: BTreeSet<String>,
}

impl FreshVars {
    pub fn new() -> FreshVars {
        FreshVars::default()
    }

    /// Marks a name as taken so it is never produced.
    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    pub fn is_taken(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    pub fn reserve_all<'a>(&mut self, names: impl IntoIterator<Item = &'a String>) {
        for name in names {
            self.reserve(name);
        }
    }

    /// A fresh name based on `base`, e.g. `n` becomes `n_3`.
    pub fn fresh(&mut self, base: &str) -> String {
        let stem = base.split('_').next().unwrap_or(base);
        let stem = if stem.is_empty() { "v" } else { stem };
        loop {
            let candidate = format!("{stem}_{}", self.counter);
            self.counter += 1;
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
        }
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
    fn empty_substitution_is_identity() {
        let t = less(Term::constant("1"), suc(suc(Term::var("x"))));
        assert_eq!(Substitution::empty().apply(&t), t);
    }

    #[test]
    fn apply_replaces_only_bound_variables() {
        // Step (10) -> (11) of the successor proof: {n -> x}.
        let sub = Substitution::singleton("n", Term::var("x"));
        let t = less(Term::constant("0"), suc(Term::var("n")));
        assert_eq!(
            sub.apply(&t),
            less(Term::constant("0"), suc(Term::var("x")))
        );
    }

    #[test]
    fn apply_is_simultaneous() {
        // Step (2) -> (3): {m -> 0, n -> y} on Suc(m).
        let sub = Substitution::from_pairs(vec![
            ("m".to_string(), Term::constant("0")),
            ("n".to_string(), Term::var("y")),
        ]);
        assert_eq!(sub.apply(&suc(Term::var("m"))), suc(Term::constant("0")));
    }

    #[test]
    fn compose_matches_worked_example() {
        // {y -> Suc(x)} o {m -> 0, n -> y} = {y -> Suc(x), m -> 0, n -> Suc(x)}.
        let s1 = Substitution::singleton("y", suc(Term::var("x")));
        let s2 = Substitution::from_pairs(vec![
            ("m".to_string(), Term::constant("0")),
            ("n".to_string(), Term::var("y")),
        ]);
        let composed = Substitution::compose(&s1, &s2);
        let expected = Substitution::from_pairs(vec![
            ("y".to_string(), suc(Term::var("x"))),
            ("m".to_string(), Term::constant("0")),
            ("n".to_string(), suc(Term::var("x"))),
        ]);
        assert_eq!(composed, expected);
    }

    #[test]
    fn compose_with_identity() {
        let s = Substitution::singleton("y", suc(Term::var("x")));
        assert_eq!(Substitution::compose(&Substitution::empty(), &s), s);
        assert_eq!(Substitution::compose(&s, &Substitution::empty()), s);
    }

    #[test]
    fn compose_right_binding_wins() {
        // (t{x -> b}){x -> a} on t = x gives b, so the composition maps x to b.
        let s1 = Substitution::singleton("x", Term::constant("a"));
        let s2 = Substitution::singleton("x", Term::constant("b"));
        let composed = Substitution::compose(&s1, &s2);
        assert_eq!(composed, Substitution::singleton("x", Term::constant("b")));
    }

    #[test]
    fn identity_bindings_are_dropped() {
        let mut sub = Substitution::empty();
        sub.bind("x".to_string(), Term::var("x"));
        assert!(sub.is_empty());
    }

    #[test]
    fn paths_address_subterms() {
        let t = less(suc(Term::constant("0")), suc(Term::var("y")));
        assert_eq!(t.subterm_at(&[0]), Some(&suc(Term::constant("0"))));
        assert_eq!(t.subterm_at(&[0, 0]), Some(&Term::constant("0")));
        assert_eq!(t.subterm_at(&[2]), None);
        let replaced = t.replace_at(&[0], &Term::constant("1")).unwrap();
        assert_eq!(replaced, less(Term::constant("1"), suc(Term::var("y"))));
    }

    #[test]
    fn fresh_names_avoid_reserved() {
        let mut fresh = FreshVars::new();
        fresh.reserve("n_0");
        assert_eq!(fresh.fresh("n"), "n_1");
        assert_eq!(fresh.fresh("n_1"), "n_2");
    }
}
