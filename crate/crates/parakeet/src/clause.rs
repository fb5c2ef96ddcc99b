//! Literals and clauses.
//!
//! A clause is a *set* of literals: duplicates collapse on construction and
//! the literals are kept sorted under the total term order. The set semantics
//! matters: applying a substitution may shorten a clause by unifying literals,
//! which the proof transformation exploits.

use std::collections::BTreeSet;
use std::fmt;

use crate::term::{reserved, Substitution, Term};

/// A signed atom. Equality atoms use the reserved binary predicate `=`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Term,
}

impl Literal {
    pub fn new(positive: bool, atom: Term) -> Literal {
        Literal { positive, atom }
    }

    pub fn pos(atom: Term) -> Literal {
        Literal::new(true, atom)
    }

    pub fn neg(atom: Term) -> Literal {
        Literal::new(false, atom)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Literal {
        Literal::pos(Term::app(reserved::EQ, vec![lhs, rhs]))
    }

    pub fn neq(lhs: Term, rhs: Term) -> Literal {
        Literal::neg(Term::app(reserved::EQ, vec![lhs, rhs]))
    }

    pub fn complement(&self) -> Literal {
        Literal::new(!self.positive, self.atom.clone())
    }

    /// The two sides of an equality atom, if this is one.
    pub fn as_equality(&self) -> Option<(&Term, &Term)> {
        match &self.atom {
            Term::App(sym, args) if sym == reserved::EQ && args.len() == 2 => {
                Some((&args[0], &args[1]))
            }
            _ => None,
        }
    }

    pub fn apply(&self, sub: &Substitution) -> Literal {
        Literal::new(self.positive, sub.apply(&self.atom))
    }

    pub fn size(&self) -> u64 {
        self.atom.size()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_equality() {
            Some((lhs, rhs)) => {
                let op = if self.positive { "=" } else { "!=" };
                write!(f, "{lhs} {op} {rhs}")
            }
            None => {
                if !self.positive {
                    write!(f, "~")?;
                }
                write!(f, "{}", self.atom)
            }
        }
    }
}

/// A position inside a literal's atom.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<usize>);

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{idx}")?;
        }
        write!(f, "]")
    }
}

/// A finite set of literals. The empty clause is `False`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Clause {
        let set: BTreeSet<Literal> = literals.into_iter().collect();
        Clause {
            literals: set.into_iter().collect(),
        }
    }

    pub fn empty() -> Clause {
        Clause::default()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn iter(&self) -> impl Iterator<Item = &Literal> {
        self.literals.iter()
    }

    pub fn contains(&self, literal: &Literal) -> bool {
        self.literals.binary_search(literal).is_ok()
    }

    /// The clause without one literal (all duplicates are already collapsed).
    pub fn without(&self, literal: &Literal) -> Clause {
        Clause {
            literals: self
                .literals
                .iter()
                .filter(|l| *l != literal)
                .cloned()
                .collect(),
        }
    }

    pub fn union(&self, other: &Clause) -> Clause {
        Clause::new(self.iter().chain(other.iter()).cloned())
    }

    pub fn is_subset_of(&self, other: &Clause) -> bool {
        self.iter().all(|l| other.contains(l))
    }

    pub fn apply(&self, sub: &Substitution) -> Clause {
        Clause::new(self.iter().map(|l| l.apply(sub)))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for literal in &self.literals {
            literal.atom.collect_vars(&mut out);
        }
        out
    }

    pub fn size(&self) -> u64 {
        self.iter().map(Literal::size).sum()
    }

    /// True for clauses that hold in every interpretation: ones containing a
    /// literal together with its complement, or a trivial equation `t = t`.
    pub fn is_tautology(&self) -> bool {
        for literal in &self.literals {
            if literal.positive {
                if let Some((lhs, rhs)) = literal.as_equality() {
                    if lhs == rhs {
                        return true;
                    }
                }
                if self.contains(&literal.complement()) {
                    return true;
                }
            }
        }
        false
    }

    /// Does some substitution turn `self` into a subset of `other`?
    pub fn subsumes(&self, other: &Clause) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let compatible = |lit: &Literal| {
            other.iter().any(|o| {
                o.positive == lit.positive
                    && match (&lit.atom, &o.atom) {
                        (Term::App(f, fa), Term::App(g, ga)) => f == g && fa.len() == ga.len(),
                        _ => true,
                    }
            })
        };
        if !self.iter().all(compatible) {
            return false;
        }
        fn go(
            pattern: &[Literal],
            target: &Clause,
            bindings: &crate::unify::MatchBindings,
        ) -> bool {
            let Some((first, rest)) = pattern.split_first() else {
                return true;
            };
            for candidate in target.iter() {
                if candidate.positive != first.positive {
                    continue;
                }
                if let Some(extended) =
                    crate::unify::match_extend(&first.atom, &candidate.atom, bindings.clone())
                {
                    if go(rest, target, &extended) {
                        return true;
                    }
                }
            }
            false
        }
        go(&self.literals, other, &crate::unify::MatchBindings::new())
    }
}

impl FromIterator<Literal> for Clause {
    fn from_iter<T: IntoIterator<Item = Literal>>(iter: T) -> Clause {
        Clause::new(iter)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return write!(f, "False");
        }
        for (i, literal) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{literal}")?;
        }
        Ok(())
    }
}
