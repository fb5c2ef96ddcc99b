//! Knuth-Bendix ordering with uniform symbol weight 1 and precedence given
//! by symbol-table order.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::clause::{Clause, Literal};
use crate::term::Term;

#[derive(Debug, Clone, Default)]
pub struct Kbo {
    precedence: BTreeMap<String, usize>,
}

impl Kbo {
    pub fn new() -> Kbo {
        Kbo::default()
    }

    /// Registers symbols in first-occurrence order over the given clauses.
    pub fn from_clauses<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> Kbo {
        let mut kbo = Kbo::new();
        for clause in clauses {
            for literal in clause.iter() {
                kbo.register_term(&literal.atom);
            }
        }
        kbo
    }

    pub fn register_term(&mut self, term: &Term) {
        match term {
            Term::Var(_) => {}
            Term::App(sym, args) => {
                let next = self.precedence.len();
                self.precedence.entry(sym.clone()).or_insert(next);
                for arg in args {
                    self.register_term(arg);
                }
            }
        }
    }

    fn prec(&self, symbol: &str) -> usize {
        // Symbols of derived clauses always come from the input, so a miss
        // can only happen for hand-built terms in tests.
        self.precedence.get(symbol).copied().unwrap_or(usize::MAX)
    }

    /// KBO comparison; `None` means incomparable.
    pub fn compare(&self, s: &Term, t: &Term) -> Option<Ordering> {
        if s == t {
            return Some(Ordering::Equal);
        }
        match (s, t) {
            (Term::Var(x), _) => {
                if t.contains_var(x) {
                    Some(Ordering::Less)
                } else {
                    None
                }
            }
            (_, Term::Var(y)) => {
                if s.contains_var(y) {
                    Some(Ordering::Greater)
                } else {
                    None
                }
            }
            (Term::App(f, fa), Term::App(g, ga)) => {
                let mut balance: BTreeMap<&str, i64> = BTreeMap::new();
                var_balance(s, 1, &mut balance);
                var_balance(t, -1, &mut balance);
                let can_gt = balance.values().all(|&n| n >= 0);
                let can_lt = balance.values().all(|&n| n <= 0);
                let ws = s.size();
                let wt = t.size();
                let decide = |ord: Ordering| match ord {
                    Ordering::Greater if can_gt => Some(Ordering::Greater),
                    Ordering::Less if can_lt => Some(Ordering::Less),
                    _ => None,
                };
                if ws != wt {
                    return decide(ws.cmp(&wt));
                }
                if f != g {
                    return decide(self.prec(f).cmp(&self.prec(g)));
                }
                for (a, b) in fa.iter().zip(ga.iter()) {
                    match self.compare(a, b)? {
                        Ordering::Equal => continue,
                        ord => return decide(ord),
                    }
                }
                Some(Ordering::Equal)
            }
        }
    }

    /// Strict literal order: atoms by KBO, a negative literal above the
    /// positive literal with the same atom.
    pub fn literal_greater(&self, a: &Literal, b: &Literal) -> bool {
        match self.compare(&a.atom, &b.atom) {
            Some(Ordering::Greater) => true,
            Some(Ordering::Equal) => !a.positive && b.positive,
            _ => false,
        }
    }

    /// A literal is maximal if no other literal in the clause is strictly
    /// greater.
    pub fn literal_maximal_in(&self, literal: &Literal, clause: &Clause) -> bool {
        !clause
            .iter()
            .any(|other| self.literal_greater(other, literal))
    }
}

fn var_balance<'a>(term: &'a Term, sign: i64, out: &mut BTreeMap<&'a str, i64>) {
    match term {
        Term::Var(v) => {
            *out.entry(v.as_str()).or_insert(0) += sign;
        }
        Term::App(_, args) => {
            for arg in args {
                var_balance(arg, sign, out);
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

    #[test]
    fn weight_dominates() {
        let kbo = Kbo::from_clauses([&Clause::new(vec![Literal::eq(
            suc(Term::constant("0")),
            Term::constant("1"),
        )])]);
        // Suc(0) has weight 2, 1 has weight 1.
        assert_eq!(
            kbo.compare(&suc(Term::constant("0")), &Term::constant("1")),
            Some(Ordering::Greater)
        );
    }

    #[test]
    fn variables_are_smaller_than_enclosing_terms() {
        let kbo = Kbo::new();
        assert_eq!(
            kbo.compare(&Term::var("x"), &suc(Term::var("x"))),
            Some(Ordering::Less)
        );
        assert_eq!(kbo.compare(&Term::var("x"), &Term::var("y")), None);
        assert_eq!(
            kbo.compare(&Term::var("x"), &Term::var("x")),
            Some(Ordering::Equal)
        );
    }

    #[test]
    fn unbalanced_variables_are_incomparable() {
        let kbo = Kbo::new();
        let fx = Term::app("f", vec![Term::var("x")]);
        let fy = Term::app("f", vec![Term::var("y")]);
        assert_eq!(kbo.compare(&fx, &fy), None);
    }

    #[test]
    fn precedence_breaks_weight_ties() {
        let mut kbo = Kbo::new();
        kbo.register_term(&Term::constant("a"));
        kbo.register_term(&Term::constant("b"));
        assert_eq!(
            kbo.compare(&Term::constant("a"), &Term::constant("b")),
            Some(Ordering::Less)
        );
        assert_eq!(
            kbo.compare(&Term::constant("b"), &Term::constant("a")),
            Some(Ordering::Greater)
        );
    }

    #[test]
    fn order_is_stable_under_substitution_on_ground_exemplars() {
        // Spot check: Suc(Suc(x)) > Suc(x) for any instance of x.
        let kbo = Kbo::new();
        let small = suc(Term::var("x"));
        let big = suc(suc(Term::var("x")));
        assert_eq!(kbo.compare(&big, &small), Some(Ordering::Greater));
    }
}
