//! Lambda elimination: lifting to supercombinators, or bracket abstraction
//! into the S K B C I combinators.
//!
//! Both run on surface terms after quantifier removal, producing lambda-free
//! terms. Lifting replaces each maximal lambda group by a fresh `ll%`
//! constant applied to the group's free variables and records a definition;
//! alpha-equivalent abstractions share one supercombinator.

use std::collections::BTreeMap;

use crate::surface::{canonicalize_binders, SurfaceTerm};
use crate::term::reserved;

/// A supercombinator definition `name p1 ... pn = body` (body lambda-free).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperDef {
    pub name: String,
    pub params: Vec<String>,
    pub body: SurfaceTerm,
}

impl SuperDef {
    /// The definition as a lambda term, for the decoder.
    pub fn as_lambda(&self) -> SurfaceTerm {
        self.params
            .iter()
            .rev()
            .fold(self.body.clone(), |acc, p| SurfaceTerm::lam(p.clone(), acc))
    }
}

#[derive(Debug, Default)]
pub struct Lifter {
    pub defs: Vec<SuperDef>,
    cache: BTreeMap<SurfaceTerm, String>,
    counter: u64,
}

impl Lifter {
    pub fn new() -> Lifter {
        Lifter::default()
    }

    /// Replaces every lambda by a supercombinator applied to its free
    /// variables. Inner lambdas are lifted first.
    pub fn lift(&mut self, term: &SurfaceTerm) -> SurfaceTerm {
        match term {
            SurfaceTerm::Var(_) | SurfaceTerm::Const(_) => term.clone(),
            SurfaceTerm::App(f, a) => SurfaceTerm::app(self.lift(f), self.lift(a)),
            SurfaceTerm::Lam(..) => {
                // Collect the maximal leading binder group.
                let mut binders = Vec::new();
                let mut body = term;
                while let SurfaceTerm::Lam(x, inner) = body {
                    binders.push(x.clone());
                    body = inner;
                }
                let body = self.lift(body);
                let free = ordered_free_vars(term);
                let closed = free
                    .iter()
                    .chain(binders.iter())
                    .rev()
                    .fold(body.clone(), |acc, p| SurfaceTerm::lam(p.clone(), acc));
                let key = canonicalize_binders(&closed);
                let name = match self.cache.get(&key) {
                    Some(name) => name.clone(),
                    None => {
                        let name = format!("{}{}", reserved::SUPERCOMB_PREFIX, self.counter);
                        self.counter += 1;
                        self.cache.insert(key, name.clone());
                        let mut params = free.clone();
                        params.extend(binders.iter().cloned());
                        self.defs.push(SuperDef {
                            name: name.clone(),
                            params,
                            body,
                        });
                        name
                    }
                };
                SurfaceTerm::apps(
                    SurfaceTerm::constant(name),
                    free.into_iter().map(SurfaceTerm::var),
                )
            }
        }
    }
}

/// Free variables in order of first occurrence.
fn ordered_free_vars(term: &SurfaceTerm) -> Vec<String> {
    fn go(term: &SurfaceTerm, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match term {
            SurfaceTerm::Var(v) => {
                if !bound.iter().any(|b| b == v) && !out.iter().any(|o| o == v) {
                    out.push(v.clone());
                }
            }
            SurfaceTerm::Const(_) => {}
            SurfaceTerm::App(f, a) => {
                go(f, bound, out);
                go(a, bound, out);
            }
            SurfaceTerm::Lam(x, body) => {
                bound.push(x.clone());
                go(body, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(term, &mut Vec::new(), &mut out);
    out
}

/// Standard bracket abstraction into S, K, B, C, I.
pub fn combinator_encode(term: &SurfaceTerm) -> SurfaceTerm {
    match term {
        SurfaceTerm::Var(_) | SurfaceTerm::Const(_) => term.clone(),
        SurfaceTerm::App(f, a) => SurfaceTerm::app(combinator_encode(f), combinator_encode(a)),
        SurfaceTerm::Lam(x, body) => {
            let body = combinator_encode(body);
            abstract_var(x, &body)
        }
    }
}

fn abstract_var(x: &str, body: &SurfaceTerm) -> SurfaceTerm {
    let k = || SurfaceTerm::constant("K");
    match body {
        SurfaceTerm::Var(v) if v == x => SurfaceTerm::constant("I"),
        _ if !body.free_vars().contains(x) => SurfaceTerm::app(k(), body.clone()),
        SurfaceTerm::App(f, a) => {
            let x_in_f = f.free_vars().contains(x);
            match a.as_ref() {
                SurfaceTerm::Var(v) if v == x && !x_in_f => f.as_ref().clone(),
                _ => {
                    let x_in_a = a.free_vars().contains(x);
                    if !x_in_f {
                        SurfaceTerm::apps(
                            SurfaceTerm::constant("B"),
                            [f.as_ref().clone(), abstract_var(x, a)],
                        )
                    } else if !x_in_a {
                        SurfaceTerm::apps(
                            SurfaceTerm::constant("C"),
                            [abstract_var(x, f), a.as_ref().clone()],
                        )
                    } else {
                        SurfaceTerm::apps(
                            SurfaceTerm::constant("S"),
                            [abstract_var(x, f), abstract_var(x, a)],
                        )
                    }
                }
            }
        }
        SurfaceTerm::Lam(..) => unreachable!("inner lambdas are abstracted first"),
        // Var(not x) and Const are covered by the free-variable guard.
        _ => SurfaceTerm::app(k(), body.clone()),
    }
}
