//! The surface language: curried terms with lambda abstraction, and
//! formulas over them.
//!
//! Surface terms are compared up to alpha-equivalence where it matters
//! (merging, tests); display renames nothing. Beta-eta normalization is
//! budgeted since decoded combinator terms are small but inputs are not
//! trusted to be.

use std::collections::BTreeSet;
use std::fmt;

use crate::term::reserved;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SurfaceTerm {
    Var(String),
    Const(String),
    App(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Lam(String, Box<SurfaceTerm>),
}

impl SurfaceTerm {
    pub fn var(name: impl Into<String>) -> SurfaceTerm {
        SurfaceTerm::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> SurfaceTerm {
        SurfaceTerm::Const(name.into())
    }

    pub fn app(fun: SurfaceTerm, arg: SurfaceTerm) -> SurfaceTerm {
        SurfaceTerm::App(Box::new(fun), Box::new(arg))
    }

    pub fn lam(binder: impl Into<String>, body: SurfaceTerm) -> SurfaceTerm {
        SurfaceTerm::Lam(binder.into(), Box::new(body))
    }

    /// Builds `f a1 ... an`.
    pub fn apps(fun: SurfaceTerm, args: impl IntoIterator<Item = SurfaceTerm>) -> SurfaceTerm {
        args.into_iter().fold(fun, SurfaceTerm::app)
    }

    /// Splits `f a1 ... an` into `(f, [a1, ..., an])`.
    pub fn unfold_app(&self) -> (&SurfaceTerm, Vec<&SurfaceTerm>) {
        let mut args = Vec::new();
        let mut head = self;
        while let SurfaceTerm::App(f, a) = head {
            args.push(a.as_ref());
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            SurfaceTerm::Var(v) => {
                if !bound.iter().any(|b| b == v) {
                    out.insert(v.clone());
                }
            }
            SurfaceTerm::Const(_) => {}
            SurfaceTerm::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            SurfaceTerm::Lam(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn contains_lambda(&self) -> bool {
        match self {
            SurfaceTerm::Var(_) | SurfaceTerm::Const(_) => false,
            SurfaceTerm::App(f, a) => f.contains_lambda() || a.contains_lambda(),
            SurfaceTerm::Lam(..) => true,
        }
    }

    /// All constant names occurring in the term.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn go(t: &SurfaceTerm, out: &mut BTreeSet<String>) {
            match t {
                SurfaceTerm::Var(_) => {}
                SurfaceTerm::Const(c) => {
                    out.insert(c.clone());
                }
                SurfaceTerm::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
                SurfaceTerm::Lam(_, b) => go(b, out),
            }
        }
        go(self, &mut out);
        out
    }

    /// Capture-avoiding substitution of a free variable.
    pub fn substitute(&self, var: &str, replacement: &SurfaceTerm) -> SurfaceTerm {
        match self {
            SurfaceTerm::Var(v) => {
                if v == var {
                    replacement.clone()
                } else {
                    self.clone()
                }
            }
            SurfaceTerm::Const(_) => self.clone(),
            SurfaceTerm::App(f, a) => SurfaceTerm::app(
                f.substitute(var, replacement),
                a.substitute(var, replacement),
            ),
            SurfaceTerm::Lam(x, body) => {
                if x == var {
                    self.clone()
                } else if replacement.free_vars().contains(x) && body.free_vars().contains(var) {
                    let taken: BTreeSet<String> = body
                        .free_vars()
                        .into_iter()
                        .chain(replacement.free_vars())
                        .collect();
                    let fresh = fresh_name(x, &taken);
                    let renamed = body.substitute(x, &SurfaceTerm::var(fresh.clone()));
                    SurfaceTerm::lam(fresh, renamed.substitute(var, replacement))
                } else {
                    SurfaceTerm::lam(x.clone(), body.substitute(var, replacement))
                }
            }
        }
    }
}

fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    let mut candidate = format!("{base}'");
    while taken.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// Alpha-equivalence via a parallel walk with binder stacks.
pub fn alpha_eq(a: &SurfaceTerm, b: &SurfaceTerm) -> bool {
    fn go(a: &SurfaceTerm, b: &SurfaceTerm, ba: &mut Vec<String>, bb: &mut Vec<String>) -> bool {
        match (a, b) {
            (SurfaceTerm::Var(x), SurfaceTerm::Var(y)) => {
                let ia = ba.iter().rposition(|v| v == x);
                let ib = bb.iter().rposition(|v| v == y);
                match (ia, ib) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (SurfaceTerm::Const(x), SurfaceTerm::Const(y)) => x == y,
            (SurfaceTerm::App(f1, a1), SurfaceTerm::App(f2, a2)) => {
                go(f1, f2, ba, bb) && go(a1, a2, ba, bb)
            }
            (SurfaceTerm::Lam(x, b1), SurfaceTerm::Lam(y, b2)) => {
                ba.push(x.clone());
                bb.push(y.clone());
                let ok = go(b1, b2, ba, bb);
                ba.pop();
                bb.pop();
                ok
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new(), &mut Vec::new())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizeBudgetExceeded;

impl fmt::Display for NormalizeBudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "beta-eta normalization exceeded its step budget")
    }
}

impl std::error::Error for NormalizeBudgetExceeded {}

pub const NORMALIZE_BUDGET: u64 = 10_000;

/// Beta-eta normal form: beta-reduce to normal form, then eta-contract to a
/// fixpoint, within a step budget.
pub fn beta_eta_normalize(
    term: &SurfaceTerm,
    budget: u64,
) -> Result<SurfaceTerm, NormalizeBudgetExceeded> {
    let mut steps = 0u64;
    let mut current = term.clone();
    loop {
        let reduced = beta_step(&current, &mut steps, budget)?;
        let contracted = eta_contract(&reduced);
        if contracted == current {
            return Ok(contracted);
        }
        steps += 1;
        if steps > budget {
            return Err(NormalizeBudgetExceeded);
        }
        current = contracted;
    }
}

/// Leftmost-outermost beta reduction to beta-normal form.
fn beta_step(
    term: &SurfaceTerm,
    steps: &mut u64,
    budget: u64,
) -> Result<SurfaceTerm, NormalizeBudgetExceeded> {
    *steps += 1;
    if *steps > budget {
        return Err(NormalizeBudgetExceeded);
    }
    Ok(match term {
        SurfaceTerm::Var(_) | SurfaceTerm::Const(_) => term.clone(),
        SurfaceTerm::Lam(x, body) => SurfaceTerm::lam(x.clone(), beta_step(body, steps, budget)?),
        SurfaceTerm::App(f, a) => {
            let f = beta_step(f, steps, budget)?;
            if let SurfaceTerm::Lam(x, body) = f {
                let contracted = body.substitute(&x, a);
                beta_step(&contracted, steps, budget)?
            } else {
                SurfaceTerm::app(f, beta_step(a, steps, budget)?)
            }
        }
    })
}

/// Bottom-up eta contraction: `\x. e x` becomes `e` when `x` is not free in `e`.
fn eta_contract(term: &SurfaceTerm) -> SurfaceTerm {
    match term {
        SurfaceTerm::Var(_) | SurfaceTerm::Const(_) => term.clone(),
        SurfaceTerm::App(f, a) => SurfaceTerm::app(eta_contract(f), eta_contract(a)),
        SurfaceTerm::Lam(x, body) => {
            let body = eta_contract(body);
            if let SurfaceTerm::App(f, a) = &body {
                if matches!(a.as_ref(), SurfaceTerm::Var(v) if v == x) && !f.free_vars().contains(x)
                {
                    return f.as_ref().clone();
                }
            }
            SurfaceTerm::lam(x.clone(), body)
        }
    }
}

/// Renames every binder to the first alphabet name (`a`, `b`, ..., `a1`, ...)
/// not free in its body and not shadowing an enclosing binder.
pub fn canonicalize_binders(term: &SurfaceTerm) -> SurfaceTerm {
    fn alphabet(taken: &BTreeSet<String>) -> String {
        for c in 'a'..='z' {
            let name = c.to_string();
            if !taken.contains(&name) {
                return name;
            }
        }
        let mut i = 1;
        loop {
            let name = format!("a{i}");
            if !taken.contains(&name) {
                return name;
            }
            i += 1;
        }
    }
    fn go(term: &SurfaceTerm, taken: &BTreeSet<String>) -> SurfaceTerm {
        match term {
            SurfaceTerm::Var(_) | SurfaceTerm::Const(_) => term.clone(),
            SurfaceTerm::App(f, a) => SurfaceTerm::app(go(f, taken), go(a, taken)),
            SurfaceTerm::Lam(x, body) => {
                let mut body_taken: BTreeSet<String> = taken.clone();
                let mut shadowed = body.free_vars();
                shadowed.remove(x);
                body_taken.extend(shadowed);
                let fresh = alphabet(&body_taken);
                let renamed = if fresh == *x {
                    body.as_ref().clone()
                } else {
                    body.substitute(x, &SurfaceTerm::var(fresh.clone()))
                };
                let mut inner_taken = taken.clone();
                inner_taken.insert(fresh.clone());
                SurfaceTerm::lam(fresh, go(&renamed, &inner_taken))
            }
        }
    }
    go(term, &BTreeSet::new())
}

impl fmt::Display for SurfaceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, f, false)
    }
}

fn write_term(term: &SurfaceTerm, f: &mut fmt::Formatter<'_>, atom_position: bool) -> fmt::Result {
    match term {
        SurfaceTerm::Var(v) => {
            if reserved::is_wildcard(v) {
                write!(f, "_")
            } else {
                write!(f, "{v}")
            }
        }
        SurfaceTerm::Const(c) => write!(f, "{c}"),
        SurfaceTerm::App(fun, arg) => {
            if atom_position {
                write!(f, "(")?;
            }
            write_term(fun, f, matches!(fun.as_ref(), SurfaceTerm::Lam(..)))?;
            write!(f, " ")?;
            write_term(
                arg,
                f,
                matches!(arg.as_ref(), SurfaceTerm::App(..) | SurfaceTerm::Lam(..)),
            )?;
            if atom_position {
                write!(f, ")")?;
            }
            Ok(())
        }
        SurfaceTerm::Lam(x, body) => {
            if atom_position {
                write!(f, "(")?;
            }
            write!(f, "\\{x}. {body}")?;
            if atom_position {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

/// Formulas over surface terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom(SurfaceTerm),
    Eq(SurfaceTerm, SurfaceTerm),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(x: impl Into<String>, f: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(f))
    }

    pub fn exists(x: impl Into<String>, f: Formula) -> Formula {
        Formula::Exists(x.into(), Box::new(f))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(t) => {
                for v in t.free_vars() {
                    if !bound.iter().any(|b| *b == v) {
                        out.insert(v);
                    }
                }
            }
            Formula::Eq(l, r) => {
                for t in [l, r] {
                    for v in t.free_vars() {
                        if !bound.iter().any(|b| *b == v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, f) | Formula::Exists(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Applies a term-level map to every atom.
    pub fn map_terms(&self, f: &mut impl FnMut(&SurfaceTerm) -> SurfaceTerm) -> Formula {
        match self {
            Formula::Atom(t) => Formula::Atom(f(t)),
            Formula::Eq(l, r) => Formula::Eq(f(l), f(r)),
            Formula::Not(inner) => Formula::not(inner.map_terms(f)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_terms(f), b.map_terms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_terms(f), b.map_terms(f)),
            Formula::Forall(x, inner) => Formula::forall(x.clone(), inner.map_terms(f)),
            Formula::Exists(x, inner) => Formula::exists(x.clone(), inner.map_terms(f)),
        }
    }

    /// Capture-avoiding substitution of free formula variables, followed by
    /// beta-eta normalization of every atom. Quantifier binders shadow.
    pub fn instantiate(
        &self,
        bindings: &[(String, SurfaceTerm)],
    ) -> Result<Formula, NormalizeBudgetExceeded> {
        fn subst_terms(
            term: &SurfaceTerm,
            bindings: &[(String, SurfaceTerm)],
        ) -> Result<SurfaceTerm, NormalizeBudgetExceeded> {
            let mut out = term.clone();
            for (var, replacement) in bindings {
                out = out.substitute(var, replacement);
            }
            beta_eta_normalize(&out, NORMALIZE_BUDGET)
        }
        fn go(
            formula: &Formula,
            bindings: &[(String, SurfaceTerm)],
        ) -> Result<Formula, NormalizeBudgetExceeded> {
            Ok(match formula {
                Formula::Atom(t) => Formula::Atom(subst_terms(t, bindings)?),
                Formula::Eq(l, r) => {
                    Formula::Eq(subst_terms(l, bindings)?, subst_terms(r, bindings)?)
                }
                Formula::Not(f) => Formula::not(go(f, bindings)?),
                Formula::And(a, b) => Formula::and(go(a, bindings)?, go(b, bindings)?),
                Formula::Or(a, b) => Formula::or(go(a, bindings)?, go(b, bindings)?),
                Formula::Implies(a, b) => Formula::implies(go(a, bindings)?, go(b, bindings)?),
                Formula::Iff(a, b) => Formula::iff(go(a, bindings)?, go(b, bindings)?),
                Formula::Forall(x, f) => {
                    let inner: Vec<(String, SurfaceTerm)> =
                        bindings.iter().filter(|(v, _)| v != x).cloned().collect();
                    Formula::forall(x.clone(), go(f, &inner)?)
                }
                Formula::Exists(x, f) => {
                    let inner: Vec<(String, SurfaceTerm)> =
                        bindings.iter().filter(|(v, _)| v != x).cloned().collect();
                    Formula::exists(x.clone(), go(f, &inner)?)
                }
            })
        }
        go(self, bindings)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f, 0)
    }
}

fn write_formula(formula: &Formula, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
    // Precedence: Iff/quantifiers 1, Implies 2, Or 3, And 4, Eq 5, Not 6.
    macro_rules! group {
        ($level:expr, $body:block) => {{
            let parens = prec > $level;
            if parens {
                write!(f, "(")?;
            }
            $body
            if parens {
                write!(f, ")")?;
            }
            Ok(())
        }};
    }
    match formula {
        Formula::Atom(t) => match t {
            SurfaceTerm::App(..) | SurfaceTerm::Lam(..) if prec > 6 => write!(f, "({t})"),
            _ => write!(f, "{t}"),
        },
        Formula::Eq(l, r) => group!(5, {
            write_eq_side(l, f)?;
            write!(f, " = ")?;
            write_eq_side(r, f)?;
        }),
        Formula::Not(inner) => {
            write!(f, "~")?;
            write_formula(inner, f, 7)
        }
        Formula::And(a, b) => group!(4, {
            write_formula(a, f, 5)?;
            write!(f, " & ")?;
            write_formula(b, f, 4)?;
        }),
        Formula::Or(a, b) => group!(3, {
            write_formula(a, f, 4)?;
            write!(f, " | ")?;
            write_formula(b, f, 3)?;
        }),
        Formula::Implies(a, b) => group!(2, {
            write_formula(a, f, 3)?;
            write!(f, " -> ")?;
            write_formula(b, f, 2)?;
        }),
        Formula::Iff(a, b) => group!(1, {
            write_formula(a, f, 2)?;
            write!(f, " <-> ")?;
            write_formula(b, f, 1)?;
        }),
        Formula::Forall(x, inner) => group!(1, {
            write!(f, "!{x}. ")?;
            write_formula(inner, f, 1)?;
        }),
        Formula::Exists(x, inner) => group!(1, {
            write!(f, "?{x}. ")?;
            write_formula(inner, f, 1)?;
        }),
    }
}

fn write_eq_side(t: &SurfaceTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        SurfaceTerm::Lam(..) => write!(f, "({t})"),
        _ => write!(f, "{t}"),
    }
}
