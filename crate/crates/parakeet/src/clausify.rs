//! Clausification: from surface formulas to first-order clauses.
//!
//! The pipeline per formula is: negation normal form, outside-in
//! Skolemization (the free variables of a fact are implicitly universal and
//! keep their names, which the instantiation machinery depends on),
//! quantifier removal, lambda elimination (lifting or combinators), CNF by
//! distribution with a definitional fallback above 64 clauses, and finally
//! an arity-aware encoding into first-order terms. A symbol's emission arity
//! is the minimum number of arguments it is applied to anywhere in the
//! problem; applications beyond that arity, and all variable-headed
//! applications, go through the reserved binary symbol `app`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::clause::{Clause, Literal};
use crate::decode::DecodeContext;
use crate::infer::{FactEntry, FactTable};
use crate::lambda::{combinator_encode, Lifter, SuperDef};
use crate::parse::{LambdaMode, Problem};
use crate::surface::{Formula, SurfaceTerm};
use crate::term::{reserved, FreshVars, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClausifyError {
    /// Beta-eta normalization of an instantiated or Skolemized atom
    /// exceeded its budget.
    NormalizationBudget,
    /// A lambda or bound variable ended up heading an atom.
    BadAtom(String),
}

impl fmt::Display for ClausifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClausifyError::NormalizationBudget => {
                write!(f, "normalization budget exceeded during clausification")
            }
            ClausifyError::BadAtom(msg) => write!(f, "bad atom: {msg}"),
        }
    }
}

impl std::error::Error for ClausifyError {}

/// A Skolem symbol with the number of universal variables it depends on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkolemInfo {
    pub name: String,
    pub arity: usize,
}

/// The clauses of one fact, with the clause-variable to fact-variable map
/// for each clause (identity on preserved names, but recorded explicitly).
#[derive(Debug, Clone)]
pub struct ClausifiedFact {
    pub fact: String,
    pub clauses: Vec<(Clause, BTreeMap<String, String>)>,
    pub supercombinators: Vec<SuperDef>,
    pub skolems: Vec<SkolemInfo>,
}

/// A whole problem compiled to clauses.
#[derive(Debug)]
pub struct ClausifiedProblem {
    /// Fact clauses in input order, tagged with their fact name.
    pub facts: Vec<(String, Clause)>,
    pub goal_clauses: Vec<Clause>,
    /// Definitional clauses for supercombinators and combinators.
    pub defs: Vec<(String, Clause)>,
    pub fact_table: FactTable,
    pub decode_ctx: DecodeContext,
    pub supercombinators: Vec<SuperDef>,
    pub skolems: Vec<SkolemInfo>,
}

/// Literal over surface terms, the intermediate clause form.
type SClause = Vec<(bool, SAtom)>;

#[derive(Debug, Clone, PartialEq, Eq)]
enum SAtom {
    Pred(SurfaceTerm),
    Eq(SurfaceTerm, SurfaceTerm),
}

struct Clausifier {
    lambda_mode: LambdaMode,
    lifter: Lifter,
    skolem_counter: u64,
    defpred_counter: u64,
    fresh: FreshVars,
    skolems: Vec<SkolemInfo>,
}

const CNF_GUARD: usize = 64;

impl Clausifier {
    fn new(lambda_mode: LambdaMode) -> Clausifier {
        Clausifier {
            lambda_mode,
            lifter: Lifter::new(),
            skolem_counter: 0,
            defpred_counter: 0,
            fresh: FreshVars::new(),
            skolems: Vec::new(),
        }
    }

    /// NNF, Skolemization, quantifier removal, lambda elimination, CNF.
    fn clauses_of(&mut self, formula: &Formula) -> Result<Vec<SClause>, ClausifyError> {
        let frees = ordered_free_vars(formula);
        self.fresh.reserve_all(&frees);
        let nnf = nnf(formula, true);
        let mut scope = frees;
        let skolemized = self.skolemize(&nnf, &mut scope)?;
        let matrix = drop_universals(&skolemized);
        let matrix = self.eliminate_lambdas(&matrix);
        let mut out = Vec::new();
        self.cnf_guarded(&matrix, &mut out)?;
        Ok(out
            .into_iter()
            .filter(|clause| !sclause_tautological(clause))
            .map(dedupe_sclause)
            .collect())
    }

    fn skolemize(
        &mut self,
        formula: &Formula,
        scope: &mut Vec<String>,
    ) -> Result<Formula, ClausifyError> {
        Ok(match formula {
            Formula::Atom(_) | Formula::Eq(..) | Formula::Not(_) => formula.clone(),
            Formula::And(a, b) => {
                Formula::and(self.skolemize(a, scope)?, self.skolemize(b, scope)?)
            }
            Formula::Or(a, b) => Formula::or(self.skolemize(a, scope)?, self.skolemize(b, scope)?),
            Formula::Forall(x, body) => {
                let name = self.binder_name(x);
                let body = if name == *x {
                    body.as_ref().clone()
                } else {
                    body.instantiate(&[(x.clone(), SurfaceTerm::var(name.clone()))])
                        .map_err(|_| ClausifyError::NormalizationBudget)?
                };
                scope.push(name.clone());
                let inner = self.skolemize(&body, scope)?;
                scope.pop();
                Formula::forall(name, inner)
            }
            Formula::Exists(x, body) => {
                // The Skolem term depends on the universal variables in
                // scope that are free in the existential subformula.
                let frees = formula.free_vars();
                let deps: Vec<String> = scope
                    .iter()
                    .filter(|v| frees.contains(*v))
                    .cloned()
                    .collect();
                let name = format!("{}{}", reserved::SKOLEM_PREFIX, self.skolem_counter);
                self.skolem_counter += 1;
                self.skolems.push(SkolemInfo {
                    name: name.clone(),
                    arity: deps.len(),
                });
                let witness = SurfaceTerm::apps(
                    SurfaceTerm::constant(name),
                    deps.into_iter().map(SurfaceTerm::var),
                );
                let body = body
                    .instantiate(&[(x.clone(), witness)])
                    .map_err(|_| ClausifyError::NormalizationBudget)?;
                self.skolemize(&body, scope)?
            }
            Formula::Implies(..) | Formula::Iff(..) => {
                unreachable!("NNF removed implications")
            }
        })
    }

    fn binder_name(&mut self, base: &str) -> String {
        // Keep the original name when free, otherwise disambiguate.
        if self.fresh.is_taken(base) {
            self.fresh.fresh(base)
        } else {
            self.fresh.reserve(base);
            base.to_string()
        }
    }

    fn eliminate_lambdas(&mut self, formula: &Formula) -> Formula {
        let mode = self.lambda_mode;
        let lifter = &mut self.lifter;
        formula.map_terms(&mut |t| {
            if !t.contains_lambda() {
                return t.clone();
            }
            match mode {
                LambdaMode::Lifting => lifter.lift(t),
                LambdaMode::Combinators => combinator_encode(t),
            }
        })
    }

    /// CNF by distribution, introducing definitions for branches whose
    /// naive expansion would exceed the guard.
    fn cnf_guarded(
        &mut self,
        formula: &Formula,
        out: &mut Vec<SClause>,
    ) -> Result<(), ClausifyError> {
        let formula = if estimate_clauses(formula) > CNF_GUARD {
            self.introduce_definitions(formula, out)?
        } else {
            formula.clone()
        };
        out.extend(cnf(&formula)?);
        Ok(())
    }

    /// Splits oversized disjunction branches: a branch whose clause estimate
    /// stays large is replaced by a fresh predicate over its free variables,
    /// and `~d | branch` is clausified separately.
    fn introduce_definitions(
        &mut self,
        formula: &Formula,
        out: &mut Vec<SClause>,
    ) -> Result<Formula, ClausifyError> {
        Ok(match formula {
            Formula::And(a, b) => Formula::and(
                self.introduce_definitions(a, out)?,
                self.introduce_definitions(b, out)?,
            ),
            Formula::Or(a, b) => {
                let a = self.introduce_definitions(a, out)?;
                let b = self.introduce_definitions(b, out)?;
                let a = self.maybe_define(a, out)?;
                let b = self.maybe_define(b, out)?;
                Formula::or(a, b)
            }
            _ => formula.clone(),
        })
    }

    fn maybe_define(
        &mut self,
        branch: Formula,
        out: &mut Vec<SClause>,
    ) -> Result<Formula, ClausifyError> {
        if estimate_clauses(&branch) <= 8 {
            return Ok(branch);
        }
        let name = format!("{}p{}", reserved::SKOLEM_PREFIX, self.defpred_counter);
        self.defpred_counter += 1;
        let frees = ordered_free_vars(&branch);
        let atom = SurfaceTerm::apps(
            SurfaceTerm::constant(name),
            frees.into_iter().map(SurfaceTerm::var),
        );
        // d -> branch, i.e. ~d | branch, clausified on the side.
        let side = Formula::or(Formula::not(Formula::Atom(atom.clone())), branch);
        self.cnf_guarded(&side, out)?;
        Ok(Formula::Atom(atom))
    }
}

/// Negation normal form; `positive` tracks polarity.
fn nnf(formula: &Formula, positive: bool) -> Formula {
    match formula {
        Formula::Atom(_) | Formula::Eq(..) => {
            if positive {
                formula.clone()
            } else {
                Formula::not(formula.clone())
            }
        }
        Formula::Not(f) => nnf(f, !positive),
        Formula::And(a, b) => {
            if positive {
                Formula::and(nnf(a, true), nnf(b, true))
            } else {
                Formula::or(nnf(a, false), nnf(b, false))
            }
        }
        Formula::Or(a, b) => {
            if positive {
                Formula::or(nnf(a, true), nnf(b, true))
            } else {
                Formula::and(nnf(a, false), nnf(b, false))
            }
        }
        Formula::Implies(a, b) => {
            if positive {
                Formula::or(nnf(a, false), nnf(b, true))
            } else {
                Formula::and(nnf(a, true), nnf(b, false))
            }
        }
        Formula::Iff(a, b) => {
            if positive {
                Formula::and(
                    Formula::or(nnf(a, false), nnf(b, true)),
                    Formula::or(nnf(a, true), nnf(b, false)),
                )
            } else {
                Formula::or(
                    Formula::and(nnf(a, true), nnf(b, false)),
                    Formula::and(nnf(a, false), nnf(b, true)),
                )
            }
        }
        Formula::Forall(x, f) => {
            if positive {
                Formula::forall(x.clone(), nnf(f, true))
            } else {
                Formula::exists(x.clone(), nnf(f, false))
            }
        }
        Formula::Exists(x, f) => {
            if positive {
                Formula::exists(x.clone(), nnf(f, true))
            } else {
                Formula::forall(x.clone(), nnf(f, false))
            }
        }
    }
}

fn drop_universals(formula: &Formula) -> Formula {
    match formula {
        Formula::Forall(_, f) => drop_universals(f),
        Formula::And(a, b) => Formula::and(drop_universals(a), drop_universals(b)),
        Formula::Or(a, b) => Formula::or(drop_universals(a), drop_universals(b)),
        _ => formula.clone(),
    }
}

fn estimate_clauses(formula: &Formula) -> usize {
    match formula {
        Formula::And(a, b) => estimate_clauses(a).saturating_add(estimate_clauses(b)),
        Formula::Or(a, b) => estimate_clauses(a).saturating_mul(estimate_clauses(b)),
        _ => 1,
    }
}

/// Distribution CNF over an NNF, quantifier-free matrix.
fn cnf(formula: &Formula) -> Result<Vec<SClause>, ClausifyError> {
    Ok(match formula {
        Formula::Atom(t) => vec![vec![(true, SAtom::Pred(t.clone()))]],
        Formula::Eq(l, r) => vec![vec![(true, SAtom::Eq(l.clone(), r.clone()))]],
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom(t) => vec![vec![(false, SAtom::Pred(t.clone()))]],
            Formula::Eq(l, r) => vec![vec![(false, SAtom::Eq(l.clone(), r.clone()))]],
            _ => {
                return Err(ClausifyError::BadAtom(
                    "negation of a non-atom survived NNF".to_string(),
                ))
            }
        },
        Formula::And(a, b) => {
            let mut out = cnf(a)?;
            out.extend(cnf(b)?);
            out
        }
        Formula::Or(a, b) => {
            let left = cnf(a)?;
            let right = cnf(b)?;
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut clause = l.clone();
                    clause.extend(r.iter().cloned());
                    out.push(clause);
                }
            }
            out
        }
        _ => {
            return Err(ClausifyError::BadAtom(
                "quantifier survived into the matrix".to_string(),
            ))
        }
    })
}

fn dedupe_sclause(clause: SClause) -> SClause {
    let mut out: SClause = Vec::new();
    for lit in clause {
        if !out.contains(&lit) {
            out.push(lit);
        }
    }
    out
}

fn sclause_tautological(clause: &SClause) -> bool {
    clause.iter().any(|(pos, atom)| {
        *pos && clause.iter().any(|(p2, a2)| !*p2 && a2 == atom)
            || matches!(atom, SAtom::Eq(l, r) if *pos && l == r)
    })
}

/// Free variables in first-occurrence order.
fn ordered_free_vars(formula: &Formula) -> Vec<String> {
    fn term(t: &SurfaceTerm, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match t {
            SurfaceTerm::Var(v) => {
                if !bound.iter().any(|b| b == v) && !out.iter().any(|o| o == v) {
                    out.push(v.clone());
                }
            }
            SurfaceTerm::Const(_) => {}
            SurfaceTerm::App(f, a) => {
                term(f, bound, out);
                term(a, bound, out);
            }
            SurfaceTerm::Lam(x, body) => {
                bound.push(x.clone());
                term(body, bound, out);
                bound.pop();
            }
        }
    }
    fn go(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match f {
            Formula::Atom(t) => term(t, bound, out),
            Formula::Eq(l, r) => {
                term(l, bound, out);
                term(r, bound, out);
            }
            Formula::Not(inner) => go(inner, bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                go(a, bound, out);
                go(b, bound, out);
            }
            Formula::Forall(x, inner) | Formula::Exists(x, inner) => {
                bound.push(x.clone());
                go(inner, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(formula, &mut Vec::new(), &mut out);
    out
}

// ---------------------------------------------------------------------------
// First-order encoding.
// ---------------------------------------------------------------------------

/// Emission arities: the minimum applied arity of each constant across the
/// whole problem. Encoded symbols (combinators, supercombinators,
/// `undefined`) are always curried.
fn compute_arities<'a>(
    clauses: impl Iterator<Item = &'a SClause>,
    defs: &[SuperDef],
) -> BTreeMap<String, usize> {
    let mut arities: BTreeMap<String, usize> = BTreeMap::new();
    fn scan(term: &SurfaceTerm, arities: &mut BTreeMap<String, usize>) {
        let (head, args) = term.unfold_app();
        if let SurfaceTerm::Const(c) = head {
            let entry = arities.entry(c.clone()).or_insert(args.len());
            *entry = (*entry).min(args.len());
        }
        for arg in args {
            scan(arg, arities);
        }
        if let SurfaceTerm::Lam(_, body) = head {
            scan(body, arities);
        }
    }
    for clause in clauses {
        for (_, atom) in clause {
            match atom {
                SAtom::Pred(t) => {
                    // Skip the predicate head; scan argument terms.
                    let (_, args) = t.unfold_app();
                    for arg in args {
                        scan(arg, &mut arities);
                    }
                }
                SAtom::Eq(l, r) => {
                    scan(l, &mut arities);
                    scan(r, &mut arities);
                }
            }
        }
    }
    for def in defs {
        scan(&def.body, &mut arities);
    }
    for (name, arity) in arities.iter_mut() {
        if reserved::is_combinator(name)
            || reserved::is_supercombinator(name)
            || name == reserved::UNDEFINED
        {
            *arity = 0;
        }
    }
    arities
}

fn encode_term(term: &SurfaceTerm, arities: &BTreeMap<String, usize>) -> Term {
    let (head, args) = term.unfold_app();
    let encoded_args: Vec<Term> = args.iter().map(|a| encode_term(a, arities)).collect();
    match head {
        SurfaceTerm::Var(v) => encoded_args
            .into_iter()
            .fold(Term::var(v.clone()), |acc, arg| {
                Term::app(reserved::APP, vec![acc, arg])
            }),
        SurfaceTerm::Const(c) => {
            let arity = arities.get(c).copied().unwrap_or(0).min(encoded_args.len());
            let mut iter = encoded_args.into_iter();
            let direct: Vec<Term> = iter.by_ref().take(arity).collect();
            iter.fold(Term::app(c.clone(), direct), |acc, arg| {
                Term::app(reserved::APP, vec![acc, arg])
            })
        }
        SurfaceTerm::Lam(..) => unreachable!("lambdas are eliminated before encoding"),
        SurfaceTerm::App(..) => unreachable!("unfold_app returns a non-application head"),
    }
}

fn encode_atom(atom: &SAtom, arities: &BTreeMap<String, usize>) -> Result<Term, ClausifyError> {
    match atom {
        SAtom::Pred(t) => {
            let (head, args) = t.unfold_app();
            let SurfaceTerm::Const(p) = head else {
                return Err(ClausifyError::BadAtom(format!(
                    "atom head is not a predicate symbol: {t}"
                )));
            };
            let encoded: Vec<Term> = args.iter().map(|a| encode_term(a, arities)).collect();
            Ok(Term::app(p.clone(), encoded))
        }
        SAtom::Eq(l, r) => Ok(Term::app(
            reserved::EQ,
            vec![encode_term(l, arities), encode_term(r, arities)],
        )),
    }
}

fn encode_sclause(
    clause: &SClause,
    arities: &BTreeMap<String, usize>,
) -> Result<Clause, ClausifyError> {
    let mut literals = Vec::new();
    for (positive, atom) in clause {
        literals.push(Literal::new(*positive, encode_atom(atom, arities)?));
    }
    Ok(Clause::new(literals))
}

/// The app-curried definitional clause of a supercombinator.
fn supercombinator_clause(def: &SuperDef, arities: &BTreeMap<String, usize>) -> Clause {
    let lhs = def
        .params
        .iter()
        .fold(Term::constant(def.name.clone()), |acc, p| {
            Term::app(reserved::APP, vec![acc, Term::var(p.clone())])
        });
    let rhs = encode_term(&def.body, arities);
    Clause::new(vec![Literal::eq(lhs, rhs)])
}

/// The app-curried definitional clause of a bracket-abstraction combinator.
fn combinator_clause(name: &str) -> Clause {
    fn spine(head: &str, vars: &[&str]) -> Term {
        vars.iter().fold(Term::constant(head), |acc, v| {
            Term::app(reserved::APP, vec![acc, Term::var(v.to_string())])
        })
    }
    fn app2(f: Term, x: Term) -> Term {
        Term::app(reserved::APP, vec![f, x])
    }
    let eq = |l: Term, r: Term| Clause::new(vec![Literal::eq(l, r)]);
    match name {
        "I" => eq(spine("I", &["x"]), Term::var("x")),
        "K" => eq(spine("K", &["a", "b"]), Term::var("a")),
        "S" => eq(
            spine("S", &["f", "g", "x"]),
            app2(
                app2(Term::var("f"), Term::var("x")),
                app2(Term::var("g"), Term::var("x")),
            ),
        ),
        "B" => eq(
            spine("B", &["f", "g", "x"]),
            app2(Term::var("f"), app2(Term::var("g"), Term::var("x"))),
        ),
        "C" => eq(
            spine("C", &["f", "g", "x"]),
            app2(app2(Term::var("f"), Term::var("x")), Term::var("g")),
        ),
        other => unreachable!("not a combinator: {other}"),
    }
}

/// Clausifies a whole problem with one shared lifter and Skolem counter.
pub fn clausify_problem(
    problem: &Problem,
    lambda_mode: LambdaMode,
    instantiate_undefined: bool,
) -> Result<ClausifiedProblem, ClausifyError> {
    let mut clausifier = Clausifier::new(lambda_mode);
    // Keep quantifier renaming clear of goal-fixed constant names too.
    for name in &problem.fixed_consts {
        clausifier.fresh.reserve(name);
    }

    let mut fact_sclauses: Vec<(String, BTreeSet<String>, Vec<SClause>)> = Vec::new();
    for (name, formula) in &problem.facts {
        let frees = formula.free_vars();
        let clauses = clausifier.clauses_of(formula)?;
        fact_sclauses.push((name.clone(), frees, clauses));
    }
    let goal_sclauses = clausifier.clauses_of(&Formula::not(problem.goal.clone()))?;

    let defs = clausifier.lifter.defs.clone();
    let arities = compute_arities(
        fact_sclauses
            .iter()
            .flat_map(|(_, _, cs)| cs.iter())
            .chain(goal_sclauses.iter()),
        &defs,
    );

    let mut facts = Vec::new();
    let mut fact_table = FactTable::new();
    for (name, frees, sclauses) in &fact_sclauses {
        for sclause in sclauses {
            let clause = encode_sclause(sclause, &arities)?;
            let var_map: BTreeMap<String, String> = clause
                .vars()
                .into_iter()
                .filter(|v| frees.contains(v))
                .map(|v| (v.clone(), v))
                .collect();
            fact_table.insert(
                clause.clone(),
                FactEntry {
                    fact: name.clone(),
                    var_map,
                },
            );
            facts.push((name.clone(), clause));
        }
    }
    let goal_clauses: Vec<Clause> = goal_sclauses
        .iter()
        .map(|c| encode_sclause(c, &arities))
        .collect::<Result<_, _>>()?;

    let mut def_clauses: Vec<(String, Clause)> = defs
        .iter()
        .map(|def| (def.name.clone(), supercombinator_clause(def, &arities)))
        .collect();
    // Emit definitions for the combinators that actually occur.
    let mut used_combinators = BTreeSet::new();
    for (_, clause) in facts.iter().chain(def_clauses.iter()) {
        collect_combinators(clause, &mut used_combinators);
    }
    for clause in &goal_clauses {
        collect_combinators(clause, &mut used_combinators);
    }
    for name in &used_combinators {
        def_clauses.push((name.clone(), combinator_clause(name)));
    }

    let mut decode_ctx = DecodeContext::new(instantiate_undefined);
    for clause in facts
        .iter()
        .map(|(_, c)| c)
        .chain(goal_clauses.iter())
        .chain(def_clauses.iter().map(|(_, c)| c))
    {
        for literal in clause.iter() {
            register_symbols(&literal.atom, &mut decode_ctx);
        }
    }
    for def in &defs {
        decode_ctx.register_supercombinator(def.name.clone(), def.as_lambda());
    }

    Ok(ClausifiedProblem {
        facts,
        goal_clauses,
        defs: def_clauses,
        fact_table,
        decode_ctx,
        supercombinators: defs,
        skolems: clausifier.skolems,
    })
}

fn collect_combinators(clause: &Clause, out: &mut BTreeSet<String>) {
    fn go(term: &Term, out: &mut BTreeSet<String>) {
        if let Term::App(sym, args) = term {
            if reserved::is_combinator(sym) {
                out.insert(sym.clone());
            }
            for arg in args {
                go(arg, out);
            }
        }
    }
    for literal in clause.iter() {
        go(&literal.atom, out);
    }
}

fn register_symbols(term: &Term, ctx: &mut DecodeContext) {
    if let Term::App(sym, args) = term {
        ctx.register_symbol(sym.clone());
        for arg in args {
            register_symbols(arg, ctx);
        }
    }
}

/// Compiles a single surface term to a first-order term, with a decode
/// context that can translate it back. Lambdas are eliminated per the
/// requested mode; arities are computed from this term alone.
pub fn compile_term(
    term: &SurfaceTerm,
    lambda_mode: LambdaMode,
) -> Result<(Term, DecodeContext), ClausifyError> {
    let mut lifter = Lifter::new();
    let encoded = if term.contains_lambda() {
        match lambda_mode {
            LambdaMode::Lifting => lifter.lift(term),
            LambdaMode::Combinators => combinator_encode(term),
        }
    } else {
        term.clone()
    };
    let pseudo_clause: Vec<SClause> =
        vec![vec![(true, SAtom::Eq(encoded.clone(), encoded.clone()))]];
    let arities = compute_arities(pseudo_clause.iter(), &lifter.defs);
    let fo = encode_term(&encoded, &arities);
    let mut ctx = DecodeContext::new(true);
    register_symbols(&fo, &mut ctx);
    for def in &lifter.defs {
        // Definition bodies may mention symbols absent from the occurrence.
        let def_fo = encode_term(&def.body, &arities);
        register_symbols(&def_fo, &mut ctx);
        ctx.register_supercombinator(def.name.clone(), def.as_lambda());
    }
    Ok((fo, ctx))
}

/// Clausifies a single fact in isolation (arities computed from the fact
/// alone). The problem pipeline uses [`clausify_problem`] instead so that
/// arities are consistent across all formulas.
pub fn clausify_fact(
    name: &str,
    formula: &Formula,
    lambda_mode: LambdaMode,
) -> Result<ClausifiedFact, ClausifyError> {
    let mut clausifier = Clausifier::new(lambda_mode);
    let frees = formula.free_vars();
    let sclauses = clausifier.clauses_of(formula)?;
    let defs = clausifier.lifter.defs.clone();
    let arities = compute_arities(sclauses.iter(), &defs);
    let mut clauses = Vec::new();
    for sclause in &sclauses {
        let clause = encode_sclause(sclause, &arities)?;
        let var_map: BTreeMap<String, String> = clause
            .vars()
            .into_iter()
            .filter(|v| frees.contains(v))
            .map(|v| (v.clone(), v))
            .collect();
        clauses.push((clause, var_map));
    }
    Ok(ClausifiedFact {
        fact: name.to_string(),
        clauses,
        supercombinators: defs,
        skolems: clausifier.skolems,
    })
}
