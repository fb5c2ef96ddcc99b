//! A given-clause saturation loop performing ordered resolution and ordered
//! paramodulation.
//!
//! The search works on plain clauses, but every successful inference is
//! recorded as a composition of the kernel rules: a `Subst` on each premise
//! (the unifier restricted to that premise's variables, after renaming
//! apart), followed by a `Resolve`; paramodulation is additionally routed
//! through an `Equality` node, plus a `Refl`/`Resolve` pair when an equation
//! has to be flipped or removed. The outcome of a successful search is a
//! [`Proof`] that [`crate::proof::check_proof`] accepts.
//!
//! Clause selection is oldest-dominant: batches of freshly generated
//! clauses are enqueued in ascending size order and picked oldest-first,
//! with every sixth pick taking the smallest passive clause instead. The
//! oldest-first backbone keeps small refutations in their natural shape;
//! the size picks pull short clauses past long chaining junk.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::rc::Rc;

use crate::clause::{Clause, Literal, Path};
use crate::kbo::Kbo;
use crate::proof::{derive, AxiomSource, Proof, ProofNode, Rule};
use crate::term::{reserved, FreshVars, Substitution, Term};
use crate::unify::mgu;

/// Resource bounds for one search.
#[derive(Debug, Clone)]
pub struct ProverLimits {
    pub max_generated_clauses: u64,
    pub max_seconds: f64,
    /// Inject the extensionality axiom before the search starts.
    pub use_ext: bool,
    /// Seed for breaking ties between equally sized clauses; 0 keeps plain
    /// generation order.
    pub tie_seed: u64,
}

impl Default for ProverLimits {
    fn default() -> ProverLimits {
        ProverLimits {
            max_generated_clauses: 10_000,
            max_seconds: 10.0,
            use_ext: false,
            tie_seed: 0,
        }
    }
}

/// Counters reported by every search.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SearchStats {
    pub generated: u64,
    pub kept: u64,
    pub elapsed: f64,
}

#[derive(Debug, Clone)]
pub enum ProverOutcome {
    Refutation(Proof, SearchStats),
    Saturated(SearchStats),
    ResourceOut(SearchStats),
}

impl ProverOutcome {
    pub fn stats(&self) -> &SearchStats {
        match self {
            ProverOutcome::Refutation(_, stats) => stats,
            ProverOutcome::Saturated(stats) => stats,
            ProverOutcome::ResourceOut(stats) => stats,
        }
    }

    pub fn proof(&self) -> Option<&Proof> {
        match self {
            ProverOutcome::Refutation(proof, _) => Some(proof),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProverError {
    ArityClash {
        symbol: String,
        first: usize,
        second: usize,
    },
}

impl std::fmt::Display for ProverError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProverError::ArityClash {
                symbol,
                first,
                second,
            } => write!(
                f,
                "symbol '{symbol}' is used with arities {first} and {second}"
            ),
        }
    }
}

impl std::error::Error for ProverError {}

/// Wall clock for search limits. Bare wasm has no monotonic clock, so there
/// the elapsed time stays 0 and only the clause budget limits the search.
#[derive(Debug, Clone, Copy)]
pub struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    pub fn start() -> Stopwatch {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    #[cfg(not(target_arch = "wasm32"))]
    pub fn elapsed_secs(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    #[cfg(target_arch = "wasm32")]
    pub fn elapsed_secs(&self) -> f64 {
        0.0
    }
}

/// The clausified extensionality axiom: functions that agree on a fresh
/// Skolem argument are equal.
pub fn ext_clause() -> Clause {
    let f = Term::var("f");
    let g = Term::var("g");
    let witness = Term::app(
        format!("{}ext", reserved::SKOLEM_PREFIX),
        vec![f.clone(), g.clone()],
    );
    Clause::new(vec![
        Literal::neq(
            Term::app(reserved::APP, vec![f.clone(), witness.clone()]),
            Term::app(reserved::APP, vec![g.clone(), witness]),
        ),
        Literal::eq(f, g),
    ])
}

/// Appends the extensionality axiom under its reserved source.
pub fn inject_ext(mut axioms: Vec<(AxiomSource, Clause)>) -> Vec<(AxiomSource, Clause)> {
    axioms.push((AxiomSource::Ext, ext_clause()));
    axioms
}

/// Checks that every symbol occurs with a single arity across all clauses.
fn check_arities<'a>(clauses: impl Iterator<Item = &'a Clause>) -> Result<(), ProverError> {
    let mut arities: BTreeMap<String, usize> = BTreeMap::new();
    fn visit(term: &Term, arities: &mut BTreeMap<String, usize>) -> Result<(), ProverError> {
        if let Term::App(sym, args) = term {
            match arities.get(sym) {
                Some(&known) if known != args.len() => {
                    return Err(ProverError::ArityClash {
                        symbol: sym.clone(),
                        first: known,
                        second: args.len(),
                    });
                }
                Some(_) => {}
                None => {
                    arities.insert(sym.clone(), args.len());
                }
            }
            for arg in args {
                visit(arg, arities)?;
            }
        }
        Ok(())
    }
    for clause in clauses {
        for literal in clause.iter() {
            visit(&literal.atom, &mut arities)?;
        }
    }
    Ok(())
}

#[derive(Clone)]
struct Entry {
    id: u64,
    clause: Clause,
    node: Rc<ProofNode>,
}

struct Search {
    kbo: Kbo,
    fresh: FreshVars,
    active: Vec<Entry>,
    passive: VecDeque<Entry>,
    picks: u64,
    registry: BTreeMap<Clause, AxiomSource>,
    next_id: u64,
    generated: u64,
    kept: u64,
    limits: ProverLimits,
    watch: Stopwatch,
}

enum LoopEvent {
    Refuted(Rc<ProofNode>),
    OutOfBudget,
}

/// Runs the saturation loop on the given axioms and negated-goal clauses.
pub fn prove(
    axioms: &[(AxiomSource, Clause)],
    goal_clauses: &[Clause],
    limits: &ProverLimits,
) -> Result<ProverOutcome, ProverError> {
    let mut inputs: Vec<(AxiomSource, Clause)> = axioms.to_vec();
    if limits.use_ext && !inputs.iter().any(|(s, _)| matches!(s, AxiomSource::Ext)) {
        inputs = inject_ext(inputs);
    }
    for goal in goal_clauses {
        inputs.push((AxiomSource::Goal, goal.clone()));
    }
    check_arities(inputs.iter().map(|(_, c)| c))?;

    let kbo = Kbo::from_clauses(inputs.iter().map(|(_, c)| c));
    let mut fresh = FreshVars::new();
    for (_, clause) in &inputs {
        fresh.reserve_all(&clause.vars());
    }

    let mut search = Search {
        kbo,
        fresh,
        active: Vec::new(),
        passive: VecDeque::new(),
        picks: 0,
        registry: BTreeMap::new(),
        next_id: 0,
        generated: 0,
        kept: 0,
        limits: limits.clone(),
        watch: Stopwatch::start(),
    };

    let mut refuted_on_input = None;
    let mut seen_inputs: BTreeSet<Clause> = BTreeSet::new();
    for (source, clause) in inputs {
        search.registry.entry(clause.clone()).or_insert(source);
        if !seen_inputs.insert(clause.clone()) {
            continue;
        }
        let node = ProofNode::axiom(clause.clone());
        if clause.is_empty() && refuted_on_input.is_none() {
            refuted_on_input = Some(node.clone());
        }
        if clause.is_tautology() {
            continue;
        }
        let id = search.next_id;
        search.next_id += 1;
        search.passive.push_back(Entry { id, clause, node });
    }
    if let Some(root) = refuted_on_input {
        let stats = search.stats();
        return Ok(ProverOutcome::Refutation(
            Proof {
                root,
                registry: search.registry,
            },
            stats,
        ));
    }

    match search.run() {
        Some(LoopEvent::Refuted(root)) => {
            let stats = search.stats();
            Ok(ProverOutcome::Refutation(
                Proof {
                    root,
                    registry: search.registry,
                },
                stats,
            ))
        }
        Some(LoopEvent::OutOfBudget) => Ok(ProverOutcome::ResourceOut(search.stats())),
        None => Ok(ProverOutcome::Saturated(search.stats())),
    }
}

impl Search {
    fn stats(&self) -> SearchStats {
        SearchStats {
            generated: self.generated,
            kept: self.kept,
            elapsed: self.watch.elapsed_secs(),
        }
    }

    fn out_of_budget(&self) -> bool {
        self.generated >= self.limits.max_generated_clauses
            || self.watch.elapsed_secs() > self.limits.max_seconds
    }

    fn tiebreak(&self, id: u64) -> u64 {
        if self.limits.tie_seed == 0 {
            id
        } else {
            splitmix64(id ^ self.limits.tie_seed)
        }
    }

    /// Oldest-first, with every sixth pick taking the smallest clause.
    fn next_given(&mut self) -> Option<Entry> {
        if self.passive.is_empty() {
            return None;
        }
        self.picks += 1;
        if self.picks % 6 == 0 {
            let best = self
                .passive
                .iter()
                .enumerate()
                .min_by_key(|(_, e)| (e.clause.size(), self.tiebreak(e.id)))
                .map(|(i, _)| i)
                .expect("nonempty passive");
            self.passive.remove(best)
        } else {
            self.passive.pop_front()
        }
    }

    fn run(&mut self) -> Option<LoopEvent> {
        while let Some(given) = self.next_given() {
            if self.out_of_budget() {
                return Some(LoopEvent::OutOfBudget);
            }
            // Forward subsumption against clauses activated since this one
            // was generated.
            if self
                .active
                .iter()
                .any(|entry| entry.clause.subsumes(&given.clause))
            {
                continue;
            }
            self.active.push(given.clone());

            let mut conclusions = Vec::new();
            self.factors(&given, &mut conclusions);
            self.equality_resolutions(&given, &mut conclusions);
            for i in 0..self.active.len() {
                let partner = self.active[i].clone();
                let same = partner.id == given.id;
                self.resolutions(&given, &partner, &mut conclusions);
                self.paramodulations(&given, &partner, &mut conclusions);
                if !same {
                    self.paramodulations(&partner, &given, &mut conclusions);
                }
            }

            let mut batch: Vec<Entry> = Vec::new();
            for (clause, node) in conclusions {
                self.generated += 1;
                if clause.is_empty() {
                    return Some(LoopEvent::Refuted(node));
                }
                if self.out_of_budget() {
                    break;
                }
                if clause.is_tautology() {
                    continue;
                }
                let subsumed = self
                    .active
                    .iter()
                    .chain(batch.iter())
                    .any(|entry| entry.clause.subsumes(&clause));
                if subsumed {
                    continue;
                }
                let id = self.next_id;
                self.next_id += 1;
                batch.push(Entry { id, clause, node });
            }

            self.kept += batch.len() as u64;
            batch.sort_by_key(|e| (e.clause.size(), self.tiebreak(e.id)));
            self.passive.extend(batch);
        }
        None
    }

    /// Renames a clause apart with fresh variables; returns the renaming.
    fn rename(&mut self, clause: &Clause) -> (Clause, Substitution) {
        let mut renaming = Substitution::empty();
        for var in clause.vars() {
            let fresh = self.fresh.fresh(&var);
            renaming.bind(var, Term::var(fresh));
        }
        (clause.apply(&renaming), renaming)
    }

    /// The recorded `Subst` payload for a premise: the unifier composed with
    /// the renaming, expressed in the premise's original variable names.
    fn premise_payload(
        clause: &Clause,
        renaming: &Substitution,
        sigma: &Substitution,
    ) -> Substitution {
        let mut payload = Substitution::empty();
        for var in clause.vars() {
            let renamed = renaming.apply(&Term::Var(var.clone()));
            payload.bind(var, sigma.apply(&renamed));
        }
        payload
    }

    fn subst_node(node: &Rc<ProofNode>, payload: &Substitution) -> Rc<ProofNode> {
        if payload.is_empty() {
            node.clone()
        } else {
            derive(Rule::Subst(payload.clone()), vec![node.clone()])
                .expect("substitution nodes are always well-formed")
        }
    }

    /// Derives `(C \ {lhs = rhs}) U {rhs = lhs}` from a clause containing
    /// `lhs = rhs`, using Refl and the Equality rule.
    fn flip_equation(node: &Rc<ProofNode>, lhs: &Term, rhs: &Term) -> Rc<ProofNode> {
        let refl = derive(Rule::Refl(lhs.clone()), vec![]).expect("refl");
        let eqn = derive(
            Rule::Equality {
                literal: Literal::eq(lhs.clone(), lhs.clone()),
                path: Path(vec![0]),
                replacement: rhs.clone(),
            },
            vec![],
        )
        .expect("equality node");
        let half = derive(
            Rule::Resolve(Term::app(reserved::EQ, vec![lhs.clone(), lhs.clone()])),
            vec![refl, eqn],
        )
        .expect("symmetry resolution");
        derive(
            Rule::Resolve(Term::app(reserved::EQ, vec![lhs.clone(), rhs.clone()])),
            vec![node.clone(), half],
        )
        .expect("symmetry application")
    }

    /// Factoring: unifying two literals of the same sign. Recorded as a
    /// single `Subst`, since clauses are sets.
    fn factors(&mut self, given: &Entry, out: &mut Vec<(Clause, Rc<ProofNode>)>) {
        let vars = given.clause.vars();
        let lits = given.clause.literals();
        for i in 0..lits.len() {
            for j in (i + 1)..lits.len() {
                if lits[i].positive != lits[j].positive {
                    continue;
                }
                let Ok(sigma) = mgu(&lits[i].atom, &lits[j].atom) else {
                    continue;
                };
                if sigma.is_empty() {
                    continue;
                }
                let payload = sigma.restrict(|v| vars.contains(v));
                let node = Self::subst_node(&given.node, &payload);
                out.push((node.clause.clone(), node));
            }
        }
    }

    /// Reflexivity resolution: removes a literal `u != v` whose sides unify.
    fn equality_resolutions(&mut self, given: &Entry, out: &mut Vec<(Clause, Rc<ProofNode>)>) {
        let vars = given.clause.vars();
        for literal in given.clause.iter() {
            if literal.positive {
                continue;
            }
            let Some((u, v)) = literal.as_equality() else {
                continue;
            };
            let Ok(sigma) = mgu(u, v) else {
                continue;
            };
            let instance = literal.apply(&sigma);
            if !self
                .kbo
                .literal_maximal_in(&instance, &given.clause.apply(&sigma))
            {
                continue;
            }
            let payload = sigma.restrict(|var| vars.contains(var));
            let premise = Self::subst_node(&given.node, &payload);
            let u_inst = sigma.apply(u);
            let refl = derive(Rule::Refl(u_inst), vec![]).expect("refl");
            let node = derive(Rule::Resolve(instance.atom.clone()), vec![refl, premise])
                .expect("reflexivity resolution");
            out.push((node.clause.clone(), node));
        }
    }

    /// Ordered binary resolution between the given clause and a partner.
    fn resolutions(
        &mut self,
        given: &Entry,
        partner: &Entry,
        out: &mut Vec<(Clause, Rc<ProofNode>)>,
    ) {
        let (given_r, given_rho) = self.rename(&given.clause);
        let (partner_r, partner_rho) = self.rename(&partner.clause);
        for lg in given_r.iter() {
            for lp in partner_r.iter() {
                if lg.positive == lp.positive {
                    continue;
                }
                let Ok(sigma) = mgu(&lg.atom, &lp.atom) else {
                    continue;
                };
                let given_inst = given_r.apply(&sigma);
                let partner_inst = partner_r.apply(&sigma);
                if !self.kbo.literal_maximal_in(&lg.apply(&sigma), &given_inst)
                    || !self
                        .kbo
                        .literal_maximal_in(&lp.apply(&sigma), &partner_inst)
                {
                    continue;
                }
                let given_payload = Self::premise_payload(&given.clause, &given_rho, &sigma);
                let partner_payload = Self::premise_payload(&partner.clause, &partner_rho, &sigma);
                let given_node = Self::subst_node(&given.node, &given_payload);
                let partner_node = Self::subst_node(&partner.node, &partner_payload);
                let pivot = sigma.apply(&lg.atom);
                let (pos, neg) = if lg.positive {
                    (given_node, partner_node)
                } else {
                    (partner_node, given_node)
                };
                let node =
                    derive(Rule::Resolve(pivot), vec![pos, neg]).expect("recorded resolution");
                out.push((node.clause.clone(), node));
            }
        }
    }

    /// Ordered paramodulation from `source` (providing a positive equation)
    /// into subterm positions of `target`.
    fn paramodulations(
        &mut self,
        source: &Entry,
        target: &Entry,
        out: &mut Vec<(Clause, Rc<ProofNode>)>,
    ) {
        let (source_r, source_rho) = self.rename(&source.clause);
        let (target_r, target_rho) = self.rename(&target.clause);
        for eq_lit in source_r.iter() {
            if !eq_lit.positive {
                continue;
            }
            let Some((lhs, rhs)) = eq_lit.as_equality() else {
                continue;
            };
            for (from, into, flipped) in [(lhs, rhs, false), (rhs, lhs, true)] {
                if flipped && lhs == rhs {
                    continue;
                }
                for lit in target_r.iter() {
                    for pos in lit.atom.positions() {
                        if pos.is_empty() {
                            continue;
                        }
                        let sub = lit.atom.subterm_at(&pos).expect("enumerated position");
                        if sub.is_var() {
                            continue;
                        }
                        let Ok(sigma) = mgu(from, sub) else {
                            continue;
                        };
                        let from_i = sigma.apply(from);
                        let into_i = sigma.apply(into);
                        if from_i == into_i {
                            continue;
                        }
                        // Never rewrite with the strictly smaller side.
                        if self.kbo.compare(&from_i, &into_i) == Some(std::cmp::Ordering::Less) {
                            continue;
                        }
                        let eq_inst = eq_lit.apply(&sigma);
                        if !self
                            .kbo
                            .literal_maximal_in(&eq_inst, &source_r.apply(&sigma))
                        {
                            continue;
                        }

                        let source_payload =
                            Self::premise_payload(&source.clause, &source_rho, &sigma);
                        let target_payload =
                            Self::premise_payload(&target.clause, &target_rho, &sigma);
                        let source_node = Self::subst_node(&source.node, &source_payload);
                        let target_node = Self::subst_node(&target.node, &target_payload);
                        // Present the equation as `from = into`, flipping it
                        // first when the right-hand side was matched.
                        let oriented = if flipped {
                            let (l, r) = eq_inst.as_equality().expect("equality literal");
                            Self::flip_equation(&source_node, l, r)
                        } else {
                            source_node
                        };
                        let lit_inst = lit.apply(&sigma);
                        let pivot_eq = Term::app(reserved::EQ, vec![from_i, into_i.clone()]);
                        // Rewriting an equation with itself only yields a
                        // tautology, and its hypothesis literal would merge
                        // with the complement of the rewritten literal.
                        if lit_inst.positive && lit_inst.atom == pivot_eq {
                            continue;
                        }
                        let eq_node = derive(
                            Rule::Equality {
                                literal: lit_inst.clone(),
                                path: Path(pos.clone()),
                                replacement: into_i.clone(),
                            },
                            vec![],
                        )
                        .expect("paramodulation equality node");
                        let first = derive(Rule::Resolve(pivot_eq), vec![oriented, eq_node])
                            .expect("paramodulation equation resolution");
                        let (pos_node, neg_node) = if lit_inst.positive {
                            (target_node, first)
                        } else {
                            (first, target_node)
                        };
                        let node = derive(Rule::Resolve(lit_inst.atom), vec![pos_node, neg_node])
                            .expect("paramodulation literal resolution");
                        out.push((node.clause.clone(), node));
                    }
                }
            }
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}
