//! Extracting instantiations from proofs and transforming proofs to run
//! from instantiated axioms.
//!
//! `infer` walks a refutation with an accumulator substitution and returns,
//! for every axiom leaf, the substitution that was applied to it across all
//! `Subst` steps above it. `transform` instantiates every clause in the
//! proof with the accumulator it would see and drops the `Subst` steps
//! entirely; because clauses are sets, instantiation can shorten clauses,
//! collapse resolutions and discard whole subproofs, so the result never has
//! more steps than the original.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::clause::{Clause, Literal};
use crate::decode::{alpha_eq_wild, Instantiation};
use crate::proof::{check_proof, derive, AxiomSource, Proof, ProofNode, Rule, Violation};
use crate::surface::SurfaceTerm;
use crate::term::{reserved, Substitution};

/// One use of an axiom clause inside a proof: the original clause and the
/// substitution accumulated on the path from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomUse {
    pub clause: Clause,
    pub sub: Substitution,
    pub source: AxiomSource,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    /// An axiom leaf is missing from the proof registry.
    UnregisteredAxiom(Clause),
    /// The proof does not pass the checker.
    NotChecked(Vec<Violation>),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::UnregisteredAxiom(clause) => {
                write!(f, "axiom clause {clause} is not registered")
            }
            EngineError::NotChecked(violations) => {
                write!(f, "proof fails the checker: ")?;
                for (i, v) in violations.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for EngineError {}

/// The substitutions applied to axiom clauses, in left-to-right tree order.
pub fn infer_node(node: &Rc<ProofNode>, acc: &Substitution) -> Vec<(Clause, Substitution)> {
    let mut memo = HashMap::new();
    infer_memo(node, acc, &mut memo)
}

type InferMemo = HashMap<(*const ProofNode, Substitution), Vec<(Clause, Substitution)>>;

fn infer_memo(
    node: &Rc<ProofNode>,
    acc: &Substitution,
    memo: &mut InferMemo,
) -> Vec<(Clause, Substitution)> {
    let key = (Rc::as_ptr(node), acc.clone());
    if let Some(cached) = memo.get(&key) {
        return cached.clone();
    }
    let result = match &node.rule {
        Rule::Subst(sub) => {
            let composed = Substitution::compose(acc, sub);
            infer_memo(&node.premises[0], &composed, memo)
        }
        Rule::Resolve(_) => {
            let mut left = infer_memo(&node.premises[0], acc, memo);
            left.extend(infer_memo(&node.premises[1], acc, memo));
            left
        }
        Rule::Axiom => vec![(node.clause.clone(), acc.clone())],
        _ => Vec::new(),
    };
    memo.insert(key, result.clone());
    result
}

/// `infer` over a whole proof, resolving each axiom clause to its source.
pub fn infer(proof: &Proof) -> Result<Vec<AxiomUse>, EngineError> {
    infer_node(&proof.root, &Substitution::empty())
        .into_iter()
        .map(|(clause, sub)| {
            let source = proof
                .registry
                .get(&clause)
                .cloned()
                .ok_or_else(|| EngineError::UnregisteredAxiom(clause.clone()))?;
            Ok(AxiomUse {
                clause,
                sub,
                source,
            })
        })
        .collect()
}

/// A proof node annotated with the accumulator it sees in `infer`'s
/// traversal. The structure mirrors the source proof one-to-one.
#[derive(Debug, Clone)]
pub struct AnnotatedNode {
    pub clause: Clause,
    pub rule: Rule,
    pub premises: Vec<AnnotatedNode>,
    pub acc: Substitution,
}

pub fn annotate(node: &Rc<ProofNode>, acc: &Substitution) -> AnnotatedNode {
    let premises = match &node.rule {
        Rule::Subst(sub) => {
            let composed = Substitution::compose(acc, sub);
            vec![annotate(&node.premises[0], &composed)]
        }
        Rule::Resolve(_) => vec![
            annotate(&node.premises[0], acc),
            annotate(&node.premises[1], acc),
        ],
        _ => Vec::new(),
    };
    AnnotatedNode {
        clause: node.clause.clone(),
        rule: node.rule.clone(),
        premises,
        acc: acc.clone(),
    }
}

/// Collects `(clause, acc)` at the axiom leaves of an annotated tree.
pub fn annotated_axiom_uses(node: &AnnotatedNode) -> Vec<(Clause, Substitution)> {
    let mut out = Vec::new();
    fn go(node: &AnnotatedNode, out: &mut Vec<(Clause, Substitution)>) {
        if matches!(node.rule, Rule::Axiom) {
            out.push((node.clause.clone(), node.acc.clone()));
        }
        for premise in &node.premises {
            go(premise, out);
        }
    }
    go(node, &mut out);
    out
}

struct Transformer<'a> {
    original: &'a Proof,
    memo: HashMap<(*const ProofNode, Substitution), Rc<ProofNode>>,
    axiom_cache: BTreeMap<(Clause, Substitution), Rc<ProofNode>>,
    axiom_info: HashMap<*const ProofNode, (Clause, AxiomSource, Substitution)>,
}

/// Transforms a checked refutation into one derived from the instantiated
/// axiom clauses, with no `Subst` steps and at most as many steps.
pub fn transform(proof: &Proof) -> Result<Proof, EngineError> {
    if let Err(violations) = check_proof(proof) {
        return Err(EngineError::NotChecked(violations));
    }
    let mut tf = Transformer {
        original: proof,
        memo: HashMap::new(),
        axiom_cache: BTreeMap::new(),
        axiom_info: HashMap::new(),
    };
    let root = tf.node(&proof.root, &Substitution::empty())?;
    let mut registry = BTreeMap::new();
    for node in crate::proof::topo_order(&root) {
        if node.is_axiom() {
            let (_, base, sub) = tf
                .axiom_info
                .get(&Rc::as_ptr(&node))
                .expect("every transformed axiom has recorded provenance")
                .clone();
            let source = if sub.is_empty() {
                base
            } else {
                AxiomSource::Instantiated {
                    base: Box::new(base),
                    sub,
                }
            };
            registry.entry(node.clause.clone()).or_insert(source);
        }
    }
    Ok(Proof { root, registry })
}

impl Transformer<'_> {
    fn node(
        &mut self,
        node: &Rc<ProofNode>,
        acc: &Substitution,
    ) -> Result<Rc<ProofNode>, EngineError> {
        let key = (Rc::as_ptr(node), acc.clone());
        if let Some(cached) = self.memo.get(&key) {
            return Ok(cached.clone());
        }
        let result = match &node.rule {
            Rule::Axiom => {
                let instantiated = node.clause.apply(acc);
                let cache_key = (node.clause.clone(), acc.clone());
                match self.axiom_cache.get(&cache_key) {
                    Some(shared) => shared.clone(),
                    None => {
                        let base = self
                            .original
                            .registry
                            .get(&node.clause)
                            .cloned()
                            .ok_or_else(|| EngineError::UnregisteredAxiom(node.clause.clone()))?;
                        let fresh = ProofNode::axiom(instantiated);
                        self.axiom_info
                            .insert(Rc::as_ptr(&fresh), (node.clause.clone(), base, acc.clone()));
                        self.axiom_cache.insert(cache_key, fresh.clone());
                        fresh
                    }
                }
            }
            Rule::Assume(atom) => derive(Rule::Assume(acc.apply(atom)), vec![])
                .expect("instantiated Assume is well-formed"),
            Rule::Refl(term) => derive(Rule::Refl(acc.apply(term)), vec![])
                .expect("instantiated Refl is well-formed"),
            Rule::Equality {
                literal,
                path,
                replacement,
            } => derive(
                Rule::Equality {
                    literal: literal.apply(acc),
                    path: path.clone(),
                    replacement: acc.apply(replacement),
                },
                vec![],
            )
            .expect("instantiated Equality is well-formed"),
            Rule::Subst(sub) => {
                let composed = Substitution::compose(acc, sub);
                self.node(&node.premises[0], &composed)?
            }
            Rule::Resolve(atom) => {
                let pivot = acc.apply(atom);
                let left = self.node(&node.premises[0], acc)?;
                let right = self.node(&node.premises[1], acc)?;
                // The sign each premise originally contributed.
                let left_positive = node.premises[0]
                    .clause
                    .contains(&Literal::pos(atom.clone()));
                let left_needs = Literal::new(left_positive, pivot.clone());
                let right_needs = Literal::new(!left_positive, pivot.clone());
                if !left.clause.contains(&left_needs) {
                    // Instantiation removed the pivot on the left: the left
                    // subproof already derives a subset of the conclusion.
                    left
                } else if !right.clause.contains(&right_needs) {
                    right
                } else {
                    let (pos, neg) = if left_positive {
                        (left, right)
                    } else {
                        (right, left)
                    };
                    derive(Rule::Resolve(pivot), vec![pos, neg])
                        .expect("instantiated resolution is well-formed")
                }
            }
        };
        self.memo.insert(key, result.clone());
        Ok(result)
    }
}

/// Per-fact clausifier metadata the filter needs: which fact a clause came
/// from and how clause variables map back to fact free variables.
#[derive(Debug, Clone, Default)]
pub struct FactTable {
    entries: BTreeMap<Clause, FactEntry>,
}

#[derive(Debug, Clone)]
pub struct FactEntry {
    pub fact: String,
    /// Clause variable name to fact free-variable name; injective.
    pub var_map: BTreeMap<String, String>,
}

impl FactTable {
    pub fn new() -> FactTable {
        FactTable::default()
    }

    pub fn insert(&mut self, clause: Clause, entry: FactEntry) {
        self.entries.entry(clause).or_insert(entry);
    }

    pub fn get(&self, clause: &Clause) -> Option<&FactEntry> {
        self.entries.get(clause)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A fact use after filtering: bindings are keyed by the fact's free
/// variable names, restricted to variables the clause actually mentions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactUse {
    pub fact: String,
    pub bindings: Substitution,
    /// Fact free variables occurring in the used clause; unbound ones are
    /// closed with `undefined` or wildcards at the end of the pipeline.
    pub domain: BTreeSet<String>,
}

/// Drops goal- and definition-derived uses and restricts each substitution
/// to variables that occur in the clause and correspond to fact free
/// variables. Unknown fact clauses are reported, not fatal.
pub fn filter_fact_uses(uses: &[AxiomUse], table: &FactTable) -> (Vec<FactUse>, Vec<String>) {
    let mut out = Vec::new();
    let mut issues = Vec::new();
    for axiom_use in uses {
        let fact_name = match &axiom_use.source {
            AxiomSource::Fact(name) => name.clone(),
            _ => continue,
        };
        let Some(entry) = table.get(&axiom_use.clause) else {
            issues.push(format!(
                "fact {fact_name}: clause {} is not in the fact table",
                axiom_use.clause
            ));
            continue;
        };
        let clause_vars = axiom_use.clause.vars();
        let mut bindings = Substitution::empty();
        let mut domain = BTreeSet::new();
        for clause_var in &clause_vars {
            let Some(fact_var) = entry.var_map.get(clause_var) else {
                // A quantified variable of the fact: unnameable, dropped.
                continue;
            };
            domain.insert(fact_var.clone());
            if let Some(term) = axiom_use.sub.get(clause_var) {
                bindings.bind(fact_var.clone(), term.clone());
            }
        }
        out.push(FactUse {
            fact: entry.fact.clone(),
            bindings,
            domain,
        });
    }
    (out, issues)
}

/// Greedy left-to-right merging: each instantiation joins the first existing
/// group for the same fact whose shared variables agree up to alpha
/// equivalence (wildcards match up to consistent renaming); otherwise it
/// starts a new group. Exact duplicates collapse.
pub fn merge_all(insts: Vec<Instantiation>) -> Vec<Instantiation> {
    let mut groups: Vec<Instantiation> = Vec::new();
    'next: for inst in insts {
        for group in groups.iter_mut() {
            if group.fact != inst.fact {
                continue;
            }
            let mut wild_map: BTreeMap<String, String> = BTreeMap::new();
            let agree = inst.bindings.iter().all(|(var, term)| {
                match group.bindings.get(var) {
                    // Match group-side first so renaming maps incoming
                    // wildcards onto the group's existing ones.
                    Some(existing) => alpha_eq_wild(term, existing, &mut wild_map),
                    None => true,
                }
            });
            if agree {
                for (var, term) in &inst.bindings {
                    if !group.bindings.contains_key(var) {
                        group
                            .bindings
                            .insert(var.clone(), rename_wildcards(term, &wild_map));
                    }
                }
                group.clause_vars.extend(inst.clause_vars.iter().cloned());
                continue 'next;
            }
        }
        groups.push(inst);
    }
    groups
}

fn rename_wildcards(term: &SurfaceTerm, map: &BTreeMap<String, String>) -> SurfaceTerm {
    match term {
        SurfaceTerm::Var(v) if reserved::is_wildcard(v) => match map.get(v) {
            Some(renamed) => SurfaceTerm::var(renamed.clone()),
            None => term.clone(),
        },
        SurfaceTerm::Var(_) | SurfaceTerm::Const(_) => term.clone(),
        SurfaceTerm::App(f, a) => {
            SurfaceTerm::app(rename_wildcards(f, map), rename_wildcards(a, map))
        }
        SurfaceTerm::Lam(x, body) => SurfaceTerm::lam(x.clone(), rename_wildcards(body, map)),
    }
}
