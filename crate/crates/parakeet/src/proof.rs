//! The fine-grained proof calculus and an independent proof checker.
//!
//! Proofs are trees of [`ProofNode`]s built from six rules. The search loop
//! in [`crate::prover`] only ever *constructs* nodes through [`derive()`] and
//! [`ProofNode::axiom`]; [`check_proof`] revalidates every node from scratch
//! so prover bugs cannot silently produce bogus refutations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::clause::{Clause, Literal, Path};
use crate::term::{Substitution, Term};

/// One of the six inference rules. `Axiom` carries no payload; the axiom's
/// clause lives on the node itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Axiom,
    Assume(Term),
    Subst(Substitution),
    Refl(Term),
    Equality {
        literal: Literal,
        path: Path,
        replacement: Term,
    },
    Resolve(Term),
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Axiom => "Axiom",
            Rule::Assume(_) => "Assume",
            Rule::Subst(_) => "Subst",
            Rule::Refl(_) => "Refl",
            Rule::Equality { .. } => "Equality",
            Rule::Resolve(_) => "Resolve",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Rule::Axiom | Rule::Assume(_) | Rule::Refl(_) | Rule::Equality { .. } => 0,
            Rule::Subst(_) => 1,
            Rule::Resolve(_) => 2,
        }
    }
}

/// A derived clause together with the rule and premises that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofNode {
    pub clause: Clause,
    pub rule: Rule,
    pub premises: Vec<Rc<ProofNode>>,
}

impl ProofNode {
    pub fn axiom(clause: Clause) -> Rc<ProofNode> {
        Rc::new(ProofNode {
            clause,
            rule: Rule::Axiom,
            premises: Vec::new(),
        })
    }

    pub fn is_axiom(&self) -> bool {
        matches!(self.rule, Rule::Axiom)
    }
}

/// Where an axiom clause came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum AxiomSource {
    /// A clause of the named input fact.
    Fact(String),
    /// A clause of the negated goal.
    Goal,
    /// A definitional clause (supercombinator or combinator equation).
    Definition(String),
    /// The injected extensionality axiom.
    Ext,
    /// An axiom of a transformed proof: the original source instantiated
    /// with the recorded substitution.
    Instantiated {
        base: Box<AxiomSource>,
        sub: Substitution,
    },
}

impl AxiomSource {
    /// The underlying fact name, looking through instantiation.
    pub fn fact_name(&self) -> Option<&str> {
        match self {
            AxiomSource::Fact(name) => Some(name),
            AxiomSource::Instantiated { base, .. } => base.fact_name(),
            _ => None,
        }
    }

    pub fn is_goal(&self) -> bool {
        match self {
            AxiomSource::Goal => true,
            AxiomSource::Instantiated { base, .. } => base.is_goal(),
            _ => false,
        }
    }
}

impl fmt::Display for AxiomSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomSource::Fact(name) => write!(f, "fact {name}"),
            AxiomSource::Goal => write!(f, "goal"),
            AxiomSource::Definition(name) => write!(f, "def {name}"),
            AxiomSource::Ext => write!(f, "ext"),
            AxiomSource::Instantiated { base, sub } => write!(f, "inst ({base}) {sub}"),
        }
    }
}

/// A refutation: a proof node for the empty clause plus the registry mapping
/// each axiom clause to its source.
#[derive(Debug, Clone)]
pub struct Proof {
    pub root: Rc<ProofNode>,
    pub registry: BTreeMap<Clause, AxiomSource>,
}

/// Errors raised when building a node with [`derive()`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeriveError {
    /// `Axiom` nodes are built with [`ProofNode::axiom`], not `derive`.
    AxiomClauseRequired,
    ArityMismatch {
        rule: &'static str,
        expected: usize,
        got: usize,
    },
    /// The pivot atom of a resolution is missing from a premise.
    PivotMissing {
        positive: bool,
        atom: Term,
    },
    InvalidPath {
        literal: Literal,
        path: Path,
    },
}

impl fmt::Display for DeriveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeriveError::AxiomClauseRequired => {
                write!(f, "Axiom nodes are constructed from a clause, not derived")
            }
            DeriveError::ArityMismatch {
                rule,
                expected,
                got,
            } => {
                write!(f, "{rule} expects {expected} premises, got {got}")
            }
            DeriveError::PivotMissing { positive, atom } => {
                let sign = if *positive { "" } else { "~" };
                write!(
                    f,
                    "premise does not contain the resolved literal {sign}{atom}"
                )
            }
            DeriveError::InvalidPath { literal, path } => {
                write!(f, "path {path} is not valid in {literal}")
            }
        }
    }
}

impl std::error::Error for DeriveError {}

/// The clause a rule derives from the given premise clauses.
fn conclusion(rule: &Rule, premises: &[Rc<ProofNode>]) -> Result<Clause, DeriveError> {
    if premises.len() != rule.arity() {
        return Err(DeriveError::ArityMismatch {
            rule: rule.name(),
            expected: rule.arity(),
            got: premises.len(),
        });
    }
    match rule {
        Rule::Axiom => Err(DeriveError::AxiomClauseRequired),
        Rule::Assume(atom) => Ok(Clause::new(vec![
            Literal::pos(atom.clone()),
            Literal::neg(atom.clone()),
        ])),
        Rule::Refl(term) => Ok(Clause::new(vec![Literal::eq(term.clone(), term.clone())])),
        Rule::Equality {
            literal,
            path,
            replacement,
        } => {
            let origin = literal
                .atom
                .subterm_at(&path.0)
                .ok_or(DeriveError::InvalidPath {
                    literal: literal.clone(),
                    path: path.clone(),
                })?;
            let rewritten = literal
                .atom
                .replace_at(&path.0, replacement)
                .expect("path validated above");
            Ok(Clause::new(vec![
                Literal::neq(origin.clone(), replacement.clone()),
                literal.complement(),
                Literal::new(literal.positive, rewritten),
            ]))
        }
        Rule::Subst(sub) => Ok(premises[0].clause.apply(sub)),
        Rule::Resolve(atom) => {
            let pos = Literal::pos(atom.clone());
            let neg = Literal::neg(atom.clone());
            let left = &premises[0].clause;
            let right = &premises[1].clause;
            if left.contains(&pos) && right.contains(&neg) {
                Ok(left.without(&pos).union(&right.without(&neg)))
            } else if left.contains(&neg) && right.contains(&pos) {
                Ok(left.without(&neg).union(&right.without(&pos)))
            } else {
                // Report the sign that would be needed in the second premise,
                // or the pivot itself when the first premise lacks it at all.
                let positive = if left.contains(&neg) {
                    true
                } else {
                    !left.contains(&pos)
                };
                Err(DeriveError::PivotMissing {
                    positive,
                    atom: atom.clone(),
                })
            }
        }
    }
}

/// Builds the node a rule derives from its premises. One `Resolve` premise
/// must contain the pivot positively, the other negatively; if a premise
/// contains both signs, the first premise is read as the positive one.
pub fn derive(rule: Rule, premises: Vec<Rc<ProofNode>>) -> Result<Rc<ProofNode>, DeriveError> {
    let clause = conclusion(&rule, &premises)?;
    Ok(Rc::new(ProofNode {
        clause,
        rule,
        premises,
    }))
}

/// A failed check, pointing at the listing step of the offending node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub step: usize,
    pub rule: &'static str,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step ({}) {}: {}", self.step, self.rule, self.reason)
    }
}

/// Distinct nodes of the proof in topological order (premises first).
pub fn topo_order(root: &Rc<ProofNode>) -> Vec<Rc<ProofNode>> {
    let mut seen: HashMap<*const ProofNode, ()> = HashMap::new();
    let mut order = Vec::new();
    fn visit(
        node: &Rc<ProofNode>,
        seen: &mut HashMap<*const ProofNode, ()>,
        order: &mut Vec<Rc<ProofNode>>,
    ) {
        let key = Rc::as_ptr(node);
        if seen.contains_key(&key) {
            return;
        }
        seen.insert(key, ());
        for premise in &node.premises {
            visit(premise, seen, order);
        }
        order.push(node.clone());
    }
    visit(root, &mut seen, &mut order);
    order
}

/// Revalidates every node of a proof against the rule semantics and checks
/// that every axiom clause is registered and the root is the empty clause.
pub fn check_proof(proof: &Proof) -> Result<(), Vec<Violation>> {
    let order = topo_order(&proof.root);
    let steps: HashMap<*const ProofNode, usize> = order
        .iter()
        .enumerate()
        .map(|(i, node)| (Rc::as_ptr(node), i + 1))
        .collect();
    let mut violations = Vec::new();
    for node in &order {
        let step = steps[&Rc::as_ptr(node)];
        match &node.rule {
            Rule::Axiom => {
                if !node.premises.is_empty() {
                    violations.push(Violation {
                        step,
                        rule: "Axiom",
                        reason: format!("axioms take no premises, got {}", node.premises.len()),
                    });
                }
                if !proof.registry.contains_key(&node.clause) {
                    violations.push(Violation {
                        step,
                        rule: "Axiom",
                        reason: format!("clause {} is not a registered axiom", node.clause),
                    });
                }
            }
            rule => match conclusion(rule, &node.premises) {
                Ok(expected) => {
                    if expected != node.clause {
                        violations.push(Violation {
                            step,
                            rule: rule.name(),
                            reason: format!(
                                "node clause {} differs from derived clause {}",
                                node.clause, expected
                            ),
                        });
                    }
                }
                Err(err) => violations.push(Violation {
                    step,
                    rule: rule.name(),
                    reason: err.to_string(),
                }),
            },
        }
    }
    if !proof.root.clause.is_empty() {
        violations.push(Violation {
            step: order.len(),
            rule: proof.root.rule.name(),
            reason: format!("root clause {} is not the empty clause", proof.root.clause),
        });
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Number of proof steps, counting the proof as a tree: a subproof that is
/// shared in memory is counted once per occurrence. Memoized so shared
/// structure does not blow up the traversal.
pub fn count_steps(proof: &Proof) -> u64 {
    fn size(node: &Rc<ProofNode>, memo: &mut HashMap<*const ProofNode, u64>) -> u64 {
        let key = Rc::as_ptr(node);
        if let Some(&n) = memo.get(&key) {
            return n;
        }
        let n = 1 + node.premises.iter().map(|p| size(p, memo)).sum::<u64>();
        memo.insert(key, n);
        n
    }
    size(&proof.root, &mut HashMap::new())
}

/// True if no node of the proof uses the `Subst` rule.
pub fn is_subst_free(proof: &Proof) -> bool {
    topo_order(&proof.root)
        .iter()
        .all(|node| !matches!(node.rule, Rule::Subst(_)))
}

// ---------------------------------------------------------------------------
// Listing formats.
// ---------------------------------------------------------------------------

impl Proof {
    /// Human-readable numbered listing in the style of a prover trace.
    pub fn listing(&self) -> String {
        let order = topo_order(&self.root);
        let steps: HashMap<*const ProofNode, usize> = order
            .iter()
            .enumerate()
            .map(|(i, node)| (Rc::as_ptr(node), i + 1))
            .collect();
        let mut out = String::new();
        for node in &order {
            let step = steps[&Rc::as_ptr(node)];
            let line = match &node.rule {
                Rule::Axiom => {
                    let source = self
                        .registry
                        .get(&node.clause)
                        .map(|s| s.to_string())
                        .unwrap_or_else(|| "unregistered".to_string());
                    format!("({step}) Axiom [{source}]: {}", node.clause)
                }
                Rule::Assume(atom) => {
                    format!("({step}) Assume {}: {}", pretty_atom(atom), node.clause)
                }
                Rule::Subst(sub) => format!(
                    "({step}) Subst from ({}) using {sub}: {}",
                    steps[&Rc::as_ptr(&node.premises[0])],
                    node.clause
                ),
                Rule::Refl(term) => format!("({step}) Refl {term}: {}", node.clause),
                Rule::Equality {
                    literal,
                    path,
                    replacement,
                } => format!(
                    "({step}) Equality in {literal} at {path} with {replacement}: {}",
                    node.clause
                ),
                Rule::Resolve(atom) => format!(
                    "({step}) Resolve from ({}) and ({}) on {}: {}",
                    steps[&Rc::as_ptr(&node.premises[0])],
                    steps[&Rc::as_ptr(&node.premises[1])],
                    pretty_atom(atom),
                    node.clause
                ),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Machine-readable line-oriented form. Variables are written `$x` so the
    /// listing parses back without guessing; see [`Proof::parse_machine`].
    pub fn to_machine(&self) -> String {
        let order = topo_order(&self.root);
        let steps: HashMap<*const ProofNode, usize> = order
            .iter()
            .enumerate()
            .map(|(i, node)| (Rc::as_ptr(node), i + 1))
            .collect();
        let mut out = String::new();
        for node in &order {
            let step = steps[&Rc::as_ptr(node)];
            let clause = machine_clause(&node.clause);
            let line = match &node.rule {
                Rule::Axiom => {
                    let source = self
                        .registry
                        .get(&node.clause)
                        .map(machine_source)
                        .unwrap_or_else(|| "unregistered".to_string());
                    format!("step {step} axiom {source} : {clause}")
                }
                Rule::Assume(atom) => {
                    format!("step {step} assume {} : {clause}", machine_atom(atom))
                }
                Rule::Subst(sub) => format!(
                    "step {step} subst {} {} : {clause}",
                    steps[&Rc::as_ptr(&node.premises[0])],
                    machine_sub(sub)
                ),
                Rule::Refl(term) => {
                    format!("step {step} refl {} : {clause}", machine_term(term))
                }
                Rule::Equality {
                    literal,
                    path,
                    replacement,
                } => format!(
                    "step {step} equality {} at {path} with {} : {clause}",
                    machine_literal(literal),
                    machine_term(replacement)
                ),
                Rule::Resolve(atom) => format!(
                    "step {step} resolve {} {} on {} : {clause}",
                    steps[&Rc::as_ptr(&node.premises[0])],
                    steps[&Rc::as_ptr(&node.premises[1])],
                    machine_atom(atom)
                ),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Parses the machine form back into a proof.
    pub fn parse_machine(text: &str) -> Result<Proof, String> {
        let mut nodes: BTreeMap<usize, Rc<ProofNode>> = BTreeMap::new();
        let mut registry: BTreeMap<Clause, AxiomSource> = BTreeMap::new();
        let mut last: Option<Rc<ProofNode>> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut s = Scanner::new(line);
            (|| -> Result<(), String> {
                s.expect_word("step")?;
                let step = s.number()?;
                let kind = s.word()?;
                let node = match kind.as_str() {
                    "axiom" => {
                        let source = parse_source(&mut s)?;
                        s.expect_tok(":")?;
                        let clause = parse_clause(&mut s)?;
                        registry.insert(clause.clone(), source);
                        ProofNode::axiom(clause)
                    }
                    "assume" => {
                        let atom = parse_atom(&mut s)?;
                        s.expect_tok(":")?;
                        let clause = parse_clause(&mut s)?;
                        let node = derive(Rule::Assume(atom), vec![]).map_err(|e| e.to_string())?;
                        check_clause(&node, &clause)?;
                        node
                    }
                    "subst" => {
                        let premise = lookup(&nodes, s.number()?)?;
                        let sub = parse_substitution(&mut s)?;
                        s.expect_tok(":")?;
                        let clause = parse_clause(&mut s)?;
                        let node =
                            derive(Rule::Subst(sub), vec![premise]).map_err(|e| e.to_string())?;
                        check_clause(&node, &clause)?;
                        node
                    }
                    "refl" => {
                        let term = parse_term(&mut s)?;
                        s.expect_tok(":")?;
                        let clause = parse_clause(&mut s)?;
                        let node = derive(Rule::Refl(term), vec![]).map_err(|e| e.to_string())?;
                        check_clause(&node, &clause)?;
                        node
                    }
                    "equality" => {
                        let literal = parse_literal(&mut s)?;
                        s.expect_word("at")?;
                        let path = parse_path(&mut s)?;
                        s.expect_word("with")?;
                        let replacement = parse_term(&mut s)?;
                        s.expect_tok(":")?;
                        let clause = parse_clause(&mut s)?;
                        let node = derive(
                            Rule::Equality {
                                literal,
                                path,
                                replacement,
                            },
                            vec![],
                        )
                        .map_err(|e| e.to_string())?;
                        check_clause(&node, &clause)?;
                        node
                    }
                    "resolve" => {
                        let left = lookup(&nodes, s.number()?)?;
                        let right = lookup(&nodes, s.number()?)?;
                        s.expect_word("on")?;
                        let atom = parse_atom(&mut s)?;
                        s.expect_tok(":")?;
                        let clause = parse_clause(&mut s)?;
                        let node = derive(Rule::Resolve(atom), vec![left, right])
                            .map_err(|e| e.to_string())?;
                        check_clause(&node, &clause)?;
                        node
                    }
                    other => return Err(format!("unknown step kind '{other}'")),
                };
                nodes.insert(step, node.clone());
                last = Some(node);
                Ok(())
            })()
            .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        }
        let root = last.ok_or("empty proof listing")?;
        Ok(Proof { root, registry })
    }
}

fn check_clause(node: &Rc<ProofNode>, stated: &Clause) -> Result<(), String> {
    if &node.clause != stated {
        return Err(format!(
            "stated clause {} does not match derived clause {}",
            stated, node.clause
        ));
    }
    Ok(())
}

fn lookup(nodes: &BTreeMap<usize, Rc<ProofNode>>, step: usize) -> Result<Rc<ProofNode>, String> {
    nodes
        .get(&step)
        .cloned()
        .ok_or_else(|| format!("reference to unknown step {step}"))
}

fn machine_source(source: &AxiomSource) -> String {
    match source {
        AxiomSource::Fact(name) => format!("fact {name}"),
        AxiomSource::Goal => "goal".to_string(),
        AxiomSource::Definition(name) => format!("def {name}"),
        AxiomSource::Ext => "ext".to_string(),
        AxiomSource::Instantiated { base, sub } => {
            format!("inst ( {} ) {}", machine_source(base), machine_sub(sub))
        }
    }
}

fn parse_source(s: &mut Scanner) -> Result<AxiomSource, String> {
    let kind = s.word()?;
    match kind.as_str() {
        "fact" => Ok(AxiomSource::Fact(s.word()?)),
        "goal" => Ok(AxiomSource::Goal),
        "def" => Ok(AxiomSource::Definition(s.word()?)),
        "ext" => Ok(AxiomSource::Ext),
        "inst" => {
            s.expect_tok("(")?;
            let base = parse_source(s)?;
            s.expect_tok(")")?;
            let sub = parse_substitution(s)?;
            Ok(AxiomSource::Instantiated {
                base: Box::new(base),
                sub,
            })
        }
        other => Err(format!("unknown axiom source '{other}'")),
    }
}

fn machine_term(term: &Term) -> String {
    match term {
        Term::Var(v) => format!("${v}"),
        Term::App(sym, args) => {
            if args.is_empty() {
                sym.clone()
            } else {
                let inner: Vec<String> = args.iter().map(machine_term).collect();
                format!("{sym}({})", inner.join(", "))
            }
        }
    }
}

/// Atoms render equality infix, like literals but unsigned.
fn machine_atom(atom: &Term) -> String {
    match atom {
        Term::App(sym, args) if sym == crate::term::reserved::EQ && args.len() == 2 => {
            format!("{} = {}", machine_term(&args[0]), machine_term(&args[1]))
        }
        _ => machine_term(atom),
    }
}

fn parse_atom(s: &mut Scanner) -> Result<Term, String> {
    let lhs = parse_term(s)?;
    if s.accept_tok("=") {
        let rhs = parse_term(s)?;
        Ok(Term::app(crate::term::reserved::EQ, vec![lhs, rhs]))
    } else {
        Ok(lhs)
    }
}

/// Atom display for the human-readable listing.
fn pretty_atom(atom: &Term) -> String {
    match atom {
        Term::App(sym, args) if sym == crate::term::reserved::EQ && args.len() == 2 => {
            format!("{} = {}", args[0], args[1])
        }
        _ => atom.to_string(),
    }
}

fn machine_literal(literal: &Literal) -> String {
    match literal.as_equality() {
        Some((lhs, rhs)) => {
            let op = if literal.positive { "=" } else { "!=" };
            format!("{} {op} {}", machine_term(lhs), machine_term(rhs))
        }
        None => {
            let sign = if literal.positive { "" } else { "~" };
            format!("{sign}{}", machine_term(&literal.atom))
        }
    }
}

fn machine_clause(clause: &Clause) -> String {
    if clause.is_empty() {
        return "false".to_string();
    }
    let lits: Vec<String> = clause.iter().map(machine_literal).collect();
    lits.join(" | ")
}

fn machine_sub(sub: &Substitution) -> String {
    let pairs: Vec<String> = sub
        .iter()
        .map(|(var, term)| format!("${var} -> {}", machine_term(term)))
        .collect();
    format!("{{{}}}", pairs.join(", "))
}

fn parse_clause(s: &mut Scanner) -> Result<Clause, String> {
    if s.peek_word("false") {
        s.word()?;
        return Ok(Clause::empty());
    }
    let mut literals = vec![parse_literal(s)?];
    while s.accept_tok("|") {
        literals.push(parse_literal(s)?);
    }
    Ok(Clause::new(literals))
}

fn parse_literal(s: &mut Scanner) -> Result<Literal, String> {
    let negated = s.accept_tok("~");
    let lhs = parse_term(s)?;
    if s.accept_tok("=") {
        let rhs = parse_term(s)?;
        if negated {
            return Err("negated equality is written with !=".to_string());
        }
        Ok(Literal::eq(lhs, rhs))
    } else if s.accept_tok("!=") {
        let rhs = parse_term(s)?;
        if negated {
            return Err("negated equality is written with !=".to_string());
        }
        Ok(Literal::neq(lhs, rhs))
    } else {
        Ok(Literal::new(!negated, lhs))
    }
}

fn parse_term(s: &mut Scanner) -> Result<Term, String> {
    if s.accept_tok("$") {
        return Ok(Term::var(s.word()?));
    }
    let sym = s.word()?;
    let mut args = Vec::new();
    if s.accept_tok("(") {
        if !s.accept_tok(")") {
            loop {
                args.push(parse_term(s)?);
                if s.accept_tok(")") {
                    break;
                }
                s.expect_tok(",")?;
            }
        }
    }
    Ok(Term::app(sym, args))
}

fn parse_substitution(s: &mut Scanner) -> Result<Substitution, String> {
    s.expect_tok("{")?;
    let mut sub = Substitution::empty();
    if s.accept_tok("}") {
        return Ok(sub);
    }
    loop {
        s.expect_tok("$")?;
        let var = s.word()?;
        s.expect_tok("->")?;
        let term = parse_term(s)?;
        sub.bind(var, term);
        if s.accept_tok("}") {
            return Ok(sub);
        }
        s.expect_tok(",")?;
    }
}

fn parse_path(s: &mut Scanner) -> Result<Path, String> {
    s.expect_tok("[")?;
    let mut indices = Vec::new();
    if s.accept_tok("]") {
        return Ok(Path(indices));
    }
    loop {
        indices.push(s.number()?);
        if s.accept_tok("]") {
            return Ok(Path(indices));
        }
        s.expect_tok(",")?;
    }
}

/// A minimal tokenizer for the machine listing format.
struct Scanner<'a> {
    rest: &'a str,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Scanner<'a> {
        Scanner {
            rest: text.trim_start(),
        }
    }

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start();
    }

    fn peek_word(&self, word: &str) -> bool {
        let rest = self.rest.trim_start();
        rest.starts_with(word)
            && rest[word.len()..]
                .chars()
                .next()
                .map_or(true, |c| !is_word_char(c))
    }

    fn word(&mut self) -> Result<String, String> {
        self.skip_ws();
        let end = self
            .rest
            .char_indices()
            .find(|(_, c)| !is_word_char(*c))
            .map(|(i, _)| i)
            .unwrap_or(self.rest.len());
        if end == 0 {
            return Err(format!("expected identifier at '{}'", truncated(self.rest)));
        }
        let word = self.rest[..end].to_string();
        self.rest = &self.rest[end..];
        Ok(word)
    }

    fn expect_word(&mut self, word: &str) -> Result<(), String> {
        let got = self.word()?;
        if got == word {
            Ok(())
        } else {
            Err(format!("expected '{word}', got '{got}'"))
        }
    }

    fn number(&mut self) -> Result<usize, String> {
        let word = self.word()?;
        word.parse::<usize>()
            .map_err(|_| format!("expected number, got '{word}'"))
    }

    fn accept_tok(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest.starts_with(tok) {
            self.rest = &self.rest[tok.len()..];
            true
        } else {
            false
        }
    }

    fn expect_tok(&mut self, tok: &str) -> Result<(), String> {
        if self.accept_tok(tok) {
            Ok(())
        } else {
            Err(format!("expected '{tok}' at '{}'", truncated(self.rest)))
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '%' || c == '.' || c == '\''
}

fn truncated(text: &str) -> &str {
    &text[..text.len().min(24)]
}

// ---------------------------------------------------------------------------
// Test fixtures shared across modules.
// ---------------------------------------------------------------------------
