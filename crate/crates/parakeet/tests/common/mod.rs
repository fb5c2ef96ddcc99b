//! Shared helpers for the integration suites: fixture loading, a tiny
//! propositional DPLL oracle for ground problems, and deterministic random
//! problem generators.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use parakeet::clause::{Clause, Literal};
use parakeet::term::Term;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn corpus_files() -> Vec<(String, String)> {
    let dir = fixture_path("corpus");
    let mut entries: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    entries
        .into_iter()
        .map(|path| {
            let name = path.file_name().unwrap().to_string_lossy().to_string();
            let text = std::fs::read_to_string(&path).unwrap();
            (name, text)
        })
        .collect()
}

/// xorshift64*: deterministic, seedable, no dependencies.
#[derive(Debug, Clone)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed.max(1))
    }

    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n.max(1)
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

/// Propositional satisfiability by DPLL over ground clauses; atoms are
/// compared syntactically. Independent of the prover's code paths.
pub fn dpll_satisfiable(clauses: &[Clause]) -> bool {
    let mut atoms: BTreeMap<Term, usize> = BTreeMap::new();
    for clause in clauses {
        for literal in clause.iter() {
            let next = atoms.len();
            atoms.entry(literal.atom.clone()).or_insert(next);
        }
    }
    let encoded: Vec<Vec<(usize, bool)>> = clauses
        .iter()
        .map(|c| c.iter().map(|l| (atoms[&l.atom], l.positive)).collect())
        .collect();
    let mut assignment: Vec<Option<bool>> = vec![None; atoms.len()];
    dpll(&encoded, &mut assignment)
}

fn dpll(clauses: &[Vec<(usize, bool)>], assignment: &mut Vec<Option<bool>>) -> bool {
    // Unit propagation to fixpoint.
    let mut trail = Vec::new();
    loop {
        let mut unit = None;
        for clause in clauses {
            let mut unassigned = None;
            let mut satisfied = false;
            let mut open = 0;
            for &(atom, positive) in clause {
                match assignment[atom] {
                    Some(value) if value == positive => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open += 1;
                        unassigned = Some((atom, positive));
                    }
                }
            }
            if satisfied {
                continue;
            }
            match open {
                0 => {
                    for &(atom, _) in &trail {
                        assignment[atom] = None;
                    }
                    return false;
                }
                1 => {
                    unit = unassigned;
                    break;
                }
                _ => {}
            }
        }
        match unit {
            Some((atom, positive)) => {
                assignment[atom] = Some(positive);
                trail.push((atom, positive));
            }
            None => break,
        }
    }
    let Some(branch_atom) = assignment.iter().position(Option::is_none) else {
        // All assigned and no clause failed above.
        for &(atom, _) in &trail {
            assignment[atom] = None;
        }
        return true;
    };
    for value in [true, false] {
        assignment[branch_atom] = Some(value);
        if dpll(clauses, assignment) {
            assignment[branch_atom] = None;
            for &(atom, _) in &trail {
                assignment[atom] = None;
            }
            return true;
        }
        assignment[branch_atom] = None;
    }
    for &(atom, _) in &trail {
        assignment[atom] = None;
    }
    false
}

/// Random ground problems over at most 4 predicate/constant symbols and at
/// most 12 clauses of up to 3 literals.
pub fn random_ground_problem(rng: &mut Rng) -> Vec<Clause> {
    let preds = ["p", "q"];
    let consts = ["a", "b"];
    let n_clauses = 3 + rng.below(10) as usize;
    let mut clauses = Vec::new();
    for _ in 0..n_clauses {
        let n_lits = 1 + rng.below(3) as usize;
        let mut lits = Vec::new();
        for _ in 0..n_lits {
            let pred = preds[rng.below(preds.len() as u64) as usize];
            let arg = consts[rng.below(consts.len() as u64) as usize];
            let atom = Term::app(pred, vec![Term::constant(arg)]);
            lits.push(Literal::new(rng.chance(1, 2), atom));
        }
        clauses.push(Clause::new(lits));
    }
    clauses
}

/// Random Horn-flavored first-order problems over at most 5 symbols
/// (p, q, r, the unary s, and the constant a). Returns the problem text in
/// the native format. Not all of them are provable; callers filter by
/// proving.
pub fn random_horn_problem(rng: &mut Rng) -> String {
    let preds = ["p", "q", "r"];
    let consts = ["a"];
    let mut lines = Vec::new();
    let n_rules = 2 + rng.below(4);
    for i in 0..n_rules {
        let head = preds[rng.below(3) as usize];
        let body = preds[rng.below(3) as usize];
        if rng.chance(1, 3) {
            // Rule with a function step.
            lines.push(format!("fact R{i} : {body}(u) -> {head}(s(u))"));
        } else {
            lines.push(format!("fact R{i} : {body}(u) -> {head}(u)"));
        }
    }
    let base_pred = preds[rng.below(3) as usize];
    let base_const = consts[0];
    lines.push(format!("fact Base : {base_pred}({base_const})"));
    let goal_pred = preds[rng.below(3) as usize];
    let depth = rng.below(3);
    let mut goal_term = base_const.to_string();
    for _ in 0..depth {
        goal_term = format!("s({goal_term})");
    }
    lines.push(format!("goal : {goal_pred}({goal_term})"));
    lines.join("\n") + "\n"
}

/// Random provable ground equational problems: a rewrite chain
/// t0 = t1 = ... = tn (each link randomly oriented) plus noise equations,
/// with the goal t0 = tn. Exercises paramodulation and equation flipping.
pub fn random_equational_problem(rng: &mut Rng) -> (Vec<Clause>, Clause) {
    fn ground_term(rng: &mut Rng, depth: u32) -> Term {
        if depth == 0 {
            if rng.chance(1, 2) {
                Term::constant("a")
            } else {
                Term::constant("b")
            }
        } else if rng.chance(1, 2) {
            Term::app("f", vec![ground_term(rng, depth - 1)])
        } else {
            Term::app("g", vec![ground_term(rng, depth - 1)])
        }
    }
    let links = 2 + rng.below(4) as usize;
    let mut chain = Vec::new();
    for _ in 0..=links {
        let depth = 1 + rng.below(2) as u32;
        chain.push(ground_term(rng, depth));
    }
    let mut axioms = Vec::new();
    for window in chain.windows(2) {
        let (l, r) = (window[0].clone(), window[1].clone());
        let lit = if rng.chance(1, 2) {
            Literal::eq(l, r)
        } else {
            Literal::eq(r, l)
        };
        axioms.push(Clause::new(vec![lit]));
    }
    for _ in 0..rng.below(3) {
        axioms.push(Clause::new(vec![Literal::eq(
            ground_term(rng, 2),
            ground_term(rng, 2),
        )]));
    }
    let goal = Clause::new(vec![Literal::neq(
        chain[0].clone(),
        chain[links].clone(),
    )]);
    (axioms, goal)
}
