//! Decoding first-order terms back into the surface language.
//!
//! Substitution terms inferred from a proof still contain the encoding
//! artifacts of clausification: `app` spines, Skolem terms, combinators and
//! supercombinators. This module reverses them so instantiations can be
//! shown to the user: `app` spines flatten into applications, maximal Skolem
//! terms (including their arguments) are erased to wildcard variables, and
//! combinator heads are replaced by their lambda definitions followed by a
//! beta-eta normalization.

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::surface::{
    alpha_eq, beta_eta_normalize, canonicalize_binders, SurfaceTerm, NORMALIZE_BUDGET,
};
use crate::term::{reserved, Term};

/// A user-facing instantiation: bindings for some of a fact's free
/// variables, plus the set of fact variables mentioned by the underlying
/// clauses (used to fill in unbound variables at the end).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instantiation {
    pub fact: String,
    pub bindings: BTreeMap<String, SurfaceTerm>,
    pub clause_vars: BTreeSet<String>,
}

impl Instantiation {
    pub fn new(fact: impl Into<String>) -> Instantiation {
        Instantiation {
            fact: fact.into(),
            bindings: BTreeMap::new(),
            clause_vars: BTreeSet::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

impl fmt::Display for Instantiation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} with {{", self.fact)?;
        for (i, (var, term)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{var} -> {term}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeError {
    UnknownSymbol(String),
    NormalizationBudget,
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeError::UnknownSymbol(sym) => write!(f, "unknown symbol '{sym}'"),
            DecodeError::NormalizationBudget => {
                write!(f, "combinator expansion exceeded the normalization budget")
            }
        }
    }
}

impl std::error::Error for DecodeError {}

/// Wildcard allocation for one instantiation: syntactically identical Skolem
/// terms share a wildcard, and leftover variables are replaced consistently.
#[derive(Debug, Default)]
pub struct WildcardScope {
    skolems: BTreeMap<SurfaceTerm, String>,
    leftovers: BTreeMap<String, String>,
}

impl WildcardScope {
    pub fn new() -> WildcardScope {
        WildcardScope::default()
    }
}

/// Everything needed to translate encoded terms back to the surface.
#[derive(Debug, Default)]
pub struct DecodeContext {
    known: BTreeSet<String>,
    supercombinators: BTreeMap<String, SurfaceTerm>,
    pub instantiate_undefined: bool,
    wildcard_counter: Cell<u64>,
}

impl DecodeContext {
    pub fn new(instantiate_undefined: bool) -> DecodeContext {
        DecodeContext {
            instantiate_undefined,
            ..DecodeContext::default()
        }
    }

    pub fn register_symbol(&mut self, name: impl Into<String>) {
        self.known.insert(name.into());
    }

    /// Registers a supercombinator with its lambda definition.
    pub fn register_supercombinator(&mut self, name: impl Into<String>, definition: SurfaceTerm) {
        let name = name.into();
        self.known.insert(name.clone());
        self.supercombinators.insert(name, definition);
    }

    pub fn supercombinator(&self, name: &str) -> Option<&SurfaceTerm> {
        self.supercombinators.get(name)
    }

    fn fresh_wildcard(&self) -> String {
        let n = self.wildcard_counter.get();
        self.wildcard_counter.set(n + 1);
        format!("{}{n}", reserved::WILDCARD_PREFIX)
    }

    fn is_known(&self, sym: &str) -> bool {
        self.known.contains(sym)
            || sym == reserved::APP
            || sym == reserved::UNDEFINED
            || reserved::is_combinator(sym)
    }

    /// Flattens `app` spines and restores encoded constants. Skolem terms
    /// and combinator heads survive for the later passes.
    pub fn decode_term(&self, term: &Term) -> Result<SurfaceTerm, DecodeError> {
        match term {
            Term::Var(v) => Ok(SurfaceTerm::var(v.clone())),
            Term::App(sym, args) if sym == reserved::APP && args.len() == 2 => Ok(
                SurfaceTerm::app(self.decode_term(&args[0])?, self.decode_term(&args[1])?),
            ),
            Term::App(sym, args) => {
                if !self.is_known(sym) {
                    return Err(DecodeError::UnknownSymbol(sym.clone()));
                }
                let mut out = SurfaceTerm::constant(sym.clone());
                for arg in args {
                    out = SurfaceTerm::app(out, self.decode_term(arg)?);
                }
                Ok(out)
            }
        }
    }

    /// Replaces every maximal Skolem-headed subterm (arguments included) by
    /// a wildcard variable; identical Skolem terms share one wildcard.
    pub fn eliminate_skolems(&self, term: &SurfaceTerm, scope: &mut WildcardScope) -> SurfaceTerm {
        let (head, _) = term.unfold_app();
        if let SurfaceTerm::Const(sym) = head {
            if reserved::is_skolem(sym) {
                let name = scope
                    .skolems
                    .entry(term.clone())
                    .or_insert_with(|| self.fresh_wildcard())
                    .clone();
                return SurfaceTerm::var(name);
            }
        }
        match term {
            SurfaceTerm::Var(_) | SurfaceTerm::Const(_) => term.clone(),
            SurfaceTerm::App(f, a) => SurfaceTerm::app(
                self.eliminate_skolems(f, scope),
                self.eliminate_skolems(a, scope),
            ),
            SurfaceTerm::Lam(x, body) => {
                SurfaceTerm::lam(x.clone(), self.eliminate_skolems(body, scope))
            }
        }
    }

    /// Replaces combinators and supercombinators by their definitions and
    /// beta-eta-normalizes, renaming binders to the display alphabet.
    pub fn expand_combinators(&self, term: &SurfaceTerm) -> Result<SurfaceTerm, DecodeError> {
        let replaced = self.replace_defs(term);
        let normal = beta_eta_normalize(&replaced, NORMALIZE_BUDGET)
            .map_err(|_| DecodeError::NormalizationBudget)?;
        Ok(canonicalize_binders(&normal))
    }

    fn replace_defs(&self, term: &SurfaceTerm) -> SurfaceTerm {
        match term {
            SurfaceTerm::Var(_) => term.clone(),
            SurfaceTerm::Const(c) => {
                if let Some(def) = self.supercombinators.get(c) {
                    self.replace_defs(def)
                } else if reserved::is_combinator(c) {
                    combinator_definition(c)
                } else {
                    term.clone()
                }
            }
            SurfaceTerm::App(f, a) => SurfaceTerm::app(self.replace_defs(f), self.replace_defs(a)),
            SurfaceTerm::Lam(x, body) => SurfaceTerm::lam(x.clone(), self.replace_defs(body)),
        }
    }

    /// The full per-binding pipeline: decode, erase Skolems, expand
    /// combinators, then erase Skolems that definitions may have exposed.
    pub fn decode_binding(
        &self,
        term: &Term,
        scope: &mut WildcardScope,
    ) -> Result<SurfaceTerm, DecodeError> {
        let decoded = self.decode_term(term)?;
        let erased = self.eliminate_skolems(&decoded, scope);
        let expanded = self.expand_combinators(&erased)?;
        Ok(self.eliminate_skolems(&expanded, scope))
    }

    /// Closes an instantiation: leftover free variables inside bindings and
    /// clause variables the proof never bound are instantiated with
    /// `undefined`, or with fresh wildcards when that option is off.
    pub fn finalize(&self, mut inst: Instantiation, scope: &mut WildcardScope) -> Instantiation {
        let filler = |ctx: &DecodeContext, scope: &mut WildcardScope, var: &str| -> SurfaceTerm {
            if ctx.instantiate_undefined {
                SurfaceTerm::constant(reserved::UNDEFINED)
            } else {
                let name = scope
                    .leftovers
                    .entry(var.to_string())
                    .or_insert_with(|| ctx.fresh_wildcard())
                    .clone();
                SurfaceTerm::var(name)
            }
        };
        let bindings: BTreeMap<String, SurfaceTerm> = inst
            .bindings
            .iter()
            .map(|(var, term)| {
                let mut out = term.clone();
                for free in term.free_vars() {
                    if reserved::is_wildcard(&free) {
                        continue;
                    }
                    let replacement = filler(self, scope, &free);
                    out = out.substitute(&free, &replacement);
                }
                (var.clone(), out)
            })
            .collect();
        inst.bindings = bindings;
        for var in inst.clause_vars.clone() {
            if !inst.bindings.contains_key(&var) {
                let replacement = filler(self, scope, &var);
                inst.bindings.insert(var, replacement);
            }
        }
        inst
    }
}

fn combinator_definition(name: &str) -> SurfaceTerm {
    let v = SurfaceTerm::var;
    match name {
        "K" => SurfaceTerm::lam("a", SurfaceTerm::lam("b", v("a"))),
        "S" => SurfaceTerm::lam(
            "f",
            SurfaceTerm::lam(
                "g",
                SurfaceTerm::lam(
                    "x",
                    SurfaceTerm::app(
                        SurfaceTerm::app(v("f"), v("x")),
                        SurfaceTerm::app(v("g"), v("x")),
                    ),
                ),
            ),
        ),
        "B" => SurfaceTerm::lam(
            "f",
            SurfaceTerm::lam(
                "g",
                SurfaceTerm::lam(
                    "x",
                    SurfaceTerm::app(v("f"), SurfaceTerm::app(v("g"), v("x"))),
                ),
            ),
        ),
        "C" => SurfaceTerm::lam(
            "f",
            SurfaceTerm::lam(
                "g",
                SurfaceTerm::lam(
                    "x",
                    SurfaceTerm::app(SurfaceTerm::app(v("f"), v("x")), v("g")),
                ),
            ),
        ),
        "I" => SurfaceTerm::lam("a", v("a")),
        other => unreachable!("not a combinator: {other}"),
    }
}

/// Alpha-equivalence that additionally matches wildcards up to a consistent
/// bijective renaming. Used when comparing and merging instantiations, so
/// that two decodings of the same use (with different fresh wildcard names)
/// are recognized as equal.
pub fn alpha_eq_wild(
    a: &SurfaceTerm,
    b: &SurfaceTerm,
    wild_map: &mut BTreeMap<String, String>,
) -> bool {
    fn go(
        a: &SurfaceTerm,
        b: &SurfaceTerm,
        ba: &mut Vec<String>,
        bb: &mut Vec<String>,
        wild: &mut BTreeMap<String, String>,
    ) -> bool {
        match (a, b) {
            (SurfaceTerm::Var(x), SurfaceTerm::Var(y)) => {
                let ia = ba.iter().rposition(|v| v == x);
                let ib = bb.iter().rposition(|v| v == y);
                match (ia, ib) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => {
                        if reserved::is_wildcard(x) && reserved::is_wildcard(y) {
                            match wild.get(x) {
                                Some(mapped) => mapped == y,
                                None => {
                                    if wild.values().any(|v| v == y) {
                                        return false;
                                    }
                                    wild.insert(x.clone(), y.clone());
                                    true
                                }
                            }
                        } else {
                            x == y
                        }
                    }
                    _ => false,
                }
            }
            (SurfaceTerm::Const(x), SurfaceTerm::Const(y)) => x == y,
            (SurfaceTerm::App(f1, a1), SurfaceTerm::App(f2, a2)) => {
                go(f1, f2, ba, bb, wild) && go(a1, a2, ba, bb, wild)
            }
            (SurfaceTerm::Lam(x, b1), SurfaceTerm::Lam(y, b2)) => {
                ba.push(x.clone());
                bb.push(y.clone());
                let ok = go(b1, b2, ba, bb, wild);
                ba.pop();
                bb.pop();
                ok
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new(), &mut Vec::new(), wild_map)
}

/// Plain alpha-equivalence re-exported for callers comparing decoded terms.
pub fn terms_alpha_eq(a: &SurfaceTerm, b: &SurfaceTerm) -> bool {
    alpha_eq(a, b)
}
