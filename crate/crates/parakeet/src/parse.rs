//! Problem file parsing: the native line-oriented format and a TPTP CNF
//! subset.
//!
//! Native format, one statement per line:
//!
//! ```text
//! option lambda_mode = lifting
//! fact F1 : less(m, n) -> less(Suc(m), Suc(n))
//! goal : less(1, Suc(Suc(x)))
//! ```
//!
//! Formulas use `!x.`/`?x.` quantifiers, `\x.` lambda, infix `= & | -> <->`,
//! prefix `~`, application by juxtaposition (with `f(a, b)` accepted as
//! sugar for `f a b`), and parentheses. Identifiers starting with an
//! uppercase letter or a digit are constants. Lowercase identifiers are
//! variables: bound by the nearest binder, free otherwise. Free variables of
//! facts are the instantiation targets; free identifiers of the goal are
//! fixed and act as constants throughout the problem.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::surface::{Formula, SurfaceTerm};
use crate::term::reserved;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaMode {
    Lifting,
    Combinators,
}

#[derive(Debug, Clone, Default)]
pub struct ProblemOptions {
    pub lambda_mode: Option<LambdaMode>,
    pub ext: Option<bool>,
    pub undefined: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub facts: Vec<(String, Formula)>,
    pub goal: Formula,
    pub options: ProblemOptions,
    /// Predicate symbols with their (fixed) arities.
    pub predicates: BTreeMap<String, usize>,
    /// Goal-level free identifiers, fixed as constants problem-wide.
    pub fixed_consts: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Dispatches between the native format and the TPTP CNF subset.
pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    let looks_tptp = text.lines().any(|l| {
        let t = l.trim_start();
        t.starts_with("cnf(")
    });
    if looks_tptp {
        parse_tptp(text)
    } else {
        parse_native(text)
    }
}

// ---------------------------------------------------------------------------
// Tokenizer.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Eq,
    NotEq,
    And,
    Or,
    Not,
    Implies,
    Iff,
    Bang,
    Question,
    Lambda,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let err = |msg: String| ParseError {
            line: lineno,
            column: col,
            message: msg,
        };
        match c {
            ' ' | '\t' | '\r' => {
                i += 1;
            }
            '#' => break,
            '(' => {
                out.push(Spanned {
                    tok: Tok::LParen,
                    col,
                });
                i += 1;
            }
            ')' => {
                out.push(Spanned {
                    tok: Tok::RParen,
                    col,
                });
                i += 1;
            }
            ',' => {
                out.push(Spanned {
                    tok: Tok::Comma,
                    col,
                });
                i += 1;
            }
            '.' => {
                out.push(Spanned { tok: Tok::Dot, col });
                i += 1;
            }
            ':' => {
                out.push(Spanned {
                    tok: Tok::Colon,
                    col,
                });
                i += 1;
            }
            '&' => {
                out.push(Spanned { tok: Tok::And, col });
                i += 1;
            }
            '|' => {
                out.push(Spanned { tok: Tok::Or, col });
                i += 1;
            }
            '~' => {
                out.push(Spanned { tok: Tok::Not, col });
                i += 1;
            }
            '!' => {
                if chars.get(i + 1) == Some(&'=') {
                    out.push(Spanned {
                        tok: Tok::NotEq,
                        col,
                    });
                    i += 2;
                } else {
                    out.push(Spanned {
                        tok: Tok::Bang,
                        col,
                    });
                    i += 1;
                }
            }
            '?' => {
                out.push(Spanned {
                    tok: Tok::Question,
                    col,
                });
                i += 1;
            }
            '\\' => {
                out.push(Spanned {
                    tok: Tok::Lambda,
                    col,
                });
                i += 1;
            }
            '=' => {
                out.push(Spanned { tok: Tok::Eq, col });
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    out.push(Spanned {
                        tok: Tok::Implies,
                        col,
                    });
                    i += 2;
                } else {
                    return Err(err("expected '->'".to_string()));
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                    out.push(Spanned { tok: Tok::Iff, col });
                    i += 3;
                } else {
                    return Err(err("expected '<->'".to_string()));
                }
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Number(chars[start..i].iter().collect()),
                    col,
                });
            }
            _ if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    col,
                });
            }
            other => return Err(err(format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Expression parser: formulas and terms share one grammar and are separated
// during resolution.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Expr {
    Ident(String),
    Number(String),
    App(Box<Expr>, Box<Expr>),
    Lam(String, Box<Expr>),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    Eq(Box<Expr>, Box<Expr>),
    NotEq(Box<Expr>, Box<Expr>),
    Forall(String, Box<Expr>),
    Exists(String, Box<Expr>),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|s| s.col)
            .unwrap_or_else(|| self.toks.last().map(|s| s.col + 1).unwrap_or(1))
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.col(),
            message: message.into(),
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let tok = self.toks.get(self.pos).map(|s| s.tok.clone());
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn accept(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), ParseError> {
        if self.accept(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.next() {
            Some(Tok::Ident(name)) => Ok(name),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error("expected identifier"))
            }
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    // iff := implies ('<->' iff)?
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.implies()?;
        if self.accept(&Tok::Iff) {
            let rhs = self.expr()?;
            Ok(Expr::Iff(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn implies(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.or()?;
        if self.accept(&Tok::Implies) {
            let rhs = self.implies()?;
            Ok(Expr::Implies(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.and()?;
        while self.accept(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.equality()?;
        while self.accept(&Tok::And) {
            let rhs = self.equality()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn equality(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.unary()?;
        if self.accept(&Tok::Eq) {
            let rhs = self.unary()?;
            Ok(Expr::Eq(Box::new(lhs), Box::new(rhs)))
        } else if self.accept(&Tok::NotEq) {
            let rhs = self.unary()?;
            Ok(Expr::NotEq(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.accept(&Tok::Not) {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        if self.accept(&Tok::Bang) {
            let var = self.binder_name()?;
            self.expect(&Tok::Dot, "'.' after quantified variable")?;
            // A quantifier body extends as far right as possible.
            return Ok(Expr::Forall(var, Box::new(self.expr()?)));
        }
        if self.accept(&Tok::Question) {
            let var = self.binder_name()?;
            self.expect(&Tok::Dot, "'.' after quantified variable")?;
            return Ok(Expr::Exists(var, Box::new(self.expr()?)));
        }
        if self.accept(&Tok::Lambda) {
            let var = self.binder_name()?;
            self.expect(&Tok::Dot, "'.' after lambda binder")?;
            return Ok(Expr::Lam(var, Box::new(self.expr()?)));
        }
        self.application()
    }

    fn binder_name(&mut self) -> Result<String, ParseError> {
        let name = self.ident()?;
        if !name.chars().next().is_some_and(|c| c.is_ascii_lowercase()) {
            return Err(self.error(format!(
                "binder '{name}' must start with a lowercase letter"
            )));
        }
        Ok(name)
    }

    fn application(&mut self) -> Result<Expr, ParseError> {
        let mut out = self.primary()?;
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) | Some(Tok::Number(_)) | Some(Tok::LParen)
                | Some(Tok::Lambda) => {
                    let arg = self.primary()?;
                    out = Expr::App(Box::new(out), Box::new(arg));
                }
                _ => return Ok(out),
            }
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                // f(a, b) is sugar for f a b.
                if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let mut out = Expr::Ident(name);
                    if self.accept(&Tok::RParen) {
                        return Ok(out);
                    }
                    loop {
                        let arg = self.expr()?;
                        out = Expr::App(Box::new(out), Box::new(arg));
                        if self.accept(&Tok::RParen) {
                            return Ok(out);
                        }
                        self.expect(&Tok::Comma, "',' or ')' in argument list")?;
                    }
                }
                Ok(Expr::Ident(name))
            }
            Some(Tok::Number(n)) => {
                self.pos += 1;
                Ok(Expr::Number(n))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Lambda) => {
                self.pos += 1;
                let var = self.binder_name()?;
                self.expect(&Tok::Dot, "'.' after lambda binder")?;
                Ok(Expr::Lam(var, Box::new(self.expr()?)))
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

// ---------------------------------------------------------------------------
// Resolution: expressions to formulas and terms.
// ---------------------------------------------------------------------------

struct Resolver {
    line: usize,
    /// Predicate symbol -> arity, fixed at first atom occurrence.
    predicates: BTreeMap<String, usize>,
}

impl Resolver {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: 1,
            message: message.into(),
        }
    }

    fn formula(&mut self, expr: &Expr, bound: &mut Vec<String>) -> Result<Formula, ParseError> {
        Ok(match expr {
            Expr::Not(e) => Formula::not(self.formula(e, bound)?),
            Expr::And(a, b) => Formula::and(self.formula(a, bound)?, self.formula(b, bound)?),
            Expr::Or(a, b) => Formula::or(self.formula(a, bound)?, self.formula(b, bound)?),
            Expr::Implies(a, b) => {
                Formula::implies(self.formula(a, bound)?, self.formula(b, bound)?)
            }
            Expr::Iff(a, b) => Formula::iff(self.formula(a, bound)?, self.formula(b, bound)?),
            Expr::Eq(a, b) => Formula::Eq(self.term(a, bound)?, self.term(b, bound)?),
            Expr::NotEq(a, b) => {
                Formula::not(Formula::Eq(self.term(a, bound)?, self.term(b, bound)?))
            }
            Expr::Forall(x, e) => {
                bound.push(x.clone());
                let inner = self.formula(e, bound)?;
                bound.pop();
                Formula::forall(x.clone(), inner)
            }
            Expr::Exists(x, e) => {
                bound.push(x.clone());
                let inner = self.formula(e, bound)?;
                bound.pop();
                Formula::exists(x.clone(), inner)
            }
            Expr::Lam(..) => return Err(self.error("a lambda cannot be used as a formula")),
            atom => {
                let term = self.term(atom, bound)?;
                let (head, args) = term.unfold_app();
                match head {
                    SurfaceTerm::Var(name) => {
                        if bound.iter().any(|b| b == name) {
                            return Err(self.error(format!(
                                "atom head '{name}' is a bound variable; \
                                 variable-headed atoms are not supported"
                            )));
                        }
                        // An unbound lowercase head in formula position is a
                        // predicate symbol with a fixed arity.
                        let arity = args.len();
                        match self.predicates.get(name) {
                            Some(&known) if known != arity => {
                                return Err(self.error(format!(
                                    "predicate '{name}' used with {arity} arguments \
                                     but previously with {known}"
                                )));
                            }
                            _ => {
                                self.predicates.insert(name.clone(), arity);
                            }
                        }
                        let fixed = replace_head(&term, name);
                        Formula::Atom(fixed)
                    }
                    SurfaceTerm::Const(name) => {
                        let arity = args.len();
                        match self.predicates.get(name) {
                            Some(&known) if known != arity => {
                                return Err(self.error(format!(
                                    "predicate '{name}' used with {arity} arguments \
                                     but previously with {known}"
                                )));
                            }
                            _ => {
                                self.predicates.insert(name.clone(), arity);
                            }
                        }
                        Formula::Atom(term)
                    }
                    _ => return Err(self.error("an atom must be headed by a symbol")),
                }
            }
        })
    }

    fn term(&mut self, expr: &Expr, bound: &mut Vec<String>) -> Result<SurfaceTerm, ParseError> {
        Ok(match expr {
            Expr::Ident(name) => {
                check_reserved(name).map_err(|m| self.error(m))?;
                if name.chars().next().is_some_and(|c| c.is_ascii_lowercase()) {
                    SurfaceTerm::var(name.clone())
                } else {
                    SurfaceTerm::constant(name.clone())
                }
            }
            Expr::Number(n) => SurfaceTerm::constant(n.clone()),
            Expr::App(f, a) => SurfaceTerm::app(self.term(f, bound)?, self.term(a, bound)?),
            Expr::Lam(x, body) => {
                bound.push(x.clone());
                let inner = self.term(body, bound)?;
                bound.pop();
                SurfaceTerm::lam(x.clone(), inner)
            }
            _ => return Err(self.error("formula operator in term position")),
        })
    }
}

/// Rewrites the head variable of an application spine into a constant.
fn replace_head(term: &SurfaceTerm, head: &str) -> SurfaceTerm {
    match term {
        SurfaceTerm::Var(v) if v == head => SurfaceTerm::constant(head),
        SurfaceTerm::App(f, a) => SurfaceTerm::app(replace_head(f, head), a.as_ref().clone()),
        _ => term.clone(),
    }
}

fn check_reserved(name: &str) -> Result<(), String> {
    if name == reserved::APP
        || name == reserved::UNDEFINED
        || reserved::is_combinator(name)
        || reserved::is_skolem(name)
        || reserved::is_supercombinator(name)
        || reserved::is_wildcard(name)
    {
        Err(format!("'{name}' is a reserved symbol"))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Native format.
// ---------------------------------------------------------------------------

fn parse_native(text: &str) -> Result<Problem, ParseError> {
    let mut options = ProblemOptions::default();
    let mut raw_facts: Vec<(String, Expr, usize)> = Vec::new();
    let mut raw_goal: Option<(Expr, usize)> = None;
    let mut seen_names = BTreeSet::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let toks = tokenize(raw_line, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let mut parser = Parser {
            toks,
            pos: 0,
            line: lineno,
        };
        let keyword = parser.ident()?;
        match keyword.as_str() {
            "option" => {
                let name = parser.ident()?;
                parser.expect(&Tok::Eq, "'=' in option")?;
                let value = match parser.next() {
                    Some(Tok::Ident(v)) => v,
                    Some(Tok::Number(v)) => v,
                    _ => return Err(parser.error("expected option value")),
                };
                apply_option(&mut options, &name, &value).map_err(|m| parser.error(m))?;
            }
            "fact" => {
                let name = parser.ident()?;
                if !seen_names.insert(name.clone()) {
                    return Err(parser.error(format!("duplicate fact name '{name}'")));
                }
                parser.expect(&Tok::Colon, "':' after fact name")?;
                let expr = parser.expr()?;
                if !parser.at_end() {
                    return Err(parser.error("trailing input after formula"));
                }
                raw_facts.push((name, expr, lineno));
            }
            "goal" => {
                if raw_goal.is_some() {
                    return Err(parser.error("duplicate goal"));
                }
                parser.expect(&Tok::Colon, "':' after goal")?;
                let expr = parser.expr()?;
                if !parser.at_end() {
                    return Err(parser.error("trailing input after formula"));
                }
                raw_goal = Some((expr, lineno));
            }
            other => {
                return Err(ParseError {
                    line: lineno,
                    column: 1,
                    message: format!("expected 'option', 'fact' or 'goal', got '{other}'"),
                })
            }
        }
    }

    let (goal_expr, goal_line) = raw_goal.ok_or(ParseError {
        line: text.lines().count() + 1,
        column: 1,
        message: "missing goal".to_string(),
    })?;

    let mut resolver = Resolver {
        line: goal_line,
        predicates: BTreeMap::new(),
    };
    let goal = resolver.formula(&goal_expr, &mut Vec::new())?;
    let mut facts = Vec::new();
    for (name, expr, lineno) in &raw_facts {
        resolver.line = *lineno;
        let formula = resolver.formula(expr, &mut Vec::new())?;
        facts.push((name.clone(), formula));
    }
    let predicates = resolver.predicates;

    // Free identifiers of the goal are fixed: they act as constants in the
    // whole problem, including inside facts.
    let fixed_consts: BTreeSet<String> = goal
        .free_vars()
        .into_iter()
        .filter(|v| !predicates.contains_key(v))
        .collect();

    let freeze: Vec<(String, SurfaceTerm)> = fixed_consts
        .iter()
        .map(|name| (name.clone(), SurfaceTerm::constant(name.clone())))
        .collect();
    let goal = freeze_frees(&goal, &freeze);
    let facts: Vec<(String, Formula)> = facts
        .into_iter()
        .map(|(name, formula)| (name, freeze_frees(&formula, &freeze)))
        .collect();

    // Predicates must not occur in term position.
    for (name, formula) in facts
        .iter()
        .map(|(n, f)| (n.clone(), f))
        .chain(std::iter::once(("goal".to_string(), &goal)))
    {
        if let Some(p) = predicate_in_term_position(formula, &predicates) {
            return Err(ParseError {
                line: 1,
                column: 1,
                message: format!("predicate '{p}' used in term position in {name}"),
            });
        }
    }

    Ok(Problem {
        facts,
        goal,
        options,
        predicates,
        fixed_consts,
    })
}

fn apply_option(options: &mut ProblemOptions, name: &str, value: &str) -> Result<(), String> {
    match name {
        "lambda_mode" => {
            options.lambda_mode = Some(match value {
                "lifting" => LambdaMode::Lifting,
                "combinators" => LambdaMode::Combinators,
                other => return Err(format!("unknown lambda_mode '{other}'")),
            });
        }
        "ext" => {
            options.ext = Some(parse_bool(value)?);
        }
        "undefined" => {
            options.undefined = Some(parse_bool(value)?);
        }
        other => return Err(format!("unknown option '{other}'")),
    }
    Ok(())
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value {
        "true" | "on" | "1" => Ok(true),
        "false" | "off" | "0" => Ok(false),
        other => Err(format!("expected a boolean, got '{other}'")),
    }
}

/// Substitutes goal-fixed identifiers by constants, respecting binders.
fn freeze_frees(formula: &Formula, freeze: &[(String, SurfaceTerm)]) -> Formula {
    fn freeze_term(term: &SurfaceTerm, freeze: &[(String, SurfaceTerm)]) -> SurfaceTerm {
        let mut out = term.clone();
        for (var, constant) in freeze {
            out = out.substitute(var, constant);
        }
        out
    }
    fn go(formula: &Formula, freeze: &[(String, SurfaceTerm)]) -> Formula {
        match formula {
            Formula::Atom(t) => Formula::Atom(freeze_term(t, freeze)),
            Formula::Eq(l, r) => Formula::Eq(freeze_term(l, freeze), freeze_term(r, freeze)),
            Formula::Not(f) => Formula::not(go(f, freeze)),
            Formula::And(a, b) => Formula::and(go(a, freeze), go(b, freeze)),
            Formula::Or(a, b) => Formula::or(go(a, freeze), go(b, freeze)),
            Formula::Implies(a, b) => Formula::implies(go(a, freeze), go(b, freeze)),
            Formula::Iff(a, b) => Formula::iff(go(a, freeze), go(b, freeze)),
            Formula::Forall(x, f) => {
                let inner: Vec<(String, SurfaceTerm)> =
                    freeze.iter().filter(|(v, _)| v != x).cloned().collect();
                Formula::forall(x.clone(), go(f, &inner))
            }
            Formula::Exists(x, f) => {
                let inner: Vec<(String, SurfaceTerm)> =
                    freeze.iter().filter(|(v, _)| v != x).cloned().collect();
                Formula::exists(x.clone(), go(f, &inner))
            }
        }
    }
    go(formula, freeze)
}

fn predicate_in_term_position(
    formula: &Formula,
    predicates: &BTreeMap<String, usize>,
) -> Option<String> {
    fn check_term(
        term: &SurfaceTerm,
        predicates: &BTreeMap<String, usize>,
        is_head: bool,
    ) -> Option<String> {
        match term {
            SurfaceTerm::Var(v) | SurfaceTerm::Const(v) => {
                if !is_head && predicates.contains_key(v) {
                    Some(v.clone())
                } else {
                    None
                }
            }
            SurfaceTerm::App(f, a) => {
                check_term(f, predicates, is_head).or_else(|| check_term(a, predicates, false))
            }
            SurfaceTerm::Lam(_, body) => check_term(body, predicates, false),
        }
    }
    fn go(formula: &Formula, predicates: &BTreeMap<String, usize>) -> Option<String> {
        match formula {
            Formula::Atom(t) => check_term(t, predicates, true),
            Formula::Eq(l, r) => {
                check_term(l, predicates, false).or_else(|| check_term(r, predicates, false))
            }
            Formula::Not(f) => go(f, predicates),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => go(a, predicates).or_else(|| go(b, predicates)),
            Formula::Forall(_, f) | Formula::Exists(_, f) => go(f, predicates),
        }
    }
    go(formula, predicates)
}

// ---------------------------------------------------------------------------
// TPTP CNF subset.
// ---------------------------------------------------------------------------

/// Parses `cnf(name, role, clause).` statements. Axiom-like roles become
/// facts (their variables are the instantiation targets); negated
/// conjectures are collected into the goal so that negating the goal
/// reproduces them.
fn parse_tptp(text: &str) -> Result<Problem, ParseError> {
    let mut facts: Vec<(String, Formula)> = Vec::new();
    let mut negated_conjectures: Vec<Formula> = Vec::new();
    let mut resolver = Resolver {
        line: 1,
        predicates: BTreeMap::new(),
    };
    let mut seen_names = BTreeSet::new();

    // Join lines, then split on the closing ")." of each statement.
    for (idx, raw_line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
            continue;
        }
        let inner = line
            .strip_prefix("cnf(")
            .and_then(|rest| {
                rest.trim_end()
                    .strip_suffix(").")
                    .or_else(|| rest.strip_suffix(")"))
            })
            .ok_or(ParseError {
                line: lineno,
                column: 1,
                message: "expected cnf(name, role, clause).".to_string(),
            })?;
        let (name, rest) = inner.split_once(',').ok_or(ParseError {
            line: lineno,
            column: 1,
            message: "expected role after statement name".to_string(),
        })?;
        let (role, clause_text) = rest.trim_start().split_once(',').ok_or(ParseError {
            line: lineno,
            column: 1,
            message: "expected clause after role".to_string(),
        })?;
        let name = name.trim().to_string();
        if !seen_names.insert(name.clone()) {
            return Err(ParseError {
                line: lineno,
                column: 1,
                message: format!("duplicate statement name '{name}'"),
            });
        }
        let toks = tokenize(clause_text.trim(), lineno)?;
        let mut parser = Parser {
            toks,
            pos: 0,
            line: lineno,
        };
        let expr = parser.expr()?;
        if !parser.at_end() {
            return Err(parser.error("trailing input after clause"));
        }
        resolver.line = lineno;
        let formula = tptp_formula(&expr, &mut resolver)?;
        match role.trim() {
            "axiom" | "hypothesis" | "definition" | "lemma" => facts.push((name, formula)),
            "negated_conjecture" => {
                // Close the clause so its variables stay universal through
                // the goal's negation.
                let mut closed = formula;
                for var in closed.free_vars() {
                    closed = Formula::forall(var, closed);
                }
                negated_conjectures.push(closed);
            }
            other => {
                return Err(ParseError {
                    line: lineno,
                    column: 1,
                    message: format!("unsupported TPTP role '{other}'"),
                })
            }
        }
    }

    let goal = match negated_conjectures.into_iter().reduce(Formula::and) {
        Some(conjunction) => Formula::not(conjunction),
        None => {
            return Err(ParseError {
                line: text.lines().count() + 1,
                column: 1,
                message: "no negated_conjecture statement".to_string(),
            })
        }
    };

    Ok(Problem {
        facts,
        goal,
        options: ProblemOptions::default(),
        predicates: resolver.predicates,
        fixed_consts: BTreeSet::new(),
    })
}

/// TPTP resolution: uppercase identifiers are variables, lowercase are
/// functors. Clauses only, so the connective cases are limited.
fn tptp_formula(expr: &Expr, resolver: &mut Resolver) -> Result<Formula, ParseError> {
    Ok(match expr {
        Expr::Or(a, b) => Formula::or(tptp_formula(a, resolver)?, tptp_formula(b, resolver)?),
        Expr::Not(e) => Formula::not(tptp_formula(e, resolver)?),
        Expr::Eq(a, b) => Formula::Eq(tptp_term(a, resolver)?, tptp_term(b, resolver)?),
        Expr::NotEq(a, b) => Formula::not(Formula::Eq(
            tptp_term(a, resolver)?,
            tptp_term(b, resolver)?,
        )),
        atom => {
            let term = tptp_term(atom, resolver)?;
            let (head, args) = term.unfold_app();
            let SurfaceTerm::Const(name) = head else {
                return Err(resolver.error("a TPTP atom must be headed by a functor"));
            };
            let arity = args.len();
            match resolver.predicates.get(name) {
                Some(&known) if known != arity => {
                    return Err(resolver.error(format!(
                        "predicate '{name}' used with {arity} arguments but previously with {known}"
                    )));
                }
                _ => {
                    resolver.predicates.insert(name.clone(), arity);
                }
            }
            Formula::Atom(term)
        }
    })
}

fn tptp_term(expr: &Expr, resolver: &Resolver) -> Result<SurfaceTerm, ParseError> {
    Ok(match expr {
        Expr::Ident(name) => {
            check_reserved(name).map_err(|m| resolver.error(m))?;
            if name.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
                SurfaceTerm::var(name.clone())
            } else {
                SurfaceTerm::constant(name.clone())
            }
        }
        Expr::Number(n) => SurfaceTerm::constant(n.clone()),
        Expr::App(f, a) => SurfaceTerm::app(tptp_term(f, resolver)?, tptp_term(a, resolver)?),
        _ => return Err(resolver.error("only literals are allowed in TPTP clauses")),
    })
}
