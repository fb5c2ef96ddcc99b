//! Browser bindings: the prove / instantiate / replay pipelines over plain
//! strings, for the static playground page in `index.html`.
//!
//! Build with `wasm-pack build --target web crates/parakeet-web` (or
//! `cargo build --target wasm32-unknown-unknown` plus `wasm-bindgen`).
//! There is no wall clock on bare wasm, so searches are bounded by the
//! generated-clause budget alone.

use wasm_bindgen::prelude::*;

use parakeet::driver::{instantiate_text, prove_text, replay_text, ExtMode, RunOptions};
use parakeet::parse::LambdaMode;
use parakeet::prover::ProverLimits;

fn options(limit_clauses: u32, lambda: &str, ext: &str, undefined: bool) -> RunOptions {
    RunOptions {
        limits: ProverLimits {
            max_generated_clauses: limit_clauses.max(1) as u64,
            // Irrelevant on wasm: elapsed time is always 0 there.
            max_seconds: 3600.0,
            use_ext: false,
            tie_seed: 0,
        },
        lambda_mode: match lambda {
            "lifting" => Some(LambdaMode::Lifting),
            "combinators" => Some(LambdaMode::Combinators),
            _ => None,
        },
        ext: match ext {
            "on" => ExtMode::On,
            "off" => ExtMode::Off,
            _ => ExtMode::Auto,
        },
        undefined: Some(undefined),
    }
}

/// Proves the problem and returns the report (or the error) as plain text.
#[wasm_bindgen]
pub fn prove(text: &str, limit_clauses: u32, lambda: &str, ext: &str, undefined: bool) -> String {
    match prove_text(text, &options(limit_clauses, lambda, ext, undefined)) {
        Ok(report) => report.plain_text(),
        Err(err) => format!("error: {err}\n"),
    }
}

/// Proves, then reports the inferred instantiations and the transformed
/// substitution-free proof's step counts.
#[wasm_bindgen]
pub fn instantiate(
    text: &str,
    limit_clauses: u32,
    lambda: &str,
    ext: &str,
    undefined: bool,
) -> String {
    match instantiate_text(text, &options(limit_clauses, lambda, ext, undefined)) {
        Ok(report) => report.plain_text(),
        Err(err) => format!("error: {err}\n"),
    }
}

/// The full pipeline: prove, instantiate the facts, search again from them.
#[wasm_bindgen]
pub fn replay(text: &str, limit_clauses: u32, lambda: &str, ext: &str, undefined: bool) -> String {
    match replay_text(text, &options(limit_clauses, lambda, ext, undefined)) {
        Ok(report) => report.plain_text(),
        Err(err) => format!("error: {err}\n"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "\
fact F1 : less(m, n) -> less(Suc(m), Suc(n))
fact F2 : Suc(0) = 1
fact F3 : less(0, Suc(n))
goal : less(1, Suc(Suc(x)))
";

    #[test]
    fn bindings_run_on_native_targets_too() {
        let out = instantiate(EXAMPLE, 10_000, "lifting", "auto", true);
        assert!(out.contains("outcome: refutation"), "{out}");
        assert!(out.contains("F1 with {m -> 0, n -> Suc x}"), "{out}");
    }

    #[test]
    fn errors_are_reported_as_text() {
        let out = prove("goal : p(\n", 100, "lifting", "auto", true);
        assert!(out.starts_with("error: parse error"), "{out}");
    }
}
