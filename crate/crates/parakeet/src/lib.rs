//! A small first-order prover built around checkable proof objects.
//!
//! The crate is organized in three layers:
//!
//! * the first-order vocabulary: [`term`], [`clause`], [`unify`], [`kbo`];
//! * the proof layer: [`proof`] (a six-rule kernel with an independent
//!   checker), [`prover`] (a given-clause saturation loop that records every
//!   inference in terms of the kernel rules), and [`infer`] (extraction of
//!   per-axiom substitutions from a proof plus the substitution-free proof
//!   transformation);
//! * the surface layer: [`surface`], [`parse`], [`clausify`], [`lambda`]
//!   (a small higher-order-ish input language that is compiled down to
//!   first-order clauses) and [`decode`] (the reverse translation used to
//!   render inferred instantiations back in the input language).
//!
//! [`driver`] glues everything into the prove / instantiate / replay
//! pipelines used by the command-line tool and the browser demo.

pub mod clause;
pub mod clausify;
pub mod decode;
pub mod driver;
pub mod infer;
pub mod kbo;
pub mod lambda;
pub mod parse;
pub mod proof;
pub mod prover;
pub mod surface;
pub mod term;
pub mod unify;

pub use clause::{Clause, Literal, Path};
pub use proof::{Proof, ProofNode, Rule};
pub use prover::{ProverLimits, ProverOutcome, SearchStats};
pub use term::{Substitution, Term};
