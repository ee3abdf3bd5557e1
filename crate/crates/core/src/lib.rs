//! Clocked lambda calculus toolkit.
//!
//! The clocked calculus extends beta reduction so that every beta step
//! deposits a witness symbol `τ`, together with a rule lifting `τ` over the
//! left side of applications. Head-reducing a term while counting the
//! witnesses yields clocked Levy-Longo tree approximants, and comparing the
//! per-node witness counts of two terms gives evidence that the terms are
//! not beta-convertible.
//!
//! Modules:
//! - [`term`]: the term AST, substitution, alpha equality, printing
//! - [`parser`]: concrete syntax
//! - [`reduce`]: clocked / atomic / classical rewrite rules and strategies
//! - [`tree`]: depth-bounded clocked Levy-Longo tree approximants
//! - [`discriminate`]: simplicity checking and inconvertibility verdicts
//! - [`zoo`]: named combinators (fixed point combinator families etc.)

pub mod discriminate;
pub mod parser;
pub mod reduce;
pub mod term;
pub mod tree;
pub mod zoo;

pub use term::{Annotation, Mode, Path, PosLetter, Position, Term};
