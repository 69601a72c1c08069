//! Decision procedures for topological and logical fragments of
//! omega-regular languages over finite and infinite words.
//!
//! The pipeline: parse an omega-regular expression or automaton
//! ([`buchi`]), compute a recognizing finite monoid and its syntactic
//! quotient ([`algebra`]), then decide whether the language is a
//! Boolean combination of open sets of the alphabetic or Cantor
//! topology, producing a constructive block representation on YES and
//! a counterexample pair of lassos on NO ([`decide`]). Monomials and
//! their equivalences ([`monomials`]) tie the topological condition to
//! quantifier-alternation fragments; [`oracle`] holds independent
//! brute-force references used by the differential test suites.

pub mod algebra;
pub mod buchi;
pub mod decide;
pub mod monomials;
pub mod oracle;
pub mod words;

pub use words::{Letter, LetterSet, UpWord, Word, WordError};

use thiserror::Error;

/// Caps for enumerative computations: monomial degree and alphabet
/// size for `enumerate_k_monomials`, element count for monoid
/// closures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_k: usize,
    pub max_alphabet: usize,
    pub max_elements: usize,
}

impl Budget {
    /// Lifts every cap; used by the CLI `--force` flag.
    pub const fn unlimited() -> Budget {
        Budget {
            max_k: usize::MAX,
            max_alphabet: usize::MAX,
            max_elements: usize::MAX,
        }
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_k: 3,
            max_alphabet: 3,
            max_elements: 5000,
        }
    }
}

/// A cap from [`Budget`] was exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{what} {requested} exceeds the budget limit {limit}")]
pub struct BudgetError {
    pub what: &'static str,
    pub requested: usize,
    pub limit: usize,
}
