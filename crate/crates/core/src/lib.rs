pub mod compiler;
pub mod error;
pub mod formula;
pub mod growth;
pub mod interp;
pub mod monoid;
pub mod oracle;
pub mod reparam;
pub mod selftest;
pub mod word;

pub use error::{Error, Result};
pub use formula::Formula;
pub use word::{Letter, MarkedWord, Signature, Word};

/// Resource limits shared by the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Limits {
    pub dfa: compiler::Budget,
    pub monoid_elements: usize,
    /// Cap on explicitly listed normal-form disjuncts.
    pub disjuncts: usize,
    /// Cap on distinct run-count vectors explored for exact preimage bounds.
    pub ambiguity_vectors: usize,
    /// Largest run count tracked before a preimage bound is declared unknown.
    pub ambiguity_count: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            dfa: compiler::Budget::default(),
            monoid_elements: monoid::DEFAULT_ELEMENT_BUDGET,
            disjuncts: 100_000,
            ambiguity_vectors: 200_000,
            ambiguity_count: 1 << 20,
        }
    }
}
