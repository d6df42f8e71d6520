//! Finite ℕ-weighted automata and their functional closure properties.
//!
//! An ℕ-weighted automaton assigns every word the sum, over all computations,
//! of the product of the weights along the computation. This crate provides:
//!
//! - the automaton model with two independent evaluators (matrix products and
//!   brute-force path counting), weight flattening into simple automata, and
//!   JSON serialization ([`automaton`], [`json`], [`builders`]);
//! - finite semirings with the canonical homomorphism from ℕ ([`semiring`]);
//! - the stepwise-computation-property engine that filters or counts
//!   computations by running a finite side computation in lockstep
//!   ([`stepwise`]);
//! - closure operations: pointwise sums and products, truncated subtraction,
//!   clamping, comparisons, floor division, residue indicators, binomial
//!   coefficients and compositions with integer-valued polynomials and
//!   quasi-polynomial (PORC) functions ([`closures`], [`porc`]);
//! - multivariate polynomial closure decisions and constructions ([`porc`]);
//! - growth classification of matrix-power diagonals ([`growth`]);
//! - oracle audits sweeping all words up to a length ([`audit`]).
//!
//! Every construction is validated against brute-force path counting; see the
//! `acceptance` integration test for the full suite.
//!
//! The `parallel` feature (enabled by default) runs word sweeps on rayon;
//! disabling it falls back to sequential sweeps with identical results.

pub mod audit;
pub mod automaton;
pub mod builders;
pub mod closures;
pub mod error;
pub mod growth;
pub mod json;
pub mod matrix;
pub mod porc;
pub mod semiring;
pub mod stepwise;
pub mod words;

pub use automaton::{MatrixForm, WeightedAutomaton};
pub use error::{Error, Result};

/// Resource limits shared by the constructions.
///
/// `max_states` caps the state count of any single constructed automaton,
/// `oracle_budget` caps the number of computations a brute-force enumeration
/// may visit, and `max_binom` caps the order of binomial-coefficient
/// constructions (which contain a c-fold product and a division by c!).
#[derive(Debug, Clone)]
pub struct Limits {
    pub max_states: usize,
    pub oracle_budget: u64,
    pub max_binom: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 250_000,
            oracle_budget: 10_000_000,
            max_binom: 6,
        }
    }
}
