//! Quasi-polynomial (PORC) functions and binomial-basis polynomial algebra:
//! basis conversions, shifted rewritings, nonnegative interpolation, the
//! multivariate closure decision and its automaton construction, and the
//! polynomial/PORC input formats of the CLI.

pub mod binomial;
pub mod function;
pub mod multivariate;
pub mod parse;

pub use binomial::{
    binom_int, from_binomial_basis, interpolate_nonneg, shift_binomial_basis, to_binomial_basis,
    BinomialPoly, IntBinomialPoly, Interpolation, QPolynomial, ShiftedBinomialForm,
    ShiftedBinomialTerm,
};
pub use function::{
    compose_sum_products, parse_rational, shifted_remainder, PorcFunction, SumOfProductsPorc,
};
pub use multivariate::{
    build_poly_closure, decide_closure_poly, shift_binomial_basis_multi, ClosureDecision,
    MultiBinomialPoly, RejectionWitness, ShiftedMultiTerm,
};
pub use parse::{parse_polynomial, MultiPolynomial};
