//! Ready-made automata: constants, the unary counter and doubler, binary
//! evaluation and per-symbol letter counters.

use num_bigint::BigUint;
use num_traits::One;

use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};

/// Single-state automaton computing the constant function `c`: initial
/// weight c, final weight 1, a unit self-loop on every symbol.
pub fn constant(c: impl Into<BigUint>, alphabet: &[char]) -> Result<WeightedAutomaton> {
    let mut m = WeightedAutomaton::with_systematic_names(1, alphabet.to_vec())?;
    m.set_init(0, c.into());
    m.set_out(0, BigUint::one());
    for s in 0..alphabet.len() {
        m.set_trans(0, s, 0, BigUint::one());
    }
    Ok(m)
}

/// Two-state automaton over {'1'} computing 1ⁿ ↦ n: a start state with a
/// self-loop that may at any step hand over to an accepting state with its
/// own self-loop. The n handover positions are the n accepting paths.
pub fn unary_counter() -> WeightedAutomaton {
    let mut m = WeightedAutomaton::new(vec!["S".into(), "A".into()], vec!['1'])
        .expect("fixed names are unique");
    m.set_init(0, BigUint::one());
    m.set_out(1, BigUint::one());
    m.set_trans(0, 0, 0, BigUint::one());
    m.set_trans(0, 0, 1, BigUint::one());
    m.set_trans(1, 0, 1, BigUint::one());
    m
}

/// One-state automaton over {'1'} computing 1ⁿ ↦ 2ⁿ: a start-accept state
/// whose self-loop has multiplicity 2.
pub fn unary_doubler() -> WeightedAutomaton {
    let mut m =
        WeightedAutomaton::new(vec!["S".into()], vec!['1']).expect("fixed names are unique");
    m.set_init(0, BigUint::one());
    m.set_out(0, BigUint::one());
    m.set_trans(0, 0, 0, BigUint::from(2u32));
    m
}

/// Automaton computing the value of its input read as a binary number,
/// ignoring symbols other than '0' and '1'. The alphabet must contain both
/// digits; extra symbols get unit self-loops on both states.
///
/// In matrix form this is a = (1, 0), A_σ = ((1, σ), (0, 2)), b = (0, 1)ᵀ.
pub fn binary_value(alphabet: &[char]) -> Result<WeightedAutomaton> {
    if !alphabet.contains(&'0') || !alphabet.contains(&'1') {
        return Err(Error::Input(
            "binary_value needs an alphabet containing '0' and '1'".into(),
        ));
    }
    let mut m = WeightedAutomaton::new(vec!["S".into(), "A".into()], alphabet.to_vec())?;
    m.set_init(0, BigUint::one());
    m.set_out(1, BigUint::one());
    for (s, &c) in alphabet.iter().enumerate() {
        match c {
            '0' => {
                m.set_trans(0, s, 0, BigUint::one());
                m.set_trans(1, s, 1, BigUint::from(2u32));
            }
            '1' => {
                m.set_trans(0, s, 0, BigUint::one());
                m.set_trans(0, s, 1, BigUint::one());
                m.set_trans(1, s, 1, BigUint::from(2u32));
            }
            _ => {
                // Ignored symbols act as identity matrices.
                m.set_trans(0, s, 0, BigUint::one());
                m.set_trans(1, s, 1, BigUint::one());
            }
        }
    }
    Ok(m)
}

/// Automaton computing the number of occurrences of `symbol` in the input.
pub fn letter_counter(alphabet: &[char], symbol: char) -> Result<WeightedAutomaton> {
    if !alphabet.contains(&symbol) {
        return Err(Error::Input(format!(
            "letter_counter symbol {symbol:?} is not in the alphabet"
        )));
    }
    let mut m = WeightedAutomaton::new(vec!["S".into(), "A".into()], alphabet.to_vec())?;
    m.set_init(0, BigUint::one());
    m.set_out(1, BigUint::one());
    for (s, &c) in alphabet.iter().enumerate() {
        m.set_trans(0, s, 0, BigUint::one());
        m.set_trans(1, s, 1, BigUint::one());
        if c == symbol {
            // Each occurrence is one opportunity to switch to the accept state.
            m.set_trans(0, s, 1, BigUint::one());
        }
    }
    Ok(m)
}
