//! JSON file formats for automata and matrices.
//!
//! Automaton format (UTF-8):
//!
//! ```json
//! { "alphabet": ["a", "b"], "states": ["q0", "q1"],
//!   "init": {"q0": "1"}, "out": {"q1": "1"},
//!   "trans": [ {"from": "q0", "sym": "a", "to": "q1", "w": "2"} ] }
//! ```
//!
//! Omitted entries mean weight 0. States are listed in canonical order and
//! transitions in canonical (from, symbol, to) order. Weights are written as
//! decimal strings so arbitrarily large integers survive the round trip;
//! plain JSON numbers are accepted on input.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};
use crate::matrix::NatMatrix;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct AutomatonWire {
    alphabet: Vec<String>,
    states: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    init: BTreeMap<String, WeightValue>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    out: BTreeMap<String, WeightValue>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    trans: Vec<TransWire>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TransWire {
    from: String,
    sym: String,
    to: String,
    w: WeightValue,
}

/// A nonnegative integer that serializes as a decimal string but accepts
/// plain numbers on input.
#[derive(Debug, Clone)]
struct WeightValue(BigUint);

impl Serialize for WeightValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for WeightValue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(n) => Ok(WeightValue(BigUint::from(n))),
            Raw::Str(s) => BigUint::from_str(s.trim())
                .map(WeightValue)
                .map_err(|_| serde::de::Error::custom(format!("invalid weight {s:?}"))),
        }
    }
}

fn single_char(s: &str) -> Result<char> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(Error::Parse(format!(
            "alphabet symbols must be single characters, got {s:?}"
        ))),
    }
}

pub fn automaton_to_json(m: &WeightedAutomaton) -> String {
    let mut init = BTreeMap::new();
    let mut out = BTreeMap::new();
    for (q, name) in m.states().iter().enumerate() {
        if !m.init_weight(q).is_zero() {
            init.insert(name.clone(), WeightValue(m.init_weight(q).clone()));
        }
        if !m.out_weight(q).is_zero() {
            out.insert(name.clone(), WeightValue(m.out_weight(q).clone()));
        }
    }
    let trans = m
        .transitions()
        .map(|(f, s, t, w)| TransWire {
            from: m.states()[f].clone(),
            sym: m.alphabet()[s].to_string(),
            to: m.states()[t].clone(),
            w: WeightValue(w.clone()),
        })
        .collect();
    let wire = AutomatonWire {
        alphabet: m.alphabet().iter().map(|c| c.to_string()).collect(),
        states: m.states().to_vec(),
        init,
        out,
        trans,
    };
    let mut text = serde_json::to_string_pretty(&wire).expect("serialization cannot fail");
    text.push('\n');
    text
}

pub fn automaton_from_json(text: &str) -> Result<WeightedAutomaton> {
    let wire: AutomatonWire =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("automaton JSON: {e}")))?;
    let alphabet: Vec<char> = wire
        .alphabet
        .iter()
        .map(|s| single_char(s))
        .collect::<Result<_>>()?;
    let mut m = WeightedAutomaton::new(wire.states, alphabet)?;
    let resolve_state = |m: &WeightedAutomaton, name: &str| {
        m.state_index(name)
            .ok_or_else(|| Error::Parse(format!("unknown state {name:?} in weight map")))
    };
    for (name, w) in &wire.init {
        let q = resolve_state(&m, name)?;
        m.set_init(q, w.0.clone());
    }
    for (name, w) in &wire.out {
        let q = resolve_state(&m, name)?;
        m.set_out(q, w.0.clone());
    }
    for t in &wire.trans {
        let f = resolve_state(&m, &t.from)?;
        let to = resolve_state(&m, &t.to)?;
        let sym = single_char(&t.sym)?;
        let s = m
            .symbol_index(sym)
            .ok_or_else(|| Error::Parse(format!("unknown symbol {sym:?} in transition")))?;
        m.set_trans(f, s, to, t.w.0.clone());
    }
    Ok(m)
}

#[derive(Debug, Serialize, Deserialize)]
struct MatrixWire {
    matrix: Vec<Vec<WeightValue>>,
}

pub fn matrix_to_json(m: &NatMatrix) -> String {
    let wire = MatrixWire {
        matrix: m
            .rows()
            .iter()
            .map(|r| r.iter().map(|w| WeightValue(w.clone())).collect())
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&wire).expect("serialization cannot fail");
    text.push('\n');
    text
}

pub fn matrix_from_json(text: &str) -> Result<NatMatrix> {
    let wire: MatrixWire =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    NatMatrix::from_rows(
        wire.matrix
            .into_iter()
            .map(|r| r.into_iter().map(|w| w.0).collect())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use num_traits::One;

    #[test]
    fn round_trip_is_weight_map_identical() {
        let m = builders::binary_value(&['0', '1', 'a']).unwrap();
        let text = automaton_to_json(&m);
        let back = automaton_from_json(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn accepts_numbers_and_strings_for_weights() {
        let text = r#"{
            "alphabet": ["a"], "states": ["q0", "q1"],
            "init": {"q0": 1}, "out": {"q1": "340282366920938463463374607431768211456"},
            "trans": [{"from": "q0", "sym": "a", "to": "q1", "w": 2}]
        }"#;
        let m = automaton_from_json(text).unwrap();
        assert_eq!(m.init_weight(0), &BigUint::one());
        assert_eq!(m.out_weight(1), &BigUint::from(2u8).pow(128));
    }

    #[test]
    fn rejects_unknown_states_and_long_symbols() {
        let bad_state = r#"{"alphabet": ["a"], "states": ["q0"], "init": {"zz": "1"}}"#;
        assert!(matches!(
            automaton_from_json(bad_state),
            Err(Error::Parse(_))
        ));
        let bad_sym = r#"{"alphabet": ["ab"], "states": ["q0"]}"#;
        assert!(matches!(automaton_from_json(bad_sym), Err(Error::Parse(_))));
    }

    #[test]
    fn matrix_round_trip() {
        let m = NatMatrix::from_u64_rows(&[&[0, 1], &[1, 0]]).unwrap();
        let back = matrix_from_json(&matrix_to_json(&m)).unwrap();
        assert_eq!(back, m);
    }
}
