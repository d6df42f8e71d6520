//! Shared helpers for the integration tests: seeded random automata.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use fa::automaton::WeightedAutomaton;

fn random_weight(rng: &mut impl Rng, p: f64, max_weight: u64) -> BigUint {
    if rng.random_bool(p) {
        BigUint::from(rng.random_range(1..=max_weight))
    } else {
        BigUint::zero()
    }
}

/// Random automaton over {a, b} with up to `max_states` states and weights
/// up to `max_weight` (transition, initial and final).
pub fn random_weighted(
    rng: &mut impl Rng,
    max_states: usize,
    max_weight: u64,
) -> WeightedAutomaton {
    let n = rng.random_range(1..=max_states);
    let mut m = WeightedAutomaton::with_systematic_names(n, vec!['a', 'b']).unwrap();
    for q in 0..n {
        let w = random_weight(rng, 0.5, max_weight);
        m.set_init(q, w);
        let w = random_weight(rng, 0.5, max_weight);
        m.set_out(q, w);
        for s in 0..2 {
            for t in 0..n {
                let w = random_weight(rng, 0.45, max_weight);
                m.set_trans(q, s, t, w);
            }
        }
    }
    m
}

/// Random simple automaton over {a, b} with up to `max_states` states.
pub fn random_simple(rng: &mut impl Rng, max_states: usize) -> WeightedAutomaton {
    random_weighted(rng, max_states, 1)
}

pub fn to_u64(v: &BigUint) -> u64 {
    v.try_into().expect("value fits in u64")
}
