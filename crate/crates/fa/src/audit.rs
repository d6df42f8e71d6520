//! Cross-checking the two evaluators over word sweeps.
//!
//! An audit runs [`WeightedAutomaton::evaluate`] against
//! [`WeightedAutomaton::count_paths_bruteforce`] on every word up to a given
//! length and reports the first mismatch in word order. With the `parallel`
//! feature (on by default) the sweep fans out across words via rayon;
//! aggregation stays deterministic because the first mismatch in enumeration
//! order wins either way. [`audit_seq`] is always available as the
//! sequential fallback and as the baseline for the benchmark suite.

use num_bigint::BigUint;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::automaton::WeightedAutomaton;
use crate::error::Result;
use crate::words::words_up_to;
use crate::Limits;

/// Outcome of an audit sweep.
#[derive(Debug, Clone)]
pub struct AuditReport {
    pub words_checked: u64,
    pub first_mismatch: Option<Mismatch>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct Mismatch {
    pub word: String,
    pub evaluated: BigUint,
    pub counted: BigUint,
}

/// Checks `evaluate(m, w) == count_paths_bruteforce(m, w)` for all words
/// with |w| ≤ `max_len`.
pub fn audit(m: &WeightedAutomaton, max_len: usize, limits: &Limits) -> Result<AuditReport> {
    cross_check(m, m, max_len, limits)
}

/// Sequential variant of [`audit`].
pub fn audit_seq(m: &WeightedAutomaton, max_len: usize, limits: &Limits) -> Result<AuditReport> {
    cross_check_seq(m, m, max_len, limits)
}

/// Compares `evaluate(m, w)` against `count_paths_bruteforce(oracle, w)` for
/// all words with |w| ≤ `max_len`. `cross_check(m, m, ..)` is the usual
/// self-audit; passing a different oracle automaton exposes the mismatch
/// reporting path (e.g. for deliberately perturbed fixtures).
pub fn cross_check(
    m: &WeightedAutomaton,
    oracle: &WeightedAutomaton,
    max_len: usize,
    limits: &Limits,
) -> Result<AuditReport> {
    #[cfg(feature = "parallel")]
    {
        cross_check_par(m, oracle, max_len, limits)
    }
    #[cfg(not(feature = "parallel"))]
    {
        cross_check_seq(m, oracle, max_len, limits)
    }
}

fn check_word(
    m: &WeightedAutomaton,
    oracle: &WeightedAutomaton,
    word: &[usize],
    limits: &Limits,
) -> Result<Option<Mismatch>> {
    let evaluated = m.evaluate_word(word);
    let counted = oracle.count_paths_bruteforce_word(word, limits.oracle_budget)?;
    if evaluated == counted {
        Ok(None)
    } else {
        Ok(Some(Mismatch {
            word: m.word_to_string(word),
            evaluated,
            counted,
        }))
    }
}

pub fn cross_check_seq(
    m: &WeightedAutomaton,
    oracle: &WeightedAutomaton,
    max_len: usize,
    limits: &Limits,
) -> Result<AuditReport> {
    let mut words_checked = 0;
    for word in words_up_to(m.alphabet().len(), max_len) {
        words_checked += 1;
        if let Some(mismatch) = check_word(m, oracle, &word, limits)? {
            return Ok(AuditReport {
                words_checked,
                first_mismatch: Some(mismatch),
            });
        }
    }
    Ok(AuditReport {
        words_checked,
        first_mismatch: None,
    })
}

#[cfg(feature = "parallel")]
fn cross_check_par(
    m: &WeightedAutomaton,
    oracle: &WeightedAutomaton,
    max_len: usize,
    limits: &Limits,
) -> Result<AuditReport> {
    let words: Vec<Vec<usize>> = words_up_to(m.alphabet().len(), max_len).collect();
    let words_checked = words.len() as u64;
    let hit = words
        .par_iter()
        .map(|word| check_word(m, oracle, word, limits))
        .find_first(|r| !matches!(r, Ok(None)));
    match hit {
        Some(Err(e)) => Err(e),
        Some(Ok(mismatch)) => Ok(AuditReport {
            words_checked,
            first_mismatch: mismatch,
        }),
        None => Ok(AuditReport {
            words_checked,
            first_mismatch: None,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use num_traits::One;

    #[test]
    fn well_formed_automaton_passes() {
        let m = builders::binary_value(&['0', '1']).unwrap();
        let report = audit(&m, 4, &Limits::default()).unwrap();
        assert!(report.passed());
        assert_eq!(report.words_checked, 31);
    }

    #[test]
    fn empty_alphabet_passes_over_epsilon_only() {
        let m = WeightedAutomaton::with_systematic_names(1, vec![]).unwrap();
        let report = audit(&m, 5, &Limits::default()).unwrap();
        assert!(report.passed());
        assert_eq!(report.words_checked, 1);
    }

    #[test]
    fn perturbed_fixture_reports_first_mismatching_word() {
        let original = builders::letter_counter(&['a', 'b'], 'a').unwrap();
        let mut corrupted = original.clone();
        // Perturb one transition weight.
        corrupted.set_trans(0, 0, 1, BigUint::from(2u32));
        let report = cross_check(&corrupted, &original, 3, &Limits::default()).unwrap();
        let mismatch = report.first_mismatch.expect("must detect the perturbation");
        assert_eq!(mismatch.word, "a");
        assert_eq!(mismatch.evaluated, BigUint::from(2u32));
        assert_eq!(mismatch.counted, BigUint::one());
    }

    #[test]
    fn seq_and_default_agree() {
        let m = builders::unary_counter();
        let a = audit(&m, 6, &Limits::default()).unwrap();
        let b = audit_seq(&m, 6, &Limits::default()).unwrap();
        assert_eq!(a.passed(), b.passed());
        assert_eq!(a.words_checked, b.words_checked);
    }
}
