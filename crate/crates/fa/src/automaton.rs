//! The weighted-automaton data model and its two independent evaluators.
//!
//! A [`WeightedAutomaton`] carries ℕ-weighted transitions, initial weights
//! and final weights. It computes a function from words to ℕ: the value of a
//! word is the sum over all computations (state sequences) of the product of
//! the weights along the computation. [`WeightedAutomaton::evaluate`] computes
//! this via iterated vector-matrix products; [`WeightedAutomaton::count_paths_bruteforce`]
//! enumerates computations directly and serves as the reference oracle for
//! every construction in this crate.
//!
//! States are kept in a canonical total order (declaration order). All
//! constructions that depend on a state order, in particular the
//! lexicographic filters in [`crate::stepwise`], use this order.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::NatMatrix;
use crate::Limits;

/// A finite ℕ-weighted automaton.
///
/// Immutable once constructed (all mutators are used during building);
/// evaluation from multiple threads is safe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedAutomaton {
    states: Vec<String>,
    alphabet: Vec<char>,
    /// Nonzero transition weights, keyed by (from, symbol, to) indices.
    trans: BTreeMap<(usize, usize, usize), BigUint>,
    init: Vec<BigUint>,
    out: Vec<BigUint>,
}

impl WeightedAutomaton {
    /// Creates an automaton with the given state names (in canonical order)
    /// and alphabet. All weights start at zero.
    pub fn new(states: Vec<String>, alphabet: Vec<char>) -> Result<Self> {
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(Error::Input(format!("duplicate state name {s:?}")));
            }
        }
        for (i, c) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(c) {
                return Err(Error::Input(format!("duplicate alphabet symbol {c:?}")));
            }
        }
        let n = states.len();
        Ok(WeightedAutomaton {
            states,
            alphabet,
            trans: BTreeMap::new(),
            init: vec![BigUint::zero(); n],
            out: vec![BigUint::zero(); n],
        })
    }

    /// Creates an `n`-state automaton with systematic state names q0..q{n-1}.
    pub fn with_systematic_names(n: usize, alphabet: Vec<char>) -> Result<Self> {
        Self::new((0..n).map(|i| format!("q{i}")).collect(), alphabet)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn symbol_index(&self, symbol: char) -> Option<usize> {
        self.alphabet.iter().position(|&c| c == symbol)
    }

    pub fn init_weight(&self, state: usize) -> &BigUint {
        &self.init[state]
    }

    pub fn out_weight(&self, state: usize) -> &BigUint {
        &self.out[state]
    }

    pub fn trans_weight(&self, from: usize, sym: usize, to: usize) -> BigUint {
        self.trans
            .get(&(from, sym, to))
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }

    /// Nonzero transitions in canonical (from, symbol, to) order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize, &BigUint)> {
        self.trans.iter().map(|(&(f, s, t), w)| (f, s, t, w))
    }

    pub fn set_init(&mut self, state: usize, weight: BigUint) {
        self.init[state] = weight;
    }

    pub fn set_out(&mut self, state: usize, weight: BigUint) {
        self.out[state] = weight;
    }

    pub fn set_trans(&mut self, from: usize, sym: usize, to: usize, weight: BigUint) {
        assert!(from < self.states.len() && to < self.states.len() && sym < self.alphabet.len());
        if weight.is_zero() {
            self.trans.remove(&(from, sym, to));
        } else {
            self.trans.insert((from, sym, to), weight);
        }
    }

    /// Convenience mutator addressing states and symbols by name.
    pub fn set_trans_named(&mut self, from: &str, sym: char, to: &str, weight: u64) -> Result<()> {
        let f = self
            .state_index(from)
            .ok_or_else(|| Error::Input(format!("unknown state {from:?}")))?;
        let t = self
            .state_index(to)
            .ok_or_else(|| Error::Input(format!("unknown state {to:?}")))?;
        let s = self
            .symbol_index(sym)
            .ok_or_else(|| Error::Input(format!("unknown symbol {sym:?}")))?;
        self.set_trans(f, s, t, BigUint::from(weight));
        Ok(())
    }

    /// True iff every transition, initial and final weight lies in {0, 1}.
    pub fn is_simple(&self) -> bool {
        let one = BigUint::one();
        self.trans.values().all(|w| *w <= one)
            && self.init.iter().all(|w| *w <= one)
            && self.out.iter().all(|w| *w <= one)
    }

    /// Converts a string into a symbol-index word.
    pub fn parse_word(&self, word: &str) -> Result<Vec<usize>> {
        word.chars()
            .map(|c| {
                self.symbol_index(c)
                    .ok_or_else(|| Error::Input(format!("symbol {c:?} is not in the alphabet")))
            })
            .collect()
    }

    /// Renders a symbol-index word back into a string.
    pub fn word_to_string(&self, word: &[usize]) -> String {
        word.iter().map(|&s| self.alphabet[s]).collect()
    }

    /// Per-symbol adjacency lists: `adj[sym][from]` is the list of
    /// `(to, weight)` pairs with nonzero weight.
    fn adjacency(&self) -> Vec<Vec<Vec<(usize, BigUint)>>> {
        let mut adj = vec![vec![Vec::new(); self.states.len()]; self.alphabet.len()];
        for (&(f, s, t), w) in &self.trans {
            adj[s][f].push((t, w.clone()));
        }
        adj
    }

    /// Evaluates the computed function on a word given as a string.
    pub fn evaluate(&self, word: &str) -> Result<BigUint> {
        Ok(self.evaluate_word(&self.parse_word(word)?))
    }

    /// Evaluates the computed function on a symbol-index word.
    ///
    /// Computes aᵀ·(∏ A_{w_j})·b by iterated vector-matrix products over
    /// exact integers. Zero vector entries are skipped, so the cost is at
    /// most O(|w|·|Q|²) big-integer multiplications and usually much less.
    pub fn evaluate_word(&self, word: &[usize]) -> BigUint {
        for &s in word {
            assert!(s < self.alphabet.len(), "symbol index out of range");
        }
        let adj = self.adjacency();
        let mut vec: Vec<BigUint> = self.init.clone();
        for &sym in word {
            let mut next = vec![BigUint::zero(); self.states.len()];
            for (q, v) in vec.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                for (to, w) in &adj[sym][q] {
                    next[*to] += v * w;
                }
            }
            vec = next;
        }
        let mut total = BigUint::zero();
        for (q, v) in vec.iter().enumerate() {
            if !v.is_zero() {
                total += v * &self.out[q];
            }
        }
        total
    }

    /// Sums the weights of all computations on `word` by direct enumeration.
    ///
    /// This is the reference oracle: it never shares code with
    /// [`Self::evaluate`]. The number of state sequences |Q|^(|w|+1) must not
    /// exceed `budget`, otherwise a resource error is returned. Subtrees with
    /// partial weight zero are skipped; this cannot change the sum.
    pub fn count_paths_bruteforce(&self, word: &str, budget: u64) -> Result<BigUint> {
        Ok(self.count_paths_bruteforce_word(&self.parse_word(word)?, budget)?)
    }

    pub fn count_paths_bruteforce_word(&self, word: &[usize], budget: u64) -> Result<BigUint> {
        let n_states = self.states.len();
        check_enumeration_budget(n_states, word.len(), budget)?;
        if n_states == 0 {
            return Ok(BigUint::zero());
        }
        let adj = self.adjacency();
        let mut total = BigUint::zero();
        for q0 in 0..n_states {
            if self.init[q0].is_zero() {
                continue;
            }
            self.enumerate_from(q0, 0, self.init[q0].clone(), word, &adj, &mut total);
        }
        Ok(total)
    }

    fn enumerate_from(
        &self,
        state: usize,
        pos: usize,
        partial: BigUint,
        word: &[usize],
        adj: &[Vec<Vec<(usize, BigUint)>>],
        total: &mut BigUint,
    ) {
        if pos == word.len() {
            if !self.out[state].is_zero() {
                *total += partial * &self.out[state];
            }
            return;
        }
        for (to, w) in &adj[word[pos]][state] {
            self.enumerate_from(*to, pos + 1, &partial * w, word, adj, total);
        }
    }

    /// The algebraic view: initial vector, one matrix per symbol, final
    /// vector, all indexed in canonical state order.
    pub fn to_matrix_form(&self) -> MatrixForm {
        let n = self.states.len();
        let mut matrices = vec![NatMatrix::zero(n); self.alphabet.len()];
        for (&(f, s, t), w) in &self.trans {
            matrices[s].set_entry(f, t, w.clone());
        }
        MatrixForm {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            init: self.init.clone(),
            matrices,
            out: self.out.clone(),
        }
    }

    /// Rebuilds an automaton from its matrix form.
    pub fn from_matrix_form(form: &MatrixForm) -> Result<Self> {
        let n = form.states.len();
        if form.init.len() != n || form.out.len() != n {
            return Err(Error::Input(
                "matrix form vectors do not match the state count".into(),
            ));
        }
        if form.matrices.len() != form.alphabet.len() {
            return Err(Error::Input(
                "matrix form needs exactly one matrix per alphabet symbol".into(),
            ));
        }
        let mut m = WeightedAutomaton::new(form.states.clone(), form.alphabet.clone())?;
        for (s, mat) in form.matrices.iter().enumerate() {
            if mat.size() != n {
                return Err(Error::Input(format!(
                    "matrix for symbol {:?} has size {} but there are {} states",
                    form.alphabet[s],
                    mat.size(),
                    n
                )));
            }
            for f in 0..n {
                for t in 0..n {
                    let w = mat.entry(f, t);
                    if !w.is_zero() {
                        m.set_trans(f, s, t, w.clone());
                    }
                }
            }
        }
        for q in 0..n {
            m.set_init(q, form.init[q].clone());
            m.set_out(q, form.out[q].clone());
        }
        Ok(m)
    }

    /// Restricts to states that lie on some potentially nonzero computation
    /// (forward reachable through nonzero weights from a nonzero initial
    /// state and backward reachable from a nonzero final state). The computed
    /// function is unchanged. The result may have zero states.
    pub fn pruned(&self) -> WeightedAutomaton {
        let n = self.states.len();
        let mut fwd_adj = vec![Vec::new(); n];
        let mut bwd_adj = vec![Vec::new(); n];
        for &(f, _, t) in self.trans.keys() {
            fwd_adj[f].push(t);
            bwd_adj[t].push(f);
        }
        let reachable = bfs(n, &fwd_adj, |q| !self.init[q].is_zero());
        let corelevant = bfs(n, &bwd_adj, |q| !self.out[q].is_zero());
        let keep: Vec<usize> = (0..n).filter(|&q| reachable[q] && corelevant[q]).collect();
        if keep.len() == n {
            return self.clone();
        }
        let mut index = vec![usize::MAX; n];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = new;
        }
        let mut m = WeightedAutomaton::new(
            keep.iter().map(|&q| self.states[q].clone()).collect(),
            self.alphabet.clone(),
        )
        .expect("pruning preserves name uniqueness");
        for (new, &old) in keep.iter().enumerate() {
            m.init[new] = self.init[old].clone();
            m.out[new] = self.out[old].clone();
        }
        for (&(f, s, t), w) in &self.trans {
            if index[f] != usize::MAX && index[t] != usize::MAX {
                m.trans.insert((index[f], s, index[t]), w.clone());
            }
        }
        m
    }

    /// Returns a simple automaton (all weights in {0, 1}) computing the same
    /// function, restricted to states that can carry a nonzero computation.
    ///
    /// The state space of the underlying construction is
    /// Q × [max(wt ∪ in)] × [max(out)]; see [`Self::simplify_full`] for the
    /// unpruned variant. The result always has at least one state, so that
    /// counting constructions over it keep a nonempty state space.
    pub fn simplify(&self, limits: &Limits) -> Result<WeightedAutomaton> {
        if self.is_simple() {
            let pruned = self.pruned();
            return Ok(ensure_nonempty(pruned, &self.alphabet));
        }
        let full = self.simplify_full(limits)?;
        Ok(ensure_nonempty(full.pruned(), &self.alphabet))
    }

    /// The textbook weight-flattening product without pruning: states are
    /// triples (q, α, β) with α ∈ [max(wt ∪ in)] and β ∈ [max(out)].
    pub fn simplify_full(&self, limits: &Limits) -> Result<WeightedAutomaton> {
        let max_w = self
            .trans
            .values()
            .chain(self.init.iter())
            .max()
            .cloned()
            .unwrap_or_else(BigUint::zero);
        let max_out = self.out.iter().max().cloned().unwrap_or_else(BigUint::zero);
        if max_w.is_zero() || max_out.is_zero() {
            // The function is identically zero.
            return dead_automaton(&self.alphabet);
        }
        let max_w: u64 = max_w
            .try_into()
            .map_err(|_| Error::Resource("weights too large to flatten".into()))?;
        let max_out: u64 = max_out
            .try_into()
            .map_err(|_| Error::Resource("final weights too large to flatten".into()))?;
        let n = self.states.len() as u64;
        let total = n
            .checked_mul(max_w)
            .and_then(|x| x.checked_mul(max_out))
            .ok_or_else(|| Error::Resource("flattened state space overflows".into()))?;
        if total as usize > limits.max_states {
            return Err(Error::Resource(format!(
                "flattened state space has {total} states (limit {})",
                limits.max_states
            )));
        }

        // Canonical order: state-major, then α, then β.
        let states: Vec<String> = (0..self.states.len())
            .flat_map(|q| {
                (1..=max_w).flat_map(move |a| (1..=max_out).map(move |b| format!("q{q}a{a}b{b}")))
            })
            .collect();
        let idx = |q: usize, a: u64, b: u64| -> usize {
            ((q as u64 * max_w + (a - 1)) * max_out + (b - 1)) as usize
        };
        let mut m = WeightedAutomaton::new(states, self.alphabet.clone())?;
        let one = BigUint::one();
        for q in 0..self.states.len() {
            for a in 1..=max_w {
                for b in 1..=max_out {
                    let i = idx(q, a, b);
                    if BigUint::from(a) <= self.init[q] {
                        m.init[i] = one.clone();
                    }
                    if BigUint::from(b) <= self.out[q] {
                        m.out[i] = one.clone();
                    }
                }
            }
        }
        for (&(f, s, t), w) in &self.trans {
            let w: u64 = w.try_into().expect("weight bounded by max_w");
            // Only source states with β = 1 may continue a computation.
            for a in 1..=max_w {
                let from = idx(f, a, 1);
                for a2 in 1..=w {
                    for b2 in 1..=max_out {
                        m.trans.insert((from, s, idx(t, a2, b2)), one.clone());
                    }
                }
            }
        }
        Ok(m)
    }
}

fn bfs(n: usize, adj: &[Vec<usize>], start: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for q in 0..n {
        if start(q) {
            seen[q] = true;
            queue.push_back(q);
        }
    }
    while let Some(q) = queue.pop_front() {
        for &t in &adj[q] {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    seen
}

/// A one-state automaton computing the zero function.
fn dead_automaton(alphabet: &[char]) -> Result<WeightedAutomaton> {
    WeightedAutomaton::with_systematic_names(1, alphabet.to_vec())
}

fn ensure_nonempty(m: WeightedAutomaton, alphabet: &[char]) -> WeightedAutomaton {
    if m.num_states() == 0 {
        dead_automaton(alphabet).expect("alphabet already validated")
    } else {
        m
    }
}

pub(crate) fn check_enumeration_budget(n_states: usize, word_len: usize, budget: u64) -> Result<()> {
    let mut total: u128 = 1;
    for _ in 0..=word_len {
        total = total.saturating_mul(n_states as u128);
        if total > budget as u128 {
            return Err(Error::Resource(format!(
                "enumerating {n_states}^{} computations exceeds the oracle budget {budget}",
                word_len + 1
            )));
        }
    }
    Ok(())
}

/// The algebraic presentation of an automaton: aᵀ·(∏ A_{w_j})·b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixForm {
    pub states: Vec<String>,
    pub alphabet: Vec<char>,
    pub init: Vec<BigUint>,
    pub matrices: Vec<NatMatrix>,
    pub out: Vec<BigUint>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn evaluate_empty_word_is_init_dot_out() {
        let mut m = WeightedAutomaton::with_systematic_names(2, vec!['a']).unwrap();
        m.set_init(0, BigUint::from(3u32));
        m.set_out(0, BigUint::from(2u32));
        m.set_init(1, BigUint::from(5u32));
        m.set_out(1, BigUint::from(7u32));
        assert_eq!(m.evaluate("").unwrap(), BigUint::from(3u32 * 2 + 5 * 7));
    }

    #[test]
    fn evaluate_rejects_unknown_symbols() {
        let m = builders::unary_counter();
        assert!(matches!(m.evaluate("1x1"), Err(Error::Input(_))));
        assert!(matches!(
            m.count_paths_bruteforce("x", 1000),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn bruteforce_zero_init_is_zero() {
        let mut m = WeightedAutomaton::with_systematic_names(2, vec!['a']).unwrap();
        m.set_out(0, BigUint::one());
        m.set_trans(0, 0, 1, BigUint::from(4u32));
        m.set_out(1, BigUint::one());
        for w in ["", "a", "aa"] {
            assert_eq!(m.count_paths_bruteforce(w, 1000).unwrap(), BigUint::zero());
        }
    }

    #[test]
    fn bruteforce_budget_is_enforced() {
        let m = builders::unary_counter();
        // 2 states, |w| = 4 → 2^5 = 32 sequences.
        assert!(m.count_paths_bruteforce("1111", 31).is_err());
        assert!(m.count_paths_bruteforce("1111", 32).is_ok());
    }

    #[test]
    fn evaluators_agree_on_small_automaton() {
        let mut m = WeightedAutomaton::with_systematic_names(3, vec!['a', 'b']).unwrap();
        m.set_init(0, BigUint::from(2u32));
        m.set_out(2, BigUint::one());
        m.set_out(0, BigUint::from(3u32));
        m.set_trans(0, 0, 1, BigUint::from(2u32));
        m.set_trans(1, 0, 2, BigUint::one());
        m.set_trans(1, 1, 1, BigUint::from(3u32));
        m.set_trans(2, 1, 0, BigUint::one());
        for word in crate::words::words_up_to(2, 5) {
            let by_matrix = m.evaluate_word(&word);
            let by_paths = m.count_paths_bruteforce_word(&word, 1_000_000).unwrap();
            assert_eq!(by_matrix, by_paths, "word {:?}", m.word_to_string(&word));
        }
    }

    #[test]
    fn simplify_weighted_self_loop() {
        // Single state, self-loop weight 3, in = out = 1: f(σσ) = 9.
        let mut m = WeightedAutomaton::with_systematic_names(1, vec!['s']).unwrap();
        m.set_init(0, BigUint::one());
        m.set_out(0, BigUint::one());
        m.set_trans(0, 0, 0, BigUint::from(3u32));
        let simple = m.simplify(&limits()).unwrap();
        assert!(simple.is_simple());
        assert_eq!(simple.evaluate("ss").unwrap(), BigUint::from(9u32));
        assert_eq!(simple.evaluate("s").unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn simplify_initial_weight_only() {
        // in(q) = 2, out(q) = 1, no transitions: f(ε) = 2.
        let mut m = WeightedAutomaton::with_systematic_names(1, vec!['a']).unwrap();
        m.set_init(0, BigUint::from(2u32));
        m.set_out(0, BigUint::one());
        let simple = m.simplify(&limits()).unwrap();
        assert!(simple.is_simple());
        assert_eq!(simple.evaluate("").unwrap(), BigUint::from(2u32));
        assert_eq!(simple.evaluate("a").unwrap(), BigUint::zero());
    }

    #[test]
    fn simplify_of_simple_automaton_preserves_function() {
        let m = builders::unary_counter();
        let simple = m.simplify(&limits()).unwrap();
        for n in 0..6 {
            let w = "1".repeat(n);
            assert_eq!(simple.evaluate(&w).unwrap(), m.evaluate(&w).unwrap());
        }
    }

    #[test]
    fn simplify_full_matches_pruned_on_function() {
        let mut m = WeightedAutomaton::with_systematic_names(2, vec!['a', 'b']).unwrap();
        m.set_init(0, BigUint::from(2u32));
        m.set_out(1, BigUint::from(3u32));
        m.set_trans(0, 0, 1, BigUint::from(2u32));
        m.set_trans(1, 1, 0, BigUint::one());
        m.set_trans(1, 0, 1, BigUint::one());
        let full = m.simplify_full(&limits()).unwrap();
        let pruned = m.simplify(&limits()).unwrap();
        assert!(full.is_simple());
        for word in crate::words::words_up_to(2, 4) {
            let expect = m.count_paths_bruteforce_word(&word, 1_000_000).unwrap();
            assert_eq!(full.evaluate_word(&word), expect);
            assert_eq!(pruned.evaluate_word(&word), expect);
        }
        assert!(pruned.num_states() <= full.num_states());
    }

    #[test]
    fn matrix_form_round_trip_is_identity() {
        let m = builders::binary_value(&['0', '1']).unwrap();
        let form = m.to_matrix_form();
        let back = WeightedAutomaton::from_matrix_form(&form).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn growth_bound_sanity() {
        // evaluate(M, w) ≤ (|Q| · maxweight)^(|w|+1)
        let mut m = WeightedAutomaton::with_systematic_names(2, vec!['a']).unwrap();
        m.set_init(0, BigUint::from(2u32));
        m.set_out(0, BigUint::from(2u32));
        m.set_out(1, BigUint::from(2u32));
        m.set_trans(0, 0, 0, BigUint::from(3u32));
        m.set_trans(0, 0, 1, BigUint::from(3u32));
        m.set_trans(1, 0, 0, BigUint::from(3u32));
        for n in 0..8usize {
            let w = "a".repeat(n);
            let bound = BigUint::from(2u32 * 3).pow(n as u32 + 1);
            assert!(m.evaluate(&w).unwrap() <= bound);
        }
    }
}
