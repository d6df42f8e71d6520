//! Closure operations: each takes automata computing f (and g) and produces
//! an automaton computing φ(f) or f⊕g pointwise.
//!
//! Sums use a disjoint union, products the product automaton. Everything
//! else rides on the stepwise engine: truncated subtraction and clamping
//! filter computations by the capped count of lexicographically smaller
//! nonzero computations, comparisons count all computations under a capped
//! global count (and clamp away the |Q|^(|w|+1) factor), floor division and
//! residue indicators do the same over ℤ_c, and binomial coefficients filter
//! the c-fold product down to pairwise distinct computation tuples before
//! dividing by c!.
//!
//! Operations that require a simple input simplify it themselves, so the
//! public surface is total over weighted automata.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};
use crate::porc::binomial::{
    shift_binomial_basis, to_binomial_basis, IntBinomialPoly, QPolynomial,
};
use crate::porc::function::PorcFunction;
use crate::semiring::FiniteSemiring;
use crate::stepwise::{
    count_satisfying, prop_global, prop_lex_smaller, weighted_filter, DistinctTuplesProperty,
};
use crate::Limits;

fn require_same_alphabet(f: &WeightedAutomaton, g: &WeightedAutomaton) -> Result<()> {
    if f.alphabet() == g.alphabet() {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "alphabet mismatch: {:?} vs {:?}",
            f.alphabet(),
            g.alphabet()
        )))
    }
}

/// Pointwise sum f + g as the disjoint union of the two automata.
pub fn add(f: &WeightedAutomaton, g: &WeightedAutomaton) -> Result<WeightedAutomaton> {
    require_same_alphabet(f, g)?;
    let nf = f.num_states();
    let mut m = WeightedAutomaton::with_systematic_names(nf + g.num_states(), f.alphabet().to_vec())?;
    for q in 0..nf {
        m.set_init(q, f.init_weight(q).clone());
        m.set_out(q, f.out_weight(q).clone());
    }
    for q in 0..g.num_states() {
        m.set_init(nf + q, g.init_weight(q).clone());
        m.set_out(nf + q, g.out_weight(q).clone());
    }
    for (from, sym, to, w) in f.transitions() {
        m.set_trans(from, sym, to, w.clone());
    }
    for (from, sym, to, w) in g.transitions() {
        m.set_trans(nf + from, sym, nf + to, w.clone());
    }
    Ok(m)
}

/// Pointwise (Hadamard) product f · g as the product automaton with
/// multiplied weights, restricted to reachable state pairs.
pub fn hadamard(
    f: &WeightedAutomaton,
    g: &WeightedAutomaton,
    limits: &Limits,
) -> Result<WeightedAutomaton> {
    require_same_alphabet(f, g)?;
    let mut adj_f = vec![vec![Vec::new(); f.num_states()]; f.alphabet().len()];
    for (from, sym, to, w) in f.transitions() {
        adj_f[sym][from].push((to, w.clone()));
    }
    let mut adj_g = vec![vec![Vec::new(); g.num_states()]; g.alphabet().len()];
    for (from, sym, to, w) in g.transitions() {
        adj_g[sym][from].push((to, w.clone()));
    }

    let mut interned = std::collections::HashMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let mut trans = Vec::new();
    for qf in 0..f.num_states() {
        if f.init_weight(qf).is_zero() {
            continue;
        }
        for qg in 0..g.num_states() {
            if g.init_weight(qg).is_zero() {
                continue;
            }
            interned.insert((qf, qg), pairs.len());
            pairs.push((qf, qg));
            queue.push_back((qf, qg));
        }
    }
    while let Some((qf, qg)) = queue.pop_front() {
        let i = interned[&(qf, qg)];
        for sym in 0..f.alphabet().len() {
            for (tf, wf) in &adj_f[sym][qf] {
                for (tg, wg) in &adj_g[sym][qg] {
                    let j = *interned.entry((*tf, *tg)).or_insert_with(|| {
                        pairs.push((*tf, *tg));
                        queue.push_back((*tf, *tg));
                        pairs.len() - 1
                    });
                    if pairs.len() > limits.max_states {
                        return Err(Error::Resource(format!(
                            "product automaton exceeds {} states",
                            limits.max_states
                        )));
                    }
                    trans.push((i, sym, j, wf * wg));
                }
            }
        }
    }
    let mut m = WeightedAutomaton::with_systematic_names(pairs.len(), f.alphabet().to_vec())?;
    for (i, (qf, qg)) in pairs.iter().enumerate() {
        m.set_init(i, f.init_weight(*qf) * g.init_weight(*qg));
        m.set_out(i, f.out_weight(*qf) * g.out_weight(*qg));
    }
    for (i, sym, j, w) in trans {
        m.set_trans(i, sym, j, w);
    }
    Ok(m.pruned())
}

/// Truncated subtraction of a constant: max(f - c, 0).
///
/// The lexicographic filter over the capped semiring R_c with
/// π(a) = 1_{a ≥ c} keeps exactly the computations preceded by at least c
/// nonzero computations, i.e. drops the c lexicographically smallest ones.
pub fn sub_const(f: &WeightedAutomaton, c: u64, limits: &Limits) -> Result<WeightedAutomaton> {
    let simple = f.simplify(limits)?;
    let ring = FiniteSemiring::capped(c)?;
    let prop = prop_lex_smaller(&simple, ring, |a| a as u64 >= c)?;
    weighted_filter(&simple, &prop, limits)
}

/// Clamping: min(f, c), keeping only the c lexicographically smallest
/// nonzero computations (π(a) = 1_{a < c} over R_c).
pub fn clamp(f: &WeightedAutomaton, c: u64, limits: &Limits) -> Result<WeightedAutomaton> {
    let simple = f.simplify(limits)?;
    let ring = FiniteSemiring::capped(c)?;
    let prop = prop_lex_smaller(&simple, ring, |a| (a as u64) < c)?;
    weighted_filter(&simple, &prop, limits)
}

/// Comparison relation for [`indicator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Le,
    Ge,
}

impl std::fmt::Display for Cmp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Cmp::Eq => "=",
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
        })
    }
}

/// Indicator of a comparison with a constant: 1_{f = c}, 1_{f ≤ c} or
/// 1_{f ≥ c}. Counts all computations under the capped global count over
/// R_{c+1}, then clamps away the |Q|^(|w|+1) factor.
pub fn indicator(
    f: &WeightedAutomaton,
    cmp: Cmp,
    c: u64,
    limits: &Limits,
) -> Result<WeightedAutomaton> {
    let simple = f.simplify(limits)?;
    let ring = FiniteSemiring::capped(c + 1)?;
    let prop = match cmp {
        Cmp::Eq => prop_global(&simple, ring, |a| a as u64 == c)?,
        Cmp::Le => prop_global(&simple, ring, |a| a as u64 <= c)?,
        Cmp::Ge => prop_global(&simple, ring, |a| a as u64 >= c)?,
    };
    let counted = count_satisfying(&simple, &prop, limits)?;
    clamp(&counted, 1, limits)
}

/// Floor division by a constant: ⌊f / c⌋.
///
/// Over ℤ_c a computation is kept iff the number of lexicographically
/// smaller nonzero computations is ≡ c-1 (mod c) — every c-th computation
/// survives.
pub fn div_const(f: &WeightedAutomaton, c: u64, limits: &Limits) -> Result<WeightedAutomaton> {
    if c == 0 {
        return Err(Error::Input("division by zero".into()));
    }
    if c == 1 {
        return f.simplify(limits);
    }
    let simple = f.simplify(limits)?;
    let ring = FiniteSemiring::cyclic(c)?;
    let prop = prop_lex_smaller(&simple, ring, |a| a as u64 == c - 1)?;
    weighted_filter(&simple, &prop, limits)
}

/// Residue indicator: 1 iff f ≡ d (mod c).
pub fn mod_indicator(
    f: &WeightedAutomaton,
    c: u64,
    d: u64,
    limits: &Limits,
) -> Result<WeightedAutomaton> {
    if c == 0 {
        return Err(Error::Input("modulus must be at least 1".into()));
    }
    if d >= c {
        return Err(Error::Input(format!("residue {d} out of range for modulus {c}")));
    }
    if c == 1 {
        return crate::builders::constant(1u32, f.alphabet());
    }
    let simple = f.simplify(limits)?;
    let ring = FiniteSemiring::cyclic(c)?;
    let prop = prop_global(&simple, ring, |a| a as u64 == d)?;
    let counted = count_satisfying(&simple, &prop, limits)?;
    clamp(&counted, 1, limits)
}

/// The c-fold product automaton whose states are c-tuples, restricted to
/// reachable tuples. Returns the automaton plus the tuple behind each state.
fn power_product(
    m: &WeightedAutomaton,
    c: usize,
    limits: &Limits,
) -> Result<(WeightedAutomaton, Vec<Vec<usize>>)> {
    let mut adj = vec![vec![Vec::new(); m.num_states()]; m.alphabet().len()];
    for (from, sym, to, w) in m.transitions() {
        adj[sym][from].push((to, w.clone()));
    }
    let init_states: Vec<usize> = (0..m.num_states())
        .filter(|&q| !m.init_weight(q).is_zero())
        .collect();

    let mut interned: std::collections::HashMap<Vec<usize>, usize> = std::collections::HashMap::new();
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let mut start = vec![0usize; c];
    // Enumerate initial tuples (cartesian power of initial states) in
    // lexicographic order.
    enumerate_tuples(&init_states, &mut start, 0, &mut |tuple| {
        if !interned.contains_key(tuple) {
            interned.insert(tuple.to_vec(), tuples.len());
            tuples.push(tuple.to_vec());
            queue.push_back(tuple.to_vec());
        }
    });

    let mut trans: Vec<(usize, usize, usize, BigUint)> = Vec::new();
    while let Some(tuple) = queue.pop_front() {
        let i = interned[&tuple];
        for sym in 0..m.alphabet().len() {
            let per_coord: Vec<&[(usize, BigUint)]> =
                tuple.iter().map(|&q| adj[sym][q].as_slice()).collect();
            if per_coord.iter().any(|opts| opts.is_empty()) {
                continue;
            }
            let mut choice = vec![0usize; c];
            loop {
                let mut target = Vec::with_capacity(c);
                let mut weight = BigUint::one();
                for (k, opts) in per_coord.iter().enumerate() {
                    let (to, w) = &opts[choice[k]];
                    target.push(*to);
                    weight *= w;
                }
                let j = match interned.get(&target) {
                    Some(&j) => j,
                    None => {
                        if tuples.len() >= limits.max_states {
                            return Err(Error::Resource(format!(
                                "{c}-fold product exceeds {} states",
                                limits.max_states
                            )));
                        }
                        interned.insert(target.clone(), tuples.len());
                        tuples.push(target.clone());
                        queue.push_back(target.clone());
                        tuples.len() - 1
                    }
                };
                trans.push((i, sym, j, weight));
                // Odometer over the per-coordinate choices.
                let mut advanced = false;
                for k in (0..c).rev() {
                    if choice[k] + 1 < per_coord[k].len() {
                        choice[k] += 1;
                        advanced = true;
                        break;
                    }
                    choice[k] = 0;
                }
                if !advanced {
                    break;
                }
            }
        }
    }

    let mut out = WeightedAutomaton::with_systematic_names(tuples.len(), m.alphabet().to_vec())?;
    for (i, tuple) in tuples.iter().enumerate() {
        let mut iw = BigUint::one();
        let mut ow = BigUint::one();
        for &q in tuple {
            iw *= m.init_weight(q);
            ow *= m.out_weight(q);
        }
        out.set_init(i, iw);
        out.set_out(i, ow);
    }
    for (i, sym, j, w) in trans {
        out.set_trans(i, sym, j, w);
    }
    Ok((out, tuples))
}

fn enumerate_tuples(
    options: &[usize],
    buf: &mut Vec<usize>,
    pos: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if pos == buf.len() {
        visit(buf);
        return;
    }
    for &q in options {
        buf[pos] = q;
        enumerate_tuples(options, buf, pos + 1, visit);
    }
}

/// Binomial coefficient of the computed function: C(f, c).
///
/// Builds the c-fold product, keeps exactly the tuples of pairwise distinct
/// computations via a stepwise property over the partitions of [c], and
/// divides the resulting C(f, c)·c! by c!.
pub fn binom_const(f: &WeightedAutomaton, c: u64, limits: &Limits) -> Result<WeightedAutomaton> {
    if c > limits.max_binom {
        return Err(Error::Resource(format!(
            "binomial order {c} exceeds the configured maximum {}",
            limits.max_binom
        )));
    }
    if c == 0 {
        return crate::builders::constant(1u32, f.alphabet());
    }
    if c == 1 {
        return Ok(f.clone());
    }
    let simple = f.simplify(limits)?;
    let (power, tuples) = power_product(&simple, c as usize, limits)?;
    let prop = DistinctTuplesProperty::new(tuples);
    let filtered = weighted_filter(&power, &prop, limits)?;
    let factorial: u64 = (2..=c).product();
    div_const(&filtered, factorial, limits)
}

/// Finite patching: returns an automaton computing
/// `patches[f(w)]` when f(w) < patches.len(), and the function of
/// `tail(f_automaton)` otherwise.
pub fn patch_finite(
    f: &WeightedAutomaton,
    patches: &[BigUint],
    tail: impl FnOnce(&WeightedAutomaton) -> Result<WeightedAutomaton>,
    limits: &Limits,
) -> Result<WeightedAutomaton> {
    let n = patches.len() as u64;
    if n == 0 {
        return tail(f);
    }
    let gate = indicator(f, Cmp::Ge, n, limits)?;
    let mut acc = hadamard(&gate, &tail(f)?, limits)?;
    for (i, value) in patches.iter().enumerate() {
        if value.is_zero() {
            continue;
        }
        let here = indicator(f, Cmp::Eq, i as u64, limits)?;
        let scaled = hadamard(&here, &crate::builders::constant(value.clone(), f.alphabet())?, limits)?;
        acc = add(&acc, &scaled)?;
    }
    Ok(acc)
}

/// Composition with an integer-valued polynomial: max(φ(f), 0).
///
/// With positive leading coefficient, φ is rewritten over shifted binomials
/// Σ bᵢ·C(x-cᵢ, i); replacing x-cᵢ by max(x-cᵢ, 0) only disturbs the
/// finitely many arguments below max cᵢ, which are patched afterwards. With
/// nonpositive leading coefficient, φ is positive at finitely many points
/// and the result is a plain sum of scaled indicators.
pub fn poly_nonneg(
    f: &WeightedAutomaton,
    phi: &QPolynomial,
    limits: &Limits,
) -> Result<WeightedAutomaton> {
    let binomial = to_binomial_basis(phi);
    let Some(int_coeffs) = binomial.integer_coefficients() else {
        return Err(Error::Input(
            "polynomial is not integer-valued (non-integer binomial coefficients)".into(),
        ));
    };
    let int_poly = IntBinomialPoly::new(int_coeffs);
    if int_poly.is_zero() {
        return crate::builders::constant(0u32, f.alphabet());
    }
    if int_poly.degree() == Some(0) {
        let c = int_poly.coefficients()[0].clone();
        let value = if c.sign() == Sign::Minus {
            BigUint::zero()
        } else {
            c.magnitude().clone()
        };
        return crate::builders::constant(value, f.alphabet());
    }
    if int_poly.leading().unwrap().sign() != Sign::Plus {
        return nonpositive_leading_sum(f, &int_poly, limits);
    }

    let shifted = shift_binomial_basis(&int_poly)?;
    let offset = shifted.max_shift();
    let patches: Vec<BigUint> = (0..offset)
        .map(|x| {
            let v = int_poly.eval_int(&BigInt::from(x));
            if v.sign() == Sign::Minus {
                BigUint::zero()
            } else {
                v.magnitude().clone()
            }
        })
        .collect();
    patch_finite(
        f,
        &patches,
        |f| {
            let mut acc = crate::builders::constant(0u32, f.alphabet())?;
            for term in &shifted.terms {
                if term.coeff.is_zero() {
                    continue;
                }
                let shifted_f = sub_const(f, term.shift, limits)?;
                let binom = binom_const(&shifted_f, term.degree as u64, limits)?;
                let scaled = hadamard(
                    &crate::builders::constant(term.coeff.clone(), f.alphabet())?,
                    &binom,
                    limits,
                )?;
                acc = add(&acc, &scaled)?;
            }
            Ok(acc)
        },
        limits,
    )
}

/// max(φ(f), 0) for φ with nonpositive leading coefficient: φ is positive
/// only below an explicit dominance bound, so the result is
/// Σ_{i: φ(i) > 0} φ(i)·1_{f=i}.
fn nonpositive_leading_sum(
    f: &WeightedAutomaton,
    phi: &IntBinomialPoly,
    limits: &Limits,
) -> Result<WeightedAutomaton> {
    let r = phi.degree().unwrap();
    let lead = phi.leading().unwrap().magnitude().clone();
    let mut sum_abs = BigUint::zero();
    for c in &phi.coefficients()[..r] {
        sum_abs += c.magnitude();
    }
    // Beyond max(2r, r + r·S/|a_r|) the negative leading term dominates.
    let scaled = (BigUint::from(r) * &sum_abs + &lead - BigUint::one()) / &lead;
    let bound = (BigUint::from(r) + scaled).max(BigUint::from(2 * r));
    let bound: u64 = bound
        .try_into()
        .map_err(|_| Error::Resource("polynomial coefficients too large".into()))?;
    let mut acc = crate::builders::constant(0u32, f.alphabet())?;
    for i in 0..=bound {
        let v = phi.eval_int(&BigInt::from(i));
        if v.sign() != Sign::Plus {
            continue;
        }
        let here = indicator(f, Cmp::Eq, i, limits)?;
        let scaled = hadamard(
            &here,
            &crate::builders::constant(v.magnitude().clone(), f.alphabet())?,
            limits,
        )?;
        acc = add(&acc, &scaled)?;
    }
    Ok(acc)
}

/// Composition with an ultimately PORC function:
///
/// φ(f) = Σ_{i<N} 1_{f=i}·φ(i)  +  1_{f≥N}·Σ_{i<p} 1_{f≡_p i}·⌊max(φᵢ(f), 0)⌋
///
/// where each rational constituent φᵢ is cleared by its least common
/// denominator αᵢ and divided back out: ⌊max(αᵢφᵢ(f), 0)/αᵢ⌋.
pub fn porc_compose(
    f: &WeightedAutomaton,
    phi: &PorcFunction,
    limits: &Limits,
) -> Result<WeightedAutomaton> {
    let offset = phi.offset();
    let period = phi.period();

    let mut acc = crate::builders::constant(0u32, f.alphabet())?;
    for i in 0..offset {
        let value = phi.initial_value(i).clone();
        if value.is_zero() {
            continue;
        }
        let here = indicator(f, Cmp::Eq, i, limits)?;
        let scaled = hadamard(
            &here,
            &crate::builders::constant(value, f.alphabet())?,
            limits,
        )?;
        acc = add(&acc, &scaled)?;
    }

    // Constituents, processed in residue order.
    let mut periodic = crate::builders::constant(0u32, f.alphabet())?;
    for i in 0..period {
        let constituent = phi.constituent(i);
        if constituent.is_zero() {
            continue;
        }
        let alpha = constituent.common_denominator();
        let alpha_u64: u64 = alpha
            .clone()
            .try_into()
            .map_err(|_| Error::Resource("constituent denominator too large".into()))?;
        let cleared = constituent.scale(&BigRational::from_integer(BigInt::from(alpha)));
        let max_part = poly_nonneg(f, &cleared, limits)?;
        let floored = div_const(&max_part, alpha_u64, limits)?;
        let gated = hadamard(&mod_indicator(f, period, i, limits)?, &floored, limits)?;
        periodic = add(&periodic, &gated)?;
    }
    let tail = if offset == 0 {
        periodic
    } else {
        hadamard(&indicator(f, Cmp::Ge, offset, limits)?, &periodic, limits)?
    };
    add(&acc, &tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{constant, letter_counter, unary_counter};
    use crate::words::words_up_to;
    use num_traits::CheckedSub;

    fn limits() -> Limits {
        Limits::default()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn add_counts_both_letters() {
        let f = letter_counter(&['a', 'b'], 'a').unwrap();
        let g = letter_counter(&['a', 'b'], 'b').unwrap();
        let sum = add(&f, &g).unwrap();
        assert_eq!(sum.evaluate("aab").unwrap(), big(3));
        let zero = constant(0u32, &['a', 'b']).unwrap();
        let same = add(&f, &zero).unwrap();
        for word in words_up_to(2, 4) {
            assert_eq!(same.evaluate_word(&word), f.evaluate_word(&word));
        }
    }

    #[test]
    fn alphabet_mismatch_is_an_input_error() {
        let f = letter_counter(&['a', 'b'], 'a').unwrap();
        let g = unary_counter();
        assert!(matches!(add(&f, &g), Err(Error::Input(_))));
        assert!(matches!(hadamard(&f, &g, &limits()), Err(Error::Input(_))));
    }

    #[test]
    fn hadamard_multiplies_pointwise() {
        let f = letter_counter(&['a', 'b'], 'a').unwrap();
        let g = letter_counter(&['a', 'b'], 'b').unwrap();
        let prod = hadamard(&f, &g, &limits()).unwrap();
        assert_eq!(prod.evaluate("aab").unwrap(), big(2));
        let one = constant(1u32, &['a', 'b']).unwrap();
        let same = hadamard(&f, &one, &limits()).unwrap();
        for word in words_up_to(2, 4) {
            assert_eq!(same.evaluate_word(&word), f.evaluate_word(&word));
        }
    }

    #[test]
    fn sub_const_truncates_at_zero() {
        let f = letter_counter(&['a', 'b'], 'a').unwrap();
        let dec = sub_const(&f, 1, &limits()).unwrap();
        assert_eq!(dec.evaluate("aa").unwrap(), big(1));
        assert_eq!(dec.evaluate("b").unwrap(), big(0));
        let by3 = sub_const(&f, 3, &limits()).unwrap();
        for word in words_up_to(2, 4) {
            let expect = f.evaluate_word(&word).checked_sub(&big(3)).unwrap_or_default();
            assert_eq!(by3.evaluate_word(&word), expect);
        }
    }

    #[test]
    fn clamp_and_sub_reconstruct_f() {
        let f = letter_counter(&['a', 'b'], 'a').unwrap();
        for c in 0..=3u64 {
            let lo = clamp(&f, c, &limits()).unwrap();
            let hi = sub_const(&f, c, &limits()).unwrap();
            let total = add(&lo, &hi).unwrap();
            for word in words_up_to(2, 4) {
                assert_eq!(
                    total.evaluate_word(&word),
                    f.evaluate_word(&word),
                    "c={c} word={word:?}"
                );
            }
        }
    }

    #[test]
    fn indicator_examples() {
        let f = letter_counter(&['a', 'b'], 'a').unwrap();
        let eq2 = indicator(&f, Cmp::Eq, 2, &limits()).unwrap();
        assert_eq!(eq2.evaluate("aa").unwrap(), big(1));
        assert_eq!(eq2.evaluate("aab").unwrap(), big(1));
        assert_eq!(eq2.evaluate("a").unwrap(), big(0));
        assert_eq!(eq2.evaluate("aaa").unwrap(), big(0));
        let ge3 = indicator(&f, Cmp::Ge, 3, &limits()).unwrap();
        assert_eq!(ge3.evaluate("aa").unwrap(), big(0));
        assert_eq!(ge3.evaluate("aaab").unwrap(), big(1));
        let le1 = indicator(&f, Cmp::Le, 1, &limits()).unwrap();
        assert_eq!(le1.evaluate("ab").unwrap(), big(1));
        assert_eq!(le1.evaluate("aa").unwrap(), big(0));
    }

    #[test]
    fn indicators_partition_bounded_functions() {
        // Σ_c 1_{f=c} = 1 pointwise when f is bounded by the largest c.
        let f = clamp(&letter_counter(&['a', 'b'], 'a').unwrap(), 2, &limits()).unwrap();
        let mut total = constant(0u32, &['a', 'b']).unwrap();
        for c in 0..=2 {
            total = add(&total, &indicator(&f, Cmp::Eq, c, &limits()).unwrap()).unwrap();
        }
        for word in words_up_to(2, 4) {
            assert_eq!(total.evaluate_word(&word), big(1));
        }
    }

    #[test]
    fn div_and_mod_reconstruct_f() {
        let f = letter_counter(&['a', 'b'], 'a').unwrap();
        let c = 3u64;
        let quot = div_const(&f, c, &limits()).unwrap();
        let mut recon = hadamard(&constant(c, &['a', 'b']).unwrap(), &quot, &limits()).unwrap();
        for d in 1..c {
            let ind = mod_indicator(&f, c, d, &limits()).unwrap();
            let scaled = hadamard(&constant(d, &['a', 'b']).unwrap(), &ind, &limits()).unwrap();
            recon = add(&recon, &scaled).unwrap();
        }
        for word in words_up_to(2, 5) {
            assert_eq!(
                recon.evaluate_word(&word),
                f.evaluate_word(&word),
                "word {word:?}"
            );
        }
    }

    #[test]
    fn div_const_examples() {
        let f = letter_counter(&['a', 'b'], 'a').unwrap();
        let half = div_const(&f, 2, &limits()).unwrap();
        assert_eq!(half.evaluate("aaa").unwrap(), big(1));
        assert_eq!(half.evaluate("aaaa").unwrap(), big(2));
        assert!(matches!(div_const(&f, 0, &limits()), Err(Error::Input(_))));
        let same = div_const(&f, 1, &limits()).unwrap();
        for word in words_up_to(2, 4) {
            assert_eq!(same.evaluate_word(&word), f.evaluate_word(&word));
        }
    }

    #[test]
    fn mod_indicator_examples() {
        let f = letter_counter(&['a', 'b'], 'a').unwrap();
        let odd = mod_indicator(&f, 2, 1, &limits()).unwrap();
        assert_eq!(odd.evaluate("a").unwrap(), big(1));
        assert_eq!(odd.evaluate("aa").unwrap(), big(0));
        let trivial = mod_indicator(&f, 1, 0, &limits()).unwrap();
        assert_eq!(trivial.evaluate("bb").unwrap(), big(1));
        assert!(matches!(
            mod_indicator(&f, 2, 2, &limits()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn binom_const_small_cases() {
        let f = letter_counter(&['a', 'b'], 'a').unwrap();
        let choose0 = binom_const(&f, 0, &limits()).unwrap();
        assert_eq!(choose0.evaluate("ab").unwrap(), big(1));
        let choose1 = binom_const(&f, 1, &limits()).unwrap();
        for word in words_up_to(2, 4) {
            assert_eq!(choose1.evaluate_word(&word), f.evaluate_word(&word));
        }
        let choose2 = binom_const(&f, 2, &limits()).unwrap();
        assert_eq!(choose2.evaluate("aaaa").unwrap(), big(6));
        assert_eq!(choose2.evaluate("a").unwrap(), big(0));
        assert!(matches!(
            binom_const(&f, 9, &limits()),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn patch_finite_overrides_small_values() {
        let f = letter_counter(&['a', 'b'], 'a').unwrap();
        // patches {0 ↦ 9} over the identity tail.
        let patched = patch_finite(&f, &[big(9)], |m| Ok(m.clone()), &limits()).unwrap();
        assert_eq!(patched.evaluate("bb").unwrap(), big(9));
        assert_eq!(patched.evaluate("aaa").unwrap(), big(3));
        // Empty patches: unchanged.
        let same = patch_finite(&f, &[], |m| Ok(m.clone()), &limits()).unwrap();
        for word in words_up_to(2, 3) {
            assert_eq!(same.evaluate_word(&word), f.evaluate_word(&word));
        }
    }
}
