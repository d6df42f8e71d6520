//! Finite semirings and the canonical homomorphism from ℕ.
//!
//! The stepwise engine embeds path counts into a finite semiring and reads
//! the relevant information back out through a predicate on the carrier. Two
//! families cover all constructions in this crate: the capped semiring
//! {0..k} with saturating arithmetic (distinguishes counts below k from "at
//! least k") and the cyclic semiring ℤ_c (tracks counts modulo c).
//! User-defined semirings are accepted as explicit operation tables; their
//! constructor runs the full (finite, hence decidable) axiom check.
//!
//! Since every natural number is 0 or a repeated sum of 1, the homomorphism
//! τ: ℕ → R is unique. It is memoized as an eventually periodic sequence, so
//! τ of an arbitrarily large integer costs one modular reduction.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Largest supported carrier; operation tables are materialized as
/// size × size arrays.
pub const MAX_CARRIER: usize = 4096;

/// A finite semiring given by explicit operation tables over the carrier
/// {0, .., size-1}. Immutable value object; freely shareable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemiring {
    name: String,
    size: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    zero: u16,
    one: u16,
    hom: NatHom,
}

/// The unique homomorphism ℕ → R, stored as the eventually periodic
/// sequence τ(0), τ(1), ...
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatHom {
    prefix: Vec<u16>,
    cycle_start: usize,
    cycle_len: usize,
}

impl NatHom {
    fn compute(size: usize, zero: u16, one: u16, add: &[u16]) -> NatHom {
        let mut first_seen = vec![usize::MAX; size];
        let mut prefix = Vec::new();
        let mut current = zero;
        loop {
            if first_seen[current as usize] != usize::MAX {
                let cycle_start = first_seen[current as usize];
                return NatHom {
                    cycle_len: prefix.len() - cycle_start,
                    cycle_start,
                    prefix,
                };
            }
            first_seen[current as usize] = prefix.len();
            prefix.push(current);
            current = add[current as usize * size + one as usize];
        }
    }

    pub fn apply_u64(&self, n: u64) -> u16 {
        if let Some(i) = n.to_usize().filter(|&i| i < self.prefix.len()) {
            return self.prefix[i];
        }
        let offset = (n - self.cycle_start as u64) % self.cycle_len as u64;
        self.prefix[self.cycle_start + offset as usize]
    }

    pub fn apply(&self, n: &BigUint) -> u16 {
        if let Some(i) = n.to_usize().filter(|&i| i < self.prefix.len()) {
            return self.prefix[i];
        }
        let offset = (n - BigUint::from(self.cycle_start)) % BigUint::from(self.cycle_len);
        self.prefix[self.cycle_start + offset.to_usize().expect("offset < cycle_len")]
    }
}

impl FiniteSemiring {
    /// The capped semiring {0..k}: a ⊕ b = min(a+b, k), a ⊗ b = min(a·b, k),
    /// τ(n) = min(n, k).
    pub fn capped(k: u64) -> Result<FiniteSemiring> {
        let size = usize::try_from(k)
            .ok()
            .and_then(|k| k.checked_add(1))
            .filter(|&s| s <= MAX_CARRIER)
            .ok_or_else(|| {
                Error::Resource(format!("capped semiring cap {k} exceeds carrier limit"))
            })?;
        let cap = k as usize;
        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for a in 0..size {
            for b in 0..size {
                add[a * size + b] = (a + b).min(cap) as u16;
                mul[a * size + b] = (a * b).min(cap) as u16;
            }
        }
        Ok(Self::assemble(format!("capped:{k}"), size, add, mul, 0, 1.min(cap) as u16))
    }

    /// The cyclic semiring ℤ_c with mod-c arithmetic; τ(n) = n rem c.
    pub fn cyclic(c: u64) -> Result<FiniteSemiring> {
        if c == 0 {
            return Err(Error::Input("cyclic semiring needs modulus ≥ 1".into()));
        }
        let size = usize::try_from(c).ok().filter(|&s| s <= MAX_CARRIER).ok_or_else(|| {
            Error::Resource(format!("cyclic semiring modulus {c} exceeds carrier limit"))
        })?;
        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for a in 0..size {
            for b in 0..size {
                add[a * size + b] = ((a + b) % size) as u16;
                mul[a * size + b] = ((a * b) % size) as u16;
            }
        }
        let one = if size == 1 { 0 } else { 1 };
        Ok(Self::assemble(format!("cyclic:{c}"), size, add, mul, 0, one))
    }

    /// Builds a semiring from explicit tables and runs the full axiom check.
    pub fn from_tables(
        name: impl Into<String>,
        add: Vec<Vec<u16>>,
        mul: Vec<Vec<u16>>,
        zero: u16,
        one: u16,
    ) -> Result<FiniteSemiring> {
        let size = add.len();
        if size == 0 || size > MAX_CARRIER {
            return Err(Error::Input(format!(
                "carrier size must be between 1 and {MAX_CARRIER}"
            )));
        }
        let flatten = |table: Vec<Vec<u16>>, what: &str| -> Result<Vec<u16>> {
            if table.len() != size || table.iter().any(|row| row.len() != size) {
                return Err(Error::Input(format!("{what} table is not {size}×{size}")));
            }
            let flat: Vec<u16> = table.into_iter().flatten().collect();
            if flat.iter().any(|&x| x as usize >= size) {
                return Err(Error::Input(format!(
                    "{what} table contains an element outside the carrier"
                )));
            }
            Ok(flat)
        };
        let add = flatten(add, "addition")?;
        let mul = flatten(mul, "multiplication")?;
        if zero as usize >= size || one as usize >= size {
            return Err(Error::Input("zero/one outside the carrier".into()));
        }
        let ring = Self::assemble(name.into(), size, add, mul, zero, one);
        ring.check_axioms()?;
        Ok(ring)
    }

    fn assemble(
        name: String,
        size: usize,
        add: Vec<u16>,
        mul: Vec<u16>,
        zero: u16,
        one: u16,
    ) -> FiniteSemiring {
        let hom = NatHom::compute(size, zero, one, &add);
        FiniteSemiring {
            name,
            size,
            add,
            mul,
            zero,
            one,
            hom,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> u16 {
        self.zero
    }

    pub fn one(&self) -> u16 {
        self.one
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.size + b as usize]
    }

    /// The unique homomorphism from ℕ.
    pub fn nat_hom(&self) -> &NatHom {
        &self.hom
    }

    /// Exhaustively checks the semiring axioms: (R, ⊕, 0) is a commutative
    /// monoid, (R, ⊗, 1) is a monoid, ⊗ distributes over ⊕ and 0
    /// annihilates. Cost is cubic in the carrier size.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.size as u16;
        let fail = |axiom: &str, witness: String| {
            Err(Error::Input(format!(
                "semiring axiom violated ({axiom}) at {witness}"
            )))
        };
        for a in 0..n {
            if self.add(a, self.zero) != a || self.add(self.zero, a) != a {
                return fail("additive identity", format!("a={a}"));
            }
            if self.mul(a, self.one) != a || self.mul(self.one, a) != a {
                return fail("multiplicative identity", format!("a={a}"));
            }
            if self.mul(a, self.zero) != self.zero || self.mul(self.zero, a) != self.zero {
                return fail("zero annihilation", format!("a={a}"));
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return fail("additive commutativity", format!("a={a}, b={b}"));
                }
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return fail("additive associativity", format!("a={a}, b={b}, c={c}"));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return fail(
                            "multiplicative associativity",
                            format!("a={a}, b={b}, c={c}"),
                        );
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return fail("left distributivity", format!("a={a}, b={b}, c={c}"));
                    }
                    if self.mul(self.add(a, b), c) != self.add(self.mul(a, c), self.mul(b, c)) {
                        return fail("right distributivity", format!("a={a}, b={b}, c={c}"));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capped_examples() {
        let r1 = FiniteSemiring::capped(1).unwrap();
        assert_eq!(r1.add(1, 1), 1);
        let r3 = FiniteSemiring::capped(3).unwrap();
        assert_eq!(r3.mul(2, 2), 3);
        let r2 = FiniteSemiring::capped(2).unwrap();
        assert_eq!(r2.nat_hom().apply_u64(17), 2);
    }

    #[test]
    fn cyclic_examples() {
        let z2 = FiniteSemiring::cyclic(2).unwrap();
        assert_eq!(z2.add(1, 1), 0);
        let z5 = FiniteSemiring::cyclic(5).unwrap();
        assert_eq!(z5.mul(3, 4), 2);
        let z3 = FiniteSemiring::cyclic(3).unwrap();
        assert_eq!(z3.nat_hom().apply_u64(7), 1);
        assert!(FiniteSemiring::cyclic(0).is_err());
    }

    #[test]
    fn axioms_hold_for_small_families() {
        for k in 0..=16 {
            FiniteSemiring::capped(k).unwrap().check_axioms().unwrap();
        }
        for c in 1..=16 {
            FiniteSemiring::cyclic(c).unwrap().check_axioms().unwrap();
        }
    }

    #[test]
    fn tau_is_repeated_addition_of_one() {
        for ring in [
            FiniteSemiring::capped(4).unwrap(),
            FiniteSemiring::cyclic(6).unwrap(),
            FiniteSemiring::cyclic(1).unwrap(),
        ] {
            let hom = ring.nat_hom();
            let mut acc = ring.zero();
            for n in 0..(3 * ring.size() as u64) {
                assert_eq!(hom.apply_u64(n), acc, "{} at n={n}", ring.name());
                assert_eq!(hom.apply(&BigUint::from(n)), acc);
                acc = ring.add(acc, ring.one());
            }
        }
    }

    #[test]
    fn tau_is_a_homomorphism_on_a_finite_window() {
        for ring in [
            FiniteSemiring::capped(3).unwrap(),
            FiniteSemiring::cyclic(4).unwrap(),
        ] {
            let hom = ring.nat_hom();
            let window = (ring.size() * ring.size()) as u64;
            assert_eq!(hom.apply_u64(0), ring.zero());
            assert_eq!(hom.apply_u64(1), ring.one());
            for a in 0..=window {
                for b in 0..=window {
                    assert_eq!(
                        hom.apply_u64(a + b),
                        ring.add(hom.apply_u64(a), hom.apply_u64(b))
                    );
                    assert_eq!(
                        hom.apply_u64(a * b),
                        ring.mul(hom.apply_u64(a), hom.apply_u64(b))
                    );
                }
            }
        }
    }

    #[test]
    fn from_tables_rejects_bad_axioms() {
        // "Addition" that is not commutative.
        let add = vec![vec![0, 0], vec![1, 1]];
        let mul = vec![vec![0, 0], vec![0, 1]];
        let err = FiniteSemiring::from_tables("bogus", add, mul, 0, 1);
        assert!(matches!(err, Err(Error::Input(_))));
    }

    #[test]
    fn from_tables_accepts_boolean_semiring() {
        let add = vec![vec![0, 1], vec![1, 1]];
        let mul = vec![vec![0, 0], vec![0, 1]];
        let ring = FiniteSemiring::from_tables("bool", add, mul, 0, 1).unwrap();
        assert_eq!(ring.nat_hom().apply_u64(5), 1);
    }
}
