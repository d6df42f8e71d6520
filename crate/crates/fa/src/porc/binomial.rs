//! Univariate polynomial algebra over the binomial basis.
//!
//! A polynomial is integer valued on ℤ exactly when its coefficients over
//! the basis C(x,0), C(x,1), C(x,2), ... are integers. The basis change is
//! computed exactly with iterated forward differences; the reverse direction
//! expands falling factorials. [`shift_binomial_basis`] rewrites an integer
//! polynomial with positive leading coefficient as a **nonnegative** integer
//! combination of shifted binomials C(x-c, i), the key step that turns
//! integer-valued polynomials into automaton constructions.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Binomial coefficient C(x, k) for integer x (possibly negative), as the
/// polynomial x(x-1)…(x-k+1)/k! evaluated exactly.
pub fn binom_int(x: &BigInt, k: u64) -> BigInt {
    let mut num = BigInt::one();
    for j in 0..k {
        num *= x - BigInt::from(j);
    }
    let mut fact = BigInt::one();
    for j in 2..=k {
        fact *= BigInt::from(j);
    }
    // The falling factorial of an integer is always divisible by k!.
    num / fact
}

/// A univariate polynomial with rational coefficients in the monomial basis,
/// lowest degree first. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPolynomial {
    coeffs: Vec<BigRational>,
}

impl QPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> QPolynomial {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> QPolynomial {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn zero() -> QPolynomial {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigRational {
        self.eval(&BigRational::from_integer(x.clone()))
    }

    /// Least common multiple of the coefficient denominators.
    pub fn common_denominator(&self) -> BigUint {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            let d = c.denom();
            lcm = num_integer::lcm(lcm, d.clone());
        }
        lcm.magnitude().clone()
    }

    pub fn scale(&self, factor: &BigRational) -> QPolynomial {
        QPolynomial::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// True when the polynomial maps integers to integers.
    pub fn is_integer_valued(&self) -> bool {
        to_binomial_basis(self).integer_coefficients().is_some()
    }
}

/// A univariate polynomial over the binomial basis with rational
/// coefficients: Σ aᵢ·C(x, i), lowest index first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialPoly {
    coeffs: Vec<BigRational>,
}

impl BinomialPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> BinomialPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        BinomialPoly { coeffs }
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// The coefficients as integers, or `None` when some coefficient is a
    /// proper fraction (equivalently: the polynomial is not integer valued).
    pub fn integer_coefficients(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn eval_int(&self, x: &BigInt) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * BigRational::from_integer(binom_int(x, i as u64));
        }
        acc
    }
}

/// Exact change of basis from monomials to binomial coefficients via forward
/// differences: the coefficient of C(x, i) is Δⁱφ(0).
pub fn to_binomial_basis(p: &QPolynomial) -> BinomialPoly {
    let n = p.coefficients().len();
    let mut values: Vec<BigRational> = (0..n)
        .map(|x| p.eval_int(&BigInt::from(x)))
        .collect();
    let mut coeffs = Vec::with_capacity(n);
    for _ in 0..n {
        coeffs.push(values[0].clone());
        for i in 0..values.len().saturating_sub(1) {
            values[i] = &values[i + 1] - &values[i];
        }
        values.pop();
    }
    BinomialPoly::new(coeffs)
}

/// Expands Σ aᵢ·C(x, i) back into the monomial basis.
pub fn from_binomial_basis(p: &BinomialPoly) -> QPolynomial {
    let mut out = vec![BigRational::zero(); p.coefficients().len()];
    for (i, a) in p.coefficients().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        // C(x, i) = x(x-1)…(x-i+1) / i!
        let mut falling = vec![BigRational::one()];
        let mut fact = BigRational::one();
        for j in 0..i {
            falling = poly_mul_linear(&falling, &-BigRational::from_integer(BigInt::from(j)));
            fact *= BigRational::from_integer(BigInt::from(j + 1));
        }
        for (d, f) in falling.iter().enumerate() {
            out[d] += a * f / &fact;
        }
    }
    QPolynomial::new(out)
}

/// Multiplies a coefficient vector by (x + shift).
fn poly_mul_linear(coeffs: &[BigRational], shift: &BigRational) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); coeffs.len() + 1];
    for (d, c) in coeffs.iter().enumerate() {
        out[d + 1] += c;
        out[d] += c * shift;
    }
    out
}

/// An integer polynomial over the binomial basis, lowest index first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntBinomialPoly {
    coeffs: Vec<BigInt>,
}

impl IntBinomialPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntBinomialPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntBinomialPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> IntBinomialPoly {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * binom_int(x, i as u64);
            }
        }
        acc
    }

    pub fn to_rational(&self) -> BinomialPoly {
        BinomialPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

/// One term b·C(x - c, i) of a shifted binomial representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedBinomialTerm {
    pub coeff: BigUint,
    pub shift: u64,
    pub degree: usize,
}

/// A sum Σ bᵢ·C(x - cᵢ, i) with all bᵢ, cᵢ ∈ ℕ, highest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedBinomialForm {
    pub terms: Vec<ShiftedBinomialTerm>,
}

impl ShiftedBinomialForm {
    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for t in &self.terms {
            acc += BigInt::from(t.coeff.clone())
                * binom_int(&(x - BigInt::from(t.shift)), t.degree as u64);
        }
        acc
    }

    pub fn max_shift(&self) -> u64 {
        self.terms.iter().map(|t| t.shift).max().unwrap_or(0)
    }
}

/// How many shifts are scanned exhaustively before jumping to the bound
/// that provably qualifies.
const SHIFT_SCAN_WINDOW: u64 = 64;

/// Coefficients of C(x-c, r) over the plain binomial basis, index 0..=r:
/// C(x-c, r) = Σᵢ (-1)^(r-i)·C(r-i+c-1, r-i)·C(x, i) (Chu–Vandermonde).
fn shifted_binomial_expansion(c: u64, r: usize) -> Vec<BigInt> {
    (0..=r)
        .map(|i| {
            let k = (r - i) as u64;
            let top = BigInt::from(k) + BigInt::from(c) - BigInt::one();
            let mut v = binom_int(&top, k);
            if k % 2 == 1 {
                v = -v;
            }
            v
        })
        .collect()
}

/// Rewrites an integer binomial-basis polynomial with positive leading
/// coefficient as a nonnegative combination of shifted binomials.
///
/// At each degree the smallest shift c ∈ ℕ is chosen for which the residual
/// is either zero or again has positive leading coefficient; this keeps the
/// output canonical and reproduces textbook rewritings such as
/// C(x,2) - C(x,1) + 1 = C(x-1, 2) exactly.
pub fn shift_binomial_basis(p: &IntBinomialPoly) -> Result<ShiftedBinomialForm> {
    let leading_positive =
        |coeffs: &[BigInt]| coeffs.last().map(|l| l.sign() == Sign::Plus).unwrap_or(false);
    if !leading_positive(p.coefficients()) {
        return Err(Error::Input(
            "shifted binomial form needs a positive leading coefficient".into(),
        ));
    }
    let mut work: Vec<BigInt> = p.coefficients().to_vec();
    let mut terms = Vec::new();
    while let Some(last) = work.last() {
        let r = work.len() - 1;
        let b = last.clone();
        debug_assert!(b.sign() == Sign::Plus);
        if r == 0 {
            terms.push(ShiftedBinomialTerm {
                coeff: b.magnitude().clone(),
                shift: 0,
                degree: 0,
            });
            break;
        }
        // Smallest shift whose residual is zero or has positive leading
        // coefficient. The bound max(-a_{r-1}+1, 0) always qualifies (it
        // makes the new leading coefficient positive); below it only a small
        // window is scanned, since residual coefficients can grow to the
        // point where a linear search would be astronomically long.
        let cap = (-&work[r - 1] + BigInt::one()).max(BigInt::zero());
        let cap: u64 = cap
            .try_into()
            .map_err(|_| Error::Resource("required binomial shift exceeds u64".into()))?;
        let try_shift = |shift: u64| -> Option<Vec<BigInt>> {
            let expansion = shifted_binomial_expansion(shift, r);
            let mut residual = work.clone();
            for (i, e) in expansion.iter().enumerate() {
                residual[i] -= &b * e;
            }
            while residual.last().is_some_and(Zero::is_zero) {
                residual.pop();
            }
            (residual.is_empty() || leading_positive(&residual)).then_some(residual)
        };
        let (shift, residual) = (0..=cap.min(SHIFT_SCAN_WINDOW))
            .chain(std::iter::once(cap))
            .find_map(|c| try_shift(c).map(|res| (c, res)))
            .expect("the cap shift always qualifies");
        terms.push(ShiftedBinomialTerm {
            coeff: b.magnitude().clone(),
            shift,
            degree: r,
        });
        work = residual;
    }
    Ok(ShiftedBinomialForm { terms })
}

/// Result of [`interpolate_nonneg`]: the polynomial, the chosen multiplier
/// of the top binomial term, and the bound up to which nonnegativity was
/// checked exhaustively (beyond it the leading term provably dominates).
#[derive(Debug, Clone)]
pub struct Interpolation {
    pub poly: IntBinomialPoly,
    pub alpha: BigUint,
    pub certified_bound: u64,
}

/// Explicit dominance bound: for x beyond the returned value the leading
/// term outweighs the sum of the absolute lower coefficients, so the sign of
/// the polynomial equals the sign of its leading coefficient.
fn dominance_bound(coeffs: &[BigInt]) -> Option<u64> {
    let r = coeffs.len().checked_sub(1)?;
    if r == 0 {
        return Some(0);
    }
    let lead = coeffs.last().unwrap().magnitude().clone();
    let mut sum_abs = BigUint::zero();
    for c in &coeffs[..r] {
        sum_abs += c.magnitude();
    }
    // x ≥ max(2r, r + ceil(r·S/|a_r|)) ⟹ |a_r·C(x,r)| > Σ|a_i|·C(x,i).
    let r_big = BigUint::from(r);
    let scaled = (&r_big * &sum_abs + &lead - BigUint::one()) / &lead;
    let bound = BigUint::from(r) + scaled;
    let bound = bound.max(BigUint::from(2 * r));
    bound.to_u64()
}

/// How many points a certification pass may evaluate before giving up.
const CERTIFY_EVAL_CAP: u64 = 200_000;

/// Certifies q(n) ≥ 0 for all n ∈ ℕ: exhaustive check up to the dominance
/// bound, positive leading coefficient beyond it. Returns the bound.
fn certify_nonneg(p: &IntBinomialPoly) -> Option<u64> {
    if p.is_zero() {
        return Some(0);
    }
    if p.leading().unwrap().sign() != Sign::Plus {
        return None;
    }
    let bound = dominance_bound(p.coefficients())?;
    if bound > CERTIFY_EVAL_CAP {
        return None;
    }
    for n in 0..=bound {
        if p.eval_int(&BigInt::from(n)).sign() == Sign::Minus {
            return None;
        }
    }
    Some(bound)
}

/// Integer-valued polynomial q with q(n) = values[n] for every index and
/// q(n) ≥ 0 for **all** n ∈ ℕ.
///
/// Newton's forward scheme interpolates the targets; then the smallest
/// α ∈ ℕ is chosen such that q + α·C(x, N+1) is certifiably nonnegative
/// (α·C(x, N+1) vanishes on the targets, so interpolation is preserved).
pub fn interpolate_nonneg(values: &[BigUint]) -> Interpolation {
    assert!(!values.is_empty(), "need at least one target value");
    let n_targets = values.len();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(n_targets + 1);
    for (i, v) in values.iter().enumerate() {
        let partial = IntBinomialPoly::new(coeffs.clone());
        let predicted = partial.eval_int(&BigInt::from(i));
        coeffs.push(BigInt::from(v.clone()) - predicted);
    }
    // coeffs now interpolates all targets; add α·C(x, N+1) for positivity.
    let mut alpha = BigUint::zero();
    loop {
        let mut candidate = coeffs.clone();
        candidate.push(BigInt::from(alpha.clone()));
        let candidate = IntBinomialPoly::new(candidate);
        if let Some(bound) = certify_nonneg(&candidate) {
            return Interpolation {
                poly: candidate,
                alpha,
                certified_bound: bound,
            };
        }
        alpha += BigUint::one();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(coeffs: &[(i64, i64)]) -> QPolynomial {
        QPolynomial::new(
            coeffs
                .iter()
                .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
                .collect(),
        )
    }

    #[test]
    fn binomial_basis_of_cubic() {
        // x(x-1)² = x³ - 2x² + x = 6·C(x,3) + 2·C(x,2)
        let p = QPolynomial::from_integers(&[0, 1, -2, 1]);
        let b = to_binomial_basis(&p);
        let ints = b.integer_coefficients().unwrap();
        assert_eq!(ints, vec![
            BigInt::zero(),
            BigInt::zero(),
            BigInt::from(2),
            BigInt::from(6)
        ]);
    }

    #[test]
    fn binomial_basis_of_worked_quadratic() {
        // x²/2 - 3x/2 + 1 = C(x,2) - C(x,1) + 1
        let p = q(&[(1, 1), (-3, 2), (1, 2)]);
        let b = to_binomial_basis(&p);
        assert_eq!(
            b.integer_coefficients().unwrap(),
            vec![BigInt::one(), BigInt::from(-1), BigInt::one()]
        );
    }

    #[test]
    fn constant_converts_to_degree_zero() {
        let p = QPolynomial::from_integers(&[5]);
        let b = to_binomial_basis(&p);
        assert_eq!(b.integer_coefficients().unwrap(), vec![BigInt::from(5)]);
    }

    #[test]
    fn basis_conversions_are_inverse() {
        let p = q(&[(1, 2), (0, 1), (-7, 3), (5, 1)]);
        let back = from_binomial_basis(&to_binomial_basis(&p));
        assert_eq!(back, p);
        let b = BinomialPoly::new(vec![
            BigRational::from_integer(BigInt::from(3)),
            BigRational::from_integer(BigInt::from(-2)),
            BigRational::from_integer(BigInt::from(4)),
        ]);
        let round = to_binomial_basis(&from_binomial_basis(&b));
        assert_eq!(round, b);
    }

    #[test]
    fn non_integer_valued_is_flagged() {
        let half_x = q(&[(0, 1), (1, 2)]);
        assert!(!half_x.is_integer_valued());
        let half_square = q(&[(0, 1), (-1, 2), (1, 2)]); // x(x-1)/2
        assert!(half_square.is_integer_valued());
    }

    #[test]
    fn shift_reproduces_worked_example() {
        // C(x,2) - C(x,1) + 1 → C(x-1, 2)
        let p = IntBinomialPoly::from_i64(&[1, -1, 1]);
        let shifted = shift_binomial_basis(&p).unwrap();
        assert_eq!(
            shifted.terms,
            vec![ShiftedBinomialTerm {
                coeff: BigUint::one(),
                shift: 1,
                degree: 2
            }]
        );
    }

    #[test]
    fn shift_keeps_plain_linear_term() {
        let p = IntBinomialPoly::from_i64(&[0, 1]);
        let shifted = shift_binomial_basis(&p).unwrap();
        assert_eq!(
            shifted.terms,
            vec![ShiftedBinomialTerm {
                coeff: BigUint::one(),
                shift: 0,
                degree: 1
            }]
        );
    }

    #[test]
    fn shift_rejects_nonpositive_leading() {
        assert!(shift_binomial_basis(&IntBinomialPoly::from_i64(&[1, -1])).is_err());
        assert!(shift_binomial_basis(&IntBinomialPoly::from_i64(&[])).is_err());
    }

    #[test]
    fn shifted_form_evaluates_identically() {
        let polys = [
            vec![2, -2, 2],
            vec![34, 4, 0, 2],
            vec![-5, 0, -9, 0, 1],
            vec![7],
            vec![0, -3, 0, 0, 0, 4],
        ];
        for coeffs in polys {
            let p = IntBinomialPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect());
            let shifted = shift_binomial_basis(&p).unwrap();
            for x in 0..=20 {
                let x = BigInt::from(x);
                assert_eq!(shifted.eval_int(&x), p.eval_int(&x), "{coeffs:?} at {x}");
            }
        }
    }

    #[test]
    fn interpolation_examples() {
        // (3) → constant 3
        let r = interpolate_nonneg(&[BigUint::from(3u32)]);
        assert_eq!(r.poly.coefficients(), &[BigInt::from(3)]);
        assert!(r.alpha.is_zero());

        // (0, 2) → 2·C(x,1), no top term needed
        let r = interpolate_nonneg(&[BigUint::zero(), BigUint::from(2u32)]);
        assert_eq!(r.poly.coefficients(), &[BigInt::zero(), BigInt::from(2)]);
        assert!(r.alpha.is_zero());

        // (1, 0) → 1 - C(x,1) + C(x,2): values 1, 0, 0, 1, 3, ...
        let r = interpolate_nonneg(&[BigUint::one(), BigUint::zero()]);
        assert_eq!(
            r.poly.coefficients(),
            &[BigInt::one(), BigInt::from(-1), BigInt::one()]
        );
        assert_eq!(r.alpha, BigUint::one());
        let expected = [1, 0, 0, 1, 3, 6];
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(r.poly.eval_int(&BigInt::from(n)), BigInt::from(*e));
        }
    }

    #[test]
    fn interpolation_hits_targets_and_stays_nonnegative() {
        let targets: Vec<BigUint> = [4u32, 0, 9, 1, 0, 7].iter().map(|&v| BigUint::from(v)).collect();
        let r = interpolate_nonneg(&targets);
        for (n, t) in targets.iter().enumerate() {
            assert_eq!(
                r.poly.eval_int(&BigInt::from(n)),
                BigInt::from(t.clone()),
                "target {n}"
            );
        }
        let horizon = r.certified_bound.saturating_mul(10).max(50);
        for n in 0..=horizon {
            assert!(
                r.poly.eval_int(&BigInt::from(n)).sign() != Sign::Minus,
                "negative at {n}"
            );
        }
    }

    #[test]
    fn binom_int_handles_negative_arguments() {
        assert_eq!(binom_int(&BigInt::from(-1), 2), BigInt::one());
        assert_eq!(binom_int(&BigInt::from(-2), 1), BigInt::from(-2));
        assert_eq!(binom_int(&BigInt::from(4), 2), BigInt::from(6));
        assert_eq!(binom_int(&BigInt::from(3), 0), BigInt::one());
        assert_eq!(binom_int(&BigInt::from(2), 5), BigInt::zero());
    }
}
