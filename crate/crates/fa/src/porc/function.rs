//! Ultimately PORC functions: piecewise "Polynomial On Residue Classes"
//! descriptions with finitely many patched initial values.
//!
//! A [`PorcFunction`] has an offset N, a quasiperiod p, one rational
//! polynomial constituent per residue class mod p, and explicit values for
//! the arguments below N. It evaluates as φ(n) = initial_values[n] for
//! n < N and φ(n) = φ_{n rem p}(n) otherwise. All produced values must be
//! nonnegative integers; this is checked on construction by a leading
//! coefficient sign check per constituent plus sampling up to a horizon.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Deserialize;
use std::str::FromStr;

use crate::automaton::WeightedAutomaton;
use crate::closures;
use crate::error::{Error, Result};
use crate::porc::binomial::QPolynomial;
use crate::Limits;

/// The shifted remainder: n itself below the offset N, otherwise the
/// smallest representative ≥ N of n's residue class mod p.
pub fn shifted_remainder(n: u64, offset: u64, period: u64) -> Result<u64> {
    if period == 0 {
        return Err(Error::Input("shifted remainder needs period ≥ 1".into()));
    }
    if n < offset {
        Ok(n)
    } else {
        Ok(offset + (n - offset) % period)
    }
}

/// An ultimately PORC function.
#[derive(Debug, Clone)]
pub struct PorcFunction {
    offset: u64,
    period: u64,
    constituents: Vec<QPolynomial>,
    initial_values: Vec<BigUint>,
}

/// How far evaluation is sampled during validation, beyond the offset.
const VALIDATION_HORIZON: u64 = 64;

impl PorcFunction {
    /// Builds and validates a PORC description. `initial_values` must have
    /// exactly `offset` entries and `constituents` exactly `period` entries.
    /// Every constituent must be zero, a nonnegative constant, or have a
    /// positive leading coefficient, and all sampled values on its residue
    /// class from the offset up to a horizon must be nonnegative integers.
    pub fn new(
        offset: u64,
        period: u64,
        constituents: Vec<QPolynomial>,
        initial_values: Vec<BigUint>,
    ) -> Result<PorcFunction> {
        if period == 0 {
            return Err(Error::Input("PORC quasiperiod must be at least 1".into()));
        }
        if constituents.len() as u64 != period {
            return Err(Error::Input(format!(
                "expected {period} constituents, got {}",
                constituents.len()
            )));
        }
        if initial_values.len() as u64 != offset {
            return Err(Error::Input(format!(
                "expected {offset} initial values, got {}",
                initial_values.len()
            )));
        }
        for (i, c) in constituents.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let lead = c.coefficients().last().unwrap();
            let ok = match c.degree() {
                Some(0) => !lead.is_negative(),
                _ => lead.is_positive(),
            };
            if !ok {
                return Err(Error::Input(format!(
                    "constituent {i} is eventually negative (leading coefficient {lead})"
                )));
            }
        }
        let porc = PorcFunction {
            offset,
            period,
            constituents,
            initial_values,
        };
        let degree = porc
            .constituents
            .iter()
            .filter_map(|c| c.degree())
            .max()
            .unwrap_or(0) as u64;
        let horizon = offset + period * (degree + 2) + VALIDATION_HORIZON;
        for n in offset..horizon {
            porc.eval_u64(n).map_err(|e| {
                Error::Input(format!("PORC produces a bad value at n={n}: {e}"))
            })?;
        }
        Ok(porc)
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn constituent(&self, residue: u64) -> &QPolynomial {
        &self.constituents[residue as usize]
    }

    pub fn initial_value(&self, n: u64) -> &BigUint {
        &self.initial_values[n as usize]
    }

    /// Evaluates the description at n.
    pub fn eval_u64(&self, n: u64) -> Result<BigUint> {
        if n < self.offset {
            return Ok(self.initial_values[n as usize].clone());
        }
        let residue = (n % self.period) as usize;
        let value = self.constituents[residue].eval_int(&BigInt::from(n));
        if !value.is_integer() {
            return Err(Error::Input(format!(
                "constituent {residue} is non-integer at n={n}: {value}"
            )));
        }
        let value = value.to_integer();
        if value.sign() == Sign::Minus {
            return Err(Error::Input(format!(
                "constituent {residue} is negative at n={n}: {value}"
            )));
        }
        Ok(value.magnitude().clone())
    }

    /// A PORC given by a single polynomial everywhere (offset 0, period 1).
    pub fn plain_polynomial(phi: QPolynomial) -> Result<PorcFunction> {
        PorcFunction::new(0, 1, vec![phi], Vec::new())
    }

    /// Parses the JSON description used by the CLI:
    ///
    /// ```json
    /// { "offset": 2, "period": 2,
    ///   "constituents": [["0"], ["1/2", "1/2"]],
    ///   "initial_values": ["7", "0"] }
    /// ```
    ///
    /// Each constituent is its coefficient list, lowest degree first, with
    /// rational coefficients written as "p/q" strings or plain integers.
    pub fn from_json(text: &str) -> Result<PorcFunction> {
        #[derive(Deserialize)]
        struct Wire {
            offset: u64,
            period: u64,
            constituents: Vec<Vec<RationalValue>>,
            #[serde(default)]
            initial_values: Vec<NatValue>,
        }
        let wire: Wire =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("PORC JSON: {e}")))?;
        PorcFunction::new(
            wire.offset,
            wire.period,
            wire.constituents
                .into_iter()
                .map(|c| QPolynomial::new(c.into_iter().map(|v| v.0).collect()))
                .collect(),
            wire.initial_values.into_iter().map(|v| v.0).collect(),
        )
    }
}

struct RationalValue(BigRational);

impl<'de> Deserialize<'de> for RationalValue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(i64),
            Str(String),
        }
        let text = match Raw::deserialize(deserializer)? {
            Raw::Num(n) => return Ok(RationalValue(BigRational::from_integer(BigInt::from(n)))),
            Raw::Str(s) => s,
        };
        parse_rational(&text)
            .map(RationalValue)
            .map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

struct NatValue(BigUint);

impl<'de> Deserialize<'de> for NatValue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(n) => Ok(NatValue(BigUint::from(n))),
            Raw::Str(s) => BigUint::from_str(s.trim())
                .map(NatValue)
                .map_err(|_| serde::de::Error::custom(format!("invalid natural number {s:?}"))),
        }
    }
}

/// Parses "p", "-p" or "p/q" into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num)
        .map_err(|_| Error::Parse(format!("invalid rational numerator {num:?}")))?;
    let den = BigInt::from_str(den)
        .map_err(|_| Error::Parse(format!("invalid rational denominator {den:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse("rational with zero denominator".into()));
    }
    Ok(BigRational::new(num, den))
}

/// A finite sum of finite products of univariate PORC functions, applied
/// coordinatewise: Σᵢ ∏ⱼ φ^(i,j)(nⱼ).
#[derive(Debug, Clone)]
pub struct SumOfProductsPorc {
    arity: usize,
    summands: Vec<Vec<PorcFunction>>,
}

impl SumOfProductsPorc {
    pub fn new(arity: usize, summands: Vec<Vec<PorcFunction>>) -> Result<SumOfProductsPorc> {
        if arity == 0 {
            return Err(Error::Input("sum of products needs arity ≥ 1".into()));
        }
        for (i, s) in summands.iter().enumerate() {
            if s.len() != arity {
                return Err(Error::Input(format!(
                    "summand {i} has {} factors, expected {arity}",
                    s.len()
                )));
            }
        }
        Ok(SumOfProductsPorc { arity, summands })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, args: &[u64]) -> Result<BigUint> {
        assert_eq!(args.len(), self.arity);
        let mut total = BigUint::zero();
        for summand in &self.summands {
            let mut product = BigUint::from(1u32);
            for (phi, &n) in summand.iter().zip(args) {
                product *= phi.eval_u64(n)?;
            }
            total += product;
        }
        Ok(total)
    }
}

/// Builds an automaton computing Σᵢ ∏ⱼ φ^(i,j)(fⱼ(w)) as sums of Hadamard
/// products of per-coordinate PORC compositions.
pub fn compose_sum_products(
    phi: &SumOfProductsPorc,
    automata: &[&WeightedAutomaton],
    limits: &Limits,
) -> Result<WeightedAutomaton> {
    if automata.len() != phi.arity {
        return Err(Error::Input(format!(
            "expected {} automata, got {}",
            phi.arity,
            automata.len()
        )));
    }
    let alphabet = automata[0].alphabet().to_vec();
    for m in automata {
        if m.alphabet() != alphabet {
            return Err(Error::Input("alphabet mismatch among the inputs".into()));
        }
    }
    let mut acc = crate::builders::constant(0u32, &alphabet)?;
    for summand in &phi.summands {
        let mut product: Option<WeightedAutomaton> = None;
        for (constituent, m) in summand.iter().zip(automata) {
            let composed = closures::porc_compose(m, constituent, limits)?;
            product = Some(match product {
                None => composed,
                Some(p) => closures::hadamard(&p, &composed, limits)?,
            });
        }
        if let Some(p) = product {
            acc = closures::add(&acc, &p)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_remainder_examples() {
        assert_eq!(shifted_remainder(3, 5, 2).unwrap(), 3);
        assert_eq!(shifted_remainder(9, 5, 2).unwrap(), 5);
        assert_eq!(shifted_remainder(5, 5, 2).unwrap(), 5);
        assert!(shifted_remainder(1, 0, 0).is_err());
    }

    #[test]
    fn parity_porc_evaluates() {
        // φ(n) = n rem 2: constituents 0 and 1.
        let phi = PorcFunction::new(
            0,
            2,
            vec![QPolynomial::zero(), QPolynomial::from_integers(&[1])],
            vec![],
        )
        .unwrap();
        for n in 0..10 {
            assert_eq!(phi.eval_u64(n).unwrap(), BigUint::from(n % 2));
        }
    }

    #[test]
    fn initial_values_override() {
        let phi = PorcFunction::new(
            3,
            1,
            vec![QPolynomial::from_integers(&[0, 1])],
            vec![BigUint::from(7u32), BigUint::zero(), BigUint::from(7u32)],
        )
        .unwrap();
        assert_eq!(phi.eval_u64(0).unwrap(), BigUint::from(7u32));
        assert_eq!(phi.eval_u64(1).unwrap(), BigUint::zero());
        assert_eq!(phi.eval_u64(2).unwrap(), BigUint::from(7u32));
        assert_eq!(phi.eval_u64(3).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn eventually_negative_constituent_rejected() {
        let err = PorcFunction::new(0, 1, vec![QPolynomial::from_integers(&[0, -1])], vec![]);
        assert!(matches!(err, Err(Error::Input(_))));
    }

    #[test]
    fn rational_constituent_must_be_integer_on_its_class() {
        // n/2 as the constituent of the odd class is never an integer there.
        let half = QPolynomial::new(vec![
            BigRational::zero(),
            BigRational::new(BigInt::from(1), BigInt::from(2)),
        ]);
        let err = PorcFunction::new(0, 2, vec![QPolynomial::zero(), half.clone()], vec![]);
        assert!(matches!(err, Err(Error::Input(_))));
        // On the even class it is fine: φ(n) = n/2 for even n.
        let ok = PorcFunction::new(0, 2, vec![half, QPolynomial::zero()], vec![]);
        let phi = ok.unwrap();
        assert_eq!(phi.eval_u64(6).unwrap(), BigUint::from(3u32));
        assert_eq!(phi.eval_u64(3).unwrap(), BigUint::zero());
    }

    #[test]
    fn json_round_trip() {
        let phi = PorcFunction::from_json(
            r#"{ "offset": 2, "period": 2,
                 "constituents": [["0", "1/2", "1/2"], [1]],
                 "initial_values": ["5", 0] }"#,
        )
        .unwrap();
        assert_eq!(phi.eval_u64(0).unwrap(), BigUint::from(5u32));
        assert_eq!(phi.eval_u64(1).unwrap(), BigUint::zero());
        assert_eq!(phi.eval_u64(4).unwrap(), BigUint::from(10u32));
        assert_eq!(phi.eval_u64(5).unwrap(), BigUint::from(1u32));
    }
}
