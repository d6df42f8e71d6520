//! Small exact-arithmetic matrices over the natural numbers.
//!
//! These back the algebraic view of an automaton (initial vector, one
//! transition matrix per symbol, final vector) and the growth analysis of
//! matrix powers. Everything is arbitrary precision; no entry ever wraps.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// A square matrix with entries in ℕ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatMatrix {
    size: usize,
    rows: Vec<Vec<BigUint>>,
}

impl NatMatrix {
    /// Builds a matrix from rows, checking squareness.
    pub fn from_rows(rows: Vec<Vec<BigUint>>) -> Result<Self> {
        let size = rows.len();
        for row in &rows {
            if row.len() != size {
                return Err(Error::Input(format!(
                    "matrix is not square: {} rows but a row of length {}",
                    size,
                    row.len()
                )));
            }
        }
        Ok(NatMatrix { size, rows })
    }

    pub fn from_u64_rows(rows: &[&[u64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigUint::from(x)).collect())
                .collect(),
        )
    }

    pub fn zero(size: usize) -> Self {
        NatMatrix {
            size,
            rows: vec![vec![BigUint::zero(); size]; size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zero(size);
        for i in 0..size {
            m.rows[i][i] = BigUint::from(1u32);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigUint {
        &self.rows[i][j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, value: BigUint) {
        self.rows[i][j] = value;
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.rows
    }

    pub fn mul(&self, other: &NatMatrix) -> NatMatrix {
        debug_assert_eq!(self.size, other.size);
        let n = self.size;
        let mut out = NatMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.rows[k][j];
                    if b.is_zero() {
                        continue;
                    }
                    out.rows[i][j] += a * b;
                }
            }
        }
        out
    }

    /// Iterator over successive powers A⁰ = I, A¹, A², ...
    pub fn powers(&self) -> Powers<'_> {
        Powers {
            base: self,
            current: NatMatrix::identity(self.size),
        }
    }
}

pub struct Powers<'a> {
    base: &'a NatMatrix,
    current: NatMatrix,
}

impl Iterator for Powers<'_> {
    type Item = NatMatrix;

    fn next(&mut self) -> Option<NatMatrix> {
        let out = self.current.clone();
        self.current = self.current.mul(self.base);
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_rows() {
        let rows = vec![vec![BigUint::zero()], vec![BigUint::zero(), BigUint::zero()]];
        assert!(NatMatrix::from_rows(rows).is_err());
    }

    #[test]
    fn powers_start_at_identity() {
        let a = NatMatrix::from_u64_rows(&[&[2]]).unwrap();
        let p: Vec<NatMatrix> = a.powers().take(4).collect();
        assert_eq!(p[0].entry(0, 0), &BigUint::from(1u32));
        assert_eq!(p[3].entry(0, 0), &BigUint::from(8u32));
    }
}
