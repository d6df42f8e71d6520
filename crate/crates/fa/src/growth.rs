//! Growth classification of matrix-power diagonal entries.
//!
//! For A ∈ ℕ^{k×k}, the sequence n ↦ (Aⁿ)_vv counts closed walks through v
//! weighted by multiplicity and falls into exactly one of three shapes:
//! identically zero (for n ≥ 1), the indicator of a residue class
//! 1_{n ≡_p 0}, or 1_{n ≡_p 0}·g(n) with g eventually at least 2 and at
//! most linearly exponential. The classifier reads the shape off the cycle
//! structure of the transition multigraph: no closed walk through v, v's
//! strongly connected component being a single unit-weight cycle, or
//! anything denser. [`verify_classification`] cross-checks a verdict against
//! exact matrix powers up to a horizon.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::NatMatrix;

/// The three shapes of a diagonal entry sequence, with period p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagonalClass {
    /// (Aⁿ)_vv = 0 for all n ≥ 1.
    Zero,
    /// (Aⁿ)_vv = 1_{n ≡_p 0}.
    Periodic(u64),
    /// (Aⁿ)_vv = 1_{n ≡_p 0}·g(n), g eventually ≥ 2.
    Exponential(u64),
}

impl std::fmt::Display for DiagonalClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DiagonalClass::Zero => write!(f, "Zero"),
            DiagonalClass::Periodic(p) => write!(f, "Periodic({p})"),
            DiagonalClass::Exponential(p) => write!(f, "Exponential({p})"),
        }
    }
}

/// Tarjan-free SCC via double DFS (Kosaraju); k is tiny here.
fn strongly_connected_component_of(adj: &[Vec<usize>], v: usize) -> Vec<usize> {
    let n = adj.len();
    let mut radj = vec![Vec::new(); n];
    for (u, targets) in adj.iter().enumerate() {
        for &t in targets {
            radj[t].push(u);
        }
    }
    let reach = |adj: &[Vec<usize>], start: usize| -> Vec<bool> {
        let mut seen = vec![false; adj.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for &t in &adj[u] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    };
    let fwd = reach(adj, v);
    let bwd = reach(&radj, v);
    (0..n).filter(|&u| fwd[u] && bwd[u]).collect()
}

/// Period of a strongly connected subgraph: gcd of all cycle lengths,
/// computed from BFS level differences.
fn component_period(adj: &[Vec<usize>], component: &[usize]) -> u64 {
    let inside = |u: usize| component.contains(&u);
    let root = component[0];
    let mut level = vec![None; adj.len()];
    level[root] = Some(0i64);
    let mut queue = std::collections::VecDeque::from([root]);
    let mut g: u64 = 0;
    while let Some(u) = queue.pop_front() {
        for &t in &adj[u] {
            if !inside(t) {
                continue;
            }
            match level[t] {
                None => {
                    level[t] = Some(level[u].unwrap() + 1);
                    queue.push_back(t);
                }
                Some(l) => {
                    let diff = (level[u].unwrap() + 1 - l).unsigned_abs();
                    g = num_integer::gcd(g, diff);
                }
            }
        }
    }
    g.max(1)
}

/// Classifies the diagonal entry (Aⁿ)_vv by the cycle structure around v:
/// no closed walk → `Zero`; v's strongly connected component is one simple
/// cycle with unit weights → `Periodic(cycle length)`; otherwise
/// `Exponential(p)` with p the gcd of the closed-walk lengths through v.
pub fn classify_diagonal(a: &NatMatrix, v: usize) -> Result<DiagonalClass> {
    let k = a.size();
    if v >= k {
        return Err(Error::Input(format!(
            "vertex {v} out of range for a {k}×{k} matrix"
        )));
    }
    let mut adj = vec![Vec::new(); k];
    for i in 0..k {
        for j in 0..k {
            if !a.entry(i, j).is_zero() {
                adj[i].push(j);
            }
        }
    }
    let scc = strongly_connected_component_of(&adj, v);
    let on_cycle = scc.len() > 1 || !a.entry(v, v).is_zero();
    if !on_cycle {
        return Ok(DiagonalClass::Zero);
    }
    // Simple unit-weight cycle: every component vertex has exactly one
    // outgoing edge inside the component, of weight 1.
    let one = BigUint::one();
    let mut simple_cycle = true;
    for &u in &scc {
        let inside: Vec<usize> = adj[u].iter().copied().filter(|t| scc.contains(t)).collect();
        if inside.len() != 1 || a.entry(u, inside[0]) != &one {
            simple_cycle = false;
            break;
        }
    }
    if simple_cycle {
        return Ok(DiagonalClass::Periodic(scc.len() as u64));
    }
    Ok(DiagonalClass::Exponential(component_period(&adj, &scc)))
}

/// Outcome of an empirical verification of a classification.
#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub class: DiagonalClass,
    pub horizon: u64,
    pub defects: Vec<String>,
}

impl ClassificationReport {
    pub fn passed(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Computes (Aⁿ)_vv exactly for 1 ≤ n ≤ horizon and checks the pattern that
/// [`classify_diagonal`] promised: zeros off the residue class, values in
/// {0, 1} for `Periodic`, and for `Exponential` some value ≥ 1 within the
/// horizon plus (when the horizon is at least 4k, large enough for two
/// distinct closed walks to share a length) a value ≥ 2.
pub fn verify_classification(
    a: &NatMatrix,
    v: usize,
    horizon: u64,
) -> Result<ClassificationReport> {
    let k = a.size() as u64;
    if horizon < 2 * k {
        return Err(Error::Input(format!(
            "horizon {horizon} is below 2·|A| = {}",
            2 * k
        )));
    }
    let class = classify_diagonal(a, v)?;
    let values: Vec<BigUint> = a
        .powers()
        .skip(1)
        .take(horizon as usize)
        .map(|m| m.entry(v, v).clone())
        .collect();
    let mut defects = Vec::new();
    let value_at = |n: u64| &values[(n - 1) as usize];
    match &class {
        DiagonalClass::Zero => {
            for n in 1..=horizon {
                if !value_at(n).is_zero() {
                    defects.push(format!("expected 0 at n={n}, found {}", value_at(n)));
                    break;
                }
            }
        }
        DiagonalClass::Periodic(p) => {
            for n in 1..=horizon {
                let expected_one = n % p == 0;
                let val = value_at(n);
                if expected_one && !val.is_one() {
                    defects.push(format!("expected 1 at n={n}, found {val}"));
                    break;
                }
                if !expected_one && !val.is_zero() {
                    defects.push(format!("expected 0 at n={n} (off class), found {val}"));
                    break;
                }
            }
        }
        DiagonalClass::Exponential(p) => {
            for n in 1..=horizon {
                if n % p != 0 && !value_at(n).is_zero() {
                    defects.push(format!("expected 0 at n={n} (off class), found {}", value_at(n)));
                    break;
                }
            }
            if values.iter().all(Zero::is_zero) {
                defects.push("no closed walk materialized within the horizon".into());
            }
            let two = BigUint::from(2u32);
            if horizon >= 4 * k && values.iter().all(|v| *v < two) {
                defects.push("no multiplicity ≥ 2 within the horizon".into());
            }
        }
    }
    Ok(ClassificationReport {
        class,
        horizon,
        defects,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_class_example() {
        let a = NatMatrix::from_u64_rows(&[&[0, 1], &[0, 0]]).unwrap();
        assert_eq!(classify_diagonal(&a, 0).unwrap(), DiagonalClass::Zero);
        let report = verify_classification(&a, 0, 20).unwrap();
        assert!(report.passed(), "{:?}", report.defects);
    }

    #[test]
    fn periodic_class_example() {
        let a = NatMatrix::from_u64_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(classify_diagonal(&a, 0).unwrap(), DiagonalClass::Periodic(2));
        let report = verify_classification(&a, 0, 20).unwrap();
        assert!(report.passed(), "{:?}", report.defects);
    }

    #[test]
    fn exponential_class_example() {
        let a = NatMatrix::from_u64_rows(&[&[2]]).unwrap();
        assert_eq!(
            classify_diagonal(&a, 0).unwrap(),
            DiagonalClass::Exponential(1)
        );
        let report = verify_classification(&a, 0, 20).unwrap();
        assert!(report.passed(), "{:?}", report.defects);
    }

    #[test]
    fn coprime_cycles_have_period_one() {
        // Two cycles through vertex 0 of lengths 2 and 3.
        let a = NatMatrix::from_u64_rows(&[
            &[0, 1, 1, 0],
            &[1, 0, 0, 0],
            &[0, 0, 0, 1],
            &[1, 0, 0, 0],
        ])
        .unwrap();
        assert_eq!(
            classify_diagonal(&a, 0).unwrap(),
            DiagonalClass::Exponential(1)
        );
        let report = verify_classification(&a, 0, 20).unwrap();
        assert!(report.passed(), "{:?}", report.defects);
    }

    #[test]
    fn self_loop_weight_one_is_periodic() {
        let a = NatMatrix::from_u64_rows(&[&[1, 1], &[0, 0]]).unwrap();
        assert_eq!(classify_diagonal(&a, 0).unwrap(), DiagonalClass::Periodic(1));
        assert_eq!(classify_diagonal(&a, 1).unwrap(), DiagonalClass::Zero);
    }

    #[test]
    fn period_divides_every_positive_index() {
        let a = NatMatrix::from_u64_rows(&[
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
            &[1, 1, 0, 0],
        ])
        .unwrap();
        let class = classify_diagonal(&a, 0).unwrap();
        let DiagonalClass::Exponential(p) = class else {
            panic!("expected exponential, got {class:?}");
        };
        // Walk lengths through 0 are 4 and 3+4k patterns; gcd is 1.
        let mut n = 0u64;
        for m in a.powers().skip(1).take(30) {
            n += 1;
            if !m.entry(0, 0).is_zero() {
                assert_eq!(n % p, 0);
            }
        }
    }

    #[test]
    fn vertex_out_of_range_is_input_error() {
        let a = NatMatrix::from_u64_rows(&[&[1]]).unwrap();
        assert!(matches!(classify_diagonal(&a, 3), Err(Error::Input(_))));
        assert!(matches!(
            verify_classification(&a, 0, 1),
            Err(Error::Input(_))
        ));
    }
}
