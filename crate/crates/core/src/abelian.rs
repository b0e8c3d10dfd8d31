//! Finite abelian group structure recovered from order statistics.
//!
//! Given the full element list of a finite abelian group and its composition
//! law, [`structure_from_elements`] counts solutions of `x^(p^k) = e` for each
//! prime `p` dividing the order and reads off the invariant-factor
//! decomposition `Z/d1 × … × Z/dk` with `d1 | d2 | … | dk`.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, FactorBudget};
use crate::error::{Error, Result};

/// Invariant-factor presentation of a finite abelian group. Serializes as a
/// plain array `[d1, d2, …, dk]`; the trivial group is the empty array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbelianStructure {
    invariant_factors: Vec<u64>,
}

impl AbelianStructure {
    /// Build from a divisibility chain `d1 | d2 | … | dk`, each `di ≥ 2`.
    pub fn new(invariant_factors: Vec<u64>) -> Result<Self> {
        for w in invariant_factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::domain(format!(
                    "invariant factors must form a divisibility chain: {} ∤ {}",
                    w[0], w[1]
                )));
            }
        }
        if invariant_factors.iter().any(|&d| d < 2) {
            return Err(Error::domain("invariant factors must be >= 2"));
        }
        Ok(AbelianStructure { invariant_factors })
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        AbelianStructure {
            invariant_factors: Vec::new(),
        }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    /// Group order (product of invariant factors).
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    /// Number of invariant factors divisible by `n` — the n-rank. A group
    /// contains `(Z/n)^r` as a subgroup exactly when its n-rank is ≥ r.
    pub fn n_rank(&self, n: u64) -> usize {
        assert!(n >= 2, "n_rank requires n >= 2");
        self.invariant_factors.iter().filter(|&&d| d % n == 0).count()
    }
}

impl std::fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Recover the invariant factors of the abelian group formed by `elements`
/// under `mul`, with the given identity. `elements` must list every group
/// element exactly once and contain the identity.
pub fn structure_from_elements<K, F>(elements: &[K], identity: &K, mul: F) -> Result<AbelianStructure>
where
    K: Clone + Eq + Hash,
    F: Fn(&K, &K) -> K,
{
    let order = elements.len() as u64;
    if order == 1 {
        return Ok(AbelianStructure::trivial());
    }
    let factored = factorize(&BigUint::from(order), &FactorBudget::default())?;
    if factored.cofactor != BigUint::from(1u32) {
        return Err(Error::internal("group order too large to factor"));
    }

    // For each prime p | order, the partition {λ_i} of the p-exponent
    // (invariant factors contribute p^{λ_1} ≥ p^{λ_2} ≥ …) is recovered from
    // the counts N_k = #{x : x^(p^k) = e} = p^{Σ min(λ_i, k)}:
    // the number of parts ≥ k equals log_p(N_k) − log_p(N_{k−1}).
    let mut partitions: Vec<(u64, Vec<u32>)> = Vec::new();
    for (p_big, e_total) in &factored.factors {
        let p = p_big
            .to_u64()
            .ok_or_else(|| Error::internal("prime factor of group order exceeds u64"))?;
        let mut current: Vec<K> = elements.to_vec();
        let mut prev_log = 0u32;
        let mut parts_ge: Vec<u32> = Vec::new();
        loop {
            for x in current.iter_mut() {
                *x = pow_element(x, p, identity, &mul);
            }
            let count = current.iter().filter(|x| *x == identity).count() as u64;
            let log = exact_log(count, p).ok_or_else(|| {
                Error::internal("solution count of x^(p^k)=e is not a power of p")
            })?;
            if log < prev_log || (log == prev_log && log < *e_total) {
                return Err(Error::internal("order-count sequence stalled early"));
            }
            let new_parts = log - prev_log;
            parts_ge.push(new_parts);
            prev_log = log;
            if log == *e_total {
                break;
            }
        }
        // parts_ge[k-1] = number of parts ≥ k; convert to the descending
        // partition λ_1 ≥ λ_2 ≥ …
        let num_parts = parts_ge[0] as usize;
        let mut lambda = vec![0u32; num_parts];
        for &cnt in &parts_ge {
            for item in lambda.iter_mut().take(cnt as usize) {
                *item += 1;
            }
        }
        partitions.push((p, lambda));
    }

    // Align largest parts across primes to form the largest invariant factor.
    let width = partitions
        .iter()
        .map(|(_, l)| l.len())
        .max()
        .unwrap_or(0);
    let mut factors_desc: Vec<u64> = Vec::with_capacity(width);
    for i in 0..width {
        let mut d = 1u64;
        for (p, lambda) in &partitions {
            if let Some(&exp) = lambda.get(i) {
                d *= p.pow(exp);
            }
        }
        factors_desc.push(d);
    }
    factors_desc.reverse();
    AbelianStructure::new(factors_desc)
}

fn pow_element<K, F>(x: &K, mut exp: u64, identity: &K, mul: &F) -> K
where
    K: Clone + Eq,
    F: Fn(&K, &K) -> K,
{
    let mut acc = identity.clone();
    let mut base = x.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(&acc, &base);
        }
        exp >>= 1;
        if exp > 0 {
            base = mul(&base, &base);
        }
    }
    acc
}

fn exact_log(mut n: u64, p: u64) -> Option<u32> {
    let mut log = 0u32;
    while n > 1 {
        if n % p != 0 {
            return None;
        }
        n /= p;
        log += 1;
    }
    if n == 1 {
        Some(log)
    } else {
        None
    }
}

/// Order of `x` in a finite abelian group given a known multiple `m` of the
/// order (e.g. the group exponent): strips primes from `m` until minimal.
pub fn order_dividing<K, F>(x: &K, m: u64, identity: &K, mul: F) -> Option<u64>
where
    K: Clone + Eq + Hash,
    F: Fn(&K, &K) -> K,
{
    if pow_element(x, m, identity, &mul) != *identity {
        return None;
    }
    let factored = factorize(&BigUint::from(m), &FactorBudget::default()).ok()?;
    let mut ord = m;
    for (p_big, _) in &factored.factors {
        let p = p_big.to_u64()?;
        while ord % p == 0 && pow_element(x, ord / p, identity, &mul) == *identity {
            ord /= p;
        }
    }
    Some(ord)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Z/m as the model group for exercising the order-counting machinery.
    fn cyclic(m: u64) -> (Vec<u64>, impl Fn(&u64, &u64) -> u64) {
        ((0..m).collect(), move |a: &u64, b: &u64| (a + b) % m)
    }

    #[test]
    fn structure_of_cyclic_groups() {
        for m in [2u64, 3, 4, 5, 6, 8, 9, 12, 30, 36] {
            let (els, mul) = cyclic(m);
            let s = structure_from_elements(&els, &0, mul).unwrap();
            assert_eq!(s.invariant_factors(), &[m], "Z/{m}");
        }
    }

    #[test]
    fn structure_of_products() {
        // Z/2 x Z/6 modeled as pairs.
        let els: Vec<(u64, u64)> = (0..2).flat_map(|a| (0..6).map(move |b| (a, b))).collect();
        let mul = |x: &(u64, u64), y: &(u64, u64)| ((x.0 + y.0) % 2, (x.1 + y.1) % 6);
        let s = structure_from_elements(&els, &(0, 0), mul).unwrap();
        assert_eq!(s.invariant_factors(), &[2, 6]);

        // Z/4 x Z/3 is cyclic of order 12.
        let els: Vec<(u64, u64)> = (0..4).flat_map(|a| (0..3).map(move |b| (a, b))).collect();
        let mul = |x: &(u64, u64), y: &(u64, u64)| ((x.0 + y.0) % 4, (x.1 + y.1) % 3);
        let s = structure_from_elements(&els, &(0, 0), mul).unwrap();
        assert_eq!(s.invariant_factors(), &[12]);

        // Z/2 x Z/2 (Klein four group).
        let els: Vec<(u64, u64)> = (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).collect();
        let mul = |x: &(u64, u64), y: &(u64, u64)| ((x.0 + y.0) % 2, (x.1 + y.1) % 2);
        let s = structure_from_elements(&els, &(0, 0), mul).unwrap();
        assert_eq!(s.invariant_factors(), &[2, 2]);
    }

    #[test]
    fn trivial_group() {
        let s = structure_from_elements(&[0u64], &0, |a, b| a + b).unwrap();
        assert_eq!(s, AbelianStructure::trivial());
        assert_eq!(s.order(), 1);
        assert_eq!(s.n_rank(2), 0);
    }

    #[test]
    fn n_rank_known_values() {
        assert_eq!(AbelianStructure::new(vec![2, 2]).unwrap().n_rank(2), 2);
        assert_eq!(AbelianStructure::new(vec![2, 6]).unwrap().n_rank(3), 1);
        assert_eq!(AbelianStructure::new(vec![4, 12]).unwrap().n_rank(4), 2);
        assert_eq!(AbelianStructure::new(vec![3]).unwrap().n_rank(3), 1);
        assert_eq!(AbelianStructure::new(vec![5]).unwrap().n_rank(2), 0);
    }

    #[test]
    fn chain_validation() {
        assert!(AbelianStructure::new(vec![2, 3]).is_err());
        assert!(AbelianStructure::new(vec![1]).is_err());
        assert!(AbelianStructure::new(vec![3, 6, 12]).is_ok());
    }

    #[test]
    fn order_dividing_in_cyclic_group() {
        let (_, mul) = cyclic(12);
        // In Z/12, the element 4 has order 3; exponent multiple 12.
        assert_eq!(order_dividing(&4u64, 12, &0, &mul), Some(3));
        assert_eq!(order_dividing(&6u64, 12, &0, &mul), Some(2));
        assert_eq!(order_dividing(&1u64, 12, &0, &mul), Some(12));
        assert_eq!(order_dividing(&0u64, 12, &0, &mul), Some(1));
        // 1 has order 12, which does not divide 8.
        assert_eq!(order_dividing(&1u64, 8, &0, &mul), None);
    }
}
