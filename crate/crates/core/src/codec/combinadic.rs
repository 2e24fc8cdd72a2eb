//! Colexicographic ranking of K-subsets (the combinatorial number system).
//!
//! The sorted subset `c_1 < c_2 < .. < c_K` of `{0, .., L-1}` has rank
//! `sum_k C(c_k, k)`, a bijection onto `[0, C(L, K))`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};

/// Exact binomial coefficient.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Table of `C(c, k)` for `c < L`, `k <= K`.
#[derive(Debug, Clone)]
pub struct Combinadic {
    n: usize,
    k: usize,
    // table[k][c] = C(c, k)
    table: Vec<Vec<BigUint>>,
}

impl Combinadic {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(invalid(format!("subset size {k} outside [1, {n}]")));
        }
        let mut table = vec![vec![BigUint::zero(); n + 1]; k + 1];
        for c in 0..=n {
            table[0][c] = BigUint::one();
        }
        for j in 1..=k {
            for c in 1..=n {
                table[j][c] = &table[j][c - 1] + &table[j - 1][c - 1];
            }
        }
        Ok(Combinadic { n, k, table })
    }

    /// `C(L, K)`.
    pub fn count(&self) -> &BigUint {
        &self.table[self.k][self.n]
    }

    /// Rank of a subset given in any order.
    pub fn rank(&self, subset: &[usize]) -> Result<BigUint> {
        if subset.len() != self.k {
            return Err(invalid(format!("subset has {} elements, expected {}", subset.len(), self.k)));
        }
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.last().is_some_and(|&c| c >= self.n) {
            return Err(invalid("subset elements must be distinct and below L"));
        }
        Ok(sorted.iter().enumerate().map(|(i, &c)| &self.table[i + 1][c]).sum())
    }

    /// The ascending subset with the given rank.
    pub fn unrank(&self, rank: &BigUint) -> Result<Vec<usize>> {
        if rank >= self.count() {
            return Err(invalid("rank exceeds C(L, K)"));
        }
        let mut r = rank.clone();
        let mut out = vec![0; self.k];
        let mut hi = self.n;
        for j in (1..=self.k).rev() {
            // Largest c < hi with C(c, j) <= r.
            let row = &self.table[j];
            let c = row[..hi].partition_point(|v| v <= &r) - 1;
            out[j - 1] = c;
            r -= &row[c];
            hi = c;
        }
        debug_assert!(r.is_zero());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All K-subsets of {0..n} in colexicographic order, by brute force.
    fn colex_enumeration(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut all: Vec<Vec<usize>> = (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect();
        all.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        all
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(63, 2), BigUint::from(1953u32));
        assert_eq!(binomial(4096, 3), BigUint::from(11_444_858_880u64));
        assert_eq!(binomial(3, 5), BigUint::zero());
    }

    #[test]
    fn matches_enumeration_l8_k3() {
        let c = Combinadic::new(8, 3).unwrap();
        let all = colex_enumeration(8, 3);
        assert_eq!(all.len(), 56);
        assert_eq!(c.count(), &BigUint::from(56u32));
        assert_eq!(c.unrank(&BigUint::zero()).unwrap(), vec![0, 1, 2]);
        // Rank 9 is the tenth subset of the enumeration.
        assert_eq!(c.unrank(&BigUint::from(9u32)).unwrap(), all[9]);
        assert_eq!(all[9], vec![2, 3, 4]);
        for (r, subset) in all.iter().enumerate() {
            assert_eq!(c.unrank(&BigUint::from(r)).unwrap(), *subset);
            assert_eq!(c.rank(subset).unwrap(), BigUint::from(r));
        }
    }

    #[test]
    fn rejects_bad_input() {
        let c = Combinadic::new(8, 3).unwrap();
        assert!(c.unrank(&BigUint::from(56u32)).is_err());
        assert!(c.rank(&[1, 1, 2]).is_err());
        assert!(c.rank(&[1, 2, 8]).is_err());
        assert!(c.rank(&[1, 2]).is_err());
    }
}
