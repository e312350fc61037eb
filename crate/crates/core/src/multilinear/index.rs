use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::factorial;

/// Basis label `e_{i₁} ∧ … ∧ e_{i_p}` with `i₁ < … < i_p` (zero-based).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WedgeIndex(Vec<usize>);

impl WedgeIndex {
    /// Validates strict increase and range `0..n`.
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        let increasing = indices.windows(2).all(|w| w[0] < w[1]);
        let in_range = indices.iter().all(|&i| i < n);
        if !increasing || !in_range {
            return Err(Error::GradeOutOfRange {
                p: indices.len(),
                n,
                context: "wedge index must be strictly increasing and in range",
            });
        }
        Ok(Self(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All `p`-subsets of `0..n` in lexicographic order.
    pub fn enumerate(n: usize, p: usize) -> Vec<WedgeIndex> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(p);
        fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<WedgeIndex>) {
            if cur.len() == p {
                out.push(WedgeIndex(cur.clone()));
                return;
            }
            for i in start..n {
                if n - i < p - cur.len() {
                    break;
                }
                cur.push(i);
                rec(i + 1, n, p, cur, out);
                cur.pop();
            }
        }
        if p <= n {
            rec(0, n, p, &mut cur, &mut out);
        }
        out
    }
}

impl fmt::Display for WedgeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("e{}", i + 1)).collect();
        write!(f, "{}", parts.join("∧"))
    }
}

/// Sorts `indices` into increasing order, returning the permutation sign,
/// or `None` when an index repeats (the wedge vanishes).
pub fn sort_with_sign(indices: &mut [usize]) -> Option<f64> {
    let mut sign = 1.0;
    for i in 1..indices.len() {
        let mut j = i;
        while j > 0 && indices[j - 1] > indices[j] {
            indices.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if indices.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// Exponent vector `ℓ = (ℓ₁, …, ℓ_n)` of the monomial `x^ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// Unit exponent `e_i` in `n` variables.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// `ℓ! = ℓ₁! ⋯ ℓ_n!`
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&e| factorial(e as usize)).product()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.n(), other.n());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `ℓ + e_up − e_down`, or `None` if the exponent at `down` is zero.
    pub fn shifted(&self, up: usize, down: usize) -> Option<MultiIndex> {
        if self.0[down] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[down] -= 1;
        v[up] += 1;
        Some(MultiIndex(v))
    }

    /// Monomials of degree `p` in `n` variables, ordered lexicographically by
    /// their sorted index tuples `(i₁ ≤ … ≤ i_p)`; `x₁ᵖ` comes first.
    pub fn enumerate(n: usize, p: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(start: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if left == 0 {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for i in start..cur.len() {
                cur[i] += 1;
                rec(i, left - 1, cur, out);
                cur[i] -= 1;
            }
        }
        if n == 0 {
            if p == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(0, p, &mut cur, &mut out);
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{}", i + 1, e)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_enumeration_is_lexicographic() {
        let w = WedgeIndex::enumerate(4, 2);
        let idx: Vec<_> = w.iter().map(|w| w.indices().to_vec()).collect();
        assert_eq!(
            idx,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(WedgeIndex::enumerate(3, 0).len(), 1);
        assert!(WedgeIndex::enumerate(3, 4).is_empty());
    }

    #[test]
    fn wedge_index_validation() {
        assert!(WedgeIndex::new(vec![0, 2], 3).is_ok());
        assert!(WedgeIndex::new(vec![2, 0], 3).is_err());
        assert!(WedgeIndex::new(vec![0, 3], 3).is_err());
    }

    #[test]
    fn sign_of_sorting() {
        let mut v = vec![2, 0, 1];
        assert_eq!(sort_with_sign(&mut v), Some(1.0));
        assert_eq!(v, vec![0, 1, 2]);
        let mut v = vec![1, 0];
        assert_eq!(sort_with_sign(&mut v), Some(-1.0));
        let mut v = vec![1, 0, 1];
        assert_eq!(sort_with_sign(&mut v), None);
    }

    #[test]
    fn monomial_enumeration_order() {
        let m = MultiIndex::enumerate(2, 2);
        let e: Vec<_> = m.iter().map(|m| m.exponents().to_vec()).collect();
        assert_eq!(e, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(MultiIndex::enumerate(4, 3).len(), 20);
        assert_eq!(MultiIndex::enumerate(3, 0).len(), 1);
    }

    #[test]
    fn factorial_of_multi_index() {
        assert_eq!(MultiIndex::new(vec![2, 3, 0]).factorial(), 12.0);
        assert_eq!(MultiIndex::new(vec![2, 0]).factorial(), 2.0);
    }
}
